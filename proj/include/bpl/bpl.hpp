#pragma once

#include "bpl/borel.hpp"
#include "bpl/errors.hpp"
#include "bpl/integrator.hpp"
#include "bpl/pade.hpp"
#include "bpl/problems/dahlquist.hpp"
#include "bpl/problems/kdv.hpp"
#include "bpl/problems/lotka_volterra.hpp"
#include "bpl/quadrature.hpp"
#include "bpl/reference/bdf4.hpp"
#include "bpl/reference/etdrk4.hpp"
#include "bpl/reference/gauss_legendre10.hpp"
#include "bpl/reference/rk4_fehlberg.hpp"
#include "bpl/series.hpp"
#include "bpl/stability.hpp"
