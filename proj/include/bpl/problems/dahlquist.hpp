#pragma once

#include <span>

#include "bpl/detail/algebra.hpp"

namespace bpl::problems {

/// Linear test equation du/dt = lambda * u.
struct Dahlquist {
    double lambda = -1.0;

    std::size_t dim() const { return 1; }

    Vector<double> rhs(double, const Vector<double>& u) const { return {lambda * u[0]}; }

    Vector<double> taylor_rhs_coefficient(double, std::span<const Vector<double>> hist,
                                          std::size_t k) const {
        return {lambda * hist[k][0]};
    }

    Vector<double> linear_part() const { return {lambda}; }
    Vector<double> nonlinear(double, const Vector<double>&) const { return {0.0}; }
};

}  // namespace bpl::problems
