#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"

namespace bpl::problems {

struct LotkaVolterraParams {
    double alpha = 2.0 / 3.0;  // prey growth rate
    double beta = 4.0 / 3.0;   // predation rate
    double delta = 2.0;        // predator decline rate
    double gamma = 2.0;        // predator reproduction rate

    void validate() const {
        if (!(alpha > 0 && beta > 0 && delta > 0 && gamma > 0))
            throw DomainError("LotkaVolterraParams: all rates must be strictly positive");
    }
};

/// Prey-predator system
///   du/dt =  alpha u - beta u v
///   dv/dt = -delta v + gamma u v
/// The RHS Taylor coefficients use the Cauchy product of the two series:
///   F_k^u =  alpha u_k - beta  sum_l u_l v_{k-l}
///   F_k^v = -delta v_k + gamma sum_l u_l v_{k-l}
struct LotkaVolterra {
    LotkaVolterraParams p;

    explicit LotkaVolterra(LotkaVolterraParams params = {}) : p(params) { p.validate(); }

    std::size_t dim() const { return 2; }

    Vector<double> rhs(double, const Vector<double>& u) const {
        const double uv = u[0] * u[1];
        return {p.alpha * u[0] - p.beta * uv, -p.delta * u[1] + p.gamma * uv};
    }

    Vector<double> taylor_rhs_coefficient(double, std::span<const Vector<double>> hist,
                                          std::size_t k) const {
        double conv = 0.0;
        for (std::size_t l = 0; l <= k; ++l) conv += hist[l][0] * hist[k - l][1];
        return {p.alpha * hist[k][0] - p.beta * conv, -p.delta * hist[k][1] + p.gamma * conv};
    }

    Vector<double> linear_part() const { return {p.alpha, -p.delta}; }
    Vector<double> nonlinear(double, const Vector<double>& u) const {
        const double uv = u[0] * u[1];
        return {-p.beta * uv, p.gamma * uv};
    }
};

/// I(u, v) = beta v + gamma u - alpha ln v - delta ln u, conserved along exact
/// trajectories.
inline double lv_first_integral(const LotkaVolterraParams& p, double u, double v) {
    if (!(u > 0.0) || !(v > 0.0))
        throw DomainError("lv_first_integral: populations must be positive");
    return p.beta * v + p.gamma * u - p.alpha * std::log(v) - p.delta * std::log(u);
}

/// Spectral condition number of the linear part, max(alpha, delta) / min(...).
inline double lv_stiffness_ratio(const LotkaVolterraParams& p) {
    return std::max(p.alpha, p.delta) / std::min(p.alpha, p.delta);
}

/// The stiffness sweep keeps every rate but delta and raises delta = r*alpha.
inline LotkaVolterraParams lv_params_for_ratio(double r, LotkaVolterraParams base = {}) {
    base.delta = r * base.alpha;
    return base;
}

}  // namespace bpl::problems
