#pragma once

#include <array>
#include <cmath>

#include "bpl/reference/common.hpp"
#include "bpl/series.hpp"

namespace bpl::reference {

namespace detail {

// Fehlberg 4(5) tableau.
inline constexpr std::array<double, 6> kFehlbergC = {0.0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1.0, 0.5};
inline constexpr std::array<std::array<double, 5>, 6> kFehlbergA = {{
    {},
    {1.0 / 4},
    {3.0 / 32, 9.0 / 32},
    {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197},
    {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104},
    {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40},
}};
inline constexpr std::array<double, 6> kFehlbergB4 = {25.0 / 216, 0.0, 1408.0 / 2565,
                                                      2197.0 / 4104, -1.0 / 5, 0.0};
inline constexpr std::array<double, 6> kFehlbergB5 = {16.0 / 135, 0.0, 6656.0 / 12825,
                                                      28561.0 / 56430, -9.0 / 50, 2.0 / 55};

}  // namespace detail

/// Explicit RK4 with the Fehlberg embedded 5th-order error estimate.  The
/// 4th-order solution is propagated; steps are accepted when the relative
/// estimate |u5 - u4| / max(|u|, tiny) stays within tol.
template <typename Scalar, SeriesProblem<Scalar> Problem>
SolveRecord<Scalar> rk4_fehlberg_integrate(const Problem& problem, const Vector<Scalar>& u0,
                                           double T, const AdaptiveConfig& cfg) {
    cfg.validate();
    SolveRecord<Scalar> rec;
    detail::RecordBuilder<Scalar> builder(rec);
    const std::size_t n = u0.size();
    const double bound = cfg.divergence_factor * std::max(1.0, bpl::detail::norm2(u0));

    double t = 0.0;
    Vector<Scalar> u = u0;
    builder.push(t, u);
    double h = cfg.fixed_dt > 0 ? cfg.fixed_dt : cfg.dt_init;

    std::array<Vector<Scalar>, 6> k;
    while (t < T * (1.0 - 1e-15)) {
        h = std::min(h, T - t);
        for (std::size_t i = 0; i < 6; ++i) {
            Vector<Scalar> ui = u;
            for (std::size_t j = 0; j < i; ++j)
                if (detail::kFehlbergA[i][j] != 0.0)
                    bpl::detail::axpy(h * detail::kFehlbergA[i][j], k[j], ui);
            k[i] = problem.rhs(t + detail::kFehlbergC[i] * h, ui);
        }
        rec.rhs_evaluations += 6;
        Vector<Scalar> u4 = u, u5 = u;
        for (std::size_t i = 0; i < 6; ++i) {
            if (detail::kFehlbergB4[i] != 0.0) bpl::detail::axpy(h * detail::kFehlbergB4[i], k[i], u4);
            if (detail::kFehlbergB5[i] != 0.0) bpl::detail::axpy(h * detail::kFehlbergB5[i], k[i], u5);
        }
        const double err =
            bpl::detail::norm2_diff(u5, u4) / std::max(bpl::detail::norm2(u), 1e-30);

        if (cfg.fixed_dt > 0 || err <= cfg.tol) {
            t += h;
            u = std::move(u4);
            detail::check_divergence(u, bound, t);
            builder.push(t, u);
            ++rec.accepted;
            if (rec.accepted > cfg.max_steps)
                throw StepUnderflow("rk4_fehlberg: step budget exhausted", t);
            if (cfg.fixed_dt == 0)
                h = std::min(cfg.dt_max,
                             h * detail::clamp_factor(
                                     cfg.safety * std::pow(cfg.tol / std::max(err, 1e-300), 0.2)));
        } else {
            ++rec.rejected;
            h *= detail::clamp_factor(cfg.safety * std::pow(cfg.tol / err, 0.2));
            if (h < cfg.dt_min)
                throw StepUnderflow("rk4_fehlberg: step below dt_min", t);
        }
    }
    builder.finish();
    return rec;
}

}  // namespace bpl::reference
