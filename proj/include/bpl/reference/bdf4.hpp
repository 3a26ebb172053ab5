#pragma once

#include <array>
#include <cmath>
#include <deque>

#include <Eigen/Dense>

#include "bpl/reference/gauss_legendre10.hpp"
#include "bpl/reference/rk4_fehlberg.hpp"

namespace bpl::reference {

namespace detail {

/// Implicit solve of  x = pred + coef*h*f(t, x)  by Newton with a forward
/// difference Jacobian, starting from x0.  Returns false on non-convergence.
template <typename Scalar, typename Problem>
bool solve_implicit(const Problem& problem, double t, double coef_h, const Vector<Scalar>& pred,
                    Vector<Scalar>& x, const AdaptiveConfig& cfg, std::size_t& rhs_evals) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const std::size_t n = x.size();
    const double scale = std::max(1.0, bpl::detail::norm2(x));

    Mat J = Mat::Identity(n, n) - coef_h * fd_jacobian(problem, t, x, rhs_evals);
    auto lu = J.partialPivLu();
    for (std::size_t it = 0; it < cfg.newton_max_iters; ++it) {
        const Vector<Scalar> f = problem.rhs(t, x);
        ++rhs_evals;
        Vec G(n);
        for (std::size_t r = 0; r < n; ++r)
            G(static_cast<Eigen::Index>(r)) = x[r] - coef_h * f[r] - pred[r];
        const Vec d = lu.solve(G);
        double dn = 0.0;
        for (Eigen::Index r = 0; r < d.size(); ++r) dn += std::norm(d(r));
        dn = std::sqrt(dn);
        for (std::size_t r = 0; r < n; ++r) x[r] -= d(static_cast<Eigen::Index>(r));
        if (!bpl::detail::all_finite(x)) return false;
        if (dn <= cfg.newton_tol * scale) return true;
        // refresh the Jacobian if the iteration crawls
        if (it > 0 && it % 8 == 0) {
            J = Mat::Identity(n, n) - coef_h * fd_jacobian(problem, t, x, rhs_evals);
            lu = J.partialPivLu();
        }
    }
    return false;
}

}  // namespace detail

/// Fixed-coefficient 4-step BDF on a locally uniform mesh.  The history is
/// bootstrapped (and rebuilt after every step-size change) by RK4-Fehlberg
/// substeps; the local error is estimated against the implicit BDF3 solution
/// on the same history.
template <typename Scalar, SeriesProblem<Scalar> Problem>
SolveRecord<Scalar> bdf4_integrate(const Problem& problem, const Vector<Scalar>& u0, double T,
                                   const AdaptiveConfig& cfg) {
    cfg.validate();
    SolveRecord<Scalar> rec;
    detail::RecordBuilder<Scalar> builder(rec);
    const double bound = cfg.divergence_factor * std::max(1.0, bpl::detail::norm2(u0));

    double h = cfg.fixed_dt > 0 ? cfg.fixed_dt : cfg.dt_init;
    std::deque<std::pair<double, Vector<Scalar>>> hist;  // last 4 mesh points

    // Advance by 3*h from (t, u) with RK4-Fehlberg to fill the history.
    const auto rebuild = [&](double t, const Vector<Scalar>& u) {
        hist.clear();
        hist.emplace_back(t, u);
        AdaptiveConfig boot = cfg;
        boot.tol = cfg.fixed_dt > 0 ? 1e-13 : std::min(1e-10, 1e-2 * cfg.tol);
        boot.dt_init = h / 8;
        boot.fixed_dt = 0.0;
        boot.dt_max = 1e30;
        for (int i = 0; i < 3; ++i) {
            const SolveRecord<Scalar> r =
                rk4_fehlberg_integrate(problem, hist.back().second, h, boot);
            rec.rhs_evaluations += r.rhs_evaluations;
            hist.emplace_back(hist.back().first + h, r.final_state());
            builder.push(hist.back().first, hist.back().second);
            ++rec.accepted;
        }
    };

    builder.push(0.0, u0);
    if (T <= 4 * h) h = T / 8;
    rebuild(0.0, u0);

    std::size_t since_change = 0;
    while (hist.back().first < T * (1.0 - 1e-15)) {
        if (hist.back().first + h > T) {
            // re-mesh the tail so four uniform steps land exactly on T
            h = (T - hist.back().first) / 4.0;
            rebuild(hist.back().first, hist.back().second);
        }
        const double tn = hist.back().first + h;
        const Vector<Scalar>&un0 = hist[3].second, &un1 = hist[2].second, &un2 = hist[1].second,
                            &un3 = hist[0].second;
        const std::size_t n = un0.size();

        Vector<Scalar> pred4(n), pred3(n);
        for (std::size_t r = 0; r < n; ++r) {
            pred4[r] = (48.0 * un0[r] - 36.0 * un1[r] + 16.0 * un2[r] - 3.0 * un3[r]) / 25.0;
            pred3[r] = (18.0 * un0[r] - 9.0 * un1[r] + 2.0 * un2[r]) / 11.0;
        }

        Vector<Scalar> x4 = un0;
        const bool ok4 =
            detail::solve_implicit(problem, tn, (12.0 / 25.0) * h, pred4, x4, cfg,
                                   rec.rhs_evaluations);
        bool accept = false;
        double err = 0.0;
        if (ok4 && bpl::detail::all_finite(x4)) {
            if (cfg.fixed_dt > 0) {
                accept = true;
            } else {
                Vector<Scalar> x3 = x4;
                const bool ok3 = detail::solve_implicit(problem, tn, (6.0 / 11.0) * h, pred3, x3,
                                                        cfg, rec.rhs_evaluations);
                if (ok3) {
                    err = bpl::detail::norm2_diff(x4, x3) /
                          std::max(bpl::detail::norm2(x4), 1e-30);
                    accept = err <= cfg.tol;
                }
            }
        }

        if (accept) {
            detail::check_divergence(x4, bound, tn);
            hist.emplace_back(tn, std::move(x4));
            hist.pop_front();
            builder.push(hist.back().first, hist.back().second);
            ++rec.accepted;
            ++since_change;
            if (rec.accepted > cfg.max_steps)
                throw StepUnderflow("bdf4: step budget exhausted", tn);
            if (cfg.fixed_dt == 0 && err < 0.02 * cfg.tol && since_change >= 6 &&
                hist.back().first + 5 * h * 1.5 < T) {
                h = std::min(1.5 * h, cfg.dt_max);
                rebuild(hist.back().first, hist.back().second);
                since_change = 0;
            }
        } else {
            if (cfg.fixed_dt > 0)
                throw NewtonDivergence("bdf4: Newton failed in fixed-step mode");
            ++rec.rejected;
            h *= 0.5;
            since_change = 0;
            if (h < cfg.dt_min) throw StepUnderflow("bdf4: step below dt_min", tn);
            rebuild(hist.back().first, hist.back().second);
        }
    }
    builder.finish();
    return rec;
}

}  // namespace bpl::reference
