#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "bpl/reference/common.hpp"
#include "bpl/series.hpp"

namespace bpl::reference {

namespace detail {

/// 5-stage Gauss collocation data on [0, 1]: nodes are the shifted roots of
/// the degree-5 Legendre polynomial, a_ij solve the collocation conditions
/// sum_j a_ij c_j^{q-1} = c_i^q / q.
struct GaussLegendre5 {
    std::array<double, 5> c;
    std::array<double, 5> b;
    std::array<std::array<double, 5>, 5> a;

    GaussLegendre5() {
        const double r1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double r2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const std::array<double, 5> x = {-r2, -r1, 0.0, r1, r2};
        const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const std::array<double, 5> w = {w2, w1, 128.0 / 225.0, w1, w2};
        for (int i = 0; i < 5; ++i) {
            c[i] = 0.5 * (1.0 + x[i]);
            b[i] = 0.5 * w[i];
        }
        Eigen::MatrixXd V(5, 5);
        for (int q = 0; q < 5; ++q)
            for (int j = 0; j < 5; ++j) V(q, j) = std::pow(c[j], q);
        const auto lu = V.fullPivLu();
        for (int i = 0; i < 5; ++i) {
            Eigen::VectorXd rhs(5);
            for (int q = 0; q < 5; ++q) rhs(q) = std::pow(c[i], q + 1) / (q + 1);
            Eigen::VectorXd ai = lu.solve(rhs);
            for (int j = 0; j < 5; ++j) a[i][j] = ai(j);
        }
    }
};

inline const GaussLegendre5& gauss5() {
    static const GaussLegendre5 tab;
    return tab;
}

/// Forward-difference Jacobian of the RHS at (t, u).
template <typename Scalar, typename Problem>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> fd_jacobian(const Problem& problem,
                                                                  double t,
                                                                  const Vector<Scalar>& u,
                                                                  std::size_t& rhs_evals) {
    const std::size_t n = u.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J(n, n);
    const Vector<Scalar> f0 = problem.rhs(t, u);
    Vector<Scalar> up = u;
    for (std::size_t j = 0; j < n; ++j) {
        const double dx = std::sqrt(2.2e-16) * (1.0 + scalar_traits<Scalar>::abs(u[j]));
        up[j] = u[j] + dx;
        const Vector<Scalar> fj = problem.rhs(t, up);
        up[j] = u[j];
        for (std::size_t i = 0; i < n; ++i)
            J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (fj[i] - f0[i]) / dx;
    }
    rhs_evals += n + 1;
    return J;
}

}  // namespace detail

/// One implicit Gauss step of size h: stage values by fixed-point iteration,
/// falling back to a full Newton solve on the stacked stage system when the
/// iteration stalls.  Returns the end state.
template <typename Scalar, SeriesProblem<Scalar> Problem>
Vector<Scalar> gauss_legendre10_step(const Problem& problem, double t, const Vector<Scalar>& u,
                                     double h, const AdaptiveConfig& cfg,
                                     std::size_t& rhs_evals) {
    const auto& tab = detail::gauss5();
    const std::size_t n = u.size();
    const double scale = std::max(1.0, bpl::detail::norm2(u));

    std::array<Vector<Scalar>, 5> g, f;
    for (int i = 0; i < 5; ++i) g[i] = u;
    for (int i = 0; i < 5; ++i) f[i] = problem.rhs(t + tab.c[i] * h, g[i]);
    rhs_evals += 5;

    bool converged = false;
    double prev_delta = 1e300;
    for (std::size_t it = 0; it < 50 && !converged; ++it) {
        double delta = 0.0;
        for (int i = 0; i < 5; ++i) {
            Vector<Scalar> gi = u;
            for (int j = 0; j < 5; ++j) bpl::detail::axpy(h * tab.a[i][j], f[j], gi);
            delta = std::max(delta, bpl::detail::norm2_diff(gi, g[i]));
            g[i] = std::move(gi);
        }
        for (int i = 0; i < 5; ++i) f[i] = problem.rhs(t + tab.c[i] * h, g[i]);
        rhs_evals += 5;
        if (delta <= cfg.newton_tol * scale) converged = true;
        if (it > 3 && delta > 0.5 * prev_delta && delta > 100 * cfg.newton_tol * scale)
            break;  // stalled or diverging, go to Newton
        prev_delta = delta;
    }

    if (!converged) {
        using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
        using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
        const Mat Jf = detail::fd_jacobian(problem, t, u, rhs_evals);
        Mat J = Mat::Identity(5 * n, 5 * n);
        for (int bi = 0; bi < 5; ++bi)
            for (int bj = 0; bj < 5; ++bj)
                J.block(bi * n, bj * n, n, n) -= (h * tab.a[bi][bj]) * Jf;
        const auto lu = J.partialPivLu();

        for (int i = 0; i < 5; ++i) g[i] = u;
        bool newton_ok = false;
        for (std::size_t it = 0; it < cfg.newton_max_iters; ++it) {
            for (int i = 0; i < 5; ++i) f[i] = problem.rhs(t + tab.c[i] * h, g[i]);
            rhs_evals += 5;
            Vec G(5 * n);
            for (int i = 0; i < 5; ++i) {
                Vector<Scalar> gi = u;
                for (int j = 0; j < 5; ++j) bpl::detail::axpy(h * tab.a[i][j], f[j], gi);
                for (std::size_t r = 0; r < n; ++r)
                    G(static_cast<Eigen::Index>(i * n + r)) = g[i][r] - gi[r];
            }
            const Vec d = lu.solve(G);
            double dn = 0.0;
            for (Eigen::Index r = 0; r < d.size(); ++r)
                dn += std::norm(d(r));
            dn = std::sqrt(dn);
            for (int i = 0; i < 5; ++i)
                for (std::size_t r = 0; r < n; ++r) g[i][r] -= d(static_cast<Eigen::Index>(i * n + r));
            if (dn <= cfg.newton_tol * scale) {
                newton_ok = true;
                break;
            }
        }
        if (!newton_ok)
            throw NewtonDivergence("gauss_legendre10: stage Newton did not converge");
        for (int i = 0; i < 5; ++i) f[i] = problem.rhs(t + tab.c[i] * h, g[i]);
        rhs_evals += 5;
    }

    Vector<Scalar> out = u;
    for (int i = 0; i < 5; ++i) bpl::detail::axpy(h * tab.b[i], f[i], out);
    return out;
}

/// 5-stage 10th-order Gauss-Legendre collocation with step-doubling error
/// control.
template <typename Scalar, SeriesProblem<Scalar> Problem>
SolveRecord<Scalar> gauss_legendre10_integrate(const Problem& problem, const Vector<Scalar>& u0,
                                               double T, const AdaptiveConfig& cfg) {
    cfg.validate();
    SolveRecord<Scalar> rec;
    detail::RecordBuilder<Scalar> builder(rec);
    const double bound = cfg.divergence_factor * std::max(1.0, bpl::detail::norm2(u0));

    double t = 0.0;
    Vector<Scalar> u = u0;
    builder.push(t, u);
    double h = cfg.fixed_dt > 0 ? cfg.fixed_dt : cfg.dt_init;

    while (t < T * (1.0 - 1e-15)) {
        h = std::min(h, T - t);
        if (cfg.fixed_dt > 0) {
            u = gauss_legendre10_step(problem, t, u, h, cfg, rec.rhs_evaluations);
            t += h;
            detail::check_divergence(u, bound, t);
            builder.push(t, u);
            ++rec.accepted;
            continue;
        }
        bool step_failed = false;
        Vector<Scalar> big, half2;
        try {
            big = gauss_legendre10_step(problem, t, u, h, cfg, rec.rhs_evaluations);
            const Vector<Scalar> mid =
                gauss_legendre10_step(problem, t, u, 0.5 * h, cfg, rec.rhs_evaluations);
            half2 = gauss_legendre10_step(problem, t + 0.5 * h, mid, 0.5 * h, cfg,
                                          rec.rhs_evaluations);
        } catch (const NewtonDivergence&) {
            step_failed = true;
        }
        double err = 0.0;
        if (!step_failed)
            err = bpl::detail::norm2_diff(half2, big) /
                  (1023.0 * std::max(bpl::detail::norm2(u), 1e-30));

        if (!step_failed && err <= cfg.tol) {
            t += h;
            u = std::move(half2);
            detail::check_divergence(u, bound, t);
            builder.push(t, u);
            ++rec.accepted;
            if (rec.accepted > cfg.max_steps)
                throw StepUnderflow("gauss_legendre10: step budget exhausted", t);
            h = std::min(cfg.dt_max,
                         h * detail::clamp_factor(cfg.safety *
                                                  std::pow(cfg.tol / std::max(err, 1e-300),
                                                           1.0 / 11.0)));
        } else {
            ++rec.rejected;
            h *= step_failed
                     ? 0.5
                     : detail::clamp_factor(cfg.safety * std::pow(cfg.tol / err, 1.0 / 11.0));
            if (h < cfg.dt_min)
                throw StepUnderflow("gauss_legendre10: step below dt_min", t);
        }
    }
    builder.finish();
    return rec;
}

}  // namespace bpl::reference
