#pragma once

#include <cmath>
#include <complex>

#include "bpl/reference/common.hpp"
#include "bpl/series.hpp"

namespace bpl::reference {

namespace detail {

/// The four Cox-Matthews coefficient functions of z = h*lambda, evaluated per
/// diagonal entry.  Near z = 0 the closed forms cancel catastrophically, so
/// |z| < 1e-2 switches to the Taylor series of the same functions.
///   q(z)  = (e^{z/2} - 1) / z
///   f1(z) = (-4 - z + e^z (4 - 3z + z^2)) / z^3
///   f2(z) = 2 (2 + z + e^z (z - 2)) / z^3
///   f3(z) = (-4 - 3z - z^2 + e^z (4 - z)) / z^3
template <typename Scalar>
struct EtdCoeffs {
    Scalar E, E2, q, f1, f2, f3;
};

template <typename Scalar>
EtdCoeffs<Scalar> etd_coeffs(Scalar z) {
    EtdCoeffs<Scalar> c;
    c.E = std::exp(z);
    c.E2 = std::exp(0.5 * z);
    const double az = scalar_traits<Scalar>::abs(z);
    if (az >= 1e-2) {
        const Scalar z2 = z * z, z3 = z2 * z;
        c.q = (c.E2 - Scalar(1)) / z;
        c.f1 = (Scalar(-4) - z + c.E * (Scalar(4) - Scalar(3) * z + z2)) / z3;
        c.f2 = Scalar(2) * (Scalar(2) + z + c.E * (z - Scalar(2))) / z3;
        c.f3 = (Scalar(-4) - Scalar(3) * z - z2 + c.E * (Scalar(4) - z)) / z3;
    } else {
        // q: sum_{k>=0} (z/2)^k / (2 (k+1)!)
        Scalar term{0.5}, acc = term;
        for (int k = 1; k < 12; ++k) {
            term *= Scalar(0.5) * z / static_cast<double>(k + 1);
            acc += term;
        }
        c.q = acc;
        // Taylor coefficients of the closed forms:
        //   f1 = sum_k (k+1)^2 / (k+3)!  z^k
        //   f2 = sum_k 2(k+1)  / (k+3)!  z^k
        //   f3 = sum_k (1-k)   / (k+3)!  z^k
        Scalar zk{1};
        Scalar a1{}, a2{}, a3{};
        double kf3 = 6.0;  // (k+3)! for k = 0
        for (int k = 0; k < 12; ++k) {
            if (k > 0) {
                zk *= z;
                kf3 *= static_cast<double>(k + 3);
            }
            const double kk = static_cast<double>(k);
            a1 += zk * ((kk + 1.0) * (kk + 1.0) / kf3);
            a2 += zk * (2.0 * (kk + 1.0) / kf3);
            a3 += zk * ((1.0 - kk) / kf3);
        }
        c.f1 = a1;
        c.f2 = a2;
        c.f3 = a3;
    }
    return c;
}

}  // namespace detail

/// One ETDRK4 step on a problem with diagonal linear part L and nonlinearity N.
template <typename Scalar, SplitProblem<Scalar> Problem>
Vector<Scalar> etdrk4_step(const Problem& problem, double t, const Vector<Scalar>& u, double h,
                           std::size_t& rhs_evals) {
    const Vector<Scalar> L = problem.linear_part();
    const std::size_t n = u.size();
    std::vector<detail::EtdCoeffs<Scalar>> C(n);
    for (std::size_t j = 0; j < n; ++j) C[j] = detail::etd_coeffs(Scalar(h * L[j]));

    const Vector<Scalar> Nu = problem.nonlinear(t, u);
    Vector<Scalar> a(n), b(n), c(n), out(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = C[j].E2 * u[j] + h * C[j].q * Nu[j];
    const Vector<Scalar> Na = problem.nonlinear(t + 0.5 * h, a);
    for (std::size_t j = 0; j < n; ++j) b[j] = C[j].E2 * u[j] + h * C[j].q * Na[j];
    const Vector<Scalar> Nb = problem.nonlinear(t + 0.5 * h, b);
    for (std::size_t j = 0; j < n; ++j)
        c[j] = C[j].E2 * a[j] + h * C[j].q * (Scalar(2) * Nb[j] - Nu[j]);
    const Vector<Scalar> Nc = problem.nonlinear(t + h, c);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = C[j].E * u[j] +
                 h * (C[j].f1 * Nu[j] + C[j].f2 * (Na[j] + Nb[j]) + C[j].f3 * Nc[j]);
    rhs_evals += 4;
    return out;
}

/// Cox-Matthews ETDRK4 on the diagonal linear part, with step-doubling error
/// control.
template <typename Scalar, SplitProblem<Scalar> Problem>
SolveRecord<Scalar> etdrk4_integrate(const Problem& problem, const Vector<Scalar>& u0, double T,
                                     const AdaptiveConfig& cfg) {
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
            u = etdrk4_step(problem, t, u, h, rec.rhs_evaluations);
            t += h;
            detail::check_divergence(u, bound, t);
            builder.push(t, u);
            ++rec.accepted;
            continue;
        }
        const Vector<Scalar> big = etdrk4_step(problem, t, u, h, rec.rhs_evaluations);
        const Vector<Scalar> mid = etdrk4_step(problem, t, u, 0.5 * h, rec.rhs_evaluations);
        const Vector<Scalar> half2 =
            etdrk4_step(problem, t + 0.5 * h, mid, 0.5 * h, rec.rhs_evaluations);
        const double err = bpl::detail::norm2_diff(half2, big) /
                           (15.0 * std::max(bpl::detail::norm2(u), 1e-30));
        if (err <= cfg.tol) {
            t += h;
            u = half2;
            detail::check_divergence(u, bound, t);
            builder.push(t, u);
            ++rec.accepted;
            if (rec.accepted > cfg.max_steps)
                throw StepUnderflow("etdrk4: step budget exhausted", t);
            h = std::min(cfg.dt_max,
                         h * detail::clamp_factor(
                                 cfg.safety * std::pow(cfg.tol / std::max(err, 1e-300), 0.2)));
        } else {
            ++rec.rejected;
            h *= detail::clamp_factor(cfg.safety * std::pow(cfg.tol / err, 0.2));
            if (h < cfg.dt_min) throw StepUnderflow("etdrk4: step below dt_min", t);
        }
    }
    builder.finish();
    return rec;
}

}  // namespace bpl::reference
