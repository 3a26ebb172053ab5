#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <string>

#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"

namespace bpl {

/// A problem that can supply the Taylor coefficients of its right-hand side.
///
/// rhs(t, u) is the F of du/dt = F(t, u).  taylor_rhs_coefficient(t0, hist, k)
/// returns F_k, the k-th Taylor coefficient of t -> F(t, u(t)) at t0, given the
/// solution coefficients hist = {u_0, ..., u_k} computed so far.  Consistency:
/// taylor_rhs_coefficient with k = 0 must equal rhs(t0, u_0).
template <typename P, typename Scalar>
concept SeriesProblem = requires(const P& p, double t, const Vector<Scalar>& u,
                                 std::span<const Vector<Scalar>> hist, std::size_t k) {
    { p.dim() } -> std::convertible_to<std::size_t>;
    { p.rhs(t, u) } -> std::same_as<Vector<Scalar>>;
    { p.taylor_rhs_coefficient(t, hist, k) } -> std::same_as<Vector<Scalar>>;
};

/// A problem exposing the split F(t,u) = L.u + N(t,u) with diagonal L.
template <typename P, typename Scalar>
concept SplitProblem = SeriesProblem<P, Scalar> &&
    requires(const P& p, double t, const Vector<Scalar>& u) {
        { p.linear_part() } -> std::same_as<Vector<Scalar>>;
        { p.nonlinear(t, u) } -> std::same_as<Vector<Scalar>>;
    };

/// Truncated time Taylor series of the local solution around t0.
/// coeffs[k] is the order-k coefficient array, k = 0..K.
template <typename Scalar>
struct TaylorSeries {
    double t0 = 0.0;
    std::size_t dim = 0;
    std::vector<Vector<Scalar>> coeffs;

    std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// Generate the series by the recurrence u_{k+1} = F_k(u_0..u_k) / (k+1).
template <typename Scalar, SeriesProblem<Scalar> Problem>
TaylorSeries<Scalar> generate_series(const Problem& problem, double t0,
                                     const Vector<Scalar>& u0, std::size_t K) {
    TaylorSeries<Scalar> s;
    s.t0 = t0;
    s.dim = u0.size();
    s.coeffs.reserve(K + 1);
    s.coeffs.push_back(u0);
    for (std::size_t k = 0; k < K; ++k) {
        Vector<Scalar> fk = problem.taylor_rhs_coefficient(
            t0, std::span<const Vector<Scalar>>(s.coeffs.data(), k + 1), k);
        for (auto& x : fk) x /= static_cast<double>(k + 1);
        if (!detail::all_finite(fk))
            throw NonFiniteCoefficient("non-finite Taylor coefficient at order " +
                                       std::to_string(k + 1));
        s.coeffs.push_back(std::move(fk));
    }
    return s;
}

/// Nested (Horner) evaluation of the truncated series at time t.
template <typename Scalar>
Vector<Scalar> evaluate_truncated(const TaylorSeries<Scalar>& series, double t) {
    const double tau = t - series.t0;
    Vector<Scalar> acc = series.coeffs.back();
    for (std::size_t k = series.coeffs.size() - 1; k-- > 0;) {
        for (std::size_t j = 0; j < series.dim; ++j)
            acc[j] = acc[j] * tau + series.coeffs[k][j];
    }
    return acc;
}

/// Time derivative of the truncated series at time t (Horner form as well).
template <typename Scalar>
Vector<Scalar> evaluate_truncated_derivative(const TaylorSeries<Scalar>& series, double t) {
    const double tau = t - series.t0;
    const std::size_t K = series.order();
    if (K == 0) return Vector<Scalar>(series.dim, Scalar{});
    Vector<Scalar> acc = series.coeffs[K];
    for (auto& x : acc) x *= static_cast<double>(K);
    for (std::size_t k = K - 1; k >= 1; --k) {
        for (std::size_t j = 0; j < series.dim; ++j)
            acc[j] = acc[j] * tau + static_cast<double>(k) * series.coeffs[k][j];
    }
    return acc;
}

}  // namespace bpl
