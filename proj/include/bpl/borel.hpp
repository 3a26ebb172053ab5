#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"
#include "bpl/pade.hpp"
#include "bpl/quadrature.hpp"
#include "bpl/series.hpp"

namespace bpl {

/// Borel transform of a truncated series: coeffs[k] = u_{k+1} / k!, one entry
/// less than the originating Taylor series.
template <typename Scalar>
struct BorelCoeffs {
    std::size_t dim = 0;
    std::vector<Vector<Scalar>> coeffs;

    std::vector<Scalar> component(std::size_t j) const {
        std::vector<Scalar> c(coeffs.size());
        for (std::size_t k = 0; k < coeffs.size(); ++k) c[k] = coeffs[k][j];
        return c;
    }
};

template <typename Scalar>
BorelCoeffs<Scalar> borel_transform(const TaylorSeries<Scalar>& series) {
    if (series.order() < 1) throw DomainError("borel_transform: series order must be >= 1");
    BorelCoeffs<Scalar> b;
    b.dim = series.dim;
    b.coeffs.resize(series.order());
    double kfact = 1.0;
    for (std::size_t k = 0; k < series.order(); ++k) {
        if (k > 0) kfact *= static_cast<double>(k);
        b.coeffs[k] = series.coeffs[k + 1];
        for (auto& x : b.coeffs[k]) x /= kfact;
    }
    return b;
}

/// Evaluable local solution: constant term plus the Gauss-Laguerre quadrature
/// of the Padé continuation of the Borel transform,
///   S(t)[j] = u0[j] + (t-t0) sum_i P_j((t-t0) xi_i) w_i.
/// The rule is shared so step records stay evaluable on their own.
template <typename Scalar>
struct BorelSum {
    double t0 = 0.0;
    Vector<Scalar> u0;
    std::vector<PadeApproximant<Scalar>> pades;
    std::shared_ptr<const QuadratureRule> rule;
};

template <typename Scalar>
BorelSum<Scalar> make_borel_sum(const TaylorSeries<Scalar>& series, std::size_t ka,
                                std::size_t kb, std::shared_ptr<const QuadratureRule> rule,
                                double rcond = 1e-14) {
    const BorelCoeffs<Scalar> bc = borel_transform(series);
    BorelSum<Scalar> bs;
    bs.t0 = series.t0;
    bs.u0 = series.coeffs[0];
    bs.rule = std::move(rule);
    bs.pades.reserve(series.dim);
    for (std::size_t j = 0; j < series.dim; ++j)
        bs.pades.push_back(pade_approximant(bc.component(j), ka, kb, rcond));
    return bs;
}

namespace detail {

/// Smallest real positive root of the polynomial q on [0, xmax], if any.
/// Sign-change scan on a geometric grid, then bisection.  For complex
/// coefficients a near-vanishing |q| on the grid counts as a root.
template <typename Scalar>
std::optional<double> real_positive_root(const std::vector<Scalar>& q, double xmax) {
    if (q.size() < 2 || xmax <= 0.0) return std::nullopt;
    constexpr int kGrid = 48;
    double qscale = 0.0;

    if constexpr (!scalar_traits<Scalar>::is_complex) {
        double xprev = 0.0;
        double fprev = horner(q, 0.0);
        for (int i = 0; i <= kGrid; ++i) {
            const double x = xmax * std::pow(10.0, -8.0 * (1.0 - double(i) / kGrid));
            const double f = horner(q, x);
            if (f == 0.0) return x;
            if (f * fprev < 0.0) {
                double lo = xprev, hi = x;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (horner(q, mid) * fprev < 0.0)
                        hi = mid;
                    else
                        lo = mid;
                }
                return 0.5 * (lo + hi);
            }
            xprev = x;
            fprev = f;
        }
        return std::nullopt;
    } else {
        for (int i = 0; i <= kGrid; ++i) {
            const double x = xmax * std::pow(10.0, -8.0 * (1.0 - double(i) / kGrid));
            qscale = std::max(qscale, scalar_traits<Scalar>::abs(horner(q, x)));
        }
        for (int i = 0; i <= kGrid; ++i) {
            const double x = xmax * std::pow(10.0, -8.0 * (1.0 - double(i) / kGrid));
            if (scalar_traits<Scalar>::abs(horner(q, x)) < 1e-12 * qscale) return x;
        }
        return std::nullopt;
    }
}

}  // namespace detail

/// True when some component's Padé denominator vanishes on the Laplace ray
/// inside the quadrature support for an evaluation at t0 + tau.
template <typename Scalar>
bool has_pole_on_ray(const BorelSum<Scalar>& bs, double tau) {
    if (tau <= 0.0) return false;
    const double xmax = tau * bs.rule->max_node();
    for (const auto& p : bs.pades)
        if (detail::real_positive_root(p.denom, xmax)) return true;
    return false;
}

template <typename Scalar>
Vector<Scalar> evaluate_borel_sum(const BorelSum<Scalar>& bs, double t,
                                  bool check_pole = true) {
    const double tau = t - bs.t0;
    if (check_pole && has_pole_on_ray(bs, tau))
        throw PoleOnRay("evaluate_borel_sum: Padé pole inside quadrature support");
    Vector<Scalar> out = bs.u0;
    if (tau == 0.0) return out;
    const auto& xi = bs.rule->nodes;
    const auto& w = bs.rule->weights;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto& p = bs.pades[j];
        Scalar acc{};
        for (std::size_t i = 0; i < xi.size(); ++i) acc += p(Scalar(tau * xi[i])) * w[i];
        out[j] += tau * acc;
    }
    return out;
}

/// d/dt of the quadrature formula: sum_i [P(x) + x P'(x)] w_i with x = tau*xi_i.
template <typename Scalar>
Vector<Scalar> evaluate_borel_sum_derivative(const BorelSum<Scalar>& bs, double t,
                                             bool check_pole = true) {
    const double tau = t - bs.t0;
    if (check_pole && has_pole_on_ray(bs, tau))
        throw PoleOnRay("evaluate_borel_sum_derivative: Padé pole inside quadrature support");
    Vector<Scalar> out(bs.u0.size());
    const auto& xi = bs.rule->nodes;
    const auto& w = bs.rule->weights;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto& p = bs.pades[j];
        Scalar acc{};
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const Scalar x{tau * xi[i]};
            acc += (p(x) + x * p.derivative(x)) * w[i];
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace bpl
