#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"

namespace bpl {

/// Rational function numer/denom with denom[0] = 1, plus the effective degrees
/// kept after SVD rank reduction of the matching system.
template <typename Scalar>
struct PadeApproximant {
    std::vector<Scalar> numer;  // a_0 .. a_Ka
    std::vector<Scalar> denom;  // 1, b_1 .. b_Kb
    std::size_t effective_ka = 0;
    std::size_t effective_kb = 0;

    template <typename Arg>
    auto operator()(Arg x) const {
        return detail::horner(numer, x) / detail::horner(denom, x);
    }

    /// Exact rational derivative (a'd - a d') / d^2.
    template <typename Arg>
    auto derivative(Arg x) const {
        using R = decltype(Scalar{} * x);
        R n{}, d{}, dn{}, dd{};
        n = detail::horner(numer, x);
        d = detail::horner(denom, x);
        for (std::size_t k = numer.size(); k-- > 1;)
            dn = dn * x + static_cast<double>(k) * numer[k];
        for (std::size_t k = denom.size(); k-- > 1;)
            dd = dd * x + static_cast<double>(k) * denom[k];
        return (dn * d - n * dd) / (d * d);
    }
};

enum class OnDegenerate { ZeroRational, Throw };

/// [Ka/Kb] Padé approximant of the series with the given coefficients.
///
/// The denominator is obtained from the Toeplitz matching system for orders
/// Ka+1 .. Ka+Kb, solved by SVD; singular values below rcond * sigma_max are
/// treated as rank deficiency, in which case the denominator degree is lowered
/// to the numerical rank and the reduced square system re-solved.  The
/// numerator then follows from the convolution of the series with the
/// denominator.  Coefficients of the series beyond its length count as zero.
template <typename Scalar>
PadeApproximant<Scalar> pade_approximant(const std::vector<Scalar>& coeffs,
                                         std::size_t ka, std::size_t kb,
                                         double rcond = 1e-14,
                                         OnDegenerate policy = OnDegenerate::ZeroRational) {
    if (coeffs.empty() || ka + kb > coeffs.size() - 1)
        throw DomainError("pade_approximant: need Ka+Kb <= len(coeffs)-1");
    if (!(rcond > 0.0 && rcond < 1.0))
        throw DomainError("pade_approximant: rcond must lie in (0, 1)");

    double max_abs = 0.0;
    for (const auto& c : coeffs) max_abs = std::max(max_abs, scalar_traits<Scalar>::abs(c));
    if (max_abs < 1e-300) {
        if (policy == OnDegenerate::Throw)
            throw DegenerateInput("pade_approximant: all coefficients are numerically zero");
        PadeApproximant<Scalar> zero;
        zero.numer = {Scalar{}};
        zero.denom = {Scalar{1}};
        return zero;
    }

    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const auto at = [&](std::size_t k) -> Scalar {
        return k < coeffs.size() ? coeffs[k] : Scalar{};
    };

    std::size_t kb_eff = kb;
    Vec b;
    while (kb_eff > 0) {
        Mat A(kb_eff, kb_eff);
        Vec rhs(kb_eff);
        for (std::size_t i = 0; i < kb_eff; ++i) {
            const std::size_t m = ka + 1 + i;
            rhs[static_cast<Eigen::Index>(i)] = -at(m);
            for (std::size_t j = 1; j <= kb_eff; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) =
                    m >= j ? at(m - j) : Scalar{};
        }
        Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(rcond);
        const auto rank = static_cast<std::size_t>(svd.rank());
        if (rank == kb_eff) {
            b = svd.solve(rhs);
            break;
        }
        kb_eff = rank;
    }

    PadeApproximant<Scalar> p;
    p.denom.assign(kb_eff + 1, Scalar{});
    p.denom[0] = Scalar{1};
    for (std::size_t j = 1; j <= kb_eff; ++j) p.denom[j] = b[static_cast<Eigen::Index>(j - 1)];

    p.numer.assign(ka + 1, Scalar{});
    for (std::size_t k = 0; k <= ka; ++k) {
        Scalar s{};
        for (std::size_t j = 0; j <= std::min(k, kb_eff); ++j) s += p.denom[j] * at(k - j);
        p.numer[k] = s;
    }
    // Trim trailing exact zeros of the numerator (constant series and the like).
    while (p.numer.size() > 1 && scalar_traits<Scalar>::abs(p.numer.back()) < 1e-300)
        p.numer.pop_back();

    p.effective_ka = p.numer.size() - 1;
    p.effective_kb = kb_eff;
    return p;
}

}  // namespace bpl
