#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace bpl {

/// State vectors are plain std::vector; the scalar field is double or
/// std::complex<double> depending on the problem.
template <typename Scalar>
using Vector = std::vector<Scalar>;

template <typename Scalar>
struct scalar_traits {
    using real_type = Scalar;
    static constexpr bool is_complex = false;
    static real_type abs(Scalar x) { return std::abs(x); }
};

template <typename R>
struct scalar_traits<std::complex<R>> {
    using real_type = R;
    static constexpr bool is_complex = true;
    static real_type abs(const std::complex<R>& x) { return std::abs(x); }
};

template <typename Scalar>
using real_t = typename scalar_traits<Scalar>::real_type;

namespace detail {

template <typename Scalar>
double norm2(const Vector<Scalar>& v) {
    double s = 0.0;
    for (const auto& x : v) {
        const double a = scalar_traits<Scalar>::abs(x);
        s += a * a;
    }
    return std::sqrt(s);
}

template <typename Scalar>
double norm2_diff(const Vector<Scalar>& a, const Vector<Scalar>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = scalar_traits<Scalar>::abs(a[i] - b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

template <typename Scalar>
bool all_finite(const Vector<Scalar>& v) {
    for (const auto& x : v) {
        if constexpr (scalar_traits<Scalar>::is_complex) {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        } else {
            if (!std::isfinite(x)) return false;
        }
    }
    return true;
}

/// y += a*x
template <typename Scalar, typename Coef>
void axpy(Coef a, const Vector<Scalar>& x, Vector<Scalar>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

/// Horner evaluation of a polynomial with coefficients p[0..n] at x.
template <typename Scalar, typename Arg>
auto horner(const std::vector<Scalar>& p, Arg x) {
    using R = decltype(Scalar{} * x);
    R acc{};
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

}  // namespace detail
}  // namespace bpl
