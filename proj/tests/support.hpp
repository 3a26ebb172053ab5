#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bpl/detail/algebra.hpp"

namespace testsupport {

/// u' = u^2, u(0) = u0; exact solution u0 / (1 - u0 t), singular at t = 1/u0.
struct QuadraticGrowth {
    std::size_t dim() const { return 1; }
    bpl::Vector<double> rhs(double, const bpl::Vector<double>& u) const { return {u[0] * u[0]}; }
    bpl::Vector<double> taylor_rhs_coefficient(double, std::span<const bpl::Vector<double>> h,
                                               std::size_t k) const {
        double s = 0;
        for (std::size_t l = 0; l <= k; ++l) s += h[l][0] * h[k - l][0];
        return {s};
    }
    bpl::Vector<double> linear_part() const { return {0.0}; }
    bpl::Vector<double> nonlinear(double, const bpl::Vector<double>& u) const {
        return {u[0] * u[0]};
    }
};

/// u' = -u + u^2; exact solution 1 / (1 + (1/u0 - 1) e^t).
struct Logistic {
    std::size_t dim() const { return 1; }
    bpl::Vector<double> rhs(double, const bpl::Vector<double>& u) const {
        return {-u[0] + u[0] * u[0]};
    }
    bpl::Vector<double> taylor_rhs_coefficient(double, std::span<const bpl::Vector<double>> h,
                                               std::size_t k) const {
        double s = 0;
        for (std::size_t l = 0; l <= k; ++l) s += h[l][0] * h[k - l][0];
        return {-h[k][0] + s};
    }
    bpl::Vector<double> linear_part() const { return {-1.0}; }
    bpl::Vector<double> nonlinear(double, const bpl::Vector<double>& u) const {
        return {u[0] * u[0]};
    }
    static double exact(double u0, double t) { return 1.0 / (1.0 + (1.0 / u0 - 1.0) * std::exp(t)); }
};

/// F == 0: constant solution.
struct ConstantProblem {
    std::size_t d = 1;
    std::size_t dim() const { return d; }
    bpl::Vector<double> rhs(double, const bpl::Vector<double>&) const {
        return bpl::Vector<double>(d, 0.0);
    }
    bpl::Vector<double> taylor_rhs_coefficient(double, std::span<const bpl::Vector<double>>,
                                               std::size_t) const {
        return bpl::Vector<double>(d, 0.0);
    }
    bpl::Vector<double> linear_part() const { return bpl::Vector<double>(d, 0.0); }
    bpl::Vector<double> nonlinear(double, const bpl::Vector<double>&) const {
        return bpl::Vector<double>(d, 0.0);
    }
};

/// u' = i u over the complex scalar field (norm-preserving rotation).
struct Rotation {
    std::size_t dim() const { return 1; }
    bpl::Vector<std::complex<double>> rhs(double, const bpl::Vector<std::complex<double>>& u) const {
        return {std::complex<double>(0, 1) * u[0]};
    }
    bpl::Vector<std::complex<double>> taylor_rhs_coefficient(
        double, std::span<const bpl::Vector<std::complex<double>>> h, std::size_t k) const {
        return {std::complex<double>(0, 1) * h[k][0]};
    }
};

/// Deterministic xorshift generator for property tests.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : s_(seed) {}
    std::uint64_t next() {
        s_ ^= s_ << 13;
        s_ ^= s_ >> 7;
        s_ ^= s_ << 17;
        return s_;
    }
    /// uniform in [lo, hi)
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }

  private:
    std::uint64_t s_;
};

/// Adaptive Simpson quadrature (independent oracle for Laplace integrals).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 30) {
    const std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
            int d) -> double {
        const double m = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - lo) / 6.0 * (flo + 4 * flm + fmid);
        const double right = (hi - m) / 6.0 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) < 15 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, m, flo, flm, fmid, left, d - 1) + rec(m, hi, fmid, frm, fhi, right, d - 1);
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
    double mx = 0, my = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        mx += std::log(h[i]);
        my += std::log(err[i]);
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        num += (std::log(h[i]) - mx) * (std::log(err[i]) - my);
        den += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    }
    return num / den;
}

}  // namespace testsupport
