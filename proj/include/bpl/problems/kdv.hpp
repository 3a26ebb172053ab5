#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "bpl/detail/algebra.hpp"
#include "bpl/errors.hpp"

namespace bpl::problems {

using Complex = std::complex<double>;

/// Korteweg-de Vries on a periodic domain of length X,
///   u_t + c0 u_x + beta u_xxx + (alpha/2) (u^2)_x = 0,
/// semi-discretized by a truncated Fourier series with modes |m| <= M.  The
/// derived coefficients follow from gravity g and depth d.
struct KdvParams {
    double g = 10.0;              // gravity (m/s^2)
    double d = 2.0;               // depth (m)
    double X = 24.0 * std::numbers::pi;  // spatial period (m)
    std::size_t M = 32;           // mode cutoff; system size D = 2M
    double U = 0.5;               // soliton amplitude (m)

    double c0() const { return std::sqrt(g * d); }
    double alpha() const { return 1.5 * std::sqrt(g / d); }
    double beta() const { return d * d * c0() / 6.0; }
    double omega() const { return 2.0 * std::numbers::pi / X; }
    double kappa() const { return std::sqrt(3.0 * U / (4.0 * d * d * d)); }
    double wave_speed() const { return c0() * (1.0 + U / (2.0 * d)); }
    double period() const { return X / wave_speed(); }
    std::size_t D() const { return 2 * M; }

    void validate() const {
        if (!(g > 0 && d > 0 && X > 0 && U > 0) || M < 1)
            throw DomainError("KdvParams: g, d, X, U must be positive and M >= 1");
    }
};

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace detail

/// Alias-free truncated convolution of two mode arrays indexed m = -M..M
/// (array index m + M):  (a*b)_m = sum_p a_p b_{m-p}  over admissible p.
/// Computed in physical space after zero-padding to at least 3M+1 points
/// (rounded up to a power of two), so quadratic aliases fall outside the
/// retained modes.
inline std::vector<Complex> spectral_convolution(const std::vector<Complex>& a,
                                                 const std::vector<Complex>& b,
                                                 std::size_t M) {
    const std::size_t n = 2 * M + 1;
    if (a.size() != n || b.size() != n)
        throw DomainError("spectral_convolution: arrays must have length 2M+1");
    const std::size_t Np = detail::next_pow2(3 * M + 1);

    thread_local Eigen::FFT<double> fft;
    std::vector<Complex> A(Np, Complex{}), B(Np, Complex{});
    for (std::size_t i = 0; i < n; ++i) {
        const long m = static_cast<long>(i) - static_cast<long>(M);
        const std::size_t slot = static_cast<std::size_t>((m + static_cast<long>(Np)) %
                                                          static_cast<long>(Np));
        A[slot] = a[i];
        B[slot] = b[i];
    }
    std::vector<Complex> pa, pb;
    fft.inv(pa, A);
    fft.inv(pb, B);
    for (std::size_t i = 0; i < Np; ++i) pa[i] *= pb[i];
    std::vector<Complex> C;
    fft.fwd(C, pa);

    std::vector<Complex> out(n);
    const double scale = static_cast<double>(Np);
    for (std::size_t i = 0; i < n; ++i) {
        const long m = static_cast<long>(i) - static_cast<long>(M);
        const std::size_t slot = static_cast<std::size_t>((m + static_cast<long>(Np)) %
                                                          static_cast<long>(Np));
        out[i] = C[slot] * scale;
    }
    return out;
}

/// The (2M+1)-dimensional mode ODE  d/dt u^ = A u^ + N(u^)  with diagonal
///   A_m = i(-c0 w m + beta w^3 m^3)
/// and convolution nonlinearity  N_m = -(i alpha m w / 2) (u^ * u^)_m.
/// Series recurrence:
///   u^_{k+1} = [A u^_k - (i alpha m w / 2) sum_{l<=k} u^_l * u^_{k-l}] / (k+1).
class Kdv {
  public:
    explicit Kdv(KdvParams params) : p_(params) {
        p_.validate();
        const std::size_t n = dim();
        a_diag_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double m = mode_of(i);
            a_diag_[i] = Complex(0.0, -p_.c0() * p_.omega() * m +
                                          p_.beta() * std::pow(p_.omega(), 3) * m * m * m);
        }
    }

    const KdvParams& params() const { return p_; }
    std::size_t dim() const { return 2 * p_.M + 1; }
    double mode_of(std::size_t i) const {
        return static_cast<double>(static_cast<long>(i) - static_cast<long>(p_.M));
    }

    Vector<Complex> rhs(double, const Vector<Complex>& u) const {
        std::vector<Complex> conv = spectral_convolution(u, u, p_.M);
        Vector<Complex> out(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            out[i] = a_diag_[i] * u[i] + nonlinear_factor(i) * conv[i];
        return out;
    }

    Vector<Complex> taylor_rhs_coefficient(double, std::span<const Vector<Complex>> hist,
                                           std::size_t k) const {
        std::vector<Complex> conv_sum(dim(), Complex{});
        for (std::size_t l = 0; l <= k; ++l) {
            const std::vector<Complex> c = spectral_convolution(hist[l], hist[k - l], p_.M);
            for (std::size_t i = 0; i < dim(); ++i) conv_sum[i] += c[i];
        }
        Vector<Complex> out(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            out[i] = a_diag_[i] * hist[k][i] + nonlinear_factor(i) * conv_sum[i];
        return out;
    }

    Vector<Complex> linear_part() const { return a_diag_; }
    Vector<Complex> nonlinear(double, const Vector<Complex>& u) const {
        std::vector<Complex> conv = spectral_convolution(u, u, p_.M);
        Vector<Complex> out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = nonlinear_factor(i) * conv[i];
        return out;
    }

  private:
    Complex nonlinear_factor(std::size_t i) const {
        return Complex(0.0, -0.5 * p_.alpha() * mode_of(i) * p_.omega());
    }

    KdvParams p_;
    Vector<Complex> a_diag_;
};

/// Initial soliton profile U sech^2(kappa x) on [-X/2, X/2), periodically
/// prolonged.
inline double kdv_initial(const KdvParams& p, double x) {
    const double half = 0.5 * p.X;
    double xw = std::fmod(x + half, p.X);
    if (xw < 0) xw += p.X;
    xw -= half;
    const double s = 1.0 / std::cosh(p.kappa() * xw);
    return p.U * s * s;
}

/// Traveling-wave exact solution u(x, t) = u0(x - c t).
inline double kdv_exact(const KdvParams& p, double x, double t) {
    return kdv_initial(p, x - p.wave_speed() * t);
}

/// Collocation points x_j = -X/2 + j X / (2M+1).
inline std::vector<double> kdv_grid(const KdvParams& p) {
    const std::size_t n = 2 * p.M + 1;
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j)
        xs[j] = -0.5 * p.X + p.X * static_cast<double>(j) / static_cast<double>(n);
    return xs;
}

/// Initial spectrum by discrete transform of the sampled profile.
inline Vector<Complex> kdv_initial_spectrum(const KdvParams& p) {
    const std::size_t n = 2 * p.M + 1;
    const std::vector<double> xs = kdv_grid(p);
    Vector<Complex> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = static_cast<double>(static_cast<long>(i) - static_cast<long>(p.M));
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = -m * p.omega() * xs[j];
            acc += kdv_initial(p, xs[j]) * Complex(std::cos(phase), std::sin(phase));
        }
        u[i] = acc / static_cast<double>(n);
    }
    return u;
}

/// Physical-space field at the collocation points from a mode array.
inline std::vector<double> kdv_physical_field(const KdvParams& p, const Vector<Complex>& modes) {
    const std::size_t n = 2 * p.M + 1;
    const std::vector<double> xs = kdv_grid(p);
    std::vector<double> u(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc{};
        for (std::size_t i = 0; i < n; ++i) {
            const double m = static_cast<double>(static_cast<long>(i) - static_cast<long>(p.M));
            const double phase = m * p.omega() * xs[j];
            acc += modes[i] * Complex(std::cos(phase), std::sin(phase));
        }
        u[j] = acc.real();
    }
    return u;
}

/// Trapezoidal approximation of  int_0^T |u_c(t) - u_e(t)| / |u_e(t)| dt
/// over a uniform time grid, with the spatial L2 norm taken over the
/// collocation points.
inline double kdv_error_metric(const KdvParams& p, const std::vector<double>& times,
                               const std::vector<Vector<Complex>>& mode_samples) {
    if (times.size() != mode_samples.size() || times.size() < 2)
        throw DomainError("kdv_error_metric: need matching times and samples (>= 2)");
    const std::vector<double> xs = kdv_grid(p);
    std::vector<double> rel(times.size());
    for (std::size_t s = 0; s < times.size(); ++s) {
        const std::vector<double> uc = kdv_physical_field(p, mode_samples[s]);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double ue = kdv_exact(p, xs[j], times[s]);
            num += (uc[j] - ue) * (uc[j] - ue);
            den += ue * ue;
        }
        rel[s] = std::sqrt(num / den);
    }
    double integral = 0.0;
    for (std::size_t s = 1; s < times.size(); ++s)
        integral += 0.5 * (rel[s] + rel[s - 1]) * (times[s] - times[s - 1]);
    return integral;
}

}  // namespace bpl::problems
