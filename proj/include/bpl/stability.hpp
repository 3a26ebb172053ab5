#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "bpl/pade.hpp"
#include "bpl/quadrature.hpp"

namespace bpl {

/// Boolean stability mask over a rectangle of z = lambda*h values.
struct StabilityGrid {
    double re_min = 0.0, re_max = 0.0;
    double im_min = 0.0, im_max = 0.0;
    std::size_t resolution = 0;
    std::vector<std::vector<bool>> mask;  // mask[i][j]: i over re, j over im

    double re_at(std::size_t i) const {
        return re_min + (re_max - re_min) * static_cast<double>(i) /
                            static_cast<double>(resolution - 1);
    }
    double im_at(std::size_t j) const {
        return im_min + (im_max - im_min) * static_cast<double>(j) /
                            static_cast<double>(resolution - 1);
    }
};

/// |sum_{k=0..K} z^k / k!| — the truncated-series (ANM) amplification factor,
/// identical to the stability polynomial of an explicit K-th order RK scheme.
inline double amplification_anm(std::complex<double> z, std::size_t K) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = K + 1; k-- > 0;) {
        acc = acc * z / static_cast<double>(k + 1);
        acc += 1.0;
    }
    return std::abs(acc);
}

/// Padé degrees used for the order sweeps: the numerator takes the larger
/// share of K-1.  (The worked K=4 example reduces to (24+10z+z^2)/(2(12-z))
/// and K=2 degenerates to the bare polynomial, so the summation has no effect
/// there.)
struct SweepDegrees {
    std::size_t ka;
    std::size_t kb;
};
inline SweepDegrees stability_sweep_degrees(std::size_t K) {
    const std::size_t kb = (K - 1) / 2;
    return {K - 1 - kb, kb};
}

/// Amplification factor of the Borel-Padé-Laplace step on the linear test
/// equation:  |1 + z sum_i P'(z xi_i) w_i|  where P' is the [Ka/Kb] Padé
/// continuation of the lambda-reduced Borel series of the truncated
/// exponential (coefficients 1 / (k! (k+1)!), k < K).
class BplAmplification {
  public:
    BplAmplification(std::size_t K, std::size_t ka, std::size_t kb, const QuadratureRule& rule)
        : rule_(rule) {
        // Coefficients beyond K-1 stay zero, which admits degree pairs with
        // Ka+Kb = K (the truncated polynomial has exact zeros there).
        std::vector<double> c(std::max(K, ka + kb + 1), 0.0);
        double kf = 1.0, k1f = 1.0;  // k!, (k+1)!
        for (std::size_t k = 0; k < K; ++k) {
            if (k > 0) kf *= static_cast<double>(k);
            k1f *= static_cast<double>(k + 1);
            c[k] = 1.0 / (kf * k1f);
        }
        pade_ = pade_approximant(c, ka, kb);
    }

    double operator()(std::complex<double> z) const {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < rule_.size(); ++i)
            acc += pade_(z * rule_.nodes[i]) * rule_.weights[i];
        return std::abs(1.0 + z * acc);
    }

    const PadeApproximant<double>& continuation() const { return pade_; }

  private:
    PadeApproximant<double> pade_;
    const QuadratureRule& rule_;
};

inline double amplification_bpl(std::complex<double> z, std::size_t K, std::size_t ka,
                                std::size_t kb, const QuadratureRule& rule) {
    return BplAmplification(K, ka, kb, rule)(z);
}

template <typename Amplification>
StabilityGrid region_mask(Amplification&& amp, double re_min, double re_max, double im_min,
                          double im_max, std::size_t resolution) {
    if (resolution < 2) throw DomainError("region_mask: resolution must be >= 2");
    StabilityGrid g;
    g.re_min = re_min;
    g.re_max = re_max;
    g.im_min = im_min;
    g.im_max = im_max;
    g.resolution = resolution;
    g.mask.assign(resolution, std::vector<bool>(resolution, false));
    for (std::size_t i = 0; i < resolution; ++i) {
        for (std::size_t j = 0; j < resolution; ++j)
            g.mask[i][j] = amp(std::complex<double>(g.re_at(i), g.im_at(j))) <= 1.0;
    }
    return g;
}

/// |D| = sup{ d >= 0 : [-d, 0] inside the region }, by doubling then bisection
/// to absolute tolerance 1e-4.  Containment is checked on a fine sampling of
/// the segment.
template <typename Amplification>
double region_size(Amplification&& amp, double tol = 1e-4, std::size_t samples = 1024) {
    const auto segment_inside = [&](double d) -> bool {
        for (std::size_t i = 0; i <= samples; ++i) {
            const double x = d * static_cast<double>(i) / static_cast<double>(samples);
            if (amp(std::complex<double>(-x, 0.0)) > 1.0 + 1e-12) return false;
        }
        return true;
    };
    double hi = 1.0;
    while (segment_inside(hi)) {
        hi *= 2.0;
        if (hi > 1e9) return hi;  // effectively unbounded
    }
    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (segment_inside(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// Least-squares slope of y over x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace bpl
