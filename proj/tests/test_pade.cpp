#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "bpl/pade.hpp"
#include "support.hpp"

using namespace bpl;
using Catch::Approx;

TEST_CASE("[1/2] of the exponential Borel series") {
    // coefficients 1/(k!(k+1)!) for the lambda=1 exponential
    const std::vector<double> c = {1.0, 0.5, 1.0 / 12.0, 1.0 / 144.0};
    const auto p = pade_approximant(c, 1, 2);
    REQUIRE(p.numer.size() == 2);
    REQUIRE(p.denom.size() == 3);
    CHECK(p.numer[0] == Approx(1.0).epsilon(1e-12));
    CHECK(p.numer[1] == Approx(7.0 / 24.0).epsilon(1e-12));
    CHECK(p.denom[0] == 1.0);
    CHECK(p.denom[1] == Approx(-5.0 / 24.0).epsilon(1e-12));
    CHECK(p.denom[2] == Approx(1.0 / 48.0).epsilon(1e-12));
    CHECK(p.effective_ka == 1);
    CHECK(p.effective_kb == 2);
}

TEST_CASE("[1/1] of the all-ones series is 1/(1-x)") {
    const std::vector<double> c = {1.0, 1.0, 1.0};
    const auto p = pade_approximant(c, 1, 1);
    CHECK(p.numer[0] == Approx(1.0));
    CHECK(p.effective_ka == 0);  // numerator reduces to the constant 1
    CHECK(p.denom[1] == Approx(-1.0));
    CHECK(p(0.5) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("constant series yields the constant rational") {
    const std::vector<double> c = {3.25, 0.0, 0.0, 0.0, 0.0};
    const auto p = pade_approximant(c, 2, 2);
    CHECK(p.effective_kb == 0);
    CHECK(p.effective_ka == 0);
    CHECK(p(123.0) == 3.25);
}

TEST_CASE("degenerate input policy") {
    const std::vector<double> z = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(pade_approximant(z, 1, 1, 1e-14, OnDegenerate::Throw), DegenerateInput);
    const auto p = pade_approximant(z, 1, 1);
    CHECK(p(7.0) == 0.0);
}

TEST_CASE("precondition violations") {
    const std::vector<double> c = {1.0, 1.0};
    CHECK_THROWS_AS(pade_approximant(c, 1, 1), DomainError);
    CHECK_THROWS_AS(pade_approximant(c, 0, 1, 2.0), DomainError);
}

TEST_CASE("value and derivative at the origin") {
    const std::vector<double> c = {0.7, -0.3, 0.11, 0.05, -0.02};
    const auto p = pade_approximant(c, 2, 2);
    CHECK(p(0.0) == Approx(0.7).epsilon(1e-12));
    CHECK(p.derivative(0.0) == Approx(-0.3).epsilon(1e-10));
}

namespace {

/// Maclaurin re-expansion of numer/denom through the given order.
template <typename S>
std::vector<S> expand(const PadeApproximant<S>& p, std::size_t order) {
    std::vector<S> e(order + 1, S{});
    // e solves denom * e = numer order by order (b0 = 1)
    for (std::size_t k = 0; k <= order; ++k) {
        S s = k < p.numer.size() ? p.numer[k] : S{};
        for (std::size_t j = 1; j < p.denom.size() && j <= k; ++j) s -= p.denom[j] * e[k - j];
        e[k] = s;
    }
    return e;
}

}  // namespace

TEST_CASE("matching invariant on random inputs (property)") {
    testsupport::Rng rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng.next() % 7);  // 4..10 coeffs
        std::vector<double> c(n);
        for (auto& x : c) x = rng.uniform(-2.0, 2.0);
        const std::size_t kb = rng.next() % ((n - 1) / 2 + 1);
        const std::size_t ka = (n - 1) - kb;
        const auto p = pade_approximant(c, ka, kb);
        const auto e = expand(p, p.effective_ka + p.effective_kb);
        // tolerance scales with the denominator magnitude: near-singular
        // matching systems produce large b with matching residual at roundoff
        // relative to that scale
        double bscale = 1.0;
        for (const double x : p.denom) bscale = std::max(bscale, std::abs(x));
        for (std::size_t k = 0; k <= p.effective_ka + p.effective_kb; ++k)
            REQUIRE(std::abs(e[k] - c[k]) <= 1e-9 * bscale * 4.0);
    }
}

TEST_CASE("matching invariant for complex coefficients") {
    testsupport::Rng rng(99);
    using C = std::complex<double>;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<C> c(8);
        for (auto& x : c) x = C(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto p = pade_approximant(c, 4, 3);
        const auto e = expand(p, p.effective_ka + p.effective_kb);
        double bscale = 1.0;
        for (const C& x : p.denom) bscale = std::max(bscale, std::abs(x));
        for (std::size_t k = 0; k <= p.effective_ka + p.effective_kb; ++k)
            REQUIRE(std::abs(e[k] - c[k]) <= 1e-9 * bscale * 4.0);
    }
}

TEST_CASE("rank reduction recovers a lower-degree rational") {
    // series of 1/(1 - x/2): requesting [2/3] must collapse to [0/1]
    std::vector<double> c(9);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::pow(0.5, static_cast<double>(k));
    const auto p = pade_approximant(c, 2, 3);
    CHECK(p.effective_kb <= 1);
    CHECK(p(0.9) == Approx(1.0 / (1.0 - 0.45)).epsilon(1e-10));
}

TEST_CASE("derivative matches finite differences of the rational") {
    const std::vector<double> c = {1.0, 0.5, 1.0 / 12.0, 1.0 / 144.0};
    const auto p = pade_approximant(c, 1, 2);
    for (const double x : {-3.0, -0.5, 0.3, 2.0}) {
        const double dh = 1e-6;
        CHECK(p.derivative(x) == Approx((p(x + dh) - p(x - dh)) / (2 * dh)).epsilon(1e-7));
    }
}
