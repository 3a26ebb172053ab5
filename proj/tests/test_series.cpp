#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bpl/problems/dahlquist.hpp"
#include "bpl/problems/lotka_volterra.hpp"
#include "bpl/series.hpp"
#include "support.hpp"

using namespace bpl;
using Catch::Approx;

TEST_CASE("dahlquist series reproduces exponential coefficients") {
    problems::Dahlquist dq{-1.0};
    const auto s = generate_series<double>(dq, 0.0, {1.0}, 4);
    REQUIRE(s.coeffs.size() == 5);
    CHECK(s.coeffs[0][0] == 1.0);
    CHECK(s.coeffs[1][0] == Approx(-1.0));
    CHECK(s.coeffs[2][0] == Approx(0.5));
    CHECK(s.coeffs[3][0] == Approx(-1.0 / 6.0));
    CHECK(s.coeffs[4][0] == Approx(1.0 / 24.0));
}

TEST_CASE("dahlquist exactness to high order") {
    const double lambda = 0.7;
    problems::Dahlquist dq{lambda};
    const auto s = generate_series<double>(dq, 0.0, {2.0}, 20);
    double expected = 2.0;
    for (std::size_t k = 1; k <= 20; ++k) {
        expected *= lambda / static_cast<double>(k);
        CHECK(s.coeffs[k][0] == Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("zero rhs gives a constant series") {
    testsupport::ConstantProblem cp{3};
    const auto s = generate_series<double>(cp, 0.0, {4.0, -1.0, 0.25}, 6);
    for (std::size_t k = 1; k <= 6; ++k)
        for (std::size_t j = 0; j < 3; ++j) CHECK(s.coeffs[k][j] == 0.0);
    const auto v = evaluate_truncated(s, 17.3);
    CHECK(v[0] == 4.0);
    CHECK(v[1] == -1.0);
    CHECK(v[2] == 0.25);
}

TEST_CASE("lotka-volterra recurrence, first orders by hand") {
    // alpha=2/3, beta=4/3, delta=2, gamma=2, (u0,v0)=(2,1):
    //   u1 = alpha*2 - beta*2 = -4/3,  v1 = -2 + 4 = 2
    //   u2 = [alpha*u1 - beta*(u0 v1 + u1 v0)] / 2 = -20/9
    problems::LotkaVolterra lv;
    const auto s = generate_series<double>(lv, 0.0, {2.0, 1.0}, 2);
    CHECK(s.coeffs[1][0] == Approx(-4.0 / 3.0).epsilon(1e-14));
    CHECK(s.coeffs[1][1] == Approx(2.0).epsilon(1e-14));
    CHECK(s.coeffs[2][0] == Approx(-20.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("truncated evaluation uses all coefficients") {
    TaylorSeries<double> s;
    s.t0 = 0.0;
    s.dim = 1;
    s.coeffs = {{1.0}, {-1.0}, {0.5}, {-1.0 / 6.0}, {1.0 / 24.0}};
    CHECK(evaluate_truncated(s, 0.0)[0] == 1.0);
    CHECK(evaluate_truncated(s, 1.0)[0] == Approx(0.375).epsilon(1e-15));
}

TEST_CASE("truncated derivative matches finite differences") {
    problems::LotkaVolterra lv;
    const auto s = generate_series<double>(lv, 0.0, {2.0, 1.0}, 10);
    const double t = 0.13, dh = 1e-6;
    const auto d = evaluate_truncated_derivative(s, t);
    const auto up = evaluate_truncated(s, t + dh);
    const auto um = evaluate_truncated(s, t - dh);
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(d[j] == Approx((up[j] - um[j]) / (2 * dh)).epsilon(1e-7));
}

TEST_CASE("generation is additive in u0 for linear problems") {
    problems::Dahlquist dq{-3.2};
    const auto sa = generate_series<double>(dq, 0.0, {1.5}, 12);
    const auto sb = generate_series<double>(dq, 0.0, {-0.4}, 12);
    const auto sc = generate_series<double>(dq, 0.0, {1.1}, 12);
    for (std::size_t k = 0; k <= 12; ++k)
        CHECK(sc.coeffs[k][0] == Approx(sa.coeffs[k][0] + sb.coeffs[k][0]).margin(1e-13));
}

TEST_CASE("recurrence blow-up reports NonFiniteCoefficient") {
    struct Exploding {
        std::size_t dim() const { return 1; }
        Vector<double> rhs(double, const Vector<double>& u) const { return {u[0]}; }
        Vector<double> taylor_rhs_coefficient(double, std::span<const Vector<double>> h,
                                              std::size_t k) const {
            return {k < 2 ? h[k][0] * 1e200 : h[k][0] * 1e200};
        }
    } p;
    CHECK_THROWS_AS(generate_series<double>(p, 0.0, {1e200}, 4), NonFiniteCoefficient);
}

TEST_CASE("consistency: first rhs coefficient equals rhs at u0") {
    problems::LotkaVolterra lv;
    const Vector<double> u0 = {2.0, 1.0};
    const auto f0 = lv.taylor_rhs_coefficient(0.0, std::span<const Vector<double>>(&u0, 1), 0);
    const auto f = lv.rhs(0.0, u0);
    CHECK(f0[0] == f[0]);
    CHECK(f0[1] == f[1]);
    CHECK(f[0] == Approx(-4.0 / 3.0));
    CHECK(f[1] == Approx(2.0));
}
