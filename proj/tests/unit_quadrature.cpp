#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "csd/quadrature.hpp"

using namespace csd;
using roi::QuadratureRule;

TEST_CASE("gauss-legendre basics") {
    const auto r2 = roi::gauss_legendre(0.0, 1.0, 2);
    CHECK(r2.integrate([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2.integrate([](double x) { return x * x * x; }) ==
          doctest::Approx(0.25).epsilon(1e-14));

    const auto r5 = roi::gauss_legendre(-1.0, 1.0, 5);
    CHECK(r5.integrate([](double x) { return x * x; }) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(roi::gauss_legendre(1.0, 0.0, 4), InvalidInterval);
    CHECK_THROWS_AS(roi::gauss_legendre(0.0, 1.0, 0), InvalidInterval);
}

TEST_CASE("gauss-legendre design-degree exactness") {
    const int n = 8;
    const auto rule = roi::gauss_legendre(0.0, 1.0, n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
        const double exact = 1.0 / (k + 1);
        const double got = rule.integrate([k](double x) { return std::pow(x, k); });
        CHECK(std::abs(got - exact) / exact < 1e-13);
    }
}

TEST_CASE("gauss-laguerre") {
    const auto plain = roi::gauss_laguerre(16);
    CHECK(plain.integrate([](double) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(plain.integrate([](double x) { return x * x * x; }) ==
          doctest::Approx(6.0).epsilon(1e-13));
    CHECK(plain.integrate([](double x) { return std::pow(x, 10); }) ==
          doctest::Approx(3628800.0).epsilon(1e-10));

    const auto folded = roi::gauss_laguerre_folded(64);
    for (double w : folded.weights) {
        CHECK(std::isfinite(w));
        CHECK(w > 0.0);
    }
    CHECK(folded.integrate([](double x) { return std::exp(-x); }) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(folded.integrate([](double x) { return x * x * x * std::exp(-x); }) ==
          doctest::Approx(6.0).epsilon(1e-13));
    // Large-k moments stress the outer nodes, whose bare weights underflow
    // toward 1e-100; the folded rule has to stay relatively accurate there.
    CHECK(folded.integrate([](double x) { return std::pow(x, 20) * std::exp(-x); }) ==
          doctest::Approx(std::exp(std::lgamma(21.0))).epsilon(1e-12));
}

TEST_CASE("mapped semi-infinite rule") {
    const auto rule = roi::gauss_legendre_mapped_semi_infinite(32);
    // Pullbacks of these integrands are polynomials in t, hence exact.
    CHECK(rule.integrate([](double x) { return 1.0 / ((1 + x) * (1 + x)); }) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rule.integrate([](double x) { return x / std::pow(1 + x, 4); }) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("angular trapezoid rule") {
    const auto rule = roi::trapezoid_angular(16);
    CHECK(rule.integrate([](double) { return 1.0; }) ==
          doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
    for (int k = 1; k < 16; ++k) {
        const double re = rule.integrate([k](double t) { return std::cos(k * t); });
        const double im = rule.integrate([k](double t) { return std::sin(k * t); });
        CHECK(std::abs(re) < 1e-12);
        CHECK(std::abs(im) < 1e-12);
    }
}

TEST_CASE("adaptive quadrature") {
    CHECK(roi::integrate_adaptive([](double x) { return x * x * x; }, 0.0, 1.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
    // Sharply peaked integrand forces refinement.
    const double peaked = roi::integrate_adaptive(
        [](double x) { return std::exp(-1e4 * (x - 0.37) * (x - 0.37)); }, 0.0, 1.0, 1e-10);
    CHECK(peaked == doctest::Approx(std::sqrt(std::numbers::pi) / 100.0).epsilon(1e-9));

    CHECK(roi::integrate_adaptive_semi_infinite([](double x) { return std::exp(-x); }) ==
          doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(roi::integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0),
                    DivergentIntegral);
    CHECK_THROWS_AS(roi::integrate_adaptive([](double) { return 0.0; }, 1.0, 0.0),
                    InvalidInterval);
}
