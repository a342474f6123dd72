#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "csd/distfam.hpp"
#include "csd/quadrature.hpp"

using namespace csd;
using namespace csd::distfam;

TEST_CASE("poisson pmf") {
    CHECK(pmf_poisson(0, 0.0) == 1.0);
    CHECK(pmf_poisson(3, 0.0) == 0.0);
    CHECK(pmf_poisson(2, 1.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-14));
    double sum = 0.0;
    for (int n = 0; n <= 80; ++n) sum += pmf_poisson(n, 5.0);
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK_THROWS_AS(pmf_poisson(1, -0.5), NegativeParameter);
    CHECK_THROWS_AS(pmf_poisson(-1, 1.0), OutOfRange);
}

TEST_CASE("binomial pmf against enumeration") {
    // Enumerate all 16 length-4 outcome strings at p = 1/2.
    int count2 = 0;
    for (int bits = 0; bits < 16; ++bits) {
        int ones = 0;
        for (int b = 0; b < 4; ++b) ones += (bits >> b) & 1;
        if (ones == 2) ++count2;
    }
    CHECK(pmf_binomial(2, 4, 0.5) == doctest::Approx(count2 / 16.0).epsilon(1e-14));
    CHECK(pmf_binomial(2, 4, 0.5) == doctest::Approx(0.375).epsilon(1e-14));

    CHECK(pmf_binomial(0, 7, 0.0) == 1.0);
    CHECK(pmf_binomial(7, 7, 1.0) == 1.0);
    for (double p : {0.1, 0.35, 0.9}) {
        double sum = 0.0;
        for (int n = 0; n <= 6; ++n) sum += pmf_binomial(n, 6, p);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(pmf_binomial(5, 4, 0.5), OutOfRange);
    CHECK_THROWS_AS(pmf_binomial(1, 4, 1.5), OutOfRange);
}

TEST_CASE("binomial reparametrization") {
    CHECK(reparam_binomial_lambda(0.0) == 0.0);
    CHECK(reparam_binomial_lambda(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(reparam_binomial_p(3.0) == doctest::Approx(0.75).epsilon(1e-14));
    for (double p : {0.0, 0.2, 0.5, 0.77, 0.99}) {
        CHECK(reparam_binomial_p(reparam_binomial_lambda(p)) ==
              doctest::Approx(p).epsilon(1e-14));
    }
    CHECK_THROWS_AS(reparam_binomial_lambda(1.0), Singular);
    CHECK_THROWS_AS(reparam_binomial_lambda(-0.1), OutOfRange);
}

TEST_CASE("negative binomial pmf") {
    CHECK(pmf_negbinomial(2, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    for (int m : {1, 3, 5})
        CHECK(pmf_negbinomial(m, 0, 0.3) ==
              doctest::Approx(std::pow(0.3, m)).epsilon(1e-13));
    double sum = 0.0;
    for (int n = 0; n <= 200; ++n) sum += pmf_negbinomial(1, n, 0.5);
    CHECK(std::abs(sum - 1.0) < 1e-10);
    CHECK_THROWS_AS(pmf_negbinomial(2, 1, 0.0), OutOfRange);
    CHECK_THROWS_AS(pmf_negbinomial(2, 1, 1.0), OutOfRange);
    CHECK_THROWS_AS(pmf_negbinomial(0, 1, 0.5), OutOfRange);
}

TEST_CASE("gamma density") {
    CHECK(pdf_gamma(1, 0.0) == 1.0);
    CHECK(pdf_gamma(3, 2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
    const auto rule = roi::gauss_laguerre_folded(32);
    CHECK(rule.integrate([](double x) { return pdf_gamma(4, x); }) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(pdf_gamma(0, 1.0), OutOfRange);
}

TEST_CASE("beta density") {
    CHECK(pdf_beta(0.5, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pdf_beta(0.25, 2, 3) == doctest::Approx(1.6875).epsilon(1e-13));
    const auto rule = roi::gauss_legendre(0.0, 1.0, 32);
    CHECK(rule.integrate([](double x) { return pdf_beta(x, 5, 7); }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(pdf_beta(1.5, 2, 2), OutOfRange);
}

TEST_CASE("beta density of the first kind") {
    for (int N : {1, 3, 6}) CHECK(pdf_beta_first_kind(0.0, 0, N) == doctest::Approx(N + 1.0));
    // (N+1)!/((N-n)! n!) lambda^n / (1+lambda)^{N+2} at (1, 1, 1): 2 / 8.
    CHECK(pdf_beta_first_kind(1.0, 1, 1) == doctest::Approx(0.25).epsilon(1e-13));
    const auto rule = roi::gauss_legendre_mapped_semi_infinite(64);
    CHECK(rule.integrate([](double x) { return pdf_beta_first_kind(x, 2, 4); }) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(pdf_beta_first_kind(-1.0, 1, 2), OutOfRange);
    CHECK_THROWS_AS(pdf_beta_first_kind(0.5, 3, 2), OutOfRange);
}

TEST_CASE("from_nonlinear reproduces closed forms") {
    const auto pois = from_nonlinear(std::make_shared<seqcore::FactorialSequence>(
        seqcore::FactorialSequence::poisson(256)));
    for (int n : {0, 1, 2, 7, 15}) {
        for (double lam : {0.3, 1.0, 4.5}) {
            CHECK(std::abs(pois.pmf(n, lam) - pmf_poisson(n, lam)) < 1e-12);
        }
    }
    CHECK(pois.pmf(0, 0.0) == 1.0);
    CHECK(pois.pmf(3, 0.0) == 0.0);

    const auto su2 = from_nonlinear(std::make_shared<seqcore::FactorialSequence>(
        seqcore::FactorialSequence::su2(4)));
    CHECK(su2.pmf(2, 1.0) == doctest::Approx(6.0 / 16.0).epsilon(1e-13));
    const auto bin = binomial_family(4);
    for (int n = 0; n <= 4; ++n)
        CHECK(su2.pmf(n, 0.7) == doctest::Approx(bin.pmf(n, 0.7)).epsilon(1e-12));
}

TEST_CASE("duality constants c_n") {
    const auto pois = poisson_family(256);
    for (int n : {0, 1, 3, 6})
        CHECK(compute_cn(pois, *pois.canonical_prior, n) ==
              doctest::Approx(1.0).epsilon(1e-9));

    const auto bin = binomial_family(4);
    for (int n = 0; n <= 4; ++n)
        CHECK(compute_cn(bin, *bin.canonical_prior, n) ==
              doctest::Approx(1.0).epsilon(1e-9));

    for (int m : {1, 2, 3}) {
        const auto nb = negbinomial_family(m, 256);
        for (int n = 0; n <= 10; ++n) {
            const double closed = m / ((m + n + 1.0) * (m + n + 0.0));
            const double got = compute_cn(nb, *nb.canonical_prior, n);
            CHECK(std::abs(got - closed) / closed < 1e-9);
        }
    }
}

TEST_CASE("convergence certificate") {
    const auto nb = negbinomial_family(1, 256);
    std::vector<double> c;
    for (int n = 0; n <= nb.n_max; ++n)
        c.push_back(1.0 / ((1 + n + 1.0) * (1 + n + 0.0)));
    const auto cert = check_convergence(nb, c, {0.3, 0.5, 0.8});
    CHECK(cert.pass);
    // Closed form (m+1)/lambda^2.
    CHECK(cert.convergence_value[0] == doctest::Approx(2.0 / 0.09).epsilon(1e-8));
    CHECK(cert.convergence_value[1] == doctest::Approx(8.0).epsilon(1e-8));
    CHECK(cert.convergence_value[2] == doctest::Approx(2.0 / 0.64).epsilon(1e-8));

    const auto bin = binomial_family(4);
    const auto bcert =
        check_convergence(bin, std::vector<double>(5, 1.0), {0.1, 1.0, 9.0});
    CHECK(bcert.pass);
    for (double v : bcert.convergence_value) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const auto pois = poisson_family(256);
    const auto pcert =
        check_convergence(pois, std::vector<double>(257, 1.0), {0.5, 2.0});
    CHECK(pcert.pass);
    for (double v : pcert.convergence_value)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(check_convergence(bin, std::vector<double>(5, 0.0), {1.0}), Error);
}

TEST_CASE("posterior densities match the conjugate duals") {
    // Poisson + uniform -> gamma(n_obs + 1).
    const auto pois = poisson_family(256);
    const auto post = posterior_density(pois, *pois.canonical_prior, 3);
    for (int i = 1; i <= 200; ++i) {
        const double lam = 0.1 * i;
        CHECK(std::abs(post.pdf(0, lam) - pdf_gamma(4, lam)) < 1e-9);
    }

    // Binomial (lambda form) + canonical prior -> beta of the first kind.
    const auto bin = binomial_family(4);
    const auto bpost = posterior_density(bin, *bin.canonical_prior, 2);
    for (double lam : {0.0, 0.4, 1.0, 3.7, 10.0})
        CHECK(std::abs(bpost.pdf(0, lam) - pdf_beta_first_kind(lam, 2, 4)) < 1e-9);

    // Negative binomial + Lebesgue -> Beta(m+1, n+1).
    const auto nb = negbinomial_family(2, 256);
    const auto npost = posterior_density(nb, *nb.canonical_prior, 1);
    for (double lam : {0.05, 0.3, 0.6, 0.95})
        CHECK(std::abs(npost.pdf(0, lam) - pdf_beta(lam, 3, 2)) < 1e-9);

    CHECK_THROWS_AS(posterior_density(bin, *bin.canonical_prior, 9), IndexOutOfRange);
}

TEST_CASE("duality round trip through from_nonlinear") {
    const auto fam = from_nonlinear(std::make_shared<seqcore::FactorialSequence>(
        seqcore::FactorialSequence::poisson(256)));
    // The truncated series cannot be evaluated at huge lambda, so cap the
    // prior support; the missing gamma tail past 40 is far below 1e-9.
    PriorMeasure uniform{"uniform", [](double) { return 1.0; }, 0.0, 40.0};
    const auto psi = poisson_dual(256);
    for (int n : {0, 2, 5}) {
        const auto post = posterior_density(fam, uniform, n);
        for (int i = 1; i <= 60; ++i) {
            const double lam = 0.2 * i;
            CHECK(std::abs(post.pdf(0, lam) - psi.pdf(n, lam)) < 1e-9);
        }
    }
}

TEST_CASE("normalization invariant across families") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto pois = poisson_family(256);
    const auto bin = binomial_family(6);
    const auto nb = negbinomial_family(2, 900);
    for (int rep = 0; rep < 20; ++rep) {
        const double lp = 10.0 * u(rng);
        double s = 0.0;
        for (int n = 0; n <= 120; ++n) s += pois.pmf(n, lp);
        CHECK(std::abs(s - 1.0) < 1e-10);

        const double lb = 10.0 * u(rng);
        s = 0.0;
        for (int n = 0; n <= bin.n_max; ++n) s += bin.pmf(n, lb);
        CHECK(std::abs(s - 1.0) < 1e-10);

        const double ln = 0.05 + 0.85 * u(rng);
        s = 0.0;
        for (int n = 0; n <= nb.n_max; ++n) s += nb.pmf(n, ln);
        CHECK(std::abs(s - 1.0) < 1e-10);
    }
}

TEST_CASE("expectation of Y") {
    const auto pois = poisson_family(256);
    CHECK(std::abs(expectation_Y(pois, 3.0) - 3.0) < 1e-10);
    CHECK(expectation_Y(pois, 0.0) == 0.0);

    const auto bin = binomial_family(4);
    CHECK(std::abs(expectation_Y(bin, 0.5) - 0.5) < 1e-12);

    const auto su11 = from_nonlinear(std::make_shared<seqcore::FactorialSequence>(
        seqcore::FactorialSequence::su11(2, 400)));
    CHECK(std::abs(expectation_Y(su11, 0.6) - 0.6) < 1e-10);

    const auto nb = negbinomial_family(2, 256);
    CHECK_THROWS_AS(expectation_Y(nb, 0.5), Error);  // no sequence attached
}

TEST_CASE("expectation of Lambda") {
    const auto pois = poisson_dual(256);
    CHECK(expectation_Lambda(pois, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(expectation_Lambda(pois, 4) == doctest::Approx(5.0).epsilon(1e-9));

    const auto nb = negbinomial_dual(2, 256);
    CHECK(expectation_Lambda(nb, 1) == doctest::Approx(0.4).epsilon(1e-9));

    const auto bin = binomial_dual(4);
    // x_{n+1} = (n+1)/(N-n) for the su2 sequence.
    CHECK(expectation_Lambda(bin, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK_THROWS_AS(expectation_Lambda(bin, 9), IndexOutOfRange);
}
