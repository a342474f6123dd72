#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "csd/cstates.hpp"
#include "csd/distfam.hpp"
#include "csd/roi.hpp"

using namespace csd;
using cstates::CSLabel;

namespace {

std::shared_ptr<seqcore::FactorialSequence> pois_seq(int n = 256) {
    return std::make_shared<seqcore::FactorialSequence>(
        seqcore::FactorialSequence::poisson(n));
}

// Both the Poisson and the binomial family have c_n = 1 exactly.
distfam::DualityCertificate ones_certificate(const distfam::DiscreteFamily& fam,
                                             const std::vector<double>& grid) {
    const std::vector<double> c(static_cast<std::size_t>(fam.n_max) + 1, 1.0);
    return distfam::check_convergence(fam, c, grid);
}

}  // namespace

TEST_CASE("labels") {
    const CSLabel vac(0.0, 0.0);
    CHECK(vac.z() == cstates::Complex(0.0, 0.0));

    const CSLabel l(2.25, -1.0);
    CHECK(l.theta >= 0.0);
    CHECK(l.theta < 2.0 * 3.15);
    CHECK(std::norm(l.z()) == doctest::Approx(2.25).epsilon(1e-14));

    const auto back = CSLabel::from_z(l.z());
    CHECK(back.lambda == doctest::Approx(l.lambda).epsilon(1e-13));
    CHECK(back.theta == doctest::Approx(l.theta).epsilon(1e-12));
}

TEST_CASE("nonlinear coherent states") {
    const auto seq = pois_seq();
    const auto vac = cstates::cs_nonlinear(*seq, CSLabel(0.0, 0.0));
    CHECK(vac.coeffs[0] == cstates::Complex(1.0, 0.0));
    for (int n = 1; n < 10; ++n) CHECK(std::abs(vac.coeffs[n]) == 0.0);

    const auto cs = cstates::cs_nonlinear(*seq, CSLabel(1.0, 0.0));
    double norm = 0.0;
    for (int n = 0; n < cs.size(); ++n) {
        norm += std::norm(cs.coeffs[n]);
        if (n <= 12)
            CHECK(std::norm(cs.coeffs[n]) ==
                  doctest::Approx(distfam::pmf_poisson(n, 1.0)).epsilon(1e-12));
    }
    CHECK(std::abs(norm - 1.0) < 1e-10);

    const auto su2 = seqcore::FactorialSequence::su2(4);
    const auto scs = cstates::cs_nonlinear(su2, CSLabel(1.0, 0.0));
    CHECK(std::norm(scs.coeffs[2]) == doctest::Approx(6.0 / 16.0).epsilon(1e-13));

    const auto su11 = seqcore::FactorialSequence::su11(2, 256);
    CHECK_THROWS_AS(cstates::cs_nonlinear(su11, CSLabel(1.2, 0.0)), OutOfDomain);
}

TEST_CASE("coherent states from a discrete family") {
    const auto fam = distfam::poisson_family(256);
    const auto cert = ones_certificate(fam, {0.5, 1.0, 2.0});
    REQUIRE(cert.pass);

    const auto a = cstates::cs_from_discrete(fam, cert, CSLabel(1.0, 0.7));
    const auto b = cstates::cs_nonlinear(*pois_seq(), CSLabel(1.0, 0.7));
    for (int n = 0; n < 20; ++n)
        CHECK(std::abs(a.coeffs[n] - b.coeffs[n]) < 1e-12);

    const auto bin = distfam::binomial_family(4);
    const auto bcert = ones_certificate(bin, {0.5, 1.0});
    const auto bc = cstates::cs_from_discrete(bin, bcert, CSLabel(1.0, 0.0));
    for (int n = 0; n <= 4; ++n) {
        const double binom = std::exp(std::lgamma(5.0) - std::lgamma(n + 1.0) -
                                      std::lgamma(5.0 - n));
        CHECK(bc.coeffs[n].real() ==
              doctest::Approx(std::sqrt(binom / 16.0)).epsilon(1e-12));
        CHECK(std::abs(bc.coeffs[n].imag()) < 1e-15);
    }

    const auto rotated = cstates::cs_from_discrete(bin, bcert, CSLabel(1.0, 3.14159265358979));
    CHECK(rotated.coeffs[1].real() ==
          doctest::Approx(-bc.coeffs[1].real()).epsilon(1e-9));

    distfam::DualityCertificate bad;
    bad.pass = false;
    CHECK_THROWS_AS(cstates::cs_from_discrete(fam, bad, CSLabel(1.0, 0.0)),
                    CertificateFailed);
}

TEST_CASE("coherent states from a continuous family") {
    const auto psi = distfam::poisson_dual(256);
    const auto a = cstates::cs_from_continuous(psi, 1.3, 0.4);
    const auto b = cstates::cs_nonlinear(*pois_seq(), CSLabel(1.3, 0.4));
    CHECK(std::abs(cstates::overlap(a, b)) == doctest::Approx(1.0).epsilon(1e-10));

    double norm = 0.0;
    for (const auto& c : a.coeffs) norm += std::norm(c);
    CHECK(std::abs(norm - 1.0) < 1e-10);

    // Negative-binomial dual coefficients at lambda = 0.5 against the
    // normalized closed form.
    const int m = 2;
    const auto nb = distfam::negbinomial_dual(m, 128);
    const auto c = cstates::cs_from_continuous(nb, 0.5, 0.0);
    double tot = 0.0;
    std::vector<double> psi_vals;
    for (int n = 0; n <= 128; ++n) {
        psi_vals.push_back(distfam::pdf_beta(0.5, m + 1, n + 1));
        tot += psi_vals.back();
    }
    for (int n = 0; n <= 40; ++n)
        CHECK(std::norm(c.coeffs[n]) ==
              doctest::Approx(psi_vals[n] / tot).epsilon(1e-10));
}

TEST_CASE("kernel evaluation") {
    cstates::KernelEvaluator ke{pois_seq(60), {60, 1e-12}};
    const auto diag = cstates::kernel_eval(ke, CSLabel(1.0, 0.0), CSLabel(1.0, 0.0));
    CHECK(std::abs(diag.imag()) < 1e-14);
    CHECK(std::abs(diag.real() - std::exp(1.0)) < 1e-10);

    // Bargmann closed form K(x, y) = exp(z_x conj(z_y)).
    const CSLabel x(0.8, 0.3), y(1.1, 5.0);
    const auto got = cstates::kernel_eval(ke, x, y);
    const auto expect = std::exp(x.z() * std::conj(y.z()));
    CHECK(std::abs(got - expect) < 1e-10);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const CSLabel p(2.0 * u(rng), 6.28 * u(rng));
        const CSLabel q(2.0 * u(rng), 6.28 * u(rng));
        const auto kpq = cstates::kernel_eval(ke, p, q);
        const auto kqp = cstates::kernel_eval(ke, q, p);
        CHECK(std::abs(kpq - std::conj(kqp)) < 1e-12);
        CHECK(cstates::kernel_eval(ke, p, p).real() > 0.0);
    }
}

TEST_CASE("kernel reproducing property") {
    cstates::KernelEvaluator pois{pois_seq(), {}};
    const auto pm = roi::poisson_measure();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        const CSLabel x(2.25 * u(rng), 6.28 * u(rng));  // |z| <= 1.5
        const CSLabel y(2.25 * u(rng), 6.28 * u(rng));
        CHECK(cstates::kernel_reproducing_check(pois, pm, x, y) < 1e-6);
    }
    const CSLabel origin(0.0, 0.0);
    CHECK(cstates::kernel_reproducing_check(pois, pm, origin, origin) < 1e-10);

    cstates::KernelEvaluator su2{std::make_shared<seqcore::FactorialSequence>(
                                     seqcore::FactorialSequence::su2(4)),
                                 {}};
    CHECK(cstates::kernel_reproducing_check(su2, roi::su2_measure(4), CSLabel(1.2, 0.3),
                                            CSLabel(0.7, 5.1)) < 1e-8);
}

TEST_CASE("overlap and probability extraction") {
    const auto seq = pois_seq();
    const auto a = cstates::cs_nonlinear(*seq, CSLabel(1.0, 0.0));
    const auto v = cstates::cs_nonlinear(*seq, CSLabel(0.0, 0.0));
    CHECK(std::abs(cstates::overlap(a, a) - cstates::Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(cstates::overlap(a, v)) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    cstates::CoherentState short_state;
    short_state.coeffs = {cstates::Complex(1.0, 0.0)};
    CHECK_THROWS_AS(cstates::overlap(a, short_state), DimensionMismatch);

    CHECK(cstates::prob_extract(a, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    double sum = 0.0;
    for (int n = 0; n < a.size(); ++n) sum += cstates::prob_extract(a, n);
    CHECK(std::abs(sum - 1.0) < 1e-10);

    const auto su2 = seqcore::FactorialSequence::su2(4);
    const auto scs = cstates::cs_nonlinear(su2, CSLabel(1.0, 0.0));
    CHECK(cstates::prob_extract(scs, 2) ==
          doctest::Approx(distfam::pmf_binomial(2, 4, 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(cstates::prob_extract(scs, 9), IndexOutOfRange);
}

TEST_CASE("phase covariance") {
    const auto seq = pois_seq();
    const auto base = cstates::cs_nonlinear(*seq, CSLabel(1.7, 0.9));
    const auto moved = cstates::cs_nonlinear(*seq, CSLabel(1.7, 0.9 + 0.37));
    for (int n = 0; n < 30; ++n) {
        if (std::abs(base.coeffs[n]) < 1e-200) continue;
        const auto factor = moved.coeffs[n] / base.coeffs[n];
        CHECK(std::abs(std::abs(factor) - 1.0) < 1e-13);
        CHECK(std::abs(cstates::prob_extract(moved, n) - cstates::prob_extract(base, n)) <
              1e-14);
    }
}

TEST_CASE("construction equivalence discrete vs continuous") {
    const auto fam = distfam::poisson_family(256);
    const auto cert = ones_certificate(fam, {1.0});
    const auto from_disc = cstates::cs_from_discrete(fam, cert, CSLabel(1.4, 2.2));
    const auto from_cont = cstates::cs_from_continuous(distfam::poisson_dual(256), 1.4, 2.2);
    CHECK(std::abs(cstates::overlap(from_disc, from_cont)) ==
          doctest::Approx(1.0).epsilon(1e-10));

    const auto nbfam = distfam::negbinomial_family(2, 300);
    std::vector<double> c;
    for (int n = 0; n <= nbfam.n_max; ++n)
        c.push_back(2.0 / ((n + 3.0) * (n + 2.0)));
    const auto nbcert = distfam::check_convergence(nbfam, c, {0.5});
    REQUIRE(nbcert.pass);
    const auto nd = cstates::cs_from_discrete(nbfam, nbcert, CSLabel(0.5, 1.0));
    const auto nc = cstates::cs_from_continuous(distfam::negbinomial_dual(2, 300), 0.5, 1.0);
    CHECK(std::abs(cstates::overlap(nd, nc)) == doctest::Approx(1.0).epsilon(1e-10));
}
