#include "csd/distfam.hpp"

#include <algorithm>
#include <cmath>

#include "csd/quadrature.hpp"

namespace csd::distfam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_choose(int N, int n) {
    return std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0);
}

// Adaptive integral over the (possibly semi-infinite) interval [lo, hi].
double integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol) {
    if (std::isinf(hi)) {
        auto shifted = [&f, lo](double u) { return f(lo + u); };
        return roi::integrate_adaptive_semi_infinite(shifted, rel_tol);
    }
    return roi::integrate_adaptive(f, lo, hi, rel_tol);
}

}  // namespace

double pmf_poisson(int n, double lambda) {
    if (lambda < 0.0) throw NegativeParameter("pmf_poisson requires lambda >= 0");
    if (n < 0) throw OutOfRange("pmf_poisson requires n >= 0");
    if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;  // 0^0 = 1 convention
    return std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
}

double pmf_binomial(int n, int N, double p) {
    if (n < 0 || n > N) throw OutOfRange("pmf_binomial requires 0 <= n <= N");
    if (p < 0.0 || p > 1.0) throw OutOfRange("pmf_binomial requires p in [0, 1]");
    if (p == 0.0) return n == 0 ? 1.0 : 0.0;
    if (p == 1.0) return n == N ? 1.0 : 0.0;
    return std::exp(log_choose(N, n) + n * std::log(p) + (N - n) * std::log1p(-p));
}

double reparam_binomial_lambda(double p) {
    if (p < 0.0 || p > 1.0) throw OutOfRange("reparam requires p in [0, 1)");
    if (p == 1.0) throw Singular("lambda = p/(1-p) is singular at p = 1");
    return p / (1.0 - p);
}

double reparam_binomial_p(double lambda) {
    if (lambda < 0.0) throw OutOfRange("reparam requires lambda >= 0");
    return lambda / (1.0 + lambda);
}

double pmf_negbinomial(int m, int n, double lambda) {
    if (m < 1) throw OutOfRange("pmf_negbinomial requires m >= 1");
    if (n < 0) throw OutOfRange("pmf_negbinomial requires n >= 0");
    if (lambda <= 0.0 || lambda >= 1.0)
        throw OutOfRange("pmf_negbinomial requires lambda in (0, 1)");
    return std::exp(std::lgamma(m + n + 0.0) - std::lgamma(n + 1.0) - std::lgamma(m + 0.0) +
                    m * std::log(lambda) + n * std::log1p(-lambda));
}

double pdf_gamma(int n, double lambda) {
    if (n < 1) throw OutOfRange("pdf_gamma requires n >= 1");
    if (lambda < 0.0) throw OutOfRange("pdf_gamma requires lambda >= 0");
    if (lambda == 0.0) return n == 1 ? 1.0 : 0.0;
    return std::exp((n - 1) * std::log(lambda) - lambda - std::lgamma(n + 0.0));
}

double pdf_beta(double lambda, int m, int n) {
    if (m < 1 || n < 1) throw OutOfRange("pdf_beta requires m, n >= 1");
    if (lambda < 0.0 || lambda > 1.0) throw OutOfRange("pdf_beta requires lambda in [0, 1]");
    const double log_b = std::lgamma(m + 0.0) + std::lgamma(n + 0.0) - std::lgamma(m + n + 0.0);
    if (lambda == 0.0) return m == 1 ? std::exp(-log_b) : 0.0;
    if (lambda == 1.0) return n == 1 ? std::exp(-log_b) : 0.0;
    return std::exp((m - 1) * std::log(lambda) + (n - 1) * std::log1p(-lambda) - log_b);
}

double pdf_beta_first_kind(double lambda, int n, int N) {
    if (n < 0 || n > N) throw OutOfRange("pdf_beta_first_kind requires 0 <= n <= N");
    if (lambda < 0.0) throw OutOfRange("pdf_beta_first_kind requires lambda >= 0");
    const double log_c = std::lgamma(N + 2.0) - std::lgamma(N - n + 1.0) - std::lgamma(n + 1.0);
    if (lambda == 0.0) return n == 0 ? std::exp(log_c) : 0.0;
    return std::exp(log_c + n * std::log(lambda) - (N + 2.0) * std::log1p(lambda));
}

DiscreteFamily poisson_family(int n_trunc) {
    DiscreteFamily fam;
    fam.name = "poisson";
    fam.pmf = [](int n, double lambda) { return pmf_poisson(n, lambda); };
    fam.n_max = n_trunc;
    fam.truncated = true;
    fam.param_lo = 0.0;
    fam.param_hi = kInf;
    fam.decay = DecayKind::Exponential;
    fam.sequence = std::make_shared<seqcore::FactorialSequence>(
        seqcore::FactorialSequence::poisson(n_trunc));
    fam.canonical_prior = std::make_shared<PriorMeasure>(PriorMeasure{
        "uniform", [](double) { return 1.0; }, 0.0, kInf});
    return fam;
}

DiscreteFamily binomial_family(int N) {
    DiscreteFamily fam;
    fam.name = "binomial";
    fam.pmf = [N](int n, double lambda) {
        if (n < 0 || n > N) throw OutOfRange("binomial pmf requires 0 <= n <= N");
        if (lambda < 0.0) throw OutOfRange("binomial pmf requires lambda >= 0");
        if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
        return std::exp(log_choose(N, n) + n * std::log(lambda) -
                        N * std::log1p(lambda));
    };
    fam.n_max = N;
    fam.truncated = false;
    fam.param_lo = 0.0;
    fam.param_hi = kInf;
    fam.decay = DecayKind::Rational;
    fam.sequence =
        std::make_shared<seqcore::FactorialSequence>(seqcore::FactorialSequence::su2(N));
    fam.canonical_prior = std::make_shared<PriorMeasure>(PriorMeasure{
        "binomial-canonical",
        [N](double lambda) { return (N + 1.0) / ((1.0 + lambda) * (1.0 + lambda)); }, 0.0,
        kInf});
    return fam;
}

DiscreteFamily negbinomial_family(int m, int n_trunc) {
    DiscreteFamily fam;
    fam.name = "negbinomial";
    fam.pmf = [m](int n, double lambda) { return pmf_negbinomial(m, n, lambda); };
    fam.n_max = n_trunc;
    fam.truncated = true;
    fam.param_lo = 0.0;
    fam.param_hi = 1.0;
    fam.decay = DecayKind::Bounded;
    // No sequence link: the nonlinear-series variable of this family is
    // 1 - lambda (see FactorialSequence::su11), not lambda itself.
    fam.canonical_prior = std::make_shared<PriorMeasure>(PriorMeasure{
        "lebesgue", [](double) { return 1.0; }, 0.0, 1.0});
    return fam;
}

ContinuousFamily poisson_dual(int n_trunc) {
    ContinuousFamily psi;
    psi.name = "poisson-dual";
    psi.pdf = [](int n, double lambda) { return pdf_gamma(n + 1, lambda); };
    psi.n_max = n_trunc;
    psi.support_lo = 0.0;
    psi.support_hi = kInf;
    psi.decay = DecayKind::Exponential;
    return psi;
}

ContinuousFamily binomial_dual(int N) {
    ContinuousFamily psi;
    psi.name = "binomial-dual";
    psi.pdf = [N](int n, double lambda) { return pdf_beta_first_kind(lambda, n, N); };
    psi.n_max = N;
    psi.support_lo = 0.0;
    psi.support_hi = kInf;
    psi.decay = DecayKind::Rational;
    return psi;
}

ContinuousFamily negbinomial_dual(int m, int n_trunc) {
    ContinuousFamily psi;
    psi.name = "negbinomial-dual";
    psi.pdf = [m](int n, double lambda) { return pdf_beta(lambda, m + 1, n + 1); };
    psi.n_max = n_trunc;
    psi.support_lo = 0.0;
    psi.support_hi = 1.0;
    psi.decay = DecayKind::Bounded;
    psi.series_variable = [](double lambda) { return 1.0 - lambda; };
    return psi;
}

DiscreteFamily from_nonlinear(std::shared_ptr<const seqcore::FactorialSequence> seq,
                              seqcore::SeriesTruncation trunc) {
    if (!seq) throw Error("from_nonlinear requires a sequence");
    const double L = seq->radius_of_convergence();
    DiscreteFamily fam;
    fam.name = "nonlinear";
    fam.pmf = [seq, trunc](int n, double lambda) {
        if (n < 0 || n > seq->n_max())
            throw IndexOutOfRange("pmf index outside the sequence range");
        if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
        const auto norm = seqcore::normalization(*seq, lambda, trunc);
        return std::exp(n * std::log(lambda) - seq->log_factorial(n) - norm.log_value);
    };
    fam.n_max = std::min(trunc.n_max, seq->n_max());
    fam.truncated = seq->truncated_infinite();
    fam.param_lo = 0.0;
    fam.param_hi = L;
    if (std::isfinite(L))
        fam.decay = DecayKind::Bounded;
    else
        fam.decay = seq->truncated_infinite() ? DecayKind::Exponential : DecayKind::Rational;
    fam.sequence = std::move(seq);
    return fam;
}

double compute_cn(const DiscreteFamily& family, const PriorMeasure& prior, int n,
                  double rel_tol) {
    const double lo = std::max(family.param_lo, prior.support_lo);
    const double hi = std::min(family.param_hi, prior.support_hi);
    if (!(lo < hi)) throw InvalidInterval("prior support does not meet the family interval");
    auto f = [&family, &prior, n](double lambda) {
        return family.pmf(n, lambda) * prior.density(lambda);
    };
    const double value = integrate_interval(f, lo, hi, rel_tol);
    if (!std::isfinite(value))
        throw DivergentIntegral("c_n integral did not converge for n = " + std::to_string(n));
    return value;
}

DualityCertificate check_convergence(const DiscreteFamily& family,
                                     const std::vector<double>& c,
                                     const std::vector<double>& lambda_grid,
                                     double tail_tol) {
    for (double cn : c)
        if (!(cn > 0.0) || !std::isfinite(cn))
            throw Error("check_convergence requires positive finite c_n");
    DualityCertificate cert;
    cert.c = c;
    cert.lambda_grid = lambda_grid;
    cert.pass = true;
    const int n_top = std::min(family.n_max, static_cast<int>(c.size()) - 1);
    for (double lambda : lambda_grid) {
        double sum = 0.0, comp = 0.0;
        double prev = 0.0, last = 0.0;
        for (int n = 0; n <= n_top; ++n) {
            prev = last;
            last = family.pmf(n, lambda) / c[static_cast<std::size_t>(n)];
            const double y = last - comp;
            const double s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        bool ok = std::isfinite(sum);
        if (ok && family.truncated && prev > 0.0 && last > 0.0) {
            const double r = last / prev;
            if (r < 1.0) {
                const double tail = last * r / (1.0 - r);
                ok = tail <= tail_tol * sum + 1e-300;
            } else {
                ok = false;
            }
        }
        cert.convergence_value.push_back(sum);
        if (!ok) cert.pass = false;
    }
    return cert;
}

ContinuousFamily posterior_density(const DiscreteFamily& family, const PriorMeasure& prior,
                                   int n_obs) {
    if (n_obs < 0 || n_obs > family.n_max)
        throw IndexOutOfRange("n_obs outside the family range");
    const double c = compute_cn(family, prior, n_obs);
    if (!(c > 1e-300)) throw ZeroEvidence("posterior evidence underflows");
    ContinuousFamily psi;
    psi.name = family.name + "-posterior";
    auto pmf = family.pmf;
    auto density = prior.density;
    psi.pdf = [pmf, density, c, n_obs](int /*n*/, double lambda) {
        return pmf(n_obs, lambda) * density(lambda) / c;
    };
    psi.n_max = 0;
    psi.support_lo = std::max(family.param_lo, prior.support_lo);
    psi.support_hi = std::min(family.param_hi, prior.support_hi);
    psi.decay = family.decay;
    return psi;
}

double expectation_Y(const DiscreteFamily& family, double lambda) {
    if (!family.sequence)
        throw Error("expectation_Y requires a sequence-built family");
    if (lambda < 0.0) throw NegativeParameter("expectation_Y requires lambda >= 0");
    if (lambda == 0.0) return 0.0;  // x_0 = 0 convention
    const auto& seq = *family.sequence;
    const auto norm = seqcore::normalization(seq, lambda, {});
    const int n_top = std::min(family.n_max, seq.n_max());
    // Each term is x_n P(n, lambda) = lambda^n / (x_{n-1}! N(lambda)).  For a
    // finite sequence the limit term at n_top + 1 stays finite in this form
    // and is needed to telescope the sum to exactly lambda.
    const int top = seq.truncated_infinite() ? n_top : n_top + 1;
    const double log_lambda = std::log(lambda);
    double sum = 0.0, comp = 0.0;
    for (int n = 1; n <= top; ++n) {
        const double t = std::exp(n * log_lambda - seq.log_factorial(n - 1) - norm.log_value);
        const double y = t - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

double expectation_Lambda(const ContinuousFamily& psi, int n) {
    if (n < 0 || n > psi.n_max) throw IndexOutOfRange("index outside the dual family range");
    auto f = [&psi, n](double lambda) {
        const double v = psi.series_variable ? psi.series_variable(lambda) : lambda;
        return v * psi.pdf(n, lambda);
    };
    const double value = integrate_interval(f, psi.support_lo, psi.support_hi, 1e-11);
    if (!std::isfinite(value)) throw DivergentIntegral("first moment did not converge");
    return value;
}

}  // namespace csd::distfam
