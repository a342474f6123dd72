#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "csd/errors.hpp"
#include "csd/seqcore.hpp"

namespace csd::distfam {

// Hint for how the parameter-space integrals of a family behave at the far
// end of their support; picks the quadrature strategy.
enum class DecayKind { Bounded, Exponential, Rational };

// Prior measure on the parameter interval, given by its density with respect
// to Lebesgue measure.
struct PriorMeasure {
    std::string name;
    std::function<double(double)> density;
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
};

// A parametrized discrete probability family n -> P(n, lambda) over
// lambda in [a, b].  Families built from a factorial sequence keep a link to
// it so the expectation identities can be evaluated.
struct DiscreteFamily {
    std::string name;
    std::function<double(int, double)> pmf;
    int n_max = 256;                // basis cutoff (finite or truncation)
    bool truncated = true;          // true when n conceptually runs to infinity
    double param_lo = 0.0;
    double param_hi = std::numeric_limits<double>::infinity();
    DecayKind decay = DecayKind::Exponential;
    std::shared_ptr<const seqcore::FactorialSequence> sequence;  // may be null
    std::shared_ptr<const PriorMeasure> canonical_prior;         // may be null
};

// A family of continuous densities lambda -> Psi_n(lambda) indexed by n.
// series_variable maps the parameter to the variable of the underlying power
// series (identity except for families whose series runs in 1 - lambda).
struct ContinuousFamily {
    std::string name;
    std::function<double(int, double)> pdf;
    int n_max = 256;
    double support_lo = 0.0;
    double support_hi = std::numeric_limits<double>::infinity();
    DecayKind decay = DecayKind::Exponential;
    std::function<double(double)> series_variable;  // null means identity
};

// Result of verifying the two duality conditions: finite c_n and a finite
// normalizer sum at every sampled parameter value.
struct DualityCertificate {
    std::vector<double> c;                   // c_n, n = 0..size-1
    std::vector<double> lambda_grid;
    std::vector<double> convergence_value;   // sum_n P(n, lambda)/c_n per grid point
    bool pass = false;
};

// --- elementary pmfs / pdfs (log-space evaluation throughout) ---

// e^{-lambda} lambda^n / n!, with the 0^0 = 1 convention at lambda = 0.
double pmf_poisson(int n, double lambda);

// C(N, n) p^n (1-p)^{N-n}.
double pmf_binomial(int n, int N, double p);

// lambda = p / (1 - p) and its inverse p = lambda / (1 + lambda).
double reparam_binomial_lambda(double p);
double reparam_binomial_p(double lambda);

// Gamma(m+n) / (Gamma(n+1) Gamma(m)) lambda^m (1-lambda)^n for lambda in (0,1).
double pmf_negbinomial(int m, int n, double lambda);

// lambda^{n-1} e^{-lambda} / Gamma(n), n >= 1.
double pdf_gamma(int n, double lambda);

// lambda^{m-1} (1-lambda)^{n-1} / B(m, n) on [0, 1].
double pdf_beta(double lambda, int m, int n);

// (N+1)! / ((N-n)! n!) lambda^n / (1+lambda)^{N+2} on [0, inf).
double pdf_beta_first_kind(double lambda, int n, int N);

// --- built-in families and their canonical priors ---

DiscreteFamily poisson_family(int n_trunc = 256);
DiscreteFamily binomial_family(int N);               // lambda = p/q form
DiscreteFamily negbinomial_family(int m, int n_trunc = 256);

// Dual continuous families of the three built-ins.
ContinuousFamily poisson_dual(int n_trunc = 256);    // Psi_n = gamma_{n+1}
ContinuousFamily binomial_dual(int N);               // beta of the first kind
ContinuousFamily negbinomial_dual(int m, int n_trunc = 256);  // Beta(m+1, n+1)

// --- operations ---

// P(n, lambda) = lambda^n / (x_n! N(lambda)); normalized by construction.
DiscreteFamily from_nonlinear(std::shared_ptr<const seqcore::FactorialSequence> seq,
                              seqcore::SeriesTruncation trunc = {});

// c_n = integral of P(n, .) against the prior, by adaptive quadrature.
double compute_cn(const DiscreteFamily& family, const PriorMeasure& prior, int n,
                  double rel_tol = 1e-9);

// Evaluates sum_n P(n, lambda)/c_n with a tail estimate at each grid point.
DualityCertificate check_convergence(const DiscreteFamily& family,
                                     const std::vector<double>& c,
                                     const std::vector<double>& lambda_grid,
                                     double tail_tol = 1e-12);

// Normalized posterior lambda -> P(n_obs, lambda) Pi(lambda) / c_{n_obs},
// returned as a single-slice continuous family.
ContinuousFamily posterior_density(const DiscreteFamily& family,
                                   const PriorMeasure& prior, int n_obs);

// <Y> = sum_n x_n P(n, lambda); equals lambda for sequence-built families.
double expectation_Y(const DiscreteFamily& family, double lambda);

// <Lambda>_n = integral of the series variable against Psi_n; equals x_{n+1}.
double expectation_Lambda(const ContinuousFamily& psi, int n);

}  // namespace csd::distfam
