#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "csd/errors.hpp"

namespace csd::seqcore {

// Truncation policy for the infinite series summed throughout the library.
// A truncated result is accepted only when the estimated tail is at most
// tail_tol times the partial sum.
struct SeriesTruncation {
    int n_max = 256;
    double tail_tol = 1e-12;
};

// A positive sequence x_1, x_2, ... together with its generalized factorial
// x_n! = x_1 x_2 ... x_n (x_0! = 1).  All factorial-like quantities are kept
// in log space; lambda^n / x_n! overflows in linear space for modest n.
class FactorialSequence {
  public:
    // truncated_infinite marks a sequence that conceptually continues past
    // n_max and is merely stored up to the cutoff.
    explicit FactorialSequence(std::vector<double> values,
                               bool truncated_infinite = false,
                               std::optional<double> declared_radius = std::nullopt);

    // x_n = n: Poisson / canonical coherent states.
    static FactorialSequence poisson(int n_max);
    // x_n = n / (N - n + 1), n = 1..N: the finite binomial family.
    static FactorialSequence su2(int N);
    // x_n = n / (m + n + 1): the negative-binomial family, radius 1.
    static FactorialSequence su11(int m, int n_max);

    int n_max() const { return static_cast<int>(values_.size()); }
    bool truncated_infinite() const { return truncated_infinite_; }
    const std::vector<double>& values() const { return values_; }

    // x_n for n >= 1.
    double value(int n) const;

    // log(x_n!), 0 for n = 0.
    double log_factorial(int n) const;

    // Radius of convergence L of sum lambda^k / x_k!, estimated as the limit
    // of x_n.  `estimated` is set when the stored terms have not stabilized
    // (relative change over the last 10 terms > 1e-6).  A finite,
    // non-truncated sequence sums to a polynomial, so L is infinite.
    double radius_of_convergence(bool* estimated = nullptr) const;

  private:
    std::vector<double> values_;
    std::vector<double> log_factorials_;  // size n_max + 1, [0] = 0
    bool truncated_infinite_ = false;
    std::optional<double> declared_radius_;
};

struct NormalizationValue {
    double value = 0.0;
    double log_value = 0.0;
    int terms_used = 0;
};

// log(x_1 x_2 ... x_n); 0 for n = 0.
double generalized_log_factorial(const FactorialSequence& seq, int n);

// N(lambda) = sum_k lambda^k / x_k!, summed with a common exponent shift and
// compensated accumulation.  Requires lambda < L; the tail past the cutoff is
// bounded by a geometric majorant with ratio lambda / x_{n_max}.
NormalizationValue normalization(const FactorialSequence& seq, double lambda,
                                 const SeriesTruncation& trunc = {});

}  // namespace csd::seqcore
