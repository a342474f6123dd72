#pragma once

#include <cstdint>
#include <vector>

#include "csd/distfam.hpp"

namespace csd::bayeslab {

// A repeated-trials experiment drawn from a discrete family at a fixed
// true parameter value.
struct ExperimentConfig {
    distfam::DiscreteFamily family;
    double true_param = 0.5;
    std::uint64_t seed = 0;
};

struct CredibleInterval {
    double lo = 0.0;
    double hi = 1.0;
    double mass = 0.0;
};

struct PosteriorSummary {
    std::vector<double> grid;     // parameter values
    std::vector<double> density;  // normalized posterior on the grid
    std::vector<double> cdf;      // trapezoid cumulative, cdf.back() == 1
    double point_estimate = 0.0;  // posterior mean
    CredibleInterval interval;
};

// Draws an observation by inverse-CDF sampling of the pmf; deterministic
// given the seed.
int simulate(const ExperimentConfig& config);

// k_obs / N.
double point_estimate(int k_obs, int N);

// Tabulated normalized posterior on a 512-point grid with a central
// (equal-tailed) credible interval of the requested mass.  The grid is
// refined around the mode when the posterior is sharply peaked.
PosteriorSummary posterior_summary(const distfam::DiscreteFamily& family,
                                   const distfam::PriorMeasure& prior, int k_obs,
                                   double mass, int grid_size = 512);

// Binomial likelihood in the success probability p on [0, 1]; the natural
// family for the coin-toss workflow.
distfam::DiscreteFamily binomial_p_family(int N);

}  // namespace csd::bayeslab
