#include "csd/bayeslab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace csd::bayeslab {

namespace {

// Unnormalized posterior value, treating out-of-support points as zero so
// open-interval families can be tabulated on closed grids.
double posterior_point(const distfam::DiscreteFamily& family,
                       const distfam::PriorMeasure& prior, int k_obs, double lambda) {
    try {
        return family.pmf(k_obs, lambda) * prior.density(lambda);
    } catch (const OutOfRange&) {
        return 0.0;
    } catch (const OutOfDomain&) {
        return 0.0;
    }
}

struct Tabulation {
    std::vector<double> grid, density, cdf;
    double total = 0.0;
    double mean = 0.0;
};

Tabulation tabulate(const distfam::DiscreteFamily& family, const distfam::PriorMeasure& prior,
                    int k_obs, double lo, double hi, int n) {
    Tabulation t;
    t.grid.resize(static_cast<std::size_t>(n));
    t.density.resize(static_cast<std::size_t>(n));
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        t.grid[static_cast<std::size_t>(i)] = lo + h * i;
        t.density[static_cast<std::size_t>(i)] =
            posterior_point(family, prior, k_obs, t.grid[static_cast<std::size_t>(i)]);
    }
    // Trapezoid normalization and CDF.
    t.cdf.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i < n; ++i)
        t.cdf[static_cast<std::size_t>(i)] =
            t.cdf[static_cast<std::size_t>(i - 1)] +
            0.5 * h * (t.density[static_cast<std::size_t>(i - 1)] +
                       t.density[static_cast<std::size_t>(i)]);
    t.total = t.cdf.back();
    if (t.total > 0.0) {
        double mom = 0.0;
        for (int i = 1; i < n; ++i)
            mom += 0.5 * h *
                   (t.grid[static_cast<std::size_t>(i - 1)] *
                        t.density[static_cast<std::size_t>(i - 1)] +
                    t.grid[static_cast<std::size_t>(i)] * t.density[static_cast<std::size_t>(i)]);
        t.mean = mom / t.total;
        for (auto& d : t.density) d /= t.total;
        for (auto& cum : t.cdf) cum /= t.total;
    }
    return t;
}

double invert_cdf(const Tabulation& t, double q) {
    const auto it = std::lower_bound(t.cdf.begin(), t.cdf.end(), q);
    if (it == t.cdf.begin()) return t.grid.front();
    if (it == t.cdf.end()) return t.grid.back();
    const std::size_t i = static_cast<std::size_t>(it - t.cdf.begin());
    const double c0 = t.cdf[i - 1], c1 = t.cdf[i];
    const double x0 = t.grid[i - 1], x1 = t.grid[i];
    if (c1 == c0) return x1;
    return x0 + (q - c0) / (c1 - c0) * (x1 - x0);
}

}  // namespace

distfam::DiscreteFamily binomial_p_family(int N) {
    distfam::DiscreteFamily fam;
    fam.name = "binomial-p";
    fam.pmf = [N](int n, double p) { return distfam::pmf_binomial(n, N, p); };
    fam.n_max = N;
    fam.truncated = false;
    fam.param_lo = 0.0;
    fam.param_hi = 1.0;
    fam.decay = distfam::DecayKind::Bounded;
    fam.canonical_prior = std::make_shared<distfam::PriorMeasure>(distfam::PriorMeasure{
        "uniform", [](double) { return 1.0; }, 0.0, 1.0});
    return fam;
}

int simulate(const ExperimentConfig& config) {
    std::mt19937_64 rng(config.seed);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cum = 0.0;
    for (int n = 0; n <= config.family.n_max; ++n) {
        cum += config.family.pmf(n, config.true_param);
        if (u <= cum) return n;
    }
    return config.family.n_max;
}

double point_estimate(int k_obs, int N) {
    if (N < 1 || k_obs < 0 || k_obs > N)
        throw OutOfRange("point_estimate requires 0 <= k_obs <= N, N >= 1");
    return static_cast<double>(k_obs) / static_cast<double>(N);
}

PosteriorSummary posterior_summary(const distfam::DiscreteFamily& family,
                                   const distfam::PriorMeasure& prior, int k_obs,
                                   double mass, int grid_size) {
    if (!(mass > 0.0 && mass < 1.0)) throw OutOfRange("interval mass must lie in (0, 1)");
    if (k_obs < 0 || k_obs > family.n_max)
        throw IndexOutOfRange("k_obs outside the family range");
    double lo = std::max(family.param_lo, prior.support_lo);
    double hi = std::min(family.param_hi, prior.support_hi);
    if (std::isinf(hi)) {
        // Generous window around the likelihood bulk; refined below if the
        // posterior turns out to be much narrower.
        hi = lo + k_obs + 20.0 * std::sqrt(k_obs + 1.0) + 20.0;
    }

    Tabulation t = tabulate(family, prior, k_obs, lo, hi, grid_size);
    if (!(t.total > 0.0)) throw ZeroEvidence("posterior normalizer vanished on the grid");

    // Refine when the mode's half-width spans fewer than 8 grid cells.
    const auto mode_it = std::max_element(t.density.begin(), t.density.end());
    const std::size_t mode_i = static_cast<std::size_t>(mode_it - t.density.begin());
    const double half = 0.5 * *mode_it;
    std::size_t left = mode_i, right = mode_i;
    while (left > 0 && t.density[left] > half) --left;
    while (right + 1 < t.density.size() && t.density[right] > half) ++right;
    if (right - left < 8) {
        const double h = t.grid[1] - t.grid[0];
        const double width = std::max((right - left) * h, h);
        const double center = t.grid[mode_i];
        const double new_lo = std::max(lo, center - 12.0 * width);
        const double new_hi = std::min(hi, center + 12.0 * width);
        if (new_hi > new_lo) t = tabulate(family, prior, k_obs, new_lo, new_hi, grid_size);
        if (!(t.total > 0.0)) throw ZeroEvidence("posterior normalizer vanished on the grid");
    }

    PosteriorSummary summary;
    summary.grid = t.grid;
    summary.density = t.density;
    summary.cdf = t.cdf;
    summary.point_estimate = t.mean;
    const double tail = 0.5 * (1.0 - mass);
    summary.interval.lo = invert_cdf(t, tail);
    summary.interval.hi = invert_cdf(t, 1.0 - tail);
    summary.interval.mass = mass;
    return summary;
}

}  // namespace csd::bayeslab
