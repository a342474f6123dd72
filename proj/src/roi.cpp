#include "csd/roi.hpp"

#include <cmath>
#include <numbers>

namespace csd::roi {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

RadialMeasure poisson_measure() {
    return {"poisson",
            [](double lambda) { return std::exp(-lambda) / kTwoPi; },
            std::numeric_limits<double>::infinity(), distfam::DecayKind::Exponential};
}

RadialMeasure su2_measure(int N) {
    return {"su2",
            [N](double lambda) {
                return (N + 1.0) * std::exp(-(N + 2.0) * std::log1p(lambda)) / kTwoPi;
            },
            std::numeric_limits<double>::infinity(), distfam::DecayKind::Rational};
}

RadialMeasure su11_measure(int m) {
    return {"su11",
            [m](double v) {
                if (v < 0.0 || v > 1.0) return 0.0;
                return (m + 1.0) * std::pow(1.0 - v, m) / kTwoPi;
            },
            1.0, distfam::DecayKind::Bounded};
}

QuadratureRule radial_rule(const RadialMeasure& measure, int n) {
    if (std::isfinite(measure.support_hi))
        return gauss_legendre(0.0, measure.support_hi, n);
    if (measure.decay == distfam::DecayKind::Exponential) return gauss_laguerre_folded(n);
    return gauss_legendre_mapped_semi_infinite(n);
}

MomentReport moment_check(const seqcore::FactorialSequence& seq, const RadialMeasure& measure,
                          int k_max, int nodes) {
    if (k_max > seq.n_max())
        throw IndexOutOfRange("k_max exceeds the stored sequence range");
    const QuadratureRule rule = radial_rule(measure, nodes);
    MomentReport report;
    for (int k = 0; k <= k_max; ++k) {
        const double lhs = std::exp(seq.log_factorial(k)) / kTwoPi;
        const double rhs = rule.integrate([&measure, k](double lambda) {
            return (k == 0 ? 1.0 : std::pow(lambda, k)) * measure.density(lambda);
        });
        if (!std::isfinite(rhs)) throw DivergentIntegral("moment integral diverged");
        report.k.push_back(k);
        report.lhs.push_back(lhs);
        report.rhs.push_back(rhs);
        const double res = std::abs(rhs - lhs) / lhs;
        report.residuals.push_back(res);
        report.max_residual = std::max(report.max_residual, res);
    }
    return report;
}

namespace {

// Quadrature rule over the family's parameter interval, matched to its decay.
QuadratureRule family_rule(const distfam::DiscreteFamily& family,
                           const distfam::PriorMeasure& prior, int nodes) {
    const double lo = std::max(family.param_lo, prior.support_lo);
    const double hi = std::min(family.param_hi, prior.support_hi);
    if (std::isfinite(hi)) return gauss_legendre(lo, hi, nodes);
    if (family.decay == distfam::DecayKind::Exponential) return gauss_laguerre_folded(nodes);
    return gauss_legendre_mapped_semi_infinite(nodes);
}

}  // namespace

Eigen::MatrixXd gram_matrix(const distfam::DiscreteFamily& family,
                            const distfam::PriorMeasure& prior, int size, int nodes) {
    if (size < 1 || size > family.n_max + 1)
        throw IndexOutOfRange("gram size outside the family range");
    std::vector<double> c(static_cast<std::size_t>(size));
    for (int n = 0; n < size; ++n)
        c[static_cast<std::size_t>(n)] = distfam::compute_cn(family, prior, n);
    const QuadratureRule rule = family_rule(family, prior, nodes);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(size, size);
    // Off-diagonal entries vanish by the exact phase integral
    // (1/2pi) int e^{i(m-n)theta} d theta; only the radial part remains.
    for (int n = 0; n < size; ++n) {
        G(n, n) = rule.integrate([&family, &prior, n, &c](double lambda) {
            return family.pmf(n, lambda) * prior.density(lambda) /
                   c[static_cast<std::size_t>(n)];
        });
    }
    return G;
}

RoiDirectReport roi_check_direct(const distfam::DiscreteFamily& family,
                                 const distfam::PriorMeasure& prior, int size,
                                 int radial_nodes, int angular_nodes) {
    if (size < 1 || size > family.n_max + 1)
        throw IndexOutOfRange("roi size outside the family range");
    std::vector<double> c(static_cast<std::size_t>(size));
    for (int n = 0; n < size; ++n)
        c[static_cast<std::size_t>(n)] = distfam::compute_cn(family, prior, n);
    const QuadratureRule radial = family_rule(family, prior, radial_nodes);
    const QuadratureRule angular = trapezoid_angular(angular_nodes);

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(size, size);
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double lambda = radial.nodes[i];
        // a_n = (P(n, lambda)/c_n)^{1/2}; the N(lambda) factors of the two
        // coherent-state coefficients cancel against the N(lambda) weight.
        Eigen::VectorXd a(size);
        for (int n = 0; n < size; ++n)
            a(n) = std::sqrt(family.pmf(n, lambda) / c[static_cast<std::size_t>(n)]);
        const double w_r = radial.weights[i] * prior.density(lambda);
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
            const double theta = angular.nodes[j];
            const double w = w_r * angular.weights[j] / kTwoPi;
            for (int m = 0; m < size; ++m) {
                for (int n = 0; n < size; ++n) {
                    const double phase = -(m - n) * theta;
                    M(m, n) += w * a(m) * a(n) *
                               std::complex<double>(std::cos(phase), std::sin(phase));
                }
            }
        }
    }
    RoiDirectReport report;
    report.matrix = M;
    report.residual =
        (M - Eigen::MatrixXcd::Identity(size, size)).cwiseAbs().maxCoeff();
    return report;
}

double psi_normalization_check(const distfam::ContinuousFamily& psi, int n, int nodes) {
    if (n < 0 || n > psi.n_max) throw IndexOutOfRange("index outside the dual family range");
    QuadratureRule rule;
    if (std::isfinite(psi.support_hi)) {
        rule = gauss_legendre(psi.support_lo, psi.support_hi, nodes);
    } else if (psi.decay == distfam::DecayKind::Exponential) {
        rule = gauss_laguerre_folded(nodes);
    } else {
        rule = gauss_legendre_mapped_semi_infinite(nodes);
    }
    const double value = rule.integrate([&psi, n](double lambda) { return psi.pdf(n, lambda); });
    if (!std::isfinite(value)) throw DivergentIntegral("Psi_n normalization integral diverged");
    return std::abs(value - 1.0);
}

}  // namespace csd::roi
