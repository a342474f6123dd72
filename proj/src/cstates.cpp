#include "csd/cstates.hpp"

#include <cmath>
#include <numbers>

#include "csd/roi.hpp"

namespace csd::cstates {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CSLabel::CSLabel(double lambda_, double theta_) : lambda(lambda_), theta(theta_) {
    if (lambda < 0.0) throw OutOfDomain("CS label requires lambda >= 0");
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
}

CSLabel CSLabel::from_z(Complex z) {
    return CSLabel(std::norm(z), -std::arg(z));
}

Complex CSLabel::z() const {
    return std::sqrt(lambda) * Complex(std::cos(theta), -std::sin(theta));
}

CoherentState cs_nonlinear(const seqcore::FactorialSequence& seq, const CSLabel& label,
                           const seqcore::SeriesTruncation& trunc) {
    const auto norm = seqcore::normalization(seq, label.lambda, trunc);
    const int n_top = std::min(trunc.n_max, seq.n_max());
    CoherentState cs;
    cs.label = label;
    cs.norm_factor = norm.value;
    cs.coeffs.resize(static_cast<std::size_t>(n_top) + 1);
    const double log_lambda = label.lambda > 0.0 ? std::log(label.lambda) : 0.0;
    for (int k = 0; k <= n_top; ++k) {
        double mag;
        if (label.lambda == 0.0) {
            mag = k == 0 ? 1.0 : 0.0;
        } else {
            mag = std::exp(0.5 * (k * log_lambda - seq.log_factorial(k) - norm.log_value));
        }
        const double phase = -k * label.theta;
        cs.coeffs[static_cast<std::size_t>(k)] =
            mag * Complex(std::cos(phase), std::sin(phase));
    }
    return cs;
}

CoherentState cs_from_discrete(const distfam::DiscreteFamily& family,
                               const distfam::DualityCertificate& cert,
                               const CSLabel& label) {
    if (!cert.pass) throw CertificateFailed("duality certificate did not pass");
    if (!(label.lambda > family.param_lo && label.lambda < family.param_hi))
        throw OutOfDomain("label outside the open parameter interval");
    const int n_top = std::min(family.n_max, static_cast<int>(cert.c.size()) - 1);
    std::vector<double> p(static_cast<std::size_t>(n_top) + 1);
    double norm = 0.0;
    for (int n = 0; n <= n_top; ++n) {
        p[static_cast<std::size_t>(n)] =
            family.pmf(n, label.lambda) / cert.c[static_cast<std::size_t>(n)];
        norm += p[static_cast<std::size_t>(n)];
    }
    CoherentState cs;
    cs.label = label;
    cs.norm_factor = norm;
    cs.coeffs.resize(static_cast<std::size_t>(n_top) + 1);
    for (int n = 0; n <= n_top; ++n) {
        const double mag = std::sqrt(p[static_cast<std::size_t>(n)] / norm);
        const double phase = -n * label.theta;
        cs.coeffs[static_cast<std::size_t>(n)] =
            mag * Complex(std::cos(phase), std::sin(phase));
    }
    return cs;
}

CoherentState cs_from_continuous(const distfam::ContinuousFamily& psi, double lambda,
                                 double theta) {
    const CSLabel label(lambda, theta);
    const int n_top = psi.n_max;
    std::vector<double> vals(static_cast<std::size_t>(n_top) + 1);
    double norm = 0.0;  // N-tilde(lambda) times 2pi
    for (int n = 0; n <= n_top; ++n) {
        vals[static_cast<std::size_t>(n)] = psi.pdf(n, lambda);
        if (!std::isfinite(vals[static_cast<std::size_t>(n)]))
            throw DivergentNormalizer("Psi_n diverges at the label");
        norm += vals[static_cast<std::size_t>(n)];
    }
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw DivergentNormalizer("N-tilde is not positive and finite");
    CoherentState cs;
    cs.label = label;
    cs.norm_factor = norm / kTwoPi;
    cs.coeffs.resize(static_cast<std::size_t>(n_top) + 1);
    for (int n = 0; n <= n_top; ++n) {
        const double mag = std::sqrt(vals[static_cast<std::size_t>(n)] / norm);
        const double phase = -n * label.theta;
        cs.coeffs[static_cast<std::size_t>(n)] =
            mag * Complex(std::cos(phase), std::sin(phase));
    }
    return cs;
}

Complex kernel_eval(const KernelEvaluator& ke, const CSLabel& x, const CSLabel& y) {
    const auto& seq = *ke.sequence;
    const Complex w = x.z() * std::conj(y.z());
    const double r = std::abs(w);
    const double L = seq.radius_of_convergence();
    if (r >= L) throw OutOfDomain("kernel argument outside the convergence disc");
    const int n_top = std::min(ke.trunc.n_max, seq.n_max());
    Complex sum = 0.0;
    Complex term = 1.0;
    double last_mag = 1.0;
    for (int k = 0; k <= n_top; ++k) {
        if (k > 0) term *= w / seq.value(k);
        sum += term;
        last_mag = std::abs(term);
    }
    if (seq.truncated_infinite()) {
        const double q = r / seq.value(std::min(n_top + 1, seq.n_max()));
        if (q >= 1.0) throw TailNotConverged("kernel series ratio >= 1 at the cutoff");
        const double tail = last_mag * q / (1.0 - q);
        if (tail > ke.trunc.tail_tol * std::max(std::abs(sum), 1.0))
            throw TailNotConverged("kernel tail bound exceeds tolerance");
    }
    return sum;
}

double kernel_reproducing_check(const KernelEvaluator& ke, const roi::RadialMeasure& measure,
                                const CSLabel& x, const CSLabel& y,
                                int radial_nodes, int angular_nodes) {
    const auto radial = roi::radial_rule(measure, radial_nodes);
    const auto angular = roi::trapezoid_angular(angular_nodes);
    const Complex target = kernel_eval(ke, x, y);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double lambda = radial.nodes[i];
        const double w_r = radial.weights[i] * measure.density(lambda);
        if (w_r == 0.0) continue;
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
            const CSLabel mid(lambda, angular.nodes[j]);
            acc += w_r * angular.weights[j] * kernel_eval(ke, x, mid) *
                   kernel_eval(ke, mid, y);
        }
    }
    return std::abs(acc - target);
}

Complex overlap(const CoherentState& a, const CoherentState& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("overlap requires equal basis lengths");
    Complex sum = 0.0;
    for (int n = 0; n < a.size(); ++n)
        sum += std::conj(a.coeffs[static_cast<std::size_t>(n)]) *
               b.coeffs[static_cast<std::size_t>(n)];
    return sum;
}

double prob_extract(const CoherentState& cs, int n) {
    if (n < 0 || n >= cs.size()) throw IndexOutOfRange("prob_extract index outside range");
    return std::norm(cs.coeffs[static_cast<std::size_t>(n)]);
}

}  // namespace csd::cstates
