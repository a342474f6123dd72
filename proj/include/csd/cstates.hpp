#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "csd/distfam.hpp"
#include "csd/errors.hpp"
#include "csd/seqcore.hpp"

namespace csd::roi {
struct RadialMeasure;
}

namespace csd::cstates {

using Complex = std::complex<double>;

// Point of the annular label domain, z = sqrt(lambda) e^{-i theta}.
struct CSLabel {
    double lambda = 0.0;
    double theta = 0.0;  // normalized into [0, 2pi)

    CSLabel() = default;
    CSLabel(double lambda_, double theta_);
    static CSLabel from_z(Complex z);

    Complex z() const;
};

// Normalized coefficient vector over the orthonormal basis, labeled by z.
struct CoherentState {
    std::vector<Complex> coeffs;  // index n = 0..n_max
    CSLabel label;
    double norm_factor = 1.0;  // the N(lambda) or N-tilde used

    int size() const { return static_cast<int>(coeffs.size()); }
};

// Reproducing-kernel evaluator over the monomial basis
// Phi_k(z) = z^k / sqrt(x_k!), so K(x, y) = sum_k x^k conj(y)^k / x_k!.
struct KernelEvaluator {
    std::shared_ptr<const seqcore::FactorialSequence> sequence;
    seqcore::SeriesTruncation trunc;
};

// |z> with coefficients N(lambda)^{-1/2} z^k / sqrt(x_k!).
CoherentState cs_nonlinear(const seqcore::FactorialSequence& seq, const CSLabel& label,
                           const seqcore::SeriesTruncation& trunc = {});

// |z> with coefficients N^{-1/2} (P(n, lambda)/c_n)^{1/2} e^{-in theta},
// N(lambda) = sum_n P(n, lambda)/c_n.  Requires a passing certificate.
CoherentState cs_from_discrete(const distfam::DiscreteFamily& family,
                               const distfam::DualityCertificate& cert,
                               const CSLabel& label);

// |lambda, theta> built from a set of continuous densities Psi_n; the
// coefficient phase follows the same e^{-in theta} convention as the other
// two constructions, so all three routes agree without relabeling theta.
CoherentState cs_from_continuous(const distfam::ContinuousFamily& psi, double lambda,
                                 double theta);

// K(x, y), truncated with the usual tail policy.
Complex kernel_eval(const KernelEvaluator& ke, const CSLabel& x, const CSLabel& y);

// |integral of K(x,z) K(z,y) dmu(z) - K(x,y)| via radial quadrature times an
// angular trapezoid rule; dmu = d rho-bar (lambda) d theta.
double kernel_reproducing_check(const KernelEvaluator& ke, const roi::RadialMeasure& measure,
                                const CSLabel& x, const CSLabel& y,
                                int radial_nodes = 64, int angular_nodes = 128);

// sum_n conj(a_n) b_n.
Complex overlap(const CoherentState& a, const CoherentState& b);

// |coeffs_n|^2, the pmf value at (n, lambda).
double prob_extract(const CoherentState& cs, int n);

}  // namespace csd::cstates
