#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "csd/distfam.hpp"
#include "csd/quadrature.hpp"
#include "csd/seqcore.hpp"

namespace csd::roi {

// Radial measure d rho-bar on [0, L_bound], given by its density with
// respect to Lebesgue measure.  The decay hint picks the radial quadrature.
struct RadialMeasure {
    std::string name;
    std::function<double(double)> density;
    double support_hi = std::numeric_limits<double>::infinity();
    distfam::DecayKind decay = distfam::DecayKind::Exponential;
};

// d rho-bar = e^{-lambda} d lambda / 2pi; moments k! / 2pi.
RadialMeasure poisson_measure();
// d rho-bar = (N+1) / (2pi (1+lambda)^{N+2}) d lambda on [0, inf).
RadialMeasure su2_measure(int N);
// d rho-bar = (m+1)(1-v)^m / 2pi dv on [0, 1], v the series variable.
RadialMeasure su11_measure(int m);

struct MomentReport {
    std::vector<int> k;
    std::vector<double> lhs;        // x_k! / 2pi
    std::vector<double> rhs;        // integral of lambda^k d rho-bar
    std::vector<double> residuals;  // relative
    double max_residual = 0.0;
};

// Plain integration rule matched to the measure's support and decay; the
// caller multiplies the integrand by the measure density.
QuadratureRule radial_rule(const RadialMeasure& measure, int n);

// Checks x_k!/2pi = integral lambda^k d rho-bar for k = 0..k_max.
MomentReport moment_check(const seqcore::FactorialSequence& seq, const RadialMeasure& measure,
                          int k_max, int nodes = 64);

// Gram matrix of the basis functions Phi_n; the theta integral is done
// analytically (2pi delta_{mn}), leaving the radial integral of Psi_n.
Eigen::MatrixXd gram_matrix(const distfam::DiscreteFamily& family,
                            const distfam::PriorMeasure& prior, int size, int nodes = 64);

struct RoiDirectReport {
    Eigen::MatrixXcd matrix;
    double residual = 0.0;  // max |M - I|
};

// Assembles M_{mn} = (1/2pi) double-integral of <Phi_m|z><z|Phi_n> N(lambda)
// d kappa d theta by full 2D quadrature, with no analytic shortcut.
RoiDirectReport roi_check_direct(const distfam::DiscreteFamily& family,
                                 const distfam::PriorMeasure& prior, int size,
                                 int radial_nodes = 64, int angular_nodes = 128);

// |integral of Psi_n - 1|.
double psi_normalization_check(const distfam::ContinuousFamily& psi, int n, int nodes = 64);

}  // namespace csd::roi
