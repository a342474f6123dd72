#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "csd/cstates.hpp"
#include "csd/distfam.hpp"
#include "csd/roi.hpp"
#include "csd/seqcore.hpp"

namespace csd::matrixcs {

using Complex = std::complex<double>;

// Normal matrix Z = U diag(z_1..z_M) U*, stored only in factored form;
// every operation needed here (powers, kernels, inverse square roots) is
// diagonal in this factorization.
struct NormalMatrixLabel {
    Eigen::MatrixXcd unitary;           // M x M
    std::vector<cstates::CSLabel> diag; // z_i = sqrt(lambda_i) e^{-i theta_i}

    int dim() const { return static_cast<int>(diag.size()); }
    Eigen::MatrixXcd matrix() const;    // reconstructed Z
};

// Multi-component coherent state |Z; i>: column k of `coeffs` is the C^M
// vector N^{-1/2} Z^k chi^i / sqrt(x_k!).
struct VectorCoherentState {
    Eigen::MatrixXcd coeffs;  // M x (n_max + 1)
    int channel = 0;          // i, 0-based
    NormalMatrixLabel label;

    double squared_norm() const { return coeffs.squaredNorm(); }
};

// Finite mixture of a base family at parameters lambda_i with weights w_i.
struct MixtureDistribution {
    std::vector<double> lambdas;
    std::vector<double> weights;  // positive, sum to 1
    distfam::DiscreteFamily base;
};

struct TensorCSLabel {
    std::vector<cstates::CSLabel> labels;
    int dim() const { return static_cast<int>(labels.size()); }
};

// Tensor product of scalar coherent states, kept in factored form; entries
// are evaluated on demand and dense materialization is capped.
struct TensorCoherentState {
    std::vector<cstates::CoherentState> factors;

    Complex entry(const std::vector<int>& ns) const;
    double norm_squared() const;
};

// Haar-distributed unitary from QR of a complex Gaussian matrix with the
// phase correction that makes the distribution exactly invariant.
Eigen::MatrixXcd haar_unitary(int M, std::uint64_t seed);

// Draws a random label: Haar unitary plus user-supplied diagonal labels.
NormalMatrixLabel make_label(const Eigen::MatrixXcd& unitary,
                             const std::vector<cstates::CSLabel>& diag);

// K(A'*, B) = sum_k A'^{*k} B^k / x_k!, summed on the diagonals and
// conjugated by the unitaries.
Eigen::MatrixXcd matrix_kernel(const NormalMatrixLabel& a, const NormalMatrixLabel& b,
                               const seqcore::FactorialSequence& seq,
                               const seqcore::SeriesTruncation& trunc = {});

VectorCoherentState vcs_build(const NormalMatrixLabel& label, int channel,
                              const seqcore::FactorialSequence& seq,
                              const seqcore::SeriesTruncation& trunc = {});

// sum_i w_i P(n, lambda_i).
double mixture_pmf(const MixtureDistribution& mix, int n);

// P(Z, Z*; n): partial trace over the level index of
// sum_i |Z;i><Z;i| (I tensor P_n); equals (1/M) U diag(P(n, lambda_i)) U*.
Eigen::MatrixXcd partial_trace_prob(const NormalMatrixLabel& label, int n,
                                    const seqcore::FactorialSequence& seq,
                                    const seqcore::SeriesTruncation& trunc = {});

struct McOrthogonalityEstimate {
    Eigen::MatrixXcd estimate;
    Eigen::MatrixXd standard_error;  // entrywise SE of the Monte Carlo mean
    int samples = 0;
};

// Monte Carlo over Haar unitaries and uniform angles, with the radial
// integrals done by exact quadrature; estimates
// integral of Z^m Z*^n / sqrt(x_m! x_n!) dOmega = I delta_{mn}.
McOrthogonalityEstimate matrix_orthogonality_mc(int m, int n,
                                                const seqcore::FactorialSequence& seq,
                                                const roi::RadialMeasure& measure, int M,
                                                int samples, std::uint64_t seed,
                                                int radial_nodes = 64);

TensorCoherentState tensor_cs(const TensorCSLabel& labels,
                              const seqcore::FactorialSequence& seq,
                              const seqcore::SeriesTruncation& trunc = {});

// |<phi_{n_1..n_M} | z_1..z_M>|^2 = product of P(n_i, lambda_i).
double joint_prob(const TensorCSLabel& labels, const std::vector<int>& ns,
                  const seqcore::FactorialSequence& seq,
                  const seqcore::SeriesTruncation& trunc = {});

// Dense coefficient tensor in row-major layout over (n_1, ..., n_M);
// refuses to materialize beyond M <= 4, n_max <= 32.
std::vector<Complex> tensor_materialize(const TensorCoherentState& state);

}  // namespace csd::matrixcs
