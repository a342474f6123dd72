#include "csd/matrixcs.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace csd::matrixcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distinct per-sample streams derived from a root seed, so results are
// independent of how samples are partitioned across workers.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Scalar kernel series f(w) = sum_k w^k / x_k! with tail control.
Complex scalar_kernel(Complex w, const seqcore::FactorialSequence& seq,
                      const seqcore::SeriesTruncation& trunc) {
    const int n_top = std::min(trunc.n_max, seq.n_max());
    Complex sum = 0.0, term = 1.0;
    for (int k = 0; k <= n_top; ++k) {
        if (k > 0) term *= w / seq.value(k);
        sum += term;
    }
    if (seq.truncated_infinite()) {
        const double q = std::abs(w) / seq.value(std::min(n_top + 1, seq.n_max()));
        if (q >= 1.0) throw TailNotConverged("matrix kernel series ratio >= 1 at cutoff");
        const double tail = std::abs(term) * q / (1.0 - q);
        if (tail > trunc.tail_tol * std::max(std::abs(sum), 1.0))
            throw TailNotConverged("matrix kernel tail bound exceeds tolerance");
    }
    return sum;
}

void check_domain(const NormalMatrixLabel& label, const seqcore::FactorialSequence& seq) {
    const double L = seq.radius_of_convergence();
    for (const auto& l : label.diag)
        if (l.lambda >= L) throw OutOfDomain("label eigenvalue outside the convergence disc");
}

}  // namespace

Eigen::MatrixXcd NormalMatrixLabel::matrix() const {
    const int M = dim();
    Eigen::VectorXcd d(M);
    for (int i = 0; i < M; ++i) d(i) = diag[static_cast<std::size_t>(i)].z();
    return unitary * d.asDiagonal() * unitary.adjoint();
}

Eigen::MatrixXcd haar_unitary(int M, std::uint64_t seed) {
    if (M < 1) throw OutOfRange("haar_unitary requires M >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd A(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) A(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(M, M);
    Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the residual diagonal-phase gauge so the distribution is Haar.
    for (int j = 0; j < M; ++j) {
        const Complex r = R(j, j);
        const Complex phase = std::abs(r) > 0.0 ? r / std::abs(r) : Complex(1.0, 0.0);
        Q.col(j) *= phase;
    }
    return Q;
}

NormalMatrixLabel make_label(const Eigen::MatrixXcd& unitary,
                             const std::vector<cstates::CSLabel>& diag) {
    if (unitary.rows() != unitary.cols() ||
        unitary.rows() != static_cast<Eigen::Index>(diag.size()))
        throw DimensionMismatch("unitary and diagonal sizes disagree");
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(unitary.rows(), unitary.cols());
    if ((unitary * unitary.adjoint() - I).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("label matrix is not unitary");
    return {unitary, diag};
}

Eigen::MatrixXcd matrix_kernel(const NormalMatrixLabel& a, const NormalMatrixLabel& b,
                               const seqcore::FactorialSequence& seq,
                               const seqcore::SeriesTruncation& trunc) {
    if (a.dim() != b.dim()) throw DimensionMismatch("kernel labels have different dimensions");
    check_domain(a, seq);
    check_domain(b, seq);
    const int M = a.dim();
    // K = Ua (P o F) Ub* with P = Ua* Ub and F_ij the scalar kernel at
    // conj(z_a,i) z_b,j; the series acts entrywise in the factored form.
    const Eigen::MatrixXcd P = a.unitary.adjoint() * b.unitary;
    Eigen::MatrixXcd S(M, M);
    for (int i = 0; i < M; ++i) {
        const Complex zi = std::conj(a.diag[static_cast<std::size_t>(i)].z());
        for (int j = 0; j < M; ++j) {
            const Complex zj = b.diag[static_cast<std::size_t>(j)].z();
            S(i, j) = P(i, j) * scalar_kernel(zi * zj, seq, trunc);
        }
    }
    return a.unitary * S * b.unitary.adjoint();
}

VectorCoherentState vcs_build(const NormalMatrixLabel& label, int channel,
                              const seqcore::FactorialSequence& seq,
                              const seqcore::SeriesTruncation& trunc) {
    const int M = label.dim();
    if (channel < 0 || channel >= M) throw OutOfRange("channel outside 1..M");
    check_domain(label, seq);
    const int n_top = std::min(trunc.n_max, seq.n_max());

    std::vector<double> log_norm(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j)
        log_norm[static_cast<std::size_t>(j)] =
            seqcore::normalization(seq, label.diag[static_cast<std::size_t>(j)].lambda, trunc)
                .log_value;

    VectorCoherentState vcs;
    vcs.channel = channel;
    vcs.label = label;
    vcs.coeffs.resize(M, n_top + 1);
    const Eigen::VectorXcd u_col = label.unitary.adjoint().col(channel);
    for (int k = 0; k <= n_top; ++k) {
        Eigen::VectorXcd d(M);
        for (int j = 0; j < M; ++j) {
            const auto& l = label.diag[static_cast<std::size_t>(j)];
            double mag;
            if (l.lambda == 0.0) {
                mag = k == 0 ? 1.0 : 0.0;
            } else {
                mag = std::exp(0.5 * (k * std::log(l.lambda) - seq.log_factorial(k) -
                                      log_norm[static_cast<std::size_t>(j)]));
            }
            const double phase = -k * l.theta;
            d(j) = mag / std::sqrt(static_cast<double>(M)) *
                   Complex(std::cos(phase), std::sin(phase));
        }
        vcs.coeffs.col(k) = label.unitary * d.cwiseProduct(u_col);
    }
    return vcs;
}

double mixture_pmf(const MixtureDistribution& mix, int n) {
    if (mix.lambdas.size() != mix.weights.size())
        throw DimensionMismatch("mixture weights and parameters disagree in length");
    double wsum = 0.0;
    for (double w : mix.weights) {
        if (!(w >= 0.0)) throw OutOfRange("mixture weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw OutOfRange("mixture weights must sum to 1");
    double p = 0.0;
    for (std::size_t i = 0; i < mix.lambdas.size(); ++i)
        p += mix.weights[i] * mix.base.pmf(n, mix.lambdas[i]);
    return p;
}

Eigen::MatrixXcd partial_trace_prob(const NormalMatrixLabel& label, int n,
                                    const seqcore::FactorialSequence& seq,
                                    const seqcore::SeriesTruncation& trunc) {
    const int M = label.dim();
    if (n < 0 || n > std::min(trunc.n_max, seq.n_max()))
        throw IndexOutOfRange("level index outside range");
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(M, M);
    for (int i = 0; i < M; ++i) {
        const VectorCoherentState vcs = vcs_build(label, i, seq, trunc);
        const Eigen::VectorXcd col = vcs.coeffs.col(n);
        P += col * col.adjoint();
    }
    return P;
}

McOrthogonalityEstimate matrix_orthogonality_mc(int m, int n,
                                                const seqcore::FactorialSequence& seq,
                                                const roi::RadialMeasure& measure, int M,
                                                int samples, std::uint64_t seed,
                                                int radial_nodes) {
    if (samples < 1) throw OutOfRange("matrix_orthogonality_mc requires samples >= 1");
    // Radial part is exact: rho = 2pi int lambda^{(m+n)/2} d rho-bar, divided
    // by sqrt(x_m! x_n!).  Monte Carlo covers the unitary and the angles.
    const roi::QuadratureRule rule = roi::radial_rule(measure, radial_nodes);
    const double half_power = 0.5 * (m + n);
    const double rho = kTwoPi * rule.integrate([&measure, half_power](double lambda) {
        return std::pow(lambda, half_power) * measure.density(lambda);
    });
    const double scale =
        rho * std::exp(-0.5 * (seq.log_factorial(m) + seq.log_factorial(n)));

    auto draw_sample = [&](int s) {
        std::mt19937_64 rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (s + 1)));
        std::uniform_real_distribution<double> uni(0.0, kTwoPi);
        const Eigen::MatrixXcd U = haar_unitary(M, rng());
        Eigen::VectorXcd d(M);
        for (int i = 0; i < M; ++i) {
            const double phase = -(m - n) * uni(rng);
            d(i) = scale * Complex(std::cos(phase), std::sin(phase));
        }
        return Eigen::MatrixXcd(U * d.asDiagonal() * U.adjoint());
    };

    // Two passes over the same deterministic sample stream: mean first,
    // then the spread about it.
    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(M, M);
    for (int s = 0; s < samples; ++s) mean += draw_sample(s);
    mean /= samples;
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(M, M);
    for (int s = 0; s < samples; ++s) m2 += (draw_sample(s) - mean).cwiseAbs2();
    McOrthogonalityEstimate est;
    est.estimate = mean;
    est.samples = samples;
    est.standard_error = (m2 / (samples > 1 ? samples - 1 : 1) / samples).cwiseSqrt();
    return est;
}

TensorCoherentState tensor_cs(const TensorCSLabel& labels,
                              const seqcore::FactorialSequence& seq,
                              const seqcore::SeriesTruncation& trunc) {
    TensorCoherentState state;
    for (const auto& l : labels.labels)
        state.factors.push_back(cstates::cs_nonlinear(seq, l, trunc));
    return state;
}

Complex TensorCoherentState::entry(const std::vector<int>& ns) const {
    if (ns.size() != factors.size())
        throw DimensionMismatch("index tuple length does not match tensor order");
    Complex prod = 1.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const int n = ns[i];
        if (n < 0 || n >= factors[i].size())
            throw IndexOutOfRange("tensor index outside the basis range");
        prod *= factors[i].coeffs[static_cast<std::size_t>(n)];
    }
    return prod;
}

double TensorCoherentState::norm_squared() const {
    double prod = 1.0;
    for (const auto& f : factors) {
        double s = 0.0;
        for (const auto& c : f.coeffs) s += std::norm(c);
        prod *= s;
    }
    return prod;
}

double joint_prob(const TensorCSLabel& labels, const std::vector<int>& ns,
                  const seqcore::FactorialSequence& seq,
                  const seqcore::SeriesTruncation& trunc) {
    const TensorCoherentState state = tensor_cs(labels, seq, trunc);
    return std::norm(state.entry(ns));
}

std::vector<Complex> tensor_materialize(const TensorCoherentState& state) {
    const int M = static_cast<int>(state.factors.size());
    if (M > 4) throw SizeLimit("tensor materialization capped at M <= 4");
    std::size_t total = 1;
    for (const auto& f : state.factors) {
        if (f.size() > 33) throw SizeLimit("tensor materialization capped at n_max <= 32");
        total *= static_cast<std::size_t>(f.size());
    }
    std::vector<Complex> out(total);
    std::vector<int> idx(static_cast<std::size_t>(M), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        out[flat] = state.entry(idx);
        for (int d = M - 1; d >= 0; --d) {
            if (++idx[static_cast<std::size_t>(d)] < state.factors[static_cast<std::size_t>(d)].size())
                break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
    }
    return out;
}

}  // namespace csd::matrixcs
