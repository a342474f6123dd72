// Python bindings for the coherent-state duality library.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "csd/bayeslab.hpp"
#include "csd/cstates.hpp"
#include "csd/distfam.hpp"
#include "csd/matrixcs.hpp"
#include "csd/roi.hpp"
#include "csd/seqcore.hpp"

namespace py = pybind11;
using namespace csd;

namespace {

std::shared_ptr<const seqcore::FactorialSequence> share(
    const seqcore::FactorialSequence& seq) {
    return std::make_shared<seqcore::FactorialSequence>(seq);
}

const distfam::PriorMeasure& canonical_prior(const distfam::DiscreteFamily& fam) {
    if (!fam.canonical_prior)
        throw Error("family has no canonical prior");
    return *fam.canonical_prior;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "coherent-state duality library";

    py::register_exception<Error>(m, "CsdError");

    // ----------------------------------------------------------- seqcore ---
    py::class_<seqcore::SeriesTruncation>(m, "SeriesTruncation")
        .def(py::init<>())
        .def_readwrite("n_max", &seqcore::SeriesTruncation::n_max)
        .def_readwrite("tail_tol", &seqcore::SeriesTruncation::tail_tol);

    py::class_<seqcore::FactorialSequence>(m, "FactorialSequence")
        .def(py::init<std::vector<double>, bool>(), py::arg("values"),
             py::arg("truncated_infinite") = false)
        .def_static("poisson", &seqcore::FactorialSequence::poisson, py::arg("n_max"))
        .def_static("su2", &seqcore::FactorialSequence::su2, py::arg("N"))
        .def_static("su11", &seqcore::FactorialSequence::su11, py::arg("m"),
                    py::arg("n_max"))
        .def_property_readonly("n_max", &seqcore::FactorialSequence::n_max)
        .def_property_readonly("truncated_infinite",
                               &seqcore::FactorialSequence::truncated_infinite)
        .def("value", &seqcore::FactorialSequence::value, py::arg("n"))
        .def("log_factorial", &seqcore::FactorialSequence::log_factorial, py::arg("n"))
        .def("radius_of_convergence",
             [](const seqcore::FactorialSequence& s) {
                 bool estimated = false;
                 const double L = s.radius_of_convergence(&estimated);
                 return py::make_tuple(L, estimated);
             });

    py::class_<seqcore::NormalizationValue>(m, "NormalizationValue")
        .def_readonly("value", &seqcore::NormalizationValue::value)
        .def_readonly("log_value", &seqcore::NormalizationValue::log_value)
        .def_readonly("terms_used", &seqcore::NormalizationValue::terms_used);

    m.def(
        "normalization",
        [](const seqcore::FactorialSequence& seq, double lambda) {
            return seqcore::normalization(seq, lambda, {});
        },
        py::arg("sequence"), py::arg("lam"));
    m.def("generalized_log_factorial", &seqcore::generalized_log_factorial,
          py::arg("sequence"), py::arg("n"));

    // ----------------------------------------------------------- distfam ---
    m.def("pmf_poisson", &distfam::pmf_poisson, py::arg("n"), py::arg("lam"));
    m.def("pmf_binomial", &distfam::pmf_binomial, py::arg("n"), py::arg("N"),
          py::arg("p"));
    m.def("pmf_negbinomial", &distfam::pmf_negbinomial, py::arg("m"), py::arg("n"),
          py::arg("lam"));
    m.def("pdf_gamma", &distfam::pdf_gamma, py::arg("n"), py::arg("lam"));
    m.def("pdf_beta", &distfam::pdf_beta, py::arg("lam"), py::arg("m"), py::arg("n"));
    m.def("pdf_beta_first_kind", &distfam::pdf_beta_first_kind, py::arg("lam"),
          py::arg("n"), py::arg("N"));
    m.def("reparam_binomial_lambda", &distfam::reparam_binomial_lambda, py::arg("p"));
    m.def("reparam_binomial_p", &distfam::reparam_binomial_p, py::arg("lam"));

    py::class_<distfam::DiscreteFamily>(m, "DiscreteFamily")
        .def_readonly("name", &distfam::DiscreteFamily::name)
        .def_readonly("n_max", &distfam::DiscreteFamily::n_max)
        .def_readonly("param_lo", &distfam::DiscreteFamily::param_lo)
        .def_readonly("param_hi", &distfam::DiscreteFamily::param_hi)
        .def("pmf", [](const distfam::DiscreteFamily& f, int n, double lam) {
            return f.pmf(n, lam);
        });

    py::class_<distfam::ContinuousFamily>(m, "ContinuousFamily")
        .def_readonly("name", &distfam::ContinuousFamily::name)
        .def_readonly("n_max", &distfam::ContinuousFamily::n_max)
        .def("pdf", [](const distfam::ContinuousFamily& f, int n, double lam) {
            return f.pdf(n, lam);
        });

    py::class_<distfam::DualityCertificate>(m, "DualityCertificate")
        .def_readonly("c", &distfam::DualityCertificate::c)
        .def_readonly("lambda_grid", &distfam::DualityCertificate::lambda_grid)
        .def_readonly("convergence_value",
                      &distfam::DualityCertificate::convergence_value)
        .def_readonly("passed", &distfam::DualityCertificate::pass);

    m.def("poisson_family", &distfam::poisson_family, py::arg("n_trunc") = 256);
    m.def("binomial_family", &distfam::binomial_family, py::arg("N"));
    m.def("negbinomial_family", &distfam::negbinomial_family, py::arg("m"),
          py::arg("n_trunc") = 256);
    m.def("poisson_dual", &distfam::poisson_dual, py::arg("n_trunc") = 256);
    m.def("binomial_dual", &distfam::binomial_dual, py::arg("N"));
    m.def("negbinomial_dual", &distfam::negbinomial_dual, py::arg("m"),
          py::arg("n_trunc") = 256);
    m.def(
        "from_nonlinear",
        [](const seqcore::FactorialSequence& seq, int n_max, double tail_tol) {
            return distfam::from_nonlinear(share(seq), {n_max, tail_tol});
        },
        py::arg("sequence"), py::arg("n_max") = 256, py::arg("tail_tol") = 1e-12);
    m.def(
        "compute_cn",
        [](const distfam::DiscreteFamily& fam, int n, double rel_tol) {
            return distfam::compute_cn(fam, canonical_prior(fam), n, rel_tol);
        },
        py::arg("family"), py::arg("n"), py::arg("rel_tol") = 1e-9,
        "c_n against the family's canonical prior");
    m.def(
        "check_convergence",
        [](const distfam::DiscreteFamily& fam, const std::vector<double>& c,
           const std::vector<double>& grid) {
            return distfam::check_convergence(fam, c, grid);
        },
        py::arg("family"), py::arg("c"), py::arg("lambda_grid"));
    m.def(
        "posterior_density",
        [](const distfam::DiscreteFamily& fam, int n_obs) {
            return distfam::posterior_density(fam, canonical_prior(fam), n_obs);
        },
        py::arg("family"), py::arg("n_obs"),
        "posterior against the family's canonical prior");
    m.def("expectation_Y", &distfam::expectation_Y, py::arg("family"), py::arg("lam"));
    m.def("expectation_Lambda", &distfam::expectation_Lambda, py::arg("psi"),
          py::arg("n"));

    // ----------------------------------------------------------- cstates ---
    py::class_<cstates::CSLabel>(m, "CSLabel")
        .def(py::init<double, double>(), py::arg("lam"), py::arg("theta") = 0.0)
        .def_readonly("lam", &cstates::CSLabel::lambda)
        .def_readonly("theta", &cstates::CSLabel::theta)
        .def_static("from_z", &cstates::CSLabel::from_z, py::arg("z"))
        .def("z", &cstates::CSLabel::z);

    py::class_<cstates::CoherentState>(m, "CoherentState")
        .def_readonly("coeffs", &cstates::CoherentState::coeffs)
        .def_readonly("label", &cstates::CoherentState::label)
        .def_readonly("norm_factor", &cstates::CoherentState::norm_factor)
        .def_property_readonly("size", &cstates::CoherentState::size);

    m.def(
        "cs_nonlinear",
        [](const seqcore::FactorialSequence& seq, const cstates::CSLabel& label) {
            return cstates::cs_nonlinear(seq, label);
        },
        py::arg("sequence"), py::arg("label"));
    m.def("cs_from_discrete", &cstates::cs_from_discrete, py::arg("family"),
          py::arg("certificate"), py::arg("label"));
    m.def("cs_from_continuous", &cstates::cs_from_continuous, py::arg("psi"),
          py::arg("lam"), py::arg("theta"));
    m.def("overlap", &cstates::overlap, py::arg("a"), py::arg("b"));
    m.def("prob_extract", &cstates::prob_extract, py::arg("state"), py::arg("n"));

    py::class_<cstates::KernelEvaluator>(m, "KernelEvaluator")
        .def(py::init([](const seqcore::FactorialSequence& seq, int n_max,
                         double tail_tol) {
                 return cstates::KernelEvaluator{share(seq), {n_max, tail_tol}};
             }),
             py::arg("sequence"), py::arg("n_max") = 256, py::arg("tail_tol") = 1e-12);
    m.def("kernel_eval", &cstates::kernel_eval, py::arg("evaluator"), py::arg("x"),
          py::arg("y"));
    m.def("kernel_reproducing_check", &cstates::kernel_reproducing_check,
          py::arg("evaluator"), py::arg("measure"), py::arg("x"), py::arg("y"),
          py::arg("radial_nodes") = 64, py::arg("angular_nodes") = 128);

    // --------------------------------------------------------------- roi ---
    py::class_<roi::RadialMeasure>(m, "RadialMeasure")
        .def_readonly("name", &roi::RadialMeasure::name)
        .def_readonly("support_hi", &roi::RadialMeasure::support_hi)
        .def("density", [](const roi::RadialMeasure& rm, double lam) {
            return rm.density(lam);
        });

    m.def("poisson_measure", &roi::poisson_measure);
    m.def("su2_measure", &roi::su2_measure, py::arg("N"));
    m.def("su11_measure", &roi::su11_measure, py::arg("m"));

    py::class_<roi::MomentReport>(m, "MomentReport")
        .def_readonly("k", &roi::MomentReport::k)
        .def_readonly("lhs", &roi::MomentReport::lhs)
        .def_readonly("rhs", &roi::MomentReport::rhs)
        .def_readonly("residuals", &roi::MomentReport::residuals)
        .def_readonly("max_residual", &roi::MomentReport::max_residual);

    m.def("moment_check", &roi::moment_check, py::arg("sequence"), py::arg("measure"),
          py::arg("k_max"), py::arg("nodes") = 64);
    m.def(
        "gram_matrix",
        [](const distfam::DiscreteFamily& fam, int size, int nodes) {
            return roi::gram_matrix(fam, canonical_prior(fam), size, nodes);
        },
        py::arg("family"), py::arg("size"), py::arg("nodes") = 64,
        "Gram matrix against the family's canonical prior");
    m.def(
        "roi_check_direct",
        [](const distfam::DiscreteFamily& fam, int size, int radial, int angular) {
            const auto r = roi::roi_check_direct(fam, canonical_prior(fam), size,
                                                 radial, angular);
            return py::make_tuple(r.matrix, r.residual);
        },
        py::arg("family"), py::arg("size"), py::arg("radial_nodes") = 64,
        py::arg("angular_nodes") = 128);
    m.def("psi_normalization_check", &roi::psi_normalization_check, py::arg("psi"),
          py::arg("n"), py::arg("nodes") = 64);

    // ---------------------------------------------------------- matrixcs ---
    py::class_<matrixcs::NormalMatrixLabel>(m, "NormalMatrixLabel")
        .def_property_readonly("dim", &matrixcs::NormalMatrixLabel::dim)
        .def_readonly("unitary", &matrixcs::NormalMatrixLabel::unitary)
        .def("matrix", &matrixcs::NormalMatrixLabel::matrix);

    py::class_<matrixcs::VectorCoherentState>(m, "VectorCoherentState")
        .def_readonly("coeffs", &matrixcs::VectorCoherentState::coeffs)
        .def_readonly("channel", &matrixcs::VectorCoherentState::channel)
        .def("squared_norm", &matrixcs::VectorCoherentState::squared_norm);

    m.def("haar_unitary", &matrixcs::haar_unitary, py::arg("M"), py::arg("seed"));
    m.def(
        "make_label",
        [](const Eigen::MatrixXcd& U, const std::vector<double>& lambdas,
           const std::vector<double>& thetas) {
            if (lambdas.size() != thetas.size())
                throw DimensionMismatch("lambdas and thetas must have equal length");
            std::vector<cstates::CSLabel> diag;
            for (std::size_t i = 0; i < lambdas.size(); ++i)
                diag.emplace_back(lambdas[i], thetas[i]);
            return matrixcs::make_label(U, diag);
        },
        py::arg("unitary"), py::arg("lambdas"), py::arg("thetas"));
    m.def(
        "vcs_build",
        [](const matrixcs::NormalMatrixLabel& label, int channel,
           const seqcore::FactorialSequence& seq) {
            return matrixcs::vcs_build(label, channel, seq);
        },
        py::arg("label"), py::arg("channel"), py::arg("sequence"));
    m.def(
        "matrix_kernel",
        [](const matrixcs::NormalMatrixLabel& a, const matrixcs::NormalMatrixLabel& b,
           const seqcore::FactorialSequence& seq) {
            return matrixcs::matrix_kernel(a, b, seq);
        },
        py::arg("a"), py::arg("b"), py::arg("sequence"));
    m.def(
        "partial_trace_prob",
        [](const matrixcs::NormalMatrixLabel& label, int n,
           const seqcore::FactorialSequence& seq) {
            return matrixcs::partial_trace_prob(label, n, seq);
        },
        py::arg("label"), py::arg("n"), py::arg("sequence"));
    m.def(
        "joint_prob",
        [](const std::vector<double>& lambdas, const std::vector<double>& thetas,
           const std::vector<int>& ns, const seqcore::FactorialSequence& seq) {
            if (lambdas.size() != thetas.size() || lambdas.size() != ns.size())
                throw DimensionMismatch("lambdas, thetas, and ns must match");
            matrixcs::TensorCSLabel label;
            for (std::size_t i = 0; i < lambdas.size(); ++i)
                label.labels.emplace_back(lambdas[i], thetas[i]);
            return matrixcs::joint_prob(label, ns, seq);
        },
        py::arg("lambdas"), py::arg("thetas"), py::arg("ns"), py::arg("sequence"));
    m.def(
        "matrix_orthogonality_mc",
        [](int mm, int nn, const seqcore::FactorialSequence& seq,
           const roi::RadialMeasure& measure, int M, int samples, std::uint64_t seed) {
            const auto est = matrixcs::matrix_orthogonality_mc(mm, nn, seq, measure, M,
                                                               samples, seed);
            return py::make_tuple(est.estimate, est.standard_error, est.samples);
        },
        py::arg("m"), py::arg("n"), py::arg("sequence"), py::arg("measure"),
        py::arg("M"), py::arg("samples"), py::arg("seed"));

    // ---------------------------------------------------------- bayeslab ---
    py::class_<bayeslab::CredibleInterval>(m, "CredibleInterval")
        .def_readonly("lo", &bayeslab::CredibleInterval::lo)
        .def_readonly("hi", &bayeslab::CredibleInterval::hi)
        .def_readonly("mass", &bayeslab::CredibleInterval::mass);

    py::class_<bayeslab::PosteriorSummary>(m, "PosteriorSummary")
        .def_readonly("grid", &bayeslab::PosteriorSummary::grid)
        .def_readonly("density", &bayeslab::PosteriorSummary::density)
        .def_readonly("cdf", &bayeslab::PosteriorSummary::cdf)
        .def_readonly("point_estimate", &bayeslab::PosteriorSummary::point_estimate)
        .def_readonly("interval", &bayeslab::PosteriorSummary::interval);

    m.def("binomial_p_family", &bayeslab::binomial_p_family, py::arg("N"));
    m.def(
        "simulate",
        [](const distfam::DiscreteFamily& fam, double true_param, std::uint64_t seed) {
            return bayeslab::simulate({fam, true_param, seed});
        },
        py::arg("family"), py::arg("true_param"), py::arg("seed"));
    m.def("point_estimate", &bayeslab::point_estimate, py::arg("k_obs"), py::arg("N"));
    m.def(
        "posterior_summary",
        [](const distfam::DiscreteFamily& fam, int k_obs, double mass) {
            return bayeslab::posterior_summary(fam, canonical_prior(fam), k_obs, mass);
        },
        py::arg("family"), py::arg("k_obs"), py::arg("mass") = 0.95,
        "posterior summary against the family's canonical prior");
}
