// csdual: command-line front door for the coherent-state duality library.
//
// Subcommands: family, verify, posterior, vcs, tensor.
// Exit codes: 0 = success / all checks pass, 1 = verification failure,
// 2 = usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csd/bayeslab.hpp"
#include "csd/cstates.hpp"
#include "csd/distfam.hpp"
#include "csd/json_io.hpp"
#include "csd/matrixcs.hpp"
#include "csd/roi.hpp"
#include "csd/seqcore.hpp"

namespace {

using csd::io::json;

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool json_output = false;
    std::string out_dir;
    int n_max_override = 0;  // from CSDUALITY_NMAX; 0 means default
};

std::string fmt(double v, int sig = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
    return buf;
}

void emit_report(const GlobalOpts& g, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (g.json_output) std::cout << text;
    if (!g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        std::ofstream out(std::filesystem::path(g.out_dir) / "report.json",
                          std::ios::binary);
        out << text;
    }
}

// A spec argument is either a path to a JSON file or a shorthand family
// name: "poisson", "binomial[:N]", "negbinomial[:m]".
json spec_to_json(const std::string& arg) {
    if (arg.empty()) return json{{"family", "poisson"}};
    if (std::filesystem::exists(arg)) return csd::io::load_json_file(arg);
    std::string name = arg;
    int param = -1;
    if (const auto pos = arg.find(':'); pos != std::string::npos) {
        name = arg.substr(0, pos);
        try {
            param = std::stoi(arg.substr(pos + 1));
        } catch (const std::exception&) {
            throw csd::ParseError("bad family shorthand: " + arg);
        }
    }
    json spec{{"family", name}};
    if (name == "binomial") spec["params"] = {{"N", param < 0 ? 10 : param}};
    if (name == "negbinomial") spec["params"] = {{"m", param < 0 ? 2 : param}};
    if (name != "poisson" && name != "binomial" && name != "negbinomial")
        throw csd::UnknownFamily("unknown family shorthand: " + arg);
    return spec;
}

csd::io::FamilySpec load_family(const GlobalOpts& g, const std::string& arg) {
    return csd::io::family_from_json(spec_to_json(arg), g.n_max_override);
}

// Sequence shorthand for the vcs/tensor subcommands:
// "poisson", "su2:N", "su11:m".
csd::seqcore::FactorialSequence sequence_from_name(const GlobalOpts& g,
                                                   const std::string& name) {
    const int n_default = g.n_max_override > 0 ? g.n_max_override : 64;
    if (name == "poisson") return csd::seqcore::FactorialSequence::poisson(n_default);
    const auto pos = name.find(':');
    if (pos != std::string::npos) {
        int p = 0;
        try {
            p = std::stoi(name.substr(pos + 1));
        } catch (const std::exception&) {
            throw csd::ParseError("bad sequence shorthand: " + name);
        }
        const std::string base = name.substr(0, pos);
        if (base == "su2") return csd::seqcore::FactorialSequence::su2(p);
        if (base == "su11") return csd::seqcore::FactorialSequence::su11(p, n_default);
    }
    throw csd::UnknownFamily("unknown sequence: " + name +
                             " (expected poisson, su2:N, or su11:m)");
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw csd::ParseError("bad numeric list entry: '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) {
        if (v != std::floor(v)) throw csd::ParseError("expected an integer list");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

json checks_to_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"residual", c.residual},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    return arr;
}

void print_checks_human(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        std::cout << (c.pass ? "  ok   " : "  FAIL ") << c.name
                  << "  residual=" << fmt(c.residual) << "  tol=" << fmt(c.tolerance)
                  << "\n";
}

// Recovers the su11 parameter m from x_1 = 1/(m + 2).
int su11_m_from_sequence(const csd::seqcore::FactorialSequence& seq) {
    return static_cast<int>(std::lround(1.0 / seq.value(1))) - 2;
}

// ---------------------------------------------------------------- family ---

int cmd_family(const GlobalOpts& g, const std::string& spec_arg,
               const std::vector<std::string>& eval_args, bool table) {
    const auto fs = load_family(g, spec_arg);

    if (!eval_args.empty()) {
        int n = 0;
        double lambda = 0.0;
        try {
            n = std::stoi(eval_args.at(0));
            lambda = std::stod(eval_args.at(1));
        } catch (const std::exception&) {
            throw csd::ParseError("--eval expects an integer n and a real lambda");
        }
        if (n < 0 || n > fs.family.n_max)
            throw csd::IndexOutOfRange("n outside the family range");
        // For the binomial family the user-facing parameter is the success
        // probability p; the family itself runs in the odds p / (1 - p).
        const double value =
            fs.family.name == "binomial"
                ? csd::distfam::pmf_binomial(n, fs.family.n_max, lambda)
                : fs.family.pmf(n, lambda);
        if (g.json_output || !g.out_dir.empty()) {
            json report{{"report_version", 1},
                        {"command", "family"},
                        {"family", fs.family.name},
                        {"n", n},
                        {"lambda", lambda},
                        {"value", value}};
            emit_report(g, report);
        }
        if (!g.json_output) std::cout << fmt(value, 8) << "\n";
        return 0;
    }

    // Table mode: n rows against a short lambda grid inside the interval.
    const double hi = std::min(fs.family.param_hi, 8.0);
    const double lo = fs.family.param_lo;
    std::vector<double> grid;
    for (int i = 1; i <= 5; ++i) grid.push_back(lo + (hi - lo) * i / 6.0);
    const int rows = std::min(fs.family.n_max, 10);

    json jrows = json::array();
    std::cout << "n";
    for (double l : grid) std::cout << "\tlambda=" << fmt(l);
    std::cout << "\n";
    for (int n = 0; n <= rows; ++n) {
        std::cout << n;
        json row = json::array();
        for (double l : grid) {
            const double p = fs.family.pmf(n, l);
            row.push_back(p);
            std::cout << "\t" << fmt(p);
        }
        jrows.push_back(row);
        std::cout << "\n";
    }
    if (g.json_output || !g.out_dir.empty())
        emit_report(g, json{{"report_version", 1},
                            {"command", "family"},
                            {"family", fs.family.name},
                            {"lambda_grid", grid},
                            {"table", jrows}});
    return 0;
}

// ---------------------------------------------------------------- verify ---

int cmd_verify(const GlobalOpts& g, const std::string& spec_arg,
               const std::string& suite, int size, double tol) {
    const auto fs = load_family(g, spec_arg);
    const auto& fam = fs.family;
    std::vector<CheckResult> checks;
    json duality_extra;

    const bool run_all = suite == "all";

    if (run_all || suite == "moments") {
        if (!fam.sequence)
            throw csd::UnknownFamily("moment suite needs a sequence-built family");
        const auto& seq = *fam.sequence;
        std::optional<csd::roi::RadialMeasure> measure;
        double def_tol = 1e-9;
        int k_max = 20;
        if (fam.name == "poisson" || fam.name == "nonlinear") {
            measure = csd::roi::poisson_measure();
        } else if (fam.name == "binomial") {
            measure = csd::roi::su2_measure(seq.n_max());
            def_tol = 1e-10;
            k_max = seq.n_max();
        } else if (fam.name == "negbinomial") {
            measure = csd::roi::su11_measure(su11_m_from_sequence(seq));
        }
        if (measure) {
            const auto report = csd::roi::moment_check(seq, *measure, k_max, 64);
            checks.push_back({"moments", report.max_residual,
                              tol > 0.0 ? tol : def_tol, false});
        } else if (!run_all) {
            throw csd::UnknownFamily("no radial measure known for family " + fam.name);
        }
    }

    if (run_all || suite == "gram") {
        const int sz = std::min(size, fam.n_max + 1);
        const auto G = csd::roi::gram_matrix(fam, fs.prior, sz);
        const double residual =
            (G - Eigen::MatrixXd::Identity(sz, sz)).cwiseAbs().maxCoeff();
        checks.push_back({"gram", residual, tol > 0.0 ? tol : 1e-8, false});
    }

    if (run_all || suite == "roi") {
        const int sz = std::min({size, 6, fam.n_max + 1});
        const auto direct = csd::roi::roi_check_direct(fam, fs.prior, sz, 64, 128);
        checks.push_back({"roi", direct.residual, tol > 0.0 ? tol : 1e-6, false});
    }

    if (run_all || suite == "duality") {
        const int n_cap = std::min(fam.n_max, 160);
        std::vector<double> c;
        for (int n = 0; n <= n_cap; ++n)
            c.push_back(csd::distfam::compute_cn(fam, fs.prior, n));
        std::vector<double> grid;
        if (fam.param_hi <= 1.0)
            grid = {0.3, 0.5, 0.7};
        else
            grid = {0.5, 1.0, 2.0, 4.0};
        const auto cert = csd::distfam::check_convergence(fam, c, grid);
        CheckResult r{"duality", 0.0, 0.0, cert.pass};
        checks.push_back(r);
        json jc = json::array();
        for (int n = 0; n < std::min<int>(size, static_cast<int>(c.size())); ++n)
            jc.push_back(c[static_cast<std::size_t>(n)]);
        duality_extra = json{{"c", jc},
                             {"lambda_grid", cert.lambda_grid},
                             {"convergence", cert.convergence_value}};
    }

    bool all_pass = true;
    for (auto& c : checks) {
        if (c.name != "duality") c.pass = c.residual <= c.tolerance;
        all_pass = all_pass && c.pass;
    }

    json report{{"report_version", 1},
                {"command", "verify"},
                {"seed", g.seed},
                {"family", fam.name},
                {"suite", suite},
                {"size", size},
                {"checks", checks_to_json(checks)},
                {"pass", all_pass}};
    if (!duality_extra.is_null()) report["duality"] = duality_extra;
    emit_report(g, report);
    if (!g.json_output) {
        print_checks_human(checks);
        std::cout << (all_pass ? "PASS" : "FAIL") << "\n";
    }
    return all_pass ? 0 : 1;
}

// -------------------------------------------------------------- posterior ---

int cmd_posterior(const GlobalOpts& g, const std::string& spec_arg, int obs,
                  double mass) {
    const auto spec = spec_to_json(spec_arg);
    auto fs = load_family(g, spec_arg);

    // The coin-toss workflow runs in the success probability p; for the
    // binomial family the inference parameter is p on [0, 1], not the odds.
    if (fs.family.name == "binomial") {
        const int N = fs.family.n_max;
        fs.family = csd::bayeslab::binomial_p_family(N);
        if (!spec.contains("prior")) fs.prior = *fs.family.canonical_prior;
    }

    const auto summary =
        csd::bayeslab::posterior_summary(fs.family, fs.prior, obs, mass);

    const std::string dir = g.out_dir.empty() ? "." : g.out_dir;
    std::filesystem::create_directories(dir);
    const auto csv_path = std::filesystem::path(dir) / "posterior.csv";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        csv << "lambda,density,cdf\r\n";
        char buf[160];
        for (std::size_t i = 0; i < summary.grid.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\r\n", summary.grid[i],
                          summary.density[i], summary.cdf[i]);
            csv << buf;
        }
    }

    json report{{"report_version", 1},
                {"command", "posterior"},
                {"family", fs.family.name},
                {"obs", obs},
                {"mass", mass},
                {"mean", summary.point_estimate},
                {"interval_lo", summary.interval.lo},
                {"interval_hi", summary.interval.hi},
                {"csv", csv_path.string()}};
    emit_report(g, report);
    if (!g.json_output) {
        std::cout << "mean " << fmt(summary.point_estimate) << "\n"
                  << "interval [" << fmt(summary.interval.lo) << ", "
                  << fmt(summary.interval.hi) << "] mass " << fmt(mass) << "\n"
                  << "csv " << csv_path.string() << "\n";
    }
    return 0;
}

// -------------------------------------------------------------------- vcs ---

int cmd_vcs(const GlobalOpts& g, int dim, const std::string& family,
            const std::string& lambdas_arg, const std::string& thetas_arg,
            int samples) {
    if (dim < 1) throw csd::OutOfRange("--dim must be at least 1");
    if (samples < 1) throw csd::OutOfRange("--samples must be at least 1");
    const auto seq = sequence_from_name(g, family);
    const auto lambdas = parse_double_list(lambdas_arg);
    if (static_cast<int>(lambdas.size()) != dim)
        throw csd::DimensionMismatch("--lambdas must list exactly --dim values");
    std::vector<double> thetas(static_cast<std::size_t>(dim), 0.0);
    if (!thetas_arg.empty()) {
        thetas = parse_double_list(thetas_arg);
        if (static_cast<int>(thetas.size()) != dim)
            throw csd::DimensionMismatch("--thetas must list exactly --dim values");
    }

    std::vector<csd::cstates::CSLabel> diag;
    for (int i = 0; i < dim; ++i)
        diag.emplace_back(lambdas[static_cast<std::size_t>(i)],
                          thetas[static_cast<std::size_t>(i)]);
    const auto U = csd::matrixcs::haar_unitary(dim, g.seed);
    const auto label = csd::matrixcs::make_label(U, diag);

    std::vector<CheckResult> checks;

    double total = 0.0;
    for (int i = 0; i < dim; ++i)
        total += csd::matrixcs::vcs_build(label, i, seq).squared_norm();
    checks.push_back({"normalization", std::abs(total - 1.0), 1e-10, false});

    double trace_res = 0.0, det_res = 0.0;
    for (int n = 0; n <= 2; ++n) {
        const auto P = csd::matrixcs::partial_trace_prob(label, n, seq);
        double mix = 0.0, prod = 1.0;
        for (int i = 0; i < dim; ++i) {
            const double p =
                csd::cstates::prob_extract(csd::cstates::cs_nonlinear(seq, diag[i]), n);
            mix += p / dim;
            prod *= p;
        }
        trace_res = std::max(trace_res, std::abs(P.trace().real() - mix) +
                                            std::abs(P.trace().imag()));
        const std::complex<double> det = (static_cast<double>(dim) * P).determinant();
        const double scale = std::max(prod, 1e-300);
        det_res = std::max(det_res, std::abs(det - prod) / scale);
    }
    checks.push_back({"trace", trace_res, 1e-12, false});
    checks.push_back({"determinant", det_res, 1e-10, false});

    const auto measure = family == "poisson" ? csd::roi::poisson_measure()
                         : family.rfind("su2:", 0) == 0
                             ? csd::roi::su2_measure(seq.n_max())
                             : csd::roi::su11_measure(su11_m_from_sequence(seq));
    double mc_res = 0.0;
    for (int m = 0; m <= 1; ++m) {
        for (int n = 0; n <= 1; ++n) {
            const auto est = csd::matrixcs::matrix_orthogonality_mc(
                m, n, seq, measure, dim, samples, g.seed);
            const Eigen::MatrixXcd target =
                m == n ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim))
                       : Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(dim, dim));
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    const double band = std::max(3.0 * est.standard_error(r, c), 1e-10);
                    const double dev = std::abs(est.estimate(r, c) - target(r, c));
                    mc_res = std::max(mc_res, dev - band);
                }
        }
    }
    checks.push_back({"mc_orthogonality_excess", std::max(mc_res, 0.0), 1e-12, false});

    bool all_pass = true;
    for (auto& c : checks) {
        c.pass = c.residual <= c.tolerance;
        all_pass = all_pass && c.pass;
    }

    json report{{"report_version", 1},
                {"command", "vcs"},
                {"seed", g.seed},
                {"dim", dim},
                {"family", family},
                {"lambdas", lambdas},
                {"thetas", thetas},
                {"samples", samples},
                {"checks", checks_to_json(checks)},
                {"pass", all_pass}};
    emit_report(g, report);
    if (!g.json_output) {
        print_checks_human(checks);
        std::cout << (all_pass ? "PASS" : "FAIL") << "\n";
    }
    return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- tensor ---

int cmd_tensor(const GlobalOpts& g, const std::string& family,
               const std::string& lambdas_arg, const std::string& ns_arg) {
    const auto seq = sequence_from_name(g, family);
    const auto lambdas = parse_double_list(lambdas_arg);
    if (lambdas.empty()) throw csd::DimensionMismatch("--lambdas must be nonempty");

    csd::matrixcs::TensorCSLabel label;
    for (double l : lambdas) label.labels.emplace_back(l, 0.0);
    const auto state = csd::matrixcs::tensor_cs(label, seq);

    std::vector<CheckResult> checks;
    json extra;

    if (!ns_arg.empty()) {
        const auto ns = parse_int_list(ns_arg);
        if (ns.size() != lambdas.size())
            throw csd::DimensionMismatch("--ns must list one index per factor");
        const double joint = csd::matrixcs::joint_prob(label, ns, seq);
        double prod = 1.0;
        for (std::size_t i = 0; i < ns.size(); ++i)
            prod *= csd::cstates::prob_extract(state.factors[i], ns[i]);
        checks.push_back({"factorization", std::abs(joint - prod), 1e-12, false});
        extra = json{{"ns", ns}, {"joint_prob", joint}};
    }

    const double mass_residual = std::abs(state.norm_squared() - 1.0);
    checks.push_back({"mass", mass_residual, 1e-8, false});

    bool all_pass = true;
    for (auto& c : checks) {
        c.pass = c.residual <= c.tolerance;
        all_pass = all_pass && c.pass;
    }

    json report{{"report_version", 1},
                {"command", "tensor"},
                {"family", family},
                {"lambdas", lambdas},
                {"checks", checks_to_json(checks)},
                {"pass", all_pass}};
    if (!extra.is_null()) report["joint"] = extra;
    emit_report(g, report);
    if (!g.json_output) {
        print_checks_human(checks);
        std::cout << (all_pass ? "PASS" : "FAIL") << "\n";
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent-state duality toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed for stochastic subcommands");
    app.add_flag("--json", g.json_output, "print a JSON report instead of text");
    app.add_option("--out", g.out_dir, "directory for report and data files");

    std::string family_spec, eval_suite = "all", verify_spec, posterior_spec;
    std::vector<std::string> eval_args;
    bool table = false;
    auto* family = app.add_subcommand("family", "evaluate or tabulate a family");
    family->fallthrough();
    family->add_option("spec", family_spec, "spec file or family shorthand")->required();
    auto* eval_opt =
        family->add_option("--eval", eval_args, "evaluate pmf at (n, lambda)")
            ->expected(2);
    auto* table_opt = family->add_flag("--table", table, "print a pmf table");
    eval_opt->excludes(table_opt);

    int size = 8;
    double tol = 0.0;
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->fallthrough();
    verify->add_option("spec", verify_spec, "spec file or family shorthand");
    verify->add_option("--suite", eval_suite, "moments|gram|roi|duality|all")
        ->check(CLI::IsMember({"moments", "gram", "roi", "duality", "all"}));
    verify->add_option("--size", size, "basis size for gram/roi checks");
    verify->add_option("--tol", tol, "override the per-check tolerance");

    int obs = 0;
    double mass = 0.95;
    auto* posterior = app.add_subcommand("posterior", "posterior from an observation");
    posterior->fallthrough();
    posterior->add_option("spec", posterior_spec, "spec file or family shorthand");
    posterior->add_option("--obs", obs, "observed count")->required();
    posterior->add_option("--mass", mass, "credible interval mass");

    int dim = 2, samples = 2000;
    std::string vcs_family = "poisson", lambdas_arg = "1,2", thetas_arg, ns_arg;
    auto* vcs = app.add_subcommand("vcs", "vector coherent state checks");
    vcs->fallthrough();
    vcs->add_option("--dim", dim, "matrix dimension M");
    vcs->add_option("--family", vcs_family, "poisson|su2:N|su11:m");
    vcs->add_option("--lambdas", lambdas_arg, "comma list of lambda_i");
    vcs->add_option("--thetas", thetas_arg, "comma list of theta_i");
    vcs->add_option("--samples", samples, "Monte Carlo sample count");

    std::string t_family = "poisson", t_lambdas = "1,2";
    auto* tensor = app.add_subcommand("tensor", "tensor-product coherent states");
    tensor->fallthrough();
    tensor->add_option("--family", t_family, "poisson|su2:N|su11:m");
    tensor->add_option("--lambdas", t_lambdas, "comma list of factor lambdas");
    tensor->add_option("--ns", ns_arg, "comma list of level indices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (const char* env = std::getenv("CSDUALITY_NMAX")) {
        try {
            g.n_max_override = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "error: CSDUALITY_NMAX must be an integer\n";
            return 2;
        }
        if (g.n_max_override < 1) {
            std::cerr << "error: CSDUALITY_NMAX must be positive\n";
            return 2;
        }
    }

    try {
        if (family->parsed()) {
            if (eval_args.empty() && !table)
                throw csd::ParseError("family needs --eval or --table");
            return cmd_family(g, family_spec, eval_args, table);
        }
        if (verify->parsed()) return cmd_verify(g, verify_spec, eval_suite, size, tol);
        if (posterior->parsed()) return cmd_posterior(g, posterior_spec, obs, mass);
        if (vcs->parsed())
            return cmd_vcs(g, dim, vcs_family, lambdas_arg, thetas_arg, samples);
        if (tensor->parsed()) return cmd_tensor(g, t_family, t_lambdas, ns_arg);
    } catch (const csd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
