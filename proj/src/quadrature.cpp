#include "csd/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <queue>

namespace csd::roi {

namespace {

// Golub-Welsch nodes are eigenvalues of the symmetric Jacobi matrix.  The
// weights use the Christoffel identity w_i = mu0 / sum_k p_k(x_i)^2 with the
// orthonormal polynomials evaluated by their three-term recurrence; unlike
// squared eigenvector components this stays relatively accurate for the
// exponentially small weights of the outer Gauss-Laguerre nodes.
void golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                  double mu0, std::vector<double>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            J(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
            J(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);
        nodes[static_cast<std::size_t>(i)] = x;
        double p_prev = 0.0, p = 1.0;  // p_0 for the mu0-normalized weight
        double sum = 1.0;
        for (int k = 0; k + 1 < n; ++k) {
            const double b = offdiag[static_cast<std::size_t>(k)];
            const double p_next =
                ((x - diag[static_cast<std::size_t>(k)]) * p -
                 (k > 0 ? offdiag[static_cast<std::size_t>(k - 1)] : 0.0) * p_prev) /
                b;
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        weights[static_cast<std::size_t>(i)] = mu0 / sum;
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double x = kKronrodNodes[j];
        double fsum;
        if (j == 7) {
            fsum = f(c);
        } else {
            fsum = f(c - h * x) + f(c + h * x);
        }
        resk += kKronrodWeights[j] * fsum;
        if (j % 2 == 1) resg += kGaussWeights[j / 2] * fsum;
    }
    resk *= h;
    resg *= h;
    return {resk, std::abs(resk - resg)};
}

}  // namespace

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double t = weights[i] * f(nodes[i]);
        const double y = t - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

QuadratureRule gauss_legendre(double a, double b, int n) {
    if (!(a < b)) throw InvalidInterval("gauss_legendre requires a < b");
    if (n < 1) throw InvalidInterval("gauss_legendre requires n >= 1");
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int k = 1; k < n; ++k)
        off[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
    QuadratureRule rule;
    rule.domain = QuadDomain::Bounded;
    golub_welsch(diag, off, 2.0, rule.nodes, rule.weights);
    // Affine transplant from [-1, 1] to [a, b].
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

QuadratureRule gauss_laguerre(int n) {
    if (n < 1) throw InvalidInterval("gauss_laguerre requires n >= 1");
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int k = 0; k < n; ++k) diag[static_cast<std::size_t>(k)] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = static_cast<double>(k);
    QuadratureRule rule;
    rule.domain = QuadDomain::SemiInfiniteExp;
    golub_welsch(diag, off, 1.0, rule.nodes, rule.weights);
    return rule;
}

QuadratureRule gauss_laguerre_folded(int n) {
    QuadratureRule rule = gauss_laguerre(n);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        rule.weights[i] *= std::exp(rule.nodes[i]);
    return rule;
}

QuadratureRule gauss_legendre_mapped_semi_infinite(int n) {
    QuadratureRule base = gauss_legendre(0.0, 1.0, n);
    QuadratureRule rule;
    rule.domain = QuadDomain::SemiInfiniteMapped;
    rule.nodes.resize(base.nodes.size());
    rule.weights.resize(base.weights.size());
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        const double t = base.nodes[i];
        rule.nodes[i] = t / (1.0 - t);
        rule.weights[i] = base.weights[i] / ((1.0 - t) * (1.0 - t));
    }
    return rule;
}

QuadratureRule trapezoid_angular(int n) {
    if (n < 1) throw InvalidInterval("trapezoid_angular requires n >= 1");
    QuadratureRule rule;
    rule.domain = QuadDomain::Angular;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.assign(static_cast<std::size_t>(n), 2.0 * std::numbers::pi / n);
    for (int i = 0; i < n; ++i)
        rule.nodes[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / n;
    return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    if (!(a < b)) throw InvalidInterval("integrate_adaptive requires a < b");

    // Globally adaptive scheme: keep a worst-error-first queue of segments
    // and bisect until the total error estimate meets the relative target.
    // Tying the target to the running total (rather than a first estimate)
    // keeps narrow peaks missed by the initial nodes from freezing the
    // tolerance at an unattainable value.
    struct Segment {
        double a, b, value, error;
        int depth;
        bool operator<(const Segment& other) const { return error < other.error; }
    };
    std::priority_queue<Segment> queue;
    double total_value = 0.0, total_error = 0.0;
    const int initial = 8;
    for (int i = 0; i < initial; ++i) {
        const double lo = a + (b - a) * i / initial;
        const double hi = a + (b - a) * (i + 1) / initial;
        const GkResult r = gk15(f, lo, hi);
        queue.push({lo, hi, r.value, r.error, 0});
        total_value += r.value;
        total_error += r.error;
    }

    const int max_splits = 1 << 15;
    for (int splits = 0;; ++splits) {
        if (!std::isfinite(total_value))
            throw DivergentIntegral("adaptive quadrature produced a non-finite value");
        if (total_error <= rel_tol * std::max(std::abs(total_value), 1e-300) ||
            total_error <= 0.0)
            break;
        if (splits >= max_splits)
            throw DivergentIntegral("adaptive quadrature refinement budget exhausted");
        const Segment s = queue.top();
        queue.pop();
        if (s.depth >= max_depth)
            throw DivergentIntegral("adaptive quadrature failed to converge on [" +
                                    std::to_string(s.a) + ", " + std::to_string(s.b) +
                                    "]");
        const double c = 0.5 * (s.a + s.b);
        const GkResult r1 = gk15(f, s.a, c);
        const GkResult r2 = gk15(f, c, s.b);
        total_value += r1.value + r2.value - s.value;
        total_error += r1.error + r2.error - s.error;
        queue.push({s.a, c, r1.value, r1.error, s.depth + 1});
        queue.push({c, s.b, r2.value, r2.error, s.depth + 1});
    }

    // Re-sum the final segments with compensation; the incremental total
    // accumulates cancellation error over many updates.
    double sum = 0.0, comp = 0.0;
    while (!queue.empty()) {
        const double y = queue.top().value - comp;
        queue.pop();
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double integrate_adaptive_semi_infinite(const std::function<double(double)>& f,
                                        double rel_tol) {
    auto mapped = [&f](double t) {
        const double omt = 1.0 - t;
        return f(t / omt) / (omt * omt);
    };
    // Stop just short of 1 to keep the Jacobian finite; the integrand is
    // assumed integrable so the clipped sliver is below tolerance.
    return integrate_adaptive(mapped, 0.0, 1.0 - 1e-14, rel_tol);
}

}  // namespace csd::roi
