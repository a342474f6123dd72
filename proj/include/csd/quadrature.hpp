#pragma once

#include <functional>
#include <vector>

#include "csd/errors.hpp"

namespace csd::roi {

enum class QuadDomain { Bounded, SemiInfiniteExp, SemiInfiniteMapped, Angular };

// Nodes and positive weights of a fixed rule.  For SemiInfiniteExp the
// weights already include the e^{-x} factor folded out, i.e. the rule
// approximates a plain integral over [0, inf).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadDomain domain = QuadDomain::Bounded;

    double integrate(const std::function<double(double)>& f) const;
};

// n-point Gauss-Legendre rule on [a, b], exact for polynomials of degree
// <= 2n - 1.  Nodes via Golub-Welsch on the Jacobi matrix.
QuadratureRule gauss_legendre(double a, double b, int n);

// n-point Gauss-Laguerre rule for integrals of f(x) e^{-x} over [0, inf).
QuadratureRule gauss_laguerre(int n);

// Same nodes with weights multiplied by e^{+x}: approximates a plain
// integral of f over [0, inf) for integrands with exponential decay.
QuadratureRule gauss_laguerre_folded(int n);

// Gauss-Legendre rule transplanted onto [0, inf) through x = t / (1 - t);
// exact for integrands of the form t^j (1-t)^k after the pullback.
QuadratureRule gauss_legendre_mapped_semi_infinite(int n);

// Equispaced trapezoid rule on [0, 2pi); spectrally accurate for periodic
// integrands and exact for e^{ik theta} with |k| < n.
QuadratureRule trapezoid_angular(int n);

// Adaptive (G7, K15) quadrature on [a, b] with interval bisection.
// rel_tol is the relative error target; throws DivergentIntegral when the
// refinement budget is exhausted.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int max_depth = 40);

// Adaptive quadrature over [0, inf) through the rational map t / (1 - t).
double integrate_adaptive_semi_infinite(const std::function<double(double)>& f,
                                        double rel_tol = 1e-10);

}  // namespace csd::roi
