// Quadrature rules backing the convolution engines.
//
// Real-axis rules integrate densities with an x^{-alpha} singularity at 0
// and algebraic-to-exponential decay at infinity; the contour rules are
// unions of circles around resolvent pole clusters with the 1/(2 pi i)
// factor absorbed into the weights.

#pragma once

#include <vector>

#include "smallmat.hpp"

namespace gcq {

struct RealRule {
    std::vector<double> x, w;  // apply as sum_l w[l] f(x[l])
    int order = 0;             // per-panel Gauss order actually used
};

// Gauss-Legendre on [-1, 1]
RealRule gauss_legendre(int n);

// Gauss-Jacobi on [-1, 1] with weight (1-x)^A (1+x)^B, A, B > -1
RealRule gauss_jacobi(int n, double A, double B);

// Rule on (0, inf) for integrands x^{-alpha} * (smooth, decaying like
// exp(-zeta x) with zeta in [t_lo^{-1}-ish scales]): a Gauss-Jacobi panel
// on [0, 1/t_hi] absorbing the singularity, then geometric Gauss-Legendre
// panels out to a truncation point controlled by t_lo and tol. The panel
// order is raised until the rule reproduces
//     int_0^inf x^{-alpha} e^{-zeta x} dx = Gamma(1-alpha) zeta^{alpha-1}
// to relative tol for zeta across [t_lo, t_hi]; throws when unattainable.
RealRule build_history_rule(double alpha, double t_lo, double t_hi, double tol);

// Max relative deviation of the rule from the closed form above over a
// log grid of zeta in [t_lo, t_hi].
double rule_beta_error(const RealRule& r, double alpha, double t_lo, double t_hi);

// Trapezoid rule in log coordinates: nodes exp(l h / alpha) for
// l = -mtilde .. ntilde, weights (h/alpha) x_l. Integrates smooth
// x^{-alpha}-type densities on (0, inf) without panel structure.
RealRule build_log_trapezoid_rule(double alpha, double h, int mtilde, int ntilde);

struct ContourRule {
    std::vector<cplx> z, w;  // sum_l w[l] f(z[l]) ~ sum of residues inside
    int circles = 0;
};

// Union of counterclockwise circles that together enclose every given pole
// exactly once while staying clear of (-inf, 0]. node_budget is the target
// total node count (raised if the geometry demands more); the construction
// is verified against the Cauchy integrals of each pole and refused rather
// than returned when it cannot reach max(1e-13, 0.01 tol).
ContourRule build_pole_contour(const std::vector<cplx>& poles, double tol,
                               int node_budget);

}  // namespace gcq
