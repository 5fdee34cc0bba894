// Reference convolution engine: advances the full ODE-node ensemble
// y_n(x) for every node of the real-axis rule and quadratures
// u_n = sum_l w_l G(x_l) y_n(x_l) step by step.  Cost O(N L) work and
// O(L) state; the oblivious engine is checked against this one.
#pragma once

#include <functional>
#include <vector>

#include "kernel.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "tableau.hpp"

namespace gcq {

// One implicit RK step of y' = -x y + f at a single scalar node: returns the
// stage vector (I + tau x A)^{-1} (1 y_prev + tau A f_stages); last entry is
// the step endpoint for stiffly accurate tableaus.  For contour nodes call
// with complex x = -z.
template <class T>
SMat<T> rk_node_matrix(const Tableau& tb, double tau, T x) {
    const int s = tb.s;
    SMat<T> m(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            m(i, j) = ((i == j) ? T(1) : T(0)) + tau * x * T(tb.A(i, j));
    return m;
}

template <class T>
SVec<T> rk_node_rhs(const Tableau& tb, double tau, T y_prev, const SVec<T>& fstages) {
    const int s = tb.s;
    SVec<T> rhs(s);
    for (int i = 0; i < s; ++i) {
        T af{};
        for (int j = 0; j < s; ++j) af += T(tb.A(i, j)) * fstages[j];
        rhs[i] = y_prev + tau * af;
    }
    return rhs;
}

template <class T>
SVec<T> rk_node_step(const Tableau& tb, double tau, T x, T y_prev,
                     const SVec<T>& fstages) {
    return SLU<T>(rk_node_matrix(tb, tau, x)).solve(rk_node_rhs(tb, tau, y_prev, fstages));
}

// default real-axis rule for a kernel on a mesh: the paneled gauss rule for
// pure-power densities, the log-space trapezoid otherwise
RealRule default_history_rule(const Kernel& k, double t_lo, double t_hi, double tol);

// u at the mesh nodes, u[0] = 0
std::vector<double> gcq_direct(const Kernel& k, const Tableau& tb, const Mesh& mesh,
                               const std::function<double(double)>& f, double tol,
                               const RealRule* rule_override = nullptr);

// Stage-level quadrature weights W_{n,j} (s x s), 1 <= j <= n <= N, so that
// U_n = sum_j W_{n,j} F_j reproduces the engine's stage outputs.
struct WeightTable {
    int N = 0, s = 0;
    std::vector<RMatS> W;  // packed lower triangle, row n first
    const RMatS& at(int n, int j) const { return W[size_t(n - 1) * n / 2 + j - 1]; }
    RMatS& at(int n, int j) { return W[size_t(n - 1) * n / 2 + j - 1]; }
};

WeightTable gcq_weights(const Kernel& k, const Tableau& tb, const Mesh& mesh, double tol,
                        const RealRule* rule_override = nullptr);

}  // namespace gcq
