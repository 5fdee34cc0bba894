// Equation solvers built on the fast convolution engine: a scalar fractional
// ODE, the subdiffusion equation in one or two space dimensions, and a damped
// nonlinear wave model.  All three close the same implicit pattern per step:
// ask the engine for the lagged convolution, solve the stage system with the
// diagonal weight folded into the matrix, then push the committed stage data.
// Spatial problems are diagonalized in the sine basis first, so every step
// reduces to independent s-by-s real solves per mode.
#pragma once

#include <functional>
#include <vector>

#include "engine_fast.hpp"
#include "spatial.hpp"

namespace gcq {

// stage block of the first discrete derivative, (tau A)^{-1}(V - prev 1);
// prev is the endpoint value of the previous step
RVecS discrete_derivative(const Tableau& tb, double tau, const RVecS& V, double prev);

// same map applied to a derivative block, subtracting the previous block's
// endpoint entry
RVecS discrete_second_derivative(const Tableau& tb, double tau, const RVecS& dV,
                                 const RVecS& dV_prev);

struct SolverRun {
    std::vector<double> t;                  // node times, t[0] = 0
    std::vector<std::vector<double>> u;     // endpoint values per node (size = grid points)
    std::vector<std::vector<double>> stages;  // per node, [point * s + stage]; empty at n = 0
    long fp_iterations_total = 0;
    int fp_iterations_max = 0;
    FastCensus census;
};

// D^alpha u + u = f on (0, T], u(0) = u0, solved in the shifted unknown
// v = u - u0 so the convolution history starts from zero data
struct FodeProblem {
    double alpha = 0.5;
    double u0 = 0.0;
    std::function<double(double)> f;
};
SolverRun solve_fode(const FodeProblem& p, const Mesh& mesh, const Tableau& tb, double tol);

// d_t^alpha u - Laplace u = f, homogeneous Dirichlet data, u(0) = u0
struct SubdiffusionProblem {
    double alpha = 0.5;
    std::function<double(double, double, double)> f;  // (x, y, t); y is 0 in 1d
    std::vector<double> u0;                           // interior grid values
};
SolverRun solve_subdiffusion(const SubdiffusionProblem& p, const SpatialOperator& sp,
                             const Mesh& mesh, const Tableau& tb, double tol);

// (1 - 2 kappa u) u_tt - u_xx - K(d_t) d_t u_xx = 2 kappa (u_t)^2 + f with
// K(z) = (z + 1)^{-alpha}, u(0) = 0, u_t(0) = v0; per step the nonlinear
// terms are frozen and refreshed by fixed-point sweeps until the iterate
// settles below fp_tol in the max norm
struct WesterveltProblem {
    double alpha = 0.5;
    double kappa = 0.0;
    std::function<double(double, double)> f;  // (x, t)
    std::vector<double> v0;                   // initial velocity, interior grid
    double fp_tol = 1e-8;
    int fp_max = 200;
};
SolverRun solve_westervelt(const WesterveltProblem& p, const SpatialOperator& sp,
                           const Mesh& mesh, const Tableau& tb, double tol);

// largest |u_n - exact(t_n)| over n >= 1, scalar runs
double max_error(const SolverRun& run, const std::function<double(double)>& exact);

// largest discrete-L2 gap over n >= 1 against a space-time callable
double max_error_grid(const SolverRun& run, const SpatialOperator& sp,
                      const std::function<double(double, double, double)>& exact);

// discrete-L2 gap at the final node only
double final_error_grid(const SolverRun& run, const SpatialOperator& sp,
                        const std::function<double(double, double, double)>& exact);

// largest gap between a run and its nested half-step refinement: the fine
// run must hold twice as many steps with fine.t[2n] = coarse.t[n]; the gap
// per node is the discrete-L2 norm when sp is given, max-abs otherwise
double refinement_gap(const SolverRun& coarse, const SolverRun& fine,
                      const SpatialOperator* sp);

struct ErrorReport {
    std::vector<int> N;
    std::vector<double> err;
    std::vector<double> eoc;  // eoc[k] from levels k-1 and k; eoc[0] is NaN
};

// pairwise observed orders log(err ratio) / log(N ratio)
ErrorReport error_report(const std::vector<int>& N, const std::vector<double>& err);

}  // namespace gcq
