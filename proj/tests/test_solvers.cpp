#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "core/solvers.hpp"

using namespace gcq;

namespace {
constexpr double pi = std::numbers::pi;

RVecS sample_stages(const Tableau& tb, double t0, double tau,
                    const std::function<double(double)>& g) {
    RVecS v(tb.s);
    for (int i = 0; i < tb.s; ++i) v[i] = g(t0 + tb.c[i] * tau);
    return v;
}
}  // namespace

TEST_CASE("discrete derivative is exact on linear data") {
    for (const Tableau* tb : {&radau2(), &radau3(), &lobatto4()}) {
        const double t0 = 0.4, tau = 0.3;
        const RVecS V = sample_stages(*tb, t0, tau, [](double t) { return t; });
        const RVecS d = discrete_derivative(*tb, tau, V, t0);
        for (int i = 0; i < tb->s; ++i) CHECK(d[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("discrete derivative is exact on quadratics for stage order two") {
    const Tableau& tb = radau2();
    const double t0 = 0.2, tau = 0.25;
    const RVecS V = sample_stages(tb, t0, tau, [](double t) { return t * t; });
    const RVecS d = discrete_derivative(tb, tau, V, t0 * t0);
    for (int i = 0; i < tb.s; ++i)
        CHECK(d[i] == doctest::Approx(2.0 * (t0 + tb.c[i] * tau)).epsilon(1e-12));
}

TEST_CASE("discrete derivative of constant data vanishes") {
    const Tableau& tb = radau3();
    RVecS V(tb.s, 3.7);
    const RVecS d = discrete_derivative(tb, 0.5, V, 3.7);
    for (int i = 0; i < tb.s; ++i) CHECK(std::abs(d[i]) <= 1e-13);
}

TEST_CASE("second derivative recovers the constant curvature of t^2") {
    const Tableau& tb = radau2();
    const double tau = 0.2;
    auto sq = [](double t) { return t * t; };
    // two consecutive steps from t = 0.3
    const RVecS U1 = sample_stages(tb, 0.3, tau, sq);
    const RVecS U2 = sample_stages(tb, 0.3 + tau, tau, sq);
    const RVecS dU1 = discrete_derivative(tb, tau, U1, sq(0.3));
    const RVecS dU2 = discrete_derivative(tb, tau, U2, sq(0.3 + tau));
    const RVecS d2 = discrete_second_derivative(tb, tau, dU2, dU1);
    for (int i = 0; i < tb.s; ++i) CHECK(d2[i] == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("second derivative of linear data vanishes") {
    const Tableau& tb = radau2();
    const double tau = 0.2;
    auto lin = [](double t) { return 2.0 - 3.0 * t; };
    const RVecS U1 = sample_stages(tb, 0.1, tau, lin);
    const RVecS U2 = sample_stages(tb, 0.1 + tau, tau, lin);
    const RVecS dU1 = discrete_derivative(tb, tau, U1, lin(0.1));
    const RVecS dU2 = discrete_derivative(tb, tau, U2, lin(0.1 + tau));
    const RVecS d2 = discrete_second_derivative(tb, tau, dU2, dU1);
    for (int i = 0; i < tb.s; ++i) CHECK(std::abs(d2[i]) <= 1e-11);
}

TEST_CASE("second derivative residual on t^3 shrinks with the step") {
    const Tableau& tb = radau2();
    auto cube = [](double t) { return t * t * t; };
    auto residual = [&](double tau) {
        const double t0 = 0.5;
        const RVecS U1 = sample_stages(tb, t0, tau, cube);
        const RVecS U2 = sample_stages(tb, t0 + tau, tau, cube);
        const RVecS dU1 = discrete_derivative(tb, tau, U1, cube(t0));
        const RVecS dU2 = discrete_derivative(tb, tau, U2, cube(t0 + tau));
        const RVecS d2 = discrete_second_derivative(tb, tau, dU2, dU1);
        double r = 0.0;
        for (int i = 0; i < tb.s; ++i)
            r = std::max(r, std::abs(d2[i] - 6.0 * (t0 + tau + tb.c[i] * tau)));
        return r;
    };
    const double r1 = residual(0.02), r2 = residual(0.01);
    CHECK(r1 / r2 > 1.5);
    CHECK(r1 / r2 < 3.0);
}

TEST_CASE("second derivative is the composition of first derivatives") {
    const Tableau& tb = radau3();
    RVecS dV(tb.s), dVp(tb.s);
    for (int i = 0; i < tb.s; ++i) {
        dV[i] = std::sin(1.0 + i);
        dVp[i] = std::cos(2.0 + i);
    }
    const RVecS a = discrete_second_derivative(tb, 0.37, dV, dVp);
    const RVecS b = discrete_derivative(tb, 0.37, dV, dVp[tb.s - 1]);
    for (int i = 0; i < tb.s; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("fode: constant solution is reproduced to solver accuracy") {
    FodeProblem p;
    p.alpha = 0.6;
    p.u0 = 2.5;
    p.f = [](double) { return 2.5; };
    const Mesh m = mesh_graded(1.0, 16, 2.0);
    const SolverRun run = solve_fode(p, m, radau2(), 1e-12);
    for (size_t n = 1; n < run.u.size(); ++n)
        CHECK(run.u[n][0] == doctest::Approx(2.5).epsilon(1e-11));
}

TEST_CASE("fode: endpoint equals the last stage entry") {
    FodeProblem p;
    p.alpha = 0.5;
    p.u0 = 1.0;
    p.f = [](double t) { return 1.0 + t; };
    const Mesh m = mesh_uniform(1.0, 8);
    const SolverRun run = solve_fode(p, m, radau2(), 1e-10);
    const int s = radau2().s;
    for (size_t n = 1; n < run.u.size(); ++n)
        CHECK(run.u[n][0] == run.stages[n][size_t(s) - 1]);
}

TEST_CASE("fode: cubic manufactured solution converges at third order") {
    const double alpha = 0.5;
    auto exact = [](double t) { return 1.0 + t * t * t; };
    FodeProblem p;
    p.alpha = alpha;
    p.u0 = 1.0;
    p.f = [alpha, exact](double t) {
        return exact(t) + std::tgamma(4.0) / std::tgamma(4.0 - alpha) * std::pow(t, 3.0 - alpha);
    };
    std::vector<double> errs;
    for (int N : {16, 32, 64})
        errs.push_back(max_error(solve_fode(p, mesh_uniform(1.0, N), radau2(), 1e-12), exact));
    const ErrorReport rep = error_report({16, 32, 64}, errs);
    CHECK(rep.eoc[1] >= 2.9);
    CHECK(rep.eoc[2] >= 2.9);
    CHECK(rep.eoc[2] < 3.6);
}

TEST_CASE("fode: two-singularity source stays accurate through the kink") {
    const double alpha = 0.5, b1 = 0.5, b2 = 0.9, sigma = 0.28;
    auto H = [](double x) { return x > 0.0 ? 1.0 : 0.0; };
    auto exact = [=](double t) {
        return 1.0 + std::pow(t, b1) + H(t - sigma) * std::pow(std::max(t - sigma, 0.0), b2);
    };
    FodeProblem p;
    p.alpha = alpha;
    p.u0 = 1.0;
    p.f = [=](double t) {
        double v = exact(t) +
                   std::tgamma(b1 + 1.0) / std::tgamma(b1 - alpha + 1.0) * std::pow(t, b1 - alpha);
        if (t > sigma)
            v += std::tgamma(b2 + 1.0) / std::tgamma(b2 - alpha + 1.0) *
                 std::pow(t - sigma, b2 - alpha);
        return v;
    };
    double prev = 0.0;
    for (int N : {32, 64}) {
        const Mesh m = mesh_two_singularities(1.0, N, sigma, 3.0 / b1, 3.0 / b2);
        const double e = max_error(solve_fode(p, m, radau2(), 1e-11), exact);
        if (N == 32) {
            prev = e;
            CHECK(e < 1e-2);
        } else {
            CHECK(e < 0.4 * prev);
        }
    }
}

TEST_CASE("subdiffusion: zero data gives the zero solution") {
    SpatialOperator sp(1, 8, 0.0, 1.0);
    SubdiffusionProblem p;
    p.alpha = 0.5;
    p.f = [](double, double, double) { return 0.0; };
    p.u0.assign(size_t(sp.points()), 0.0);
    const SolverRun run = solve_subdiffusion(p, sp, mesh_graded(1.0, 8, 2.0), radau2(), 1e-10);
    for (const auto& u : run.u)
        for (double x : u) CHECK(x == 0.0);
}

TEST_CASE("subdiffusion: discrete eigenfunction forcing holds the steady state") {
    SpatialOperator sp(1, 16, 0.0, 1.0);
    const double mu1 = sp.mode_values()[0];
    SubdiffusionProblem p;
    p.alpha = 0.4;
    p.f = [mu1](double x, double, double) { return mu1 * std::sin(pi * x); };
    p.u0.resize(size_t(sp.points()));
    for (int j = 0; j < sp.points(); ++j) p.u0[size_t(j)] = std::sin(pi * sp.coord(j));
    const SolverRun run = solve_subdiffusion(p, sp, mesh_graded(1.0, 8, 3.0), radau2(), 1e-10);
    for (size_t n = 1; n < run.u.size(); ++n)
        for (int j = 0; j < sp.points(); ++j)
            CHECK(std::abs(run.u[n][size_t(j)] - p.u0[size_t(j)]) <= 1e-10);
}

TEST_CASE("subdiffusion: 2d steady state on a tensor eigenfunction") {
    SpatialOperator sp(2, 8, 0.0, 1.0);
    const double lam = sp.mode_value_2d(0, 1);
    auto u0f = [](double x, double y) { return std::sin(pi * x) * std::sin(2 * pi * y); };
    SubdiffusionProblem p;
    p.alpha = 0.7;
    p.f = [&](double x, double y, double) { return lam * u0f(x, y); };
    const int n = sp.subdivisions() - 1;
    p.u0.resize(size_t(sp.points()));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            p.u0[size_t(l) * size_t(n) + size_t(k)] = u0f(sp.coord(k), sp.coord(l));
    const SolverRun run = solve_subdiffusion(p, sp, mesh_graded(0.5, 6, 2.0), radau2(), 1e-10);
    for (size_t j = 0; j < p.u0.size(); ++j)
        CHECK(std::abs(run.u.back()[j] - p.u0[j]) <= 1e-10);
}

TEST_CASE("subdiffusion: manufactured 1d solution decays under refinement") {
    const double alpha = 0.4;
    SpatialOperator sp(1, 32, -1.0, 1.0);
    auto exact = [alpha](double x, double, double t) {
        return std::pow(t, alpha) * std::cos(0.5 * pi * x);
    };
    SubdiffusionProblem p;
    p.alpha = alpha;
    p.f = [alpha](double x, double, double t) {
        return (std::tgamma(1.0 + alpha) + 0.25 * pi * pi * std::pow(t, alpha)) *
               std::cos(0.5 * pi * x);
    };
    p.u0.assign(size_t(sp.points()), 0.0);
    std::vector<double> errs;
    for (int N : {8, 16, 32}) {
        const Mesh m = mesh_graded(1.0, N, 3.0 / alpha);
        errs.push_back(final_error_grid(solve_subdiffusion(p, sp, m, radau2(), 1e-11), sp, exact));
    }
    CHECK(errs[1] < 0.4 * errs[0]);
    CHECK(errs[2] < 0.4 * errs[1]);
    const ErrorReport rep = error_report({8, 16, 32}, errs);
    CHECK(rep.eoc[2] > 2.2);
    CHECK(rep.eoc[2] < 3.8);
}

TEST_CASE("westervelt: zero data stays identically zero") {
    SpatialOperator sp(1, 8, 0.0, 2.0);
    WesterveltProblem p;
    p.alpha = 0.5;
    p.kappa = 0.0;
    p.f = [](double, double) { return 0.0; };
    p.v0.assign(size_t(sp.points()), 0.0);
    const SolverRun run = solve_westervelt(p, sp, mesh_graded(1.0, 8, 2.0), radau2(), 1e-10);
    for (const auto& u : run.u)
        for (double x : u) CHECK(x == 0.0);
    CHECK(run.fp_iterations_max == 1);
}

TEST_CASE("westervelt: linear case settles in at most two sweeps") {
    SpatialOperator sp(1, 8, 0.0, 2.0);
    WesterveltProblem p;
    p.alpha = 0.5;
    p.kappa = 0.0;
    p.f = [](double x, double t) { return (1.0 + std::log(t)) * std::sin(pi * x); };
    p.v0.resize(size_t(sp.points()));
    for (int j = 0; j < sp.points(); ++j) p.v0[size_t(j)] = std::sin(pi * sp.coord(j));
    const SolverRun run = solve_westervelt(p, sp, mesh_graded(2.0, 8, 3.0), radau2(), 1e-10);
    CHECK(run.fp_iterations_max <= 2);
    CHECK(run.fp_iterations_total >= 8);
}

TEST_CASE("westervelt: stage abscissa at zero is rejected") {
    SpatialOperator sp(1, 8, 0.0, 2.0);
    WesterveltProblem p;
    p.f = [](double, double) { return 0.0; };
    p.v0.assign(size_t(sp.points()), 0.0);
    CHECK_THROWS(solve_westervelt(p, sp, mesh_uniform(1.0, 4), lobatto4(), 1e-8));
}

TEST_CASE("westervelt: nonlinear runs shrink against their refinement") {
    SpatialOperator sp(1, 16, 0.0, 2.0);
    WesterveltProblem p;
    p.alpha = 0.5;
    p.kappa = 0.09;
    p.f = [](double x, double t) { return (1.0 + std::log(t)) * std::sin(pi * x); };
    p.v0.resize(size_t(sp.points()));
    for (int j = 0; j < sp.points(); ++j) p.v0[size_t(j)] = std::sin(pi * sp.coord(j));

    auto run_at = [&](int N) {
        return solve_westervelt(p, sp, mesh_graded(2.0, N, 3.0), radau2(), 1e-10);
    };
    const SolverRun r8 = run_at(8), r16 = run_at(16), r32 = run_at(32);
    const double g8 = refinement_gap(r8, r16, &sp);
    const double g16 = refinement_gap(r16, r32, &sp);
    CHECK(g8 > 0.0);
    CHECK(g16 < 0.5 * g8);
    CHECK(r16.fp_iterations_max <= 25);
}

TEST_CASE("refinement gap: nested identical values give zero, misalignment throws") {
    SolverRun coarse, fine;
    coarse.t = {0.0, 0.5, 1.0};
    coarse.u = {{1.0}, {2.0}, {3.0}};
    fine.t = {0.0, 0.25, 0.5, 0.75, 1.0};
    fine.u = {{1.0}, {9.0}, {2.0}, {9.0}, {3.0}};
    CHECK(refinement_gap(coarse, fine, nullptr) == 0.0);
    fine.t[2] = 0.51;
    CHECK_THROWS(refinement_gap(coarse, fine, nullptr));
}

TEST_CASE("error report: synthetic third-order sequence") {
    std::vector<int> N{16, 32, 64};
    std::vector<double> e;
    for (int n : N) e.push_back(5.0 / (double(n) * n * n));
    const ErrorReport rep = error_report(N, e);
    CHECK(std::isnan(rep.eoc[0]));
    CHECK(rep.eoc[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.eoc[2] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS(error_report({16, 8}, {1.0, 2.0}));
}
