#include "solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcq {

namespace {

RMatS tau_a(const Tableau& tb, double tau) {
    RMatS m(tb.s);
    for (int i = 0; i < tb.s; ++i)
        for (int j = 0; j < tb.s; ++j) m(i, j) = tau * tb.A(i, j);
    return m;
}

RVecS row_sums(const RMatS& m) {
    RVecS v(m.n);
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m(i, j);
        v[i] = s;
    }
    return v;
}

void check_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument(std::string(who) + ": alpha must lie in (0,1)");
}

}  // namespace

RVecS discrete_derivative(const Tableau& tb, double tau, const RVecS& V, double prev) {
    if (!(tau > 0.0)) throw std::invalid_argument("discrete derivative: step must be positive");
    if (V.n != tb.s) throw std::invalid_argument("discrete derivative: stage count mismatch");
    RVecS rhs(tb.s);
    for (int i = 0; i < tb.s; ++i) rhs[i] = V[i] - prev;
    return SLU<double>(tau_a(tb, tau)).solve(rhs);
}

RVecS discrete_second_derivative(const Tableau& tb, double tau, const RVecS& dV,
                                 const RVecS& dV_prev) {
    if (dV_prev.n != tb.s)
        throw std::invalid_argument("discrete derivative: stage count mismatch");
    return discrete_derivative(tb, tau, dV, dV_prev[tb.s - 1]);
}

SolverRun solve_fode(const FodeProblem& p, const Mesh& mesh, const Tableau& tb, double tol) {
    check_alpha(p.alpha, "fode");
    if (!p.f) throw std::invalid_argument("fode: missing source");
    const int N = mesh.steps(), s = tb.s;
    const int n0 = default_window(N);
    FastConvolver conv(kernel_fracint_dual(p.alpha), tb, mesh_hint(mesh, n0), n0, tol);

    SolverRun run;
    run.t = mesh.t;
    run.u.assign(static_cast<size_t>(N) + 1, std::vector<double>{p.u0});
    run.stages.assign(static_cast<size_t>(N) + 1, {});

    double vprev = 0.0;  // endpoint of the shifted unknown v = u - u0
    for (int n = 1; n <= N; ++n) {
        const double tau = mesh.tau(n);
        const auto lag = conv.evaluate_lagged(tau);
        const RMatS P = matrix_power_real(tb, tau, -p.alpha);
        const RVecS pones = row_sums(P);
        RMatS sys = P;
        for (int i = 0; i < s; ++i) sys(i, i) += 1.0;
        RVecS rhs(s);
        for (int i = 0; i < s; ++i) {
            const double ti = mesh.t[size_t(n) - 1] + tb.c[i] * tau;
            rhs[i] = p.f(ti) - p.u0 + pones[i] * vprev - lag[0][i];
        }
        const RVecS V = SLU<double>(sys).solve(rhs);
        conv.push(tau, {discrete_derivative(tb, tau, V, vprev)});
        vprev = V[s - 1];
        run.u[size_t(n)] = {vprev + p.u0};
        auto& st = run.stages[size_t(n)];
        st.resize(static_cast<size_t>(s));
        for (int i = 0; i < s; ++i) st[size_t(i)] = V[i] + p.u0;
    }
    run.census = conv.census();
    return run;
}

SolverRun solve_subdiffusion(const SubdiffusionProblem& p, const SpatialOperator& sp,
                             const Mesh& mesh, const Tableau& tb, double tol) {
    check_alpha(p.alpha, "subdiffusion");
    if (!p.f) throw std::invalid_argument("subdiffusion: missing source");
    if (int(p.u0.size()) != sp.points())
        throw std::invalid_argument("subdiffusion: initial data size mismatch");
    const int N = mesh.steps(), s = tb.s, C = sp.points();
    const int n = sp.subdivisions() - 1;

    // flattened mode spectrum, matching the transform's index order
    std::vector<double> lam(static_cast<size_t>(C));
    if (sp.dim() == 1) {
        lam = sp.mode_values();
    } else {
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                lam[size_t(l) * size_t(n) + size_t(k)] = sp.mode_value_2d(k, l);
    }
    const std::vector<double> u0hat = sp.to_modes(p.u0);

    const int n0 = default_window(N);
    FastConvolver conv(kernel_fracint_dual(p.alpha), tb, mesh_hint(mesh, n0), n0, tol, C);

    SolverRun run;
    run.t = mesh.t;
    run.u.assign(static_cast<size_t>(N) + 1, p.u0);
    run.stages.assign(static_cast<size_t>(N) + 1, {});

    std::vector<double> vhat(static_cast<size_t>(C), 0.0);  // modes of v = u - u0 at the last node
    std::vector<double> grid(static_cast<size_t>(C)), hmode(static_cast<size_t>(C));
    std::vector<std::vector<double>> fhat(static_cast<size_t>(s));
    std::vector<RVecS> Vhat(static_cast<size_t>(C));
    FastConvolver::StageData F(static_cast<size_t>(C), RVecS(s));

    for (int step = 1; step <= N; ++step) {
        const double tau = mesh.tau(step);
        const auto lag = conv.evaluate_lagged(tau);
        const RMatS P = matrix_power_real(tb, tau, -p.alpha);
        const RVecS pones = row_sums(P);
        const SLU<double> ta(tau_a(tb, tau));

        for (int i = 0; i < s; ++i) {
            const double ti = mesh.t[size_t(step) - 1] + tb.c[i] * tau;
            if (sp.dim() == 1) {
                for (int j = 0; j < C; ++j) grid[size_t(j)] = p.f(sp.coord(j), 0.0, ti);
            } else {
                for (int l = 0; l < n; ++l)
                    for (int k = 0; k < n; ++k)
                        grid[size_t(l) * size_t(n) + size_t(k)] =
                            p.f(sp.coord(k), sp.coord(l), ti);
            }
            fhat[size_t(i)] = sp.to_modes(grid);
        }

        for (int m = 0; m < C; ++m) {
            RMatS sys = P;
            for (int i = 0; i < s; ++i) sys(i, i) += lam[size_t(m)];
            RVecS rhs(s);
            for (int i = 0; i < s; ++i)
                rhs[i] = fhat[size_t(i)][size_t(m)] - lam[size_t(m)] * u0hat[size_t(m)] +
                         pones[i] * vhat[size_t(m)] - lag[size_t(m)][i];
            const RVecS V = SLU<double>(sys).solve(rhs);
            RVecS diff(s);
            for (int i = 0; i < s; ++i) diff[i] = V[i] - vhat[size_t(m)];
            F[size_t(m)] = ta.solve(diff);
            Vhat[size_t(m)] = V;
        }
        conv.push(tau, F);

        for (int m = 0; m < C; ++m) vhat[size_t(m)] = Vhat[size_t(m)][s - 1];
        std::vector<double> up = sp.from_modes(vhat);
        for (int j = 0; j < C; ++j) up[size_t(j)] += p.u0[size_t(j)];
        run.u[size_t(step)] = up;

        auto& st = run.stages[size_t(step)];
        st.resize(size_t(C) * size_t(s));
        for (int i = 0; i < s; ++i) {
            for (int m = 0; m < C; ++m) hmode[size_t(m)] = Vhat[size_t(m)][i];
            const std::vector<double> ui = sp.from_modes(hmode);
            for (int j = 0; j < C; ++j)
                st[size_t(j) * size_t(s) + size_t(i)] = ui[size_t(j)] + p.u0[size_t(j)];
        }
    }
    run.census = conv.census();
    return run;
}

SolverRun solve_westervelt(const WesterveltProblem& p, const SpatialOperator& sp,
                           const Mesh& mesh, const Tableau& tb, double tol) {
    check_alpha(p.alpha, "westervelt");
    if (sp.dim() != 1) throw std::invalid_argument("westervelt: spatial operator must be 1d");
    if (!p.f) throw std::invalid_argument("westervelt: missing source");
    if (int(p.v0.size()) != sp.points())
        throw std::invalid_argument("westervelt: initial velocity size mismatch");
    if (!(p.fp_tol > 0.0)) throw std::invalid_argument("westervelt: fp_tol must be positive");
    if (!(p.kappa >= 0.0)) throw std::invalid_argument("westervelt: kappa must be nonnegative");
    if (!(tb.c[0] > 0.0))
        throw std::invalid_argument(
            "westervelt: first stage abscissa must be positive (sources may be "
            "singular at the step start)");

    const int N = mesh.steps(), s = tb.s, C = sp.points();
    const std::vector<double>& mu = sp.mode_values();
    const int n0 = default_window(N);
    FastConvolver conv(kernel_shifted(p.alpha), tb, mesh_hint(mesh, n0), n0, tol, C);

    SolverRun run;
    run.t = mesh.t;
    run.u.assign(static_cast<size_t>(N) + 1, std::vector<double>(static_cast<size_t>(C), 0.0));
    run.stages.assign(static_cast<size_t>(N) + 1, {});

    std::vector<double> uprev(static_cast<size_t>(C), 0.0);   // displacement endpoint
    std::vector<double> dprev = p.v0;            // derivative endpoint
    std::vector<double> dprev_hat = sp.to_modes(dprev);
    std::vector<double> uprev_hat(static_cast<size_t>(C), 0.0);

    // stage blocks in physical space, [stage][point]
    std::vector<std::vector<double>> U(static_cast<size_t>(s)), Unew(static_cast<size_t>(s)), dU(static_cast<size_t>(s)),
        d2U(static_cast<size_t>(s)), fst(static_cast<size_t>(s));
    std::vector<std::vector<double>> rhs_hat(static_cast<size_t>(s));
    std::vector<double> col(static_cast<size_t>(C));
    FastConvolver::StageData F(static_cast<size_t>(C), RVecS(s));

    for (int step = 1; step <= N; ++step) {
        const double tau = mesh.tau(step);
        const auto lag = conv.evaluate_lagged(tau);
        const RMatS Wnn = conv.diagonal_weight(tau);
        const RMatS T1 = inverse(tau_a(tb, tau));
        const RMatS T2 = matmul(T1, T1);
        const RMatS WT1 = matmul(Wnn, T1);
        const RVecS t1one = row_sums(T1);
        const RVecS t2one = row_sums(T2);
        const RVecS wt1one = row_sums(WT1);

        // per-mode factorizations of T2 + mu (I + Wnn T1)
        std::vector<SLU<double>> fac;
        fac.reserve(static_cast<size_t>(C));
        for (int m = 0; m < C; ++m) {
            RMatS sys = T2;
            for (int i = 0; i < s; ++i) {
                for (int j = 0; j < s; ++j) sys(i, j) += mu[size_t(m)] * WT1(i, j);
                sys(i, i) += mu[size_t(m)];
            }
            fac.emplace_back(sys);
        }

        for (int i = 0; i < s; ++i) {
            const double ti = mesh.t[size_t(step) - 1] + tb.c[i] * tau;
            fst[size_t(i)].resize(static_cast<size_t>(C));
            for (int j = 0; j < C; ++j) fst[size_t(i)][size_t(j)] = p.f(sp.coord(j), ti);
            U[size_t(i)] = uprev;  // constant-in-time starting iterate
            dU[size_t(i)].assign(static_cast<size_t>(C), 0.0);
            d2U[size_t(i)].assign(static_cast<size_t>(C), 0.0);
        }

        int iters = 0;
        double delta = 0.0;
        do {
            // derivatives of the current iterate, pointwise stage solves
            for (int j = 0; j < C; ++j) {
                RVecS uj(s);
                for (int i = 0; i < s; ++i) uj[i] = U[size_t(i)][size_t(j)];
                const RVecS dj = discrete_derivative(tb, tau, uj, uprev[size_t(j)]);
                RVecS ddiff(s);
                for (int i = 0; i < s; ++i) ddiff[i] = dj[i] - dprev[size_t(j)];
                const RVecS d2j = matvec(T1, ddiff);
                for (int i = 0; i < s; ++i) {
                    dU[size_t(i)][size_t(j)] = dj[i];
                    d2U[size_t(i)][size_t(j)] = d2j[i];
                }
            }

            for (int i = 0; i < s; ++i) {
                for (int j = 0; j < C; ++j) {
                    const double uij = U[size_t(i)][size_t(j)];
                    if (!(1.0 - 2.0 * p.kappa * std::abs(uij) > 0.0))
                        throw std::runtime_error(
                            "westervelt: coefficient 1 - 2 kappa u lost positivity");
                    col[size_t(j)] = fst[size_t(i)][size_t(j)] +
                                     2.0 * p.kappa * dU[size_t(i)][size_t(j)] *
                                         dU[size_t(i)][size_t(j)] +
                                     2.0 * p.kappa * uij * d2U[size_t(i)][size_t(j)];
                }
                rhs_hat[size_t(i)] = sp.to_modes(col);
            }

            delta = 0.0;
            for (int m = 0; m < C; ++m) {
                RVecS rhs(s);
                for (int i = 0; i < s; ++i)
                    rhs[i] = rhs_hat[size_t(i)][size_t(m)] + t2one[i] * uprev_hat[size_t(m)] +
                             t1one[i] * dprev_hat[size_t(m)] +
                             mu[size_t(m)] * wt1one[i] * uprev_hat[size_t(m)] -
                             lag[size_t(m)][i];
                const RVecS V = fac[size_t(m)].solve(rhs);
                for (int i = 0; i < s; ++i) rhs_hat[size_t(i)][size_t(m)] = V[i];
            }
            for (int i = 0; i < s; ++i) {
                Unew[size_t(i)] = sp.from_modes(rhs_hat[size_t(i)]);
                for (int j = 0; j < C; ++j)
                    delta = std::max(delta,
                                     std::abs(Unew[size_t(i)][size_t(j)] - U[size_t(i)][size_t(j)]));
                U[size_t(i)].swap(Unew[size_t(i)]);
            }
            iters += 1;
            if (iters >= p.fp_max && delta > p.fp_tol)
                throw std::runtime_error("westervelt: fixed point did not settle");
        } while (delta > p.fp_tol);

        run.fp_iterations_total += iters;
        run.fp_iterations_max = std::max(run.fp_iterations_max, iters);

        // final derivatives and the committed channel data mu * modes(dU)
        for (int j = 0; j < C; ++j) {
            RVecS uj(s);
            for (int i = 0; i < s; ++i) uj[i] = U[size_t(i)][size_t(j)];
            const RVecS dj = discrete_derivative(tb, tau, uj, uprev[size_t(j)]);
            for (int i = 0; i < s; ++i) dU[size_t(i)][size_t(j)] = dj[i];
        }
        for (int i = 0; i < s; ++i) {
            const std::vector<double> dhat = sp.to_modes(dU[size_t(i)]);
            for (int m = 0; m < C; ++m) F[size_t(m)][i] = mu[size_t(m)] * dhat[size_t(m)];
        }
        conv.push(tau, F);

        uprev = U[size_t(s) - 1];
        dprev = dU[size_t(s) - 1];
        uprev_hat = sp.to_modes(uprev);
        dprev_hat = sp.to_modes(dprev);
        run.u[size_t(step)] = uprev;
        auto& st = run.stages[size_t(step)];
        st.resize(size_t(C) * size_t(s));
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < C; ++j)
                st[size_t(j) * size_t(s) + size_t(i)] = U[size_t(i)][size_t(j)];
    }
    run.census = conv.census();
    return run;
}

double max_error(const SolverRun& run, const std::function<double(double)>& exact) {
    double e = 0.0;
    for (size_t n = 1; n < run.t.size(); ++n) {
        if (run.u[n].size() != 1)
            throw std::invalid_argument("max_error: expected a scalar run");
        e = std::max(e, std::abs(run.u[n][0] - exact(run.t[n])));
    }
    return e;
}

namespace {

std::vector<double> exact_grid(const SpatialOperator& sp,
                               const std::function<double(double, double, double)>& exact,
                               double t) {
    const int n = sp.subdivisions() - 1;
    std::vector<double> g(size_t(sp.points()));
    if (sp.dim() == 1) {
        for (int j = 0; j < n; ++j) g[size_t(j)] = exact(sp.coord(j), 0.0, t);
    } else {
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                g[size_t(l) * size_t(n) + size_t(k)] = exact(sp.coord(k), sp.coord(l), t);
    }
    return g;
}

double grid_gap(const SpatialOperator& sp, const std::vector<double>& u,
                const std::vector<double>& v) {
    std::vector<double> d(u.size());
    for (size_t j = 0; j < u.size(); ++j) d[j] = u[j] - v[j];
    return sp.norm(d);
}

}  // namespace

double max_error_grid(const SolverRun& run, const SpatialOperator& sp,
                      const std::function<double(double, double, double)>& exact) {
    double e = 0.0;
    for (size_t n = 1; n < run.t.size(); ++n)
        e = std::max(e, grid_gap(sp, run.u[n], exact_grid(sp, exact, run.t[n])));
    return e;
}

double final_error_grid(const SolverRun& run, const SpatialOperator& sp,
                        const std::function<double(double, double, double)>& exact) {
    const size_t n = run.t.size() - 1;
    return grid_gap(sp, run.u[n], exact_grid(sp, exact, run.t[n]));
}

double refinement_gap(const SolverRun& coarse, const SolverRun& fine,
                      const SpatialOperator* sp) {
    const size_t N = coarse.t.size() - 1;
    if (fine.t.size() != 2 * N + 1)
        throw std::invalid_argument("refinement gap: reference must hold twice the steps");
    double e = 0.0;
    for (size_t n = 1; n <= N; ++n) {
        if (std::abs(fine.t[2 * n] - coarse.t[n]) > 1e-10 * (1.0 + std::abs(coarse.t[n])))
            throw std::invalid_argument("refinement gap: reference mesh is not nested");
        const auto& a = coarse.u[n];
        const auto& b = fine.u[2 * n];
        if (a.size() != b.size())
            throw std::invalid_argument("refinement gap: grid size mismatch");
        if (sp) {
            e = std::max(e, grid_gap(*sp, a, b));
        } else {
            for (size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - b[j]));
        }
    }
    return e;
}

ErrorReport error_report(const std::vector<int>& N, const std::vector<double>& err) {
    if (N.size() != err.size())
        throw std::invalid_argument("error report: level count mismatch");
    ErrorReport r;
    r.N = N;
    r.err = err;
    r.eoc.assign(N.size(), std::nan(""));
    for (size_t k = 1; k < N.size(); ++k) {
        if (N[k] <= N[k - 1]) throw std::invalid_argument("error report: N must increase");
        if (err[k] > 0.0 && err[k - 1] > 0.0)
            r.eoc[k] = std::log(err[k - 1] / err[k]) / std::log(double(N[k]) / N[k - 1]);
    }
    return r;
}

}  // namespace gcq
