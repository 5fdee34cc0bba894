#include "gcq/gcq.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "core/experiment.hpp"
#include "core/special.hpp"

namespace {

thread_local std::string g_error = "no error";

struct Column {
    std::string name;
    std::vector<double> v;
};

gcq_status fail(const std::string& msg, gcq_status code) {
    g_error = msg;
    return code;
}

template <class F>
gcq_status guarded(F&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        return fail(e.what(), GCQ_EINVAL);
    } catch (const std::domain_error& e) {
        return fail(e.what(), GCQ_EINVAL);
    } catch (const std::exception& e) {
        return fail(e.what(), GCQ_EFAIL);
    }
}

}  // namespace

struct gcq_run {
    std::vector<Column> cols;
};

extern "C" {

const char* gcq_last_error(void) { return g_error.c_str(); }

gcq_status gcq_convolve(const char* kernel, const char* tableau, const char* mesh,
                        double beta, const char* engine, double tol, gcq_run** out) {
    if (!kernel || !tableau || !mesh || !engine || !out)
        return fail("convolve: null argument", GCQ_EINVAL);
    return guarded([&]() {
        const gcq::Kernel k = gcq::kernel_parse(kernel);
        const gcq::Tableau& tb = gcq::tableau_by_name(tableau);
        const gcq::Mesh m = gcq::mesh_parse(mesh);
        auto f = [beta](double t) { return std::pow(t, beta); };
        std::vector<double> u;
        if (std::strcmp(engine, "direct") == 0) {
            u = gcq::gcq_direct(k, tb, m, f, tol);
        } else if (std::strcmp(engine, "fast") == 0) {
            u = gcq::gcq_fast(k, tb, m, f, gcq::default_window(m.steps()), tol);
        } else {
            throw std::invalid_argument("convolve: engine must be fast or direct");
        }
        auto* run = new gcq_run;
        const size_t R = m.t.size();
        run->cols = {{"t", m.t}, {"u", u}, {"exact", {}}, {"abs_error", {}}};
        run->cols[2].v.resize(R);
        run->cols[3].v.resize(R);
        for (size_t n = 0; n < R; ++n) {
            run->cols[2].v[n] = k.exact_power(beta, m.t[n]);
            run->cols[3].v[n] = std::abs(u[n] - run->cols[2].v[n]);
        }
        *out = run;
        return GCQ_OK;
    });
}

gcq_status gcq_fode_solve(double alpha, double beta1, double beta2, double sigma,
                          const char* mesh, const char* tableau, double tol,
                          gcq_run** out) {
    if (!mesh || !tableau || !out) return fail("fode: null argument", GCQ_EINVAL);
    return guarded([&]() {
        const gcq::Mesh m = gcq::mesh_parse(mesh);
        const gcq::Tableau& tb = gcq::tableau_by_name(tableau);
        const gcq::FodeProblem p = gcq::fode_two_singularity(alpha, beta1, beta2, sigma);
        const auto exact = gcq::fode_exact_solution(beta1, beta2, sigma);
        const gcq::SolverRun run = gcq::solve_fode(p, m, tb, tol);
        auto* r = new gcq_run;
        const size_t R = run.t.size();
        r->cols = {{"t", run.t}, {"u", {}}, {"exact", {}}, {"abs_error", {}}};
        for (int c = 1; c <= 3; ++c) r->cols[size_t(c)].v.resize(R);
        for (size_t n = 0; n < R; ++n) {
            r->cols[1].v[n] = run.u[n][0];
            r->cols[2].v[n] = exact(run.t[n]);
            r->cols[3].v[n] = std::abs(r->cols[1].v[n] - r->cols[2].v[n]);
        }
        *out = r;
        return GCQ_OK;
    });
}

gcq_status gcq_subdiffusion_solve(double alpha, int dim, int J, const char* mesh,
                                  const char* tableau, double tol, gcq_run** out) {
    if (!mesh || !tableau || !out) return fail("subdiffusion: null argument", GCQ_EINVAL);
    return guarded([&]() {
        const gcq::Mesh m = gcq::mesh_parse(mesh);
        const gcq::Tableau& tb = gcq::tableau_by_name(tableau);
        const gcq::SpatialOperator sp = gcq::compact_laplacian(dim, J, -1.0, 1.0);
        const gcq::SubdiffusionProblem p =
            gcq::subdiffusion_manufactured(alpha, dim, sp.points());
        const auto exact = gcq::subdiffusion_exact_solution(alpha, dim);
        const gcq::SolverRun run = gcq::solve_subdiffusion(p, sp, m, tb, tol);
        auto* r = new gcq_run;
        const size_t R = run.t.size();
        r->cols = {{"t", run.t}, {"norm", {}}, {"l2_error", {}}};
        r->cols[1].v.resize(R);
        r->cols[2].v.resize(R);
        const int nn = sp.subdivisions() - 1;
        std::vector<double> d(size_t(sp.points()));
        for (size_t n = 0; n < R; ++n) {
            r->cols[1].v[n] = sp.norm(run.u[n]);
            if (sp.dim() == 1) {
                for (int j = 0; j < nn; ++j)
                    d[size_t(j)] = run.u[n][size_t(j)] - exact(sp.coord(j), 0.0, run.t[n]);
            } else {
                for (int l = 0; l < nn; ++l)
                    for (int k = 0; k < nn; ++k)
                        d[size_t(l) * size_t(nn) + size_t(k)] =
                            run.u[n][size_t(l) * size_t(nn) + size_t(k)] -
                            exact(sp.coord(k), sp.coord(l), run.t[n]);
            }
            r->cols[2].v[n] = sp.norm(d);
        }
        *out = r;
        return GCQ_OK;
    });
}

gcq_status gcq_westervelt_solve(double alpha, double kappa, int J, const char* mesh,
                                const char* tableau, double tol, double fp_tol,
                                gcq_run** out) {
    if (!mesh || !tableau || !out) return fail("westervelt: null argument", GCQ_EINVAL);
    return guarded([&]() {
        const gcq::Mesh m = gcq::mesh_parse(mesh);
        const gcq::Tableau& tb = gcq::tableau_by_name(tableau);
        const gcq::SpatialOperator sp = gcq::compact_laplacian(1, J, 0.0, 2.0);
        gcq::WesterveltProblem p = gcq::westervelt_study(alpha, kappa, sp);
        p.fp_tol = fp_tol;
        const gcq::SolverRun run = gcq::solve_westervelt(p, sp, m, tb, tol);
        auto* r = new gcq_run;
        const size_t R = run.t.size();
        r->cols = {{"t", run.t}, {"norm", {}}};
        r->cols[1].v.resize(R);
        for (size_t n = 0; n < R; ++n) r->cols[1].v[n] = sp.norm(run.u[n]);
        *out = r;
        return GCQ_OK;
    });
}

gcq_status gcq_experiment_file(const char* path) {
    if (!path) return fail("experiment: null path", GCQ_EINVAL);
    return guarded([&]() {
        gcq::run_experiment(gcq::config_load(path));
        return GCQ_OK;
    });
}

gcq_status gcq_experiment_text(const char* text) {
    if (!text) return fail("experiment: null text", GCQ_EINVAL);
    return guarded([&]() {
        gcq::run_experiment(gcq::config_parse(text));
        return GCQ_OK;
    });
}

int gcq_run_rows(const gcq_run* run) {
    return run && !run->cols.empty() ? int(run->cols[0].v.size()) : 0;
}

int gcq_run_columns(const gcq_run* run) { return run ? int(run->cols.size()) : 0; }

const char* gcq_run_column_name(const gcq_run* run, int col) {
    if (!run || col < 0 || col >= int(run->cols.size())) return "";
    return run->cols[size_t(col)].name.c_str();
}

int gcq_run_values(const gcq_run* run, int col, double* buf, int cap) {
    if (!run || !buf || col < 0 || col >= int(run->cols.size()) || cap <= 0) return 0;
    const auto& v = run->cols[size_t(col)].v;
    const int n = std::min<int>(cap, int(v.size()));
    for (int i = 0; i < n; ++i) buf[i] = v[size_t(i)];
    return n;
}

void gcq_run_free(gcq_run* run) { delete run; }

gcq_status gcq_mittag_leffler(double a, double b, double x, double* out) {
    if (!out) return fail("mittag_leffler: null output", GCQ_EINVAL);
    return guarded([&]() {
        *out = gcq::mittag_leffler(a, b, x);
        return GCQ_OK;
    });
}

}  // extern "C"
