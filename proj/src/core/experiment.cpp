#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gcq {

namespace {

constexpr double pi = std::numbers::pi;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string tok;
    for (char ch : s + ",") {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!tok.empty()) {
                out.push_back(std::stoi(tok));
                tok.clear();
            }
        } else {
            tok += ch;
        }
    }
    if (out.empty()) throw std::invalid_argument("config: N list is empty");
    return out;
}

std::string resolve_kind(const ExperimentConfig& cfg) {
    if (!cfg.kind.empty()) return cfg.kind;
    if (cfg.id == "example1" || cfg.id == "example2") return "convolve";
    if (cfg.id == "example3") return "fode";
    if (cfg.id == "example4") return "subdiffusion";
    if (cfg.id == "example5") return "westervelt";
    if (cfg.id == "convolve" || cfg.id == "fode" || cfg.id == "subdiffusion" ||
        cfg.id == "westervelt")
        return cfg.id;
    throw std::invalid_argument("experiment: id '" + cfg.id +
                                "' needs an explicit kind (convolve | fode | "
                                "subdiffusion | westervelt)");
}

double parse_power_data(const std::string& data) {
    if (data.rfind("t^", 0) != 0)
        throw std::invalid_argument("experiment: data must be of the form t^<beta>");
    return std::stod(data.substr(2));
}

struct LevelResult {
    double tau_max = 0.0;
    double err = 0.0;
    std::string csv_name;
    std::string csv_text;
    std::string diag;
};

std::string census_json(const FastCensus& cs) {
    std::ostringstream os;
    os << "\"nq_his\":" << cs.nq_his << ",\"nq_loc_last\":" << cs.nq_loc_last
       << ",\"nq_loc_max\":" << cs.nq_loc_max << ",\"loc_visits\":" << cs.loc_visits
       << ",\"his_visits\":" << cs.his_visits << ",\"peak_vectors\":" << cs.peak_vectors
       << ",\"wall_seconds\":" << fmt17(cs.wall_seconds);
    return os.str();
}

}  // namespace

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int thread_cap() {
    const char* e = std::getenv("GCQ_THREADS");
    if (!e || !*e) return 1;
    const int v = std::atoi(e);
    return std::clamp(v, 1, 64);
}

ExperimentConfig config_parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno += 1;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "id") cfg.id = val;
        else if (key == "kind") cfg.kind = val;
        else if (key == "kernel") cfg.kernel = val;
        else if (key == "data") cfg.data = val;
        else if (key == "tableau") cfg.tableau = val;
        else if (key == "mesh") cfg.mesh = val;
        else if (key == "T") cfg.T = std::stod(val);
        else if (key == "gamma") cfg.gamma = std::stod(val);
        else if (key == "gamma1") cfg.gamma1 = std::stod(val);
        else if (key == "gamma2") cfg.gamma2 = std::stod(val);
        else if (key == "sigma") cfg.sigma = std::stod(val);
        else if (key == "N") cfg.N = parse_int_list(val);
        else if (key == "engine") cfg.engine = val;
        else if (key == "tol") cfg.tol = std::stod(val);
        else if (key == "alpha") cfg.alpha = std::stod(val);
        else if (key == "beta1") cfg.beta1 = std::stod(val);
        else if (key == "beta2") cfg.beta2 = std::stod(val);
        else if (key == "kappa") cfg.kappa = std::stod(val);
        else if (key == "fp_tol") cfg.fp_tol = std::stod(val);
        else if (key == "J") cfg.J = std::stoi(val);
        else if (key == "dim") cfg.dim = std::stoi(val);
        else if (key == "seed") cfg.seed = unsigned(std::stoul(val));
        else if (key == "out") cfg.out = val;
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    for (size_t k = 1; k < cfg.N.size(); ++k)
        if (cfg.N[k] <= cfg.N[k - 1])
            throw std::invalid_argument("config: N list must increase strictly");
    return cfg;
}

ExperimentConfig config_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_parse(ss.str());
}

Mesh experiment_mesh(const ExperimentConfig& cfg, int N) {
    if (cfg.mesh == "uniform") return mesh_uniform(cfg.T, N);
    if (cfg.mesh == "graded") return mesh_graded(cfg.T, N, cfg.gamma);
    if (cfg.mesh == "twosing")
        return mesh_two_singularities(cfg.T, N, cfg.sigma, cfg.gamma1, cfg.gamma2);
    if (cfg.mesh == "random") return mesh_random(cfg.T, N, cfg.seed);
    throw std::invalid_argument("experiment: unknown mesh family '" + cfg.mesh + "'");
}

std::vector<EocRow> eoc_table(const std::vector<std::pair<int, double>>& errors) {
    std::vector<EocRow> rows;
    rows.reserve(errors.size());
    for (size_t k = 0; k < errors.size(); ++k) {
        EocRow r;
        r.N = errors[k].first;
        r.err = errors[k].second;
        if (k == 0) {
            r.eoc = std::nan("");
        } else {
            if (errors[k].first != 2 * errors[k - 1].first)
                throw std::invalid_argument("eoc table: step counts must double");
            r.eoc = std::log2(errors[k - 1].second / errors[k].second);
        }
        rows.push_back(r);
    }
    return rows;
}

FodeProblem fode_two_singularity(double alpha, double beta1, double beta2, double sigma) {
    if (!(beta2 > alpha))
        throw std::invalid_argument("fode study: needs beta2 > alpha");
    FodeProblem p;
    p.alpha = alpha;
    p.u0 = 1.0;
    auto exact = fode_exact_solution(beta1, beta2, sigma);
    p.f = [=](double t) {
        double v = exact(t) + std::tgamma(beta1 + 1.0) / std::tgamma(beta1 - alpha + 1.0) *
                                  std::pow(t, beta1 - alpha);
        if (t > sigma)
            v += std::tgamma(beta2 + 1.0) / std::tgamma(beta2 - alpha + 1.0) *
                 std::pow(t - sigma, beta2 - alpha);
        return v;
    };
    return p;
}

std::function<double(double)> fode_exact_solution(double beta1, double beta2, double sigma) {
    return [=](double t) {
        double v = 1.0 + std::pow(t, beta1);
        if (t > sigma) v += std::pow(t - sigma, beta2);
        return v;
    };
}

SubdiffusionProblem subdiffusion_manufactured(double alpha, int dim, int points) {
    SubdiffusionProblem p;
    p.alpha = alpha;
    p.f = [alpha, dim](double x, double y, double t) {
        const double shape =
            std::cos(0.5 * pi * x) * (dim == 2 ? std::cos(0.5 * pi * y) : 1.0);
        return (std::tgamma(1.0 + alpha) + dim * 0.25 * pi * pi * std::pow(t, alpha)) *
               shape;
    };
    p.u0.assign(static_cast<size_t>(points), 0.0);
    return p;
}

std::function<double(double, double, double)> subdiffusion_exact_solution(double alpha,
                                                                          int dim) {
    return [alpha, dim](double x, double y, double t) {
        return std::pow(t, alpha) * std::cos(0.5 * pi * x) *
               (dim == 2 ? std::cos(0.5 * pi * y) : 1.0);
    };
}

WesterveltProblem westervelt_study(double alpha, double kappa, const SpatialOperator& sp) {
    WesterveltProblem p;
    p.alpha = alpha;
    p.kappa = kappa;
    p.f = [](double x, double t) { return (1.0 + std::log(t)) * std::sin(pi * x); };
    p.v0.resize(static_cast<size_t>(sp.points()));
    for (int j = 0; j < sp.points(); ++j) p.v0[size_t(j)] = std::sin(pi * sp.coord(j));
    return p;
}

namespace {

LevelResult run_level_convolve(const ExperimentConfig& cfg, int N) {
    const Kernel k = kernel_parse(cfg.kernel);
    const Tableau& tb = tableau_by_name(cfg.tableau);
    const double beta = parse_power_data(cfg.data);
    const Mesh m = experiment_mesh(cfg, N);
    auto f = [beta](double t) { return std::pow(t, beta); };

    std::vector<double> u;
    FastCensus cs{};
    if (cfg.engine == "direct") {
        u = gcq_direct(k, tb, m, f, cfg.tol);
    } else if (cfg.engine == "fast") {
        u = gcq_fast(k, tb, m, f, default_window(N), cfg.tol, nullptr, &cs);
    } else {
        throw std::invalid_argument("experiment: unknown engine '" + cfg.engine + "'");
    }

    LevelResult r;
    r.tau_max = m.tau_max();
    std::ostringstream csv;
    csv << "n,t,u,exact,abs_error\n";
    for (int n = 0; n <= N; ++n) {
        const double ex = k.exact_power(beta, m.t[size_t(n)]);
        const double gap = std::abs(u[size_t(n)] - ex);
        if (n >= 1) r.err = std::max(r.err, gap);
        csv << n << ',' << fmt17(m.t[size_t(n)]) << ',' << fmt17(u[size_t(n)]) << ','
            << fmt17(ex) << ',' << fmt17(gap) << '\n';
    }
    r.csv_text = csv.str();
    std::ostringstream diag;
    diag << "{\"id\":\"" << cfg.id << "\",\"kind\":\"convolve\",\"N\":" << N
         << ",\"engine\":\"" << cfg.engine << "\",\"max_err\":" << fmt17(r.err) << ','
         << census_json(cs) << "}";
    r.diag = diag.str();
    return r;
}

double grid_l2_gap(const SpatialOperator& sp, const std::vector<double>& u,
                   const std::function<double(double, double, double)>& exact, double t) {
    const int n = sp.subdivisions() - 1;
    std::vector<double> d(u.size());
    if (sp.dim() == 1) {
        for (int j = 0; j < n; ++j) d[size_t(j)] = u[size_t(j)] - exact(sp.coord(j), 0.0, t);
    } else {
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                d[size_t(l) * size_t(n) + size_t(k)] =
                    u[size_t(l) * size_t(n) + size_t(k)] - exact(sp.coord(k), sp.coord(l), t);
    }
    return sp.norm(d);
}

LevelResult run_level_fode(const ExperimentConfig& cfg, int N) {
    const Tableau& tb = tableau_by_name(cfg.tableau);
    const Mesh m = experiment_mesh(cfg, N);
    const FodeProblem p =
        fode_two_singularity(cfg.alpha, cfg.beta1, cfg.beta2, cfg.sigma);
    const auto exact = fode_exact_solution(cfg.beta1, cfg.beta2, cfg.sigma);
    const SolverRun run = solve_fode(p, m, tb, cfg.tol);

    LevelResult r;
    r.tau_max = m.tau_max();
    std::ostringstream csv;
    csv << "n,t,u,exact,abs_error\n";
    for (int n = 0; n <= N; ++n) {
        const double ex = exact(run.t[size_t(n)]);
        const double gap = std::abs(run.u[size_t(n)][0] - ex);
        if (n >= 1) r.err = std::max(r.err, gap);
        csv << n << ',' << fmt17(run.t[size_t(n)]) << ',' << fmt17(run.u[size_t(n)][0])
            << ',' << fmt17(ex) << ',' << fmt17(gap) << '\n';
    }
    r.csv_text = csv.str();
    std::ostringstream diag;
    diag << "{\"id\":\"" << cfg.id << "\",\"kind\":\"fode\",\"N\":" << N
         << ",\"max_err\":" << fmt17(r.err) << ',' << census_json(run.census) << "}";
    r.diag = diag.str();
    return r;
}

LevelResult run_level_subdiffusion(const ExperimentConfig& cfg, int N) {
    const Tableau& tb = tableau_by_name(cfg.tableau);
    const Mesh m = experiment_mesh(cfg, N);
    const SpatialOperator sp = compact_laplacian(cfg.dim, cfg.J, -1.0, 1.0);
    const SubdiffusionProblem p = subdiffusion_manufactured(cfg.alpha, cfg.dim, sp.points());
    const auto exact = subdiffusion_exact_solution(cfg.alpha, cfg.dim);
    const SolverRun run = solve_subdiffusion(p, sp, m, tb, cfg.tol);

    LevelResult r;
    r.tau_max = m.tau_max();
    double max_gap = 0.0;
    std::ostringstream csv;
    csv << "n,t,norm,l2_error\n";
    for (int n = 0; n <= N; ++n) {
        const double gap = grid_l2_gap(sp, run.u[size_t(n)], exact, run.t[size_t(n)]);
        if (n >= 1) max_gap = std::max(max_gap, gap);
        csv << n << ',' << fmt17(run.t[size_t(n)]) << ',' << fmt17(sp.norm(run.u[size_t(n)]))
            << ',' << fmt17(gap) << '\n';
    }
    // the study's error metric is the final-time gap
    r.err = grid_l2_gap(sp, run.u[size_t(N)], exact, run.t[size_t(N)]);
    r.csv_text = csv.str();
    std::ostringstream diag;
    diag << "{\"id\":\"" << cfg.id << "\",\"kind\":\"subdiffusion\",\"N\":" << N
         << ",\"final_err\":" << fmt17(r.err) << ",\"max_err\":" << fmt17(max_gap) << ','
         << census_json(run.census) << "}";
    r.diag = diag.str();
    return r;
}

LevelResult run_level_westervelt(const ExperimentConfig& cfg, int N) {
    const Tableau& tb = tableau_by_name(cfg.tableau);
    const SpatialOperator sp = compact_laplacian(1, cfg.J, 0.0, 2.0);
    WesterveltProblem p = westervelt_study(cfg.alpha, cfg.kappa, sp);
    p.fp_tol = cfg.fp_tol;
    const SolverRun coarse = solve_westervelt(p, sp, experiment_mesh(cfg, N), tb, cfg.tol);
    const SolverRun fine = solve_westervelt(p, sp, experiment_mesh(cfg, 2 * N), tb, cfg.tol);

    LevelResult r;
    r.tau_max = experiment_mesh(cfg, N).tau_max();
    r.err = refinement_gap(coarse, fine, &sp);
    std::ostringstream csv;
    csv << "n,t,norm\n";
    for (size_t n = 0; n < coarse.t.size(); ++n)
        csv << n << ',' << fmt17(coarse.t[n]) << ',' << fmt17(sp.norm(coarse.u[n])) << '\n';
    r.csv_text = csv.str();
    std::ostringstream diag;
    diag << "{\"id\":\"" << cfg.id << "\",\"kind\":\"westervelt\",\"N\":" << N
         << ",\"ref_gap\":" << fmt17(r.err) << ",\"fp_total\":" << coarse.fp_iterations_total
         << ",\"fp_max\":" << coarse.fp_iterations_max << ',' << census_json(coarse.census)
         << "}";
    r.diag = diag.str();
    return r;
}

LevelResult run_level(const ExperimentConfig& cfg, const std::string& kind, int N) {
    if (kind == "convolve") return run_level_convolve(cfg, N);
    if (kind == "fode") return run_level_fode(cfg, N);
    if (kind == "subdiffusion") return run_level_subdiffusion(cfg, N);
    if (kind == "westervelt") return run_level_westervelt(cfg, N);
    throw std::invalid_argument("experiment: unknown kind '" + kind + "'");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("experiment: cannot write " + path);
    out << text;
}

}  // namespace

ExperimentOutputs run_experiment(const ExperimentConfig& cfg) {
    if (cfg.N.empty()) throw std::invalid_argument("experiment: N list is empty");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("experiment: tol must be positive");
    const std::string kind = resolve_kind(cfg);

    const size_t levels = cfg.N.size();
    std::vector<LevelResult> results(levels);
    std::vector<std::exception_ptr> errors(levels);

    const int workers = std::min<int>(thread_cap(), int(levels));
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= levels) return;
            try {
                results[i] = run_level(cfg, kind, cfg.N[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (size_t i = 0; i < levels; ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw std::runtime_error("experiment level N=" + std::to_string(cfg.N[i]) +
                                         " failed: " + e.what());
            }
        }
    }

    ExperimentOutputs out;
    std::vector<double> errs(levels);
    for (size_t i = 0; i < levels; ++i) errs[i] = results[i].err;
    out.report = error_report(cfg.N, errs);

    for (size_t i = 0; i < levels; ++i) {
        const std::string name = cfg.out + "_N" + std::to_string(cfg.N[i]) + ".csv";
        write_file(name, results[i].csv_text);
        out.files.push_back(name);
    }

    std::ostringstream etab;
    etab << "N,tau_max,max_err,eoc\n";
    for (size_t i = 0; i < levels; ++i) {
        etab << cfg.N[i] << ',' << fmt17(results[i].tau_max) << ',' << fmt17(results[i].err)
             << ',';
        if (i > 0 && !std::isnan(out.report.eoc[i])) etab << fmt17(out.report.eoc[i]);
        etab << '\n';
    }
    const std::string ename = cfg.out + "_errors.csv";
    write_file(ename, etab.str());
    out.files.push_back(ename);

    std::ostringstream diag;
    for (size_t i = 0; i < levels; ++i) diag << results[i].diag << '\n';
    const std::string dname = cfg.out + "_diag.jsonl";
    write_file(dname, diag.str());
    out.files.push_back(dname);
    return out;
}

}  // namespace gcq
