// Experiment harness: flat key=value configs, convergence sweeps over step
// counts, CSV/JSON-lines artifacts.  Each shipped study id maps to one of
// four run kinds: a plain convolution against a closed-form value, the
// scalar fractional ODE, the subdiffusion equation, or the damped wave
// model with a self-convergence reference.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "solvers.hpp"

namespace gcq {

struct ExperimentConfig {
    std::string id = "custom";     // example1..example5, or a run kind
    std::string kind;              // convolve | fode | subdiffusion | westervelt
    std::string kernel;            // convolution runs, e.g. "fracint:alpha=0.5"
    std::string data = "t^0";      // convolution forcing, "t^<beta>"
    std::string tableau = "radau2";
    std::string mesh = "graded";   // uniform | graded | twosing | random
    double T = 1.0;
    double gamma = 3.0;
    double gamma1 = 0.0, gamma2 = 0.0, sigma = 0.0;  // twosing parameters
    std::vector<int> N;
    std::string engine = "fast";   // fast | direct (convolution runs only)
    double tol = 1e-12;
    double alpha = 0.5;
    double beta1 = 0.5, beta2 = 0.9;  // fode exact-solution exponents
    double kappa = 0.0;
    double fp_tol = 1e-8;
    int J = 32;
    int dim = 2;
    unsigned seed = 1;
    std::string out = "gcq";
};

// one "key = value" assignment per line, '#' comments; unknown keys reject
ExperimentConfig config_parse(const std::string& text);
ExperimentConfig config_load(const std::string& path);

// mesh family of the config instantiated at a given step count
Mesh experiment_mesh(const ExperimentConfig& cfg, int N);

struct EocRow {
    int N = 0;
    double err = 0.0;
    double eoc = 0.0;  // NaN on the first row
};

// pairwise orders for a doubling sequence of step counts
std::vector<EocRow> eoc_table(const std::vector<std::pair<int, double>>& errors);

struct ExperimentOutputs {
    std::vector<std::string> files;
    ErrorReport report;
};

// runs every level of the sweep (GCQ_THREADS levels at a time), writes one
// solution CSV per level, an error-table CSV, and a diagnostics JSON-lines
// file; throws on the first failing level
ExperimentOutputs run_experiment(const ExperimentConfig& cfg);

// worker cap from GCQ_THREADS (default 1)
int thread_cap();

// full 17-significant-digit decimal, the repo-wide CSV number format
std::string fmt17(double x);

// closed-form problem families the shipped studies use
FodeProblem fode_two_singularity(double alpha, double beta1, double beta2, double sigma);
std::function<double(double)> fode_exact_solution(double beta1, double beta2, double sigma);
SubdiffusionProblem subdiffusion_manufactured(double alpha, int dim, int points);
std::function<double(double, double, double)> subdiffusion_exact_solution(double alpha,
                                                                          int dim);
WesterveltProblem westervelt_study(double alpha, double kappa, const SpatialOperator& sp);

}  // namespace gcq
