// Oblivious convolution engine: the last n0 steps are handled by contour
// quadrature around the window's resolvent poles, everything older lives in
// per-node states on the real-axis rule.  Memory is O(NQ_loc + NQ_his)
// node-vectors regardless of the step count.
//
// Streaming protocol per step n:
//   lag  = evaluate_lagged(tau_n)            (optional, pure)
//   Wnn  = diagonal_weight(tau_n)            (optional, pure)
//   U_n  = commit(tau_n, F_n)                == Wnn F_n + lag
// Solvers use the first two to close implicit equations before committing.
// The engine is multi-channel: one set of contours and chains drives any
// number of independent scalar convolutions (spatial eigenmodes).
#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "engine_direct.hpp"
#include "kernel.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "tableau.hpp"

namespace gcq {

struct MeshHint {
    double min_history_gap = 0.0;  // lower bound on t_n - t_{n-n0} over the run
    double horizon = 0.0;          // final time
};

// default window length for an N-step run
int default_window(int N);

// exact hint for a known mesh
MeshHint mesh_hint(const Mesh& m, int n0);

// Target contour node count for a step window: ceil(n0^E ln(n0)(ln n0 +
// ln(1/tol))) with E = max(1, ln(M)/(2 ln m)) from the window conditioning
// M = 5 max|1/lambda|/tau_min, m = min Re(1/lambda)/tau_max; degenerate
// logs are guarded and the result is clamped to [8, 4000].
int window_node_budget(const Tableau& tb, const std::vector<double>& taus, int n0,
                       double tol);

// W_{n,n} = tau int G(x) A (I + tau x A)^{-1} dx evaluated as the residue sum
// -sum_l w_l K(z_l) tau (I - tau z_l A)^{-1} A on a single-step contour
RMatS local_diagonal_weight(const Kernel& k, const Tableau& tb, double tau, double tol);

struct FastCensus {
    int nq_his = 0;        // history rule size
    int nq_loc_last = 0;   // contour size at the most recent commit
    int nq_loc_max = 0;
    long loc_visits = 0;   // contour node updates across all commits
    long his_visits = 0;   // history node updates (bridges + evictions)
    int peak_vectors = 0;  // high-water mark of stored node-vectors
    double wall_seconds = 0.0;
};

class FastConvolver {
  public:
    // channels = number of independent scalar convolutions sharing the mesh
    FastConvolver(Kernel k, const Tableau& tb, MeshHint hint, int n0, double tol,
                  int channels = 1, const RealRule* rule_override = nullptr);

    using StageData = std::vector<RVecS>;  // [channel] -> s stage values

    // contribution of all committed data to the upcoming step's stage output
    StageData evaluate_lagged(double tau) const;

    RMatS diagonal_weight(double tau) const;

    // advance by one step; returns the stage outputs U_n per channel
    StageData commit(double tau, const StageData& f);

    // advance without forming the committed sum; for solvers that already
    // consumed evaluate_lagged + diagonal_weight to close the step equation
    void push(double tau, const StageData& f);

    // single-channel convenience: returns u_n (last stage entry)
    double step(double tau, const RVecS& fstages);

    const FastCensus& census() const { return census_; }
    int steps_done() const { return n_; }
    int channels() const { return channels_; }
    const Tableau& tableau() const { return tb_; }

  private:
    StageData assemble(double tau, const StageData* fn) const;

    Kernel k_;
    const Tableau& tb_;
    MeshHint hint_;
    int n0_;
    double tol_;
    int channels_;
    RealRule rule_;
    std::vector<double> yhis_;  // [node * channels + channel]
    struct WinEntry {
        double tau;
        StageData f;
    };
    std::deque<WinEntry> window_;  // retained committed steps, oldest first
    int n_ = 0;
    double t_now_ = 0.0;
    double t_fold_ = 0.0;
    bool history_started_ = false;
    mutable FastCensus census_;  // assemble is const yet keeps the counters live
};

// whole-mesh convenience driver
std::vector<double> gcq_fast(const Kernel& k, const Tableau& tb, const Mesh& mesh,
                             const std::function<double(double)>& f, int n0, double tol,
                             const RealRule* rule_override = nullptr,
                             FastCensus* census_out = nullptr);

}  // namespace gcq
