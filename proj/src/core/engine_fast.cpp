#include "engine_fast.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcq {

int default_window(int N) {
    if (N < 1) throw std::invalid_argument("default_window: need N >= 1");
    return std::min(5, N);
}

MeshHint mesh_hint(const Mesh& m, int n0) {
    const int N = m.steps();
    if (n0 < 1 || N < 1) throw std::invalid_argument("mesh_hint: need n0 >= 1 and a nonempty mesh");
    MeshHint h;
    h.horizon = m.horizon();
    double gap = h.horizon;
    for (int n = n0 + 1; n <= N; ++n) gap = std::min(gap, m.t[n] - m.t[n - n0]);
    h.min_history_gap = gap;
    return h;
}

int window_node_budget(const Tableau& tb, const std::vector<double>& taus, int n0,
                       double tol) {
    if (taus.empty() || n0 < 1)
        throw std::invalid_argument("window budget: need a nonempty window");
    if (!(tol > 0.0)) throw std::invalid_argument("window budget: tol must be positive");
    const double tmin = *std::min_element(taus.begin(), taus.end());
    const double tmax = *std::max_element(taus.begin(), taus.end());
    if (!(tmin > 0.0)) throw std::invalid_argument("window budget: steps must be positive");
    double lmax = 0.0, lremin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < tb.s; ++i) {
        const cplx linv = 1.0 / tb.lambda[i];
        lmax = std::max(lmax, std::abs(linv));
        lremin = std::min(lremin, linv.real());
    }
    const double M = 5.0 * lmax / tmin;
    const double m = lremin / tmax;
    // exponent compensates poorly conditioned windows; near-degenerate
    // log(m) would blow it up, so fall back to the flat rate there
    double E = 1.0;
    if (std::log(m) >= 1e-2) E = std::max(1.0, 0.5 * std::log(M) / std::log(m));
    const double n = double(n0);
    const double raw = std::pow(n, E) * std::log(n) * (std::log(n) + std::log(1.0 / tol));
    if (!(raw < 4000.0)) return 4000;  // also catches overflow of n^E
    return std::max(8, int(std::ceil(raw)));
}

namespace {

std::vector<cplx> resolvent_poles(const Tableau& tb, const std::vector<double>& taus) {
    std::vector<cplx> poles;
    poles.reserve(taus.size() * size_t(tb.s));
    for (double tj : taus)
        for (int i = 0; i < tb.s; ++i) poles.push_back(1.0 / (tj * tb.lambda[i]));
    return poles;
}

}  // namespace

RMatS local_diagonal_weight(const Kernel& k, const Tableau& tb, double tau, double tol) {
    if (!(tau > 0.0)) throw std::invalid_argument("diagonal weight: step must be positive");
    const ContourRule cr = build_pole_contour(resolvent_poles(tb, {tau}), tol,
                                              window_node_budget(tb, {tau}, 1, tol));
    const int s = tb.s;
    CMatS acc(s);
    for (size_t l = 0; l < cr.z.size(); ++l) {
        const cplx wk = -cr.w[l] * k.K(cr.z[l]);
        const CMatS res = tb.stage_resolvent(tau * cr.z[l]);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                cplx ra{};
                for (int p = 0; p < s; ++p) ra += res(i, p) * tb.A(p, j);
                acc(i, j) += wk * tau * ra;
            }
    }
    const RMatS w = real_part(acc);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (!std::isfinite(w(i, j)))
                throw std::runtime_error("diagonal weight: contour sum overflowed");
    return w;
}

FastConvolver::FastConvolver(Kernel k, const Tableau& tb, MeshHint hint, int n0,
                             double tol, int channels, const RealRule* rule_override)
    : k_(std::move(k)), tb_(tb), hint_(hint), n0_(n0), tol_(tol), channels_(channels) {
    if (n0_ < 1) throw std::invalid_argument("fast engine: window needs at least one step");
    if (!(tol_ >= 1e-15))
        throw std::invalid_argument("fast engine: tolerances below 1e-15 are not attainable");
    if (channels_ < 1) throw std::invalid_argument("fast engine: need at least one channel");
    if (!(hint_.min_history_gap > 0.0) || !(hint_.horizon >= hint_.min_history_gap))
        throw std::invalid_argument("fast engine: hint needs 0 < min_history_gap <= horizon");
    rule_ = rule_override
                ? *rule_override
                : default_history_rule(k_, hint_.min_history_gap, hint_.horizon, tol_);
    yhis_.assign(rule_.x.size() * size_t(channels_), 0.0);
    census_.nq_his = int(rule_.x.size());
    census_.peak_vectors = census_.nq_his;
}

FastConvolver::StageData FastConvolver::assemble(double tau, const StageData* fn) const {
    if (!(tau > 0.0)) throw std::invalid_argument("fast engine: step must be positive");
    const int s = tb_.s, C = channels_;
    if (fn) {
        if (int(fn->size()) != C)
            throw std::invalid_argument("fast engine: channel count mismatch");
        for (const RVecS& g : *fn)
            if (g.n != s) throw std::invalid_argument("fast engine: stage count mismatch");
    }
    if (history_started_) {
        const double gap = t_now_ + tau - t_fold_;
        if (gap < hint_.min_history_gap * (1.0 - 1e-9))
            throw std::runtime_error(
                "fast engine: step gap undercuts min_history_gap; the streamed mesh "
                "violates the hint this engine was built for");
    }

    // contour enclosing the resolvent poles of every step in the local range
    std::vector<double> taus;
    taus.reserve(window_.size() + 1);
    for (const WinEntry& e : window_) taus.push_back(e.tau);
    taus.push_back(tau);
    const int budget = window_node_budget(tb_, taus, int(taus.size()), tol_);
    const ContourRule cr = build_pole_contour(resolvent_poles(tb_, taus), tol_, budget);
    const size_t NQ = cr.z.size();

    StageData u(static_cast<size_t>(C), RVecS(s));

    // local part: discrete stage solutions of dy/dt = z y + f along the
    // window, scalar chain per channel, one factorization per (node, step)
    std::vector<cplx> q(static_cast<size_t>(C));
    SVec<cplx> fst(s);
    for (size_t l = 0; l < NQ; ++l) {
        const cplx x = -cr.z[l];
        const cplx wk = -cr.w[l] * k_.K(cr.z[l]);
        std::fill(q.begin(), q.end(), cplx(0.0));
        for (const WinEntry& e : window_) {
            const SLU<cplx> lu(rk_node_matrix(tb_, e.tau, x));
            for (int c = 0; c < C; ++c) {
                for (int i = 0; i < s; ++i) fst[i] = e.f[size_t(c)][i];
                q[size_t(c)] = lu.solve(rk_node_rhs(tb_, e.tau, q[size_t(c)], fst))[s - 1];
            }
        }
        const SLU<cplx> lu(rk_node_matrix(tb_, tau, x));
        for (int c = 0; c < C; ++c) {
            for (int i = 0; i < s; ++i) fst[i] = fn ? (*fn)[size_t(c)][i] : 0.0;
            const SVec<cplx> Y = lu.solve(rk_node_rhs(tb_, tau, q[size_t(c)], fst));
            for (int i = 0; i < s; ++i) u[size_t(c)][i] += (wk * Y[i]).real();
        }
    }
    census_.loc_visits += long(NQ) * long(taus.size());
    census_.nq_loc_last = int(NQ);
    census_.nq_loc_max = std::max(census_.nq_loc_max, int(NQ));

    // history part: states at the fold time propagated forcing-free across
    // the retained steps, then bridged to the new step's stages
    if (history_started_) {
        const size_t Lh = rule_.x.size();
        for (size_t m = 0; m < Lh; ++m) {
            const double xt = rule_.x[m] + k_.shift;
            double grow = 1.0;
            for (const WinEntry& e : window_) grow *= tb_.rvec(-e.tau * xt)[s - 1];
            const RVecS rv = tb_.rvec(-tau * xt);
            const double base = rule_.w[m] * k_.G(rule_.x[m]) * grow;
            for (int c = 0; c < C; ++c) {
                const double contrib = base * yhis_[m * size_t(C) + size_t(c)];
                for (int i = 0; i < s; ++i) u[size_t(c)][i] += contrib * rv[i];
            }
        }
        census_.his_visits += long(Lh);
    }

    for (int c = 0; c < C; ++c)
        for (int i = 0; i < s; ++i)
            if (!std::isfinite(u[size_t(c)][i]))
                throw std::runtime_error("fast engine: stage output overflowed");

    const int vecs = census_.nq_his + int(NQ) + int(window_.size() + 1) * s;
    census_.peak_vectors = std::max(census_.peak_vectors, vecs);
    return u;
}

FastConvolver::StageData FastConvolver::evaluate_lagged(double tau) const {
    if (n_ == 0) return StageData(size_t(channels_), RVecS(tb_.s));
    return assemble(tau, nullptr);
}

RMatS FastConvolver::diagonal_weight(double tau) const {
    return local_diagonal_weight(k_, tb_, tau, tol_);
}

FastConvolver::StageData FastConvolver::commit(double tau, const StageData& f) {
    StageData u = assemble(tau, &f);
    push(tau, f);
    return u;
}

void FastConvolver::push(double tau, const StageData& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(tau > 0.0)) throw std::invalid_argument("fast engine: step must be positive");
    if (int(f.size()) != channels_)
        throw std::invalid_argument("fast engine: channel count mismatch");
    for (const RVecS& g : f)
        if (g.n != tb_.s) throw std::invalid_argument("fast engine: stage count mismatch");
    window_.push_back({tau, f});
    n_ += 1;
    t_now_ += tau;
    if (int(window_.size()) == n0_) {
        // fold the oldest retained step into the real-axis states
        const WinEntry& e = window_.front();
        const int s = tb_.s, C = channels_;
        const size_t Lh = rule_.x.size();
        SVec<double> fst(s);
        for (size_t m = 0; m < Lh; ++m) {
            const double xt = rule_.x[m] + k_.shift;
            const SLU<double> lu(rk_node_matrix(tb_, e.tau, xt));
            for (int c = 0; c < C; ++c) {
                for (int i = 0; i < s; ++i) fst[i] = e.f[size_t(c)][i];
                double& y = yhis_[m * size_t(C) + size_t(c)];
                y = lu.solve(rk_node_rhs(tb_, e.tau, y, fst))[s - 1];
            }
        }
        census_.his_visits += long(Lh);
        t_fold_ += e.tau;
        history_started_ = true;
        window_.pop_front();
    }
    census_.wall_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double FastConvolver::step(double tau, const RVecS& fstages) {
    const StageData u = commit(tau, StageData{fstages});
    return u[0][tb_.s - 1];
}

std::vector<double> gcq_fast(const Kernel& k, const Tableau& tb, const Mesh& mesh,
                             const std::function<double(double)>& f, int n0, double tol,
                             const RealRule* rule_override, FastCensus* census_out) {
    const int N = mesh.steps(), s = tb.s;
    FastConvolver fc(k, tb, mesh_hint(mesh, n0), n0, tol, 1, rule_override);
    std::vector<double> u(size_t(N) + 1, 0.0);
    RVecS fst(s);
    for (int n = 1; n <= N; ++n) {
        const double tau = mesh.tau(n);
        for (int i = 0; i < s; ++i) fst[i] = f(mesh.t[n - 1] + tb.c[i] * tau);
        u[size_t(n)] = fc.step(tau, fst);
    }
    if (census_out) *census_out = fc.census();
    return u;
}

}  // namespace gcq
