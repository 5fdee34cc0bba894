#include "engine_direct.hpp"

#include <cmath>
#include <stdexcept>

namespace gcq {

RealRule default_history_rule(const Kernel& k, double t_lo, double t_hi, double tol) {
    if (!k.prefers_log_rule) return build_history_rule(k.alpha, t_lo, t_hi, tol);
    // log-space trapezoid: step fixed, lower truncation scaled so the
    // x^{1-alpha} tail mass stays below a tenth of tol
    const double h = 3.0 / 40.0;
    int mtilde = std::max(400, int(std::ceil(
        k.alpha / (1.0 - k.alpha) * std::log(10.0 / tol) / h)));
    return build_log_trapezoid_rule(k.alpha, h, mtilde, 400);
}

std::vector<double> gcq_direct(const Kernel& k, const Tableau& tb, const Mesh& mesh,
                               const std::function<double(double)>& f, double tol,
                               const RealRule* rule_override) {
    const RealRule rule = rule_override
                              ? *rule_override
                              : default_history_rule(k, mesh.tau_min(), mesh.horizon(), tol);
    const int N = mesh.steps(), L = int(rule.x.size()), s = tb.s;

    std::vector<double> y(L, 0.0);  // y_{n-1}(x_l + shift)
    std::vector<double> u(N + 1, 0.0);
    RVecS fst(s);
    for (int n = 1; n <= N; ++n) {
        const double tau = mesh.tau(n);
        for (int i = 0; i < s; ++i) fst[i] = f(mesh.t[n - 1] + tb.c[i] * tau);
        double acc = 0.0, comp = 0.0;
        for (int l = 0; l < L; ++l) {
            RVecS st = rk_node_step(tb, tau, rule.x[l] + k.shift, y[l], fst);
            y[l] = st[s - 1];
            double term = rule.w[l] * k.G(rule.x[l]) * y[l];
            double t0 = acc + term;  // Kahan: L can reach a few thousand
            comp += std::abs(acc) >= std::abs(term) ? (acc - t0) + term : (term - t0) + acc;
            acc = t0;
        }
        u[n] = acc + comp;
        if (!std::isfinite(u[n]))
            throw std::runtime_error("gcq_direct: non-finite output (unstable step?)");
    }
    return u;
}

WeightTable gcq_weights(const Kernel& k, const Tableau& tb, const Mesh& mesh, double tol,
                        const RealRule* rule_override) {
    const RealRule rule = rule_override
                              ? *rule_override
                              : default_history_rule(k, mesh.tau_min(), mesh.horizon(), tol);
    const int N = mesh.steps(), L = int(rule.x.size()), s = tb.s;

    WeightTable wt;
    wt.N = N;
    wt.s = s;
    wt.W.assign(size_t(N) * (N + 1) / 2, RMatS(s));

    // per node: rows r_j = e_s^T A (I + tau_j x A)^{-1} (fixed once j passes)
    // and the running scalar rho_j = prod_{l=j+1..n-1} R(-tau_l x); then
    //   W_{n,j} = tau_j int G(x) rvec(-tau_n x) rho_j r_j dx   (n > j)
    //   W_{n,n} = tau_n int G(x) A (I + tau_n x A)^{-1} dx
    std::vector<RVecS> rows(size_t(N) * L, RVecS(s));
    std::vector<double> rho(size_t(N) * L, 0.0);

    for (int n = 1; n <= N; ++n) {
        const double tau = mesh.tau(n);
        for (int l = 0; l < L; ++l) {
            const double x = rule.x[l] + k.shift;
            const double gw = rule.w[l] * k.G(rule.x[l]);
            RMatS m(s);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j)
                    m(i, j) = (i == j ? 1.0 : 0.0) + tau * x * tb.A(i, j);
            SLU<double> lu(std::move(m));

            // diagonal block: columns of A solved in place
            RMatS blk(s);
            for (int c = 0; c < s; ++c) {
                RVecS col(s);
                for (int i = 0; i < s; ++i) col[i] = tb.A(i, c);
                RVecS sol = lu.solve(col);
                for (int i = 0; i < s; ++i) blk(i, c) = sol[i];
            }
            RMatS& wnn = wt.at(n, n);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) wnn(i, j) += tau * gw * blk(i, j);

            // older blocks: rank-one update through rvec(-tau x)
            RVecS ones(s, 1.0);
            RVecS rv = lu.solve(ones);
            for (int j = 1; j < n; ++j) {
                const RVecS& r = rows[size_t(j - 1) * L + l];
                double sc = mesh.tau(j) * gw * rho[size_t(j - 1) * L + l];
                RMatS& wnj = wt.at(n, j);
                for (int a = 0; a < s; ++a)
                    for (int b = 0; b < s; ++b) wnj(a, b) += sc * rv[a] * r[b];
            }

            // bookkeeping for future steps
            for (int j = 1; j < n; ++j)
                rho[size_t(j - 1) * L + l] *= rv[s - 1];
            for (int i = 0; i < s; ++i) rows[size_t(n - 1) * L + l][i] = blk(s - 1, i);
            rho[size_t(n - 1) * L + l] = 1.0;
        }
    }
    return wt;
}

}  // namespace gcq
