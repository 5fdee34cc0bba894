#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "special.hpp"

namespace gcq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// QL with implicit shifts on a symmetric tridiagonal matrix, carrying a
// vector through the rotations. d: diagonal (n), e: subdiagonal (n-1, index
// 0..n-2), z: carried vector. On return d holds ascending eigenvalues.
void imtqlx(int n, std::vector<double>& d, std::vector<double>& e,
            std::vector<double>& z) {
    if (n == 1) return;
    e.resize(n, 0.0);  // e[n-1] is a sentinel
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 60) throw std::runtime_error("imtqlx: no convergence");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // ascending order, weights follow their nodes
    for (int i = 0; i < n - 1; ++i) {
        int k = i;
        for (int j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        std::swap(d[i], d[k]);
        std::swap(z[i], z[k]);
    }
}

}  // namespace

RealRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    RealRule rule;
    rule.order = n;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // descending root i of P_n, Newton from the Chebyshev-like guess
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;  // ascending output
        rule.w[i] = w;
        rule.x[n - 1 - i] = x;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

RealRule gauss_jacobi(int n, double A, double B) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: order must be positive");
    if (!(A > -1.0) || !(B > -1.0))
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
    std::vector<double> d(n), e(std::max(n - 1, 0));
    double apb = A + B;
    d[0] = (B - A) / (apb + 2.0);
    for (int k = 1; k < n; ++k) {
        double q = 2.0 * k + apb;
        d[k] = (B * B - A * A) / (q * (q + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double bk;
        if (k == 1) {
            bk = 4.0 * (A + 1.0) * (B + 1.0) / ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
        } else {
            double q = 2.0 * k + apb;
            bk = 4.0 * k * (k + A) * (k + B) * (k + apb) /
                 (q * q * (q + 1.0) * (q - 1.0));
        }
        e[k - 1] = std::sqrt(bk);
    }
    double beta0 = std::pow(2.0, apb + 1.0) * gamma_fn(A + 1.0) * gamma_fn(B + 1.0) *
                   rgamma(apb + 2.0);
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    imtqlx(n, d, e, z);
    RealRule rule;
    rule.order = n;
    rule.x = d;
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) rule.w[i] = beta0 * z[i] * z[i];
    return rule;
}

double rule_beta_error(const RealRule& r, double alpha, double t_lo, double t_hi) {
    double worst = 0.0;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
        double zeta = t_lo * std::pow(t_hi / t_lo, double(i) / (n - 1));
        double acc = 0.0;
        for (size_t l = 0; l < r.x.size(); ++l)
            acc += r.w[l] * std::pow(r.x[l], -alpha) * std::exp(-zeta * r.x[l]);
        double exact = gamma_fn(1.0 - alpha) * std::pow(zeta, alpha - 1.0);
        worst = std::max(worst, std::abs(acc - exact) / exact);
    }
    return worst;
}

RealRule build_history_rule(double alpha, double t_lo, double t_hi, double tol) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("history rule: alpha must be in (0,1)");
    if (!(t_lo > 0.0) || !(t_hi >= t_lo))
        throw std::invalid_argument("history rule: need 0 < t_lo <= t_hi");
    if (!(tol > 0.0)) throw std::invalid_argument("history rule: tol must be positive");

    const double x0 = 1.0 / t_hi;
    // truncation point covering even purely algebraic decay of the smooth part
    const double beta_ab = kPi / std::sin(kPi * alpha);
    double xmax = std::pow(0.1 * tol * alpha * beta_ab, -1.0 / alpha) / t_lo;
    xmax = std::max(xmax, 64.0 * x0);
    const double rho = 4.0;  // geometric panel growth

    for (int order : {8, 16, 24, 32, 48, 64}) {
        RealRule rule;
        rule.order = order;
        // [0, x0]: Gauss-Jacobi with the x^{-alpha} factor absorbed; weights
        // are rescaled so the rule applies to the full integrand
        RealRule gj = gauss_jacobi(order, 0.0, -alpha);
        double scale = std::pow(0.5 * x0, 1.0 - alpha);
        for (int l = 0; l < order; ++l) {
            double x = 0.5 * x0 * (gj.x[l] + 1.0);
            rule.x.push_back(x);
            rule.w.push_back(scale * gj.w[l] * std::pow(x, alpha));
        }
        // geometric Gauss-Legendre panels on [x0 rho^k, x0 rho^{k+1}]
        RealRule gl = gauss_legendre(order);
        for (double lo = x0; lo < xmax; lo *= rho) {
            double hi = lo * rho;
            double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
            for (int l = 0; l < order; ++l) {
                rule.x.push_back(mid + half * gl.x[l]);
                rule.w.push_back(half * gl.w[l]);
            }
        }
        if (rule_beta_error(rule, alpha, t_lo, t_hi) <= tol) return rule;
    }
    throw std::runtime_error("history rule: tolerance unreachable by order escalation");
}

RealRule build_log_trapezoid_rule(double alpha, double h, int mtilde, int ntilde) {
    if (!(alpha > 0.0)) throw std::invalid_argument("log trapezoid: alpha must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("log trapezoid: h must be positive");
    RealRule rule;
    rule.order = mtilde + ntilde + 1;
    for (int l = -mtilde; l <= ntilde; ++l) {
        double x = std::exp(l * h / alpha);
        rule.x.push_back(x);
        rule.w.push_back(h / alpha * x);
    }
    return rule;
}

namespace {

struct Circle {
    cplx c;
    double r = 0.0;
    std::vector<cplx> poles;
    std::vector<double> margin;   // rim clearance owed to each own pole
    std::vector<double> keepout;  // distance foreign rims must keep from it
};

// approximate minimum enclosing circle (Badoiu-Clarkson iteration), widened
// until the rim honors every pole's margin demand
void enclose(Circle& g) {
    cplx c = g.poles[0];
    for (const cplx& p : g.poles) c += p;
    c /= double(g.poles.size() + 1);
    for (int k = 1; k <= 200; ++k) {
        double dmax = 0.0;
        cplx far = c;
        for (const cplx& p : g.poles) {
            double d = std::abs(p - c);
            if (d > dmax) {
                dmax = d;
                far = p;
            }
        }
        c += (far - c) / double(k + 1);
    }
    double hull = 0.0;
    for (const cplx& p : g.poles) hull = std::max(hull, std::abs(p - c));
    // conjugate-symmetric pole sets get an exactly real center, so the node
    // set is closed under conjugation and real data yields real sums; a
    // single-signed cluster sits at least ~20 degrees off axis and never trips
    if (std::abs(c.imag()) <= 0.02 * (std::abs(c) + hull)) c = cplx(c.real(), 0.0);
    g.c = c;
    g.r = 0.0;
    for (size_t i = 0; i < g.poles.size(); ++i)
        g.r = std::max(g.r, std::abs(g.poles[i] - c) + g.margin[i]);
}

}  // namespace

ContourRule build_pole_contour(const std::vector<cplx>& poles_in, double tol,
                               int node_budget) {
    if (poles_in.empty()) throw std::invalid_argument("contour: no poles given");
    // dedupe coincident poles but keep their multiplicity: a pole shared by
    // k steps is a k-fold factor of the integrand, and roundoff near it
    // grows like (|p| / distance)^k
    std::vector<cplx> poles;
    std::vector<int> mult;
    for (const cplx& p : poles_in) {
        if (!(p.real() > 0.0))
            throw std::invalid_argument("contour: pole not in the right half plane");
        bool dup = false;
        for (size_t k = 0; k < poles.size() && !dup; ++k)
            if (std::abs(p - poles[k]) <= 1e-12 * std::abs(p)) {
                ++mult[k];
                dup = true;
            }
        if (!dup) {
            poles.push_back(p);
            mult.push_back(1);
        }
    }

    // Margin demands grow with the local stack depth m (poles within 15% of
    // each other count as one stack; their factors blow up together): a rim
    // at |p| / 2000^(1/m) keeps the m-fold amplification near 2000, which is
    // still harmless next to the quadrature target. The keepout radius does
    // the same for nodes of other circles; it stays small so circles only
    // merge when genuinely entangled and a chain of separated scales keeps
    // one modest circle per scale instead of swelling past the branch cut.
    const size_t np = poles.size();
    std::vector<double> gdem(np), fdem(np);
    for (size_t j = 0; j < np; ++j) {
        int m = 0;
        for (size_t k = 0; k < np; ++k)
            if (std::abs(poles[k] - poles[j]) <= 0.15 * std::abs(poles[j])) m += mult[k];
        double frac = std::pow(2000.0, -1.0 / m);
        gdem[j] = std::abs(poles[j]) * std::min(0.219, std::max(0.10, frac));
        fdem[j] = std::abs(poles[j]) * std::min(0.219, std::max(0.04, frac));
    }

    // one circle per pole, then merge while any rim intrudes on a foreign
    // pole's keepout; every merge drops the circle count, so this terminates
    std::vector<Circle> cs;
    for (size_t j = 0; j < np; ++j) {
        Circle g;
        g.poles = {poles[j]};
        g.margin = {gdem[j]};
        g.keepout = {fdem[j]};
        enclose(g);
        cs.push_back(g);
    }
    for (bool merged = true; merged;) {
        merged = false;
        for (size_t i = 0; i < cs.size() && !merged; ++i) {
            for (size_t j = i + 1; j < cs.size() && !merged; ++j) {
                bool near = false;
                for (size_t a = 0; a < cs[j].poles.size(); ++a)
                    if (std::abs(cs[j].poles[a] - cs[i].c) < cs[i].r + cs[j].keepout[a])
                        near = true;
                for (size_t a = 0; a < cs[i].poles.size(); ++a)
                    if (std::abs(cs[i].poles[a] - cs[j].c) < cs[j].r + cs[i].keepout[a])
                        near = true;
                if (near) {
                    cs[i].poles.insert(cs[i].poles.end(), cs[j].poles.begin(),
                                       cs[j].poles.end());
                    cs[i].margin.insert(cs[i].margin.end(), cs[j].margin.begin(),
                                        cs[j].margin.end());
                    cs[i].keepout.insert(cs[i].keepout.end(), cs[j].keepout.begin(),
                                         cs[j].keepout.end());
                    enclose(cs[i]);
                    cs.erase(cs.begin() + j);
                    merged = true;
                }
            }
        }
    }
    // clearance from the branch cut along (-inf, 0]
    for (const Circle& g : cs) {
        double dist = (g.c.real() >= 0.0) ? std::abs(g.c) : std::abs(g.c.imag());
        if (!(g.r <= 0.85 * dist))
            throw std::runtime_error("contour: pole cluster too close to the cut");
    }

    const double target = std::max(1e-13, 0.01 * tol);
    int boost = 1;
    for (int attempt = 0; attempt <= 4; ++attempt, boost *= 2) {
        // per-circle node counts: equal budget share, floored, plus whatever
        // the worst pole-to-circle distance ratio demands
        int ncirc = int(cs.size());
        std::vector<int> nq(ncirc);
        int share = node_budget / ncirc, extra = node_budget % ncirc;
        for (int i = 0; i < ncirc; ++i) {
            const Circle& g = cs[i];
            double rho = g.r / std::abs(g.c);  // cut at distance |c|
            for (const cplx& p : poles) {
                double d = std::abs(p - g.c);
                bool inside = d < g.r;
                rho = std::max(rho, inside ? d / g.r : g.r / d);
            }
            int need = int(std::ceil(std::log(20.0 / target) / std::log(1.0 / rho))) + 2;
            nq[i] = boost * std::max({16, share + (i < extra ? 1 : 0), need});
        }
        ContourRule rule;
        rule.circles = ncirc;
        for (int i = 0; i < ncirc; ++i) {
            for (int l = 0; l < nq[i]; ++l) {
                double th = 2.0 * kPi * (l + 0.5) / nq[i];
                cplx e = std::polar(1.0, th);
                rule.z.push_back(cs[i].c + cs[i].r * e);
                rule.w.push_back(cs[i].r * e / double(nq[i]));
            }
        }
        // Cauchy check: 1 inside (each pole covered exactly once), 0 outside
        bool ok = true;
        for (const cplx& p : poles) {
            cplx acc = 0.0;
            for (size_t l = 0; l < rule.z.size(); ++l) acc += rule.w[l] / (rule.z[l] - p);
            if (std::abs(acc - 1.0) > target) ok = false;
        }
        double pmax = 0.0;
        for (const cplx& p : poles) pmax = std::max(pmax, std::abs(p));
        for (cplx probe : {cplx(0.0, 0.0), cplx(-2.0 * pmax, 0.0), cplx(-pmax, pmax)}) {
            cplx acc = 0.0;
            for (size_t l = 0; l < rule.z.size(); ++l)
                acc += rule.w[l] / (rule.z[l] - probe);
            if (std::abs(acc) > target) ok = false;
        }
        if (ok) return rule;
    }
    throw std::runtime_error("contour: Cauchy validation failed after refinement");
}

}  // namespace gcq
