#include "special.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "quadutil.hpp"

namespace gcq {

namespace {

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kPi = 3.14159265358979323846;

// sin(pi x) with the argument reduced exactly in floating point first;
// integer x must map to an exact zero or pole detection downstream breaks.
double sinpi(double x) {
    double r = std::remainder(x, 2.0);  // r in [-1, 1]
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

double cospi(double x) {
    double r = std::abs(std::remainder(x, 2.0));  // [0, 1]
    if (r == 0.5) return 0.0;
    if (r <= 0.5) return std::cos(kPi * r);
    return -std::cos(kPi * (1.0 - r));
}

// lgamma(n+1) - Stirling leading part, for the stable Poisson weight below
double stirlerr(double n) {
    double n2 = n * n;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0) / n2) / n2) / n;
}

double lanczos_gamma_pos(double x) {
    // x > 0.5 assumed
    double z = x - 1.0;
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
    double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * s;
}

double lanczos_log_gamma_pos(double x) {
    double z = x - 1.0;
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
    double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(s);
}

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// ---- Mittag-Leffler internals; w = -x >= 0 throughout. ----

// Power series sum_k (-w)^k / Gamma(a k + b). Valid while the largest term
// stays small enough that cancellation leaves 1e-13 absolute accuracy.
double ml_taylor(double a, double b, double w) {
    Kahan acc;
    const double lw = std::log(w);
    int small_run = 0;
    for (int k = 0; k <= 4000; ++k) {
        double arg = a * k + b;
        double t = (arg > 0.5) ? std::exp(k * lw - lanczos_log_gamma_pos(arg))
                               : std::pow(w, double(k)) * rgamma(arg);
        acc.add((k % 2 == 0) ? t : -t);
        // isolated zero terms occur at poles of 1/Gamma; demand a sustained tail
        if (std::abs(t) < 1e-18 + 1e-17 * std::abs(acc.s)) {
            if (++small_run >= 3 && k >= 4) break;
        } else {
            small_run = 0;
        }
    }
    return acc.s;
}

// a == 1 exactly: E_{1,B}(-w) = e^{-w} M(B-1, B, w) / Gamma(B) for B > 1,
// evaluated as a Poisson-weighted positive sum. Then the lowering relation
// E_{1,b} = -w E_{1,b+1} + 1/Gamma(b) walks back down to the requested b.
double ml_exp_like(double b, double w) {
    int lift = 0;
    double B = b;
    while (B <= 1.5) {
        B += 1.0;
        ++lift;
    }
    // core sum: sum_k pois(k; w) (B-1)/(B-1+k), all terms positive
    double core = 0.0;
    {
        int k0 = int(std::lround(w));
        double span = 12.0 * std::sqrt(w + 1.0) + 40.0;
        int klo = std::max(0, int(std::floor(w - span)));
        int khi = int(std::ceil(w + span));
        // log pois(k0; w): the naive three-term form cancels catastrophically
        // for large w, so split off Stirling's leading part exactly
        double lt0;
        if (k0 <= 100) {
            lt0 = k0 * std::log(w) - w - lanczos_log_gamma_pos(double(k0) + 1.0);
        } else {
            double kk = double(k0);
            double u = (w - kk) / kk;  // |u| <= 0.5/k0
            lt0 = kk * (std::log1p(u) - u) - 0.5 * std::log(2.0 * kPi * kk) - stirlerr(kk);
        }
        double t0 = std::exp(lt0);
        Kahan acc;
        double t = t0;
        for (int k = k0; k <= khi; ++k) {
            acc.add(t * (B - 1.0) / (B - 1.0 + k));
            t *= w / double(k + 1);
            if (t < 1e-20 * t0 && k > k0 + 4) break;
        }
        t = t0;
        for (int k = k0 - 1; k >= klo; --k) {
            t *= double(k + 1) / w;
            acc.add(t * (B - 1.0) / (B - 1.0 + k));
            if (t < 1e-20 * t0) break;
        }
        core = acc.s;
    }
    double e = core * rgamma(B);
    for (int j = lift - 1; j >= 0; --j) e = -w * e + rgamma(b + j);
    return e;
}

// Asymptotic tail sum_{k=1}^{K} (-1)^{k+1} w^{-k} / Gamma(b - a k), truncated
// at the smallest term. Returns false when the attainable error is too big.
bool ml_asymptotic(double a, double b, double w, double& out) {
    const double lw = std::log(w);
    auto term_mag = [&](int k) {
        double arg = b - a * k;
        if (arg > 0.5) return std::exp(-k * lw) * std::abs(rgamma(arg));
        // reflected magnitude without the sine factor: an upper bound
        return std::exp(lanczos_log_gamma_pos(1.0 - arg) - k * lw) / kPi;
    };
    int kbest = 1;
    double mbest = term_mag(1);
    int rising = 0;
    for (int k = 2; k <= 500; ++k) {
        double m = term_mag(k);
        if (m < mbest) {
            mbest = m;
            kbest = k;
            rising = 0;
        } else if (++rising >= 3) {
            break;
        }
    }
    double err = term_mag(kbest + 1);
    if (a >= 1.0) {
        // exponentially small contribution of the exp-type terms, decaying
        // on the negative axis since cos(pi/a) <= 0 there
        double r = std::pow(w, 1.0 / a);
        err += (2.0 / a) * std::exp(r * std::cos(kPi / a)) * std::max(std::pow(r, 1.0 - b), 1.0);
    }
    if (!(err <= 1e-14)) return false;
    Kahan acc;
    for (int k = 1; k <= kbest; ++k) {
        double arg = b - a * k;
        double t;
        if (arg > 0.5) {
            t = std::exp(-k * lw - lanczos_log_gamma_pos(arg));
        } else {
            double s = sinpi(arg);
            if (s == 0.0) continue;
            double v = lanczos_log_gamma_pos(1.0 - arg) + std::log(std::abs(s) / kPi) - k * lw;
            t = std::copysign(std::exp(v), s);
        }
        acc.add((k % 2 == 0) ? -t : t);
    }
    out = acc.s;
    return true;
}

// Hankel contour collapsed onto the negative real axis:
//   E_{a,b}(-w) = residues + (1/pi) int_0^inf e^{-r} r^{a-b}
//       [ w sin(pi(b-a)) + r^a sin(pi b) ] / (r^{2a} + 2 w r^a cos(pi a) + w^2) dr
// valid for b < 1 + a; the residue pair enters only for a > 1.
double ml_hankel_core(double a, double b, double w) {
    const double sba = sinpi(b - a);
    const double sb = sinpi(b);
    const double ca = cospi(a);
    auto dens = [&](double r) {
        double ra = std::pow(r, a);
        double den = ra * ra + 2.0 * w * ra * ca + w * w;
        return std::exp(-r) * (w * sba + ra * sb) / den;
    };
    // full integrand carries r^{a-b}
    auto f = [&](double r) { return dens(r) * std::pow(r, a - b); };

    double rstar = std::pow(w, 1.0 / a);  // denominator dip location
    // beyond ~300 the e^{-r} factor kills everything, dip included
    double rend = std::min(std::max(60.0, rstar + 40.0), 300.0);
    const double tol = 2e-15 * kPi;

    double total = 0.0;
    // [0,1]: absorb the r^{a-b} endpoint power when it is singular
    if (a - b < 0.0) {
        double p = 1.0 / (1.0 + a - b);
        auto g = [&](double u) {
            double r = std::pow(u, p);
            return p * dens(r);
        };
        total += integrate_adaptive(g, 0.0, 1.0, tol * 0.4);
    } else {
        total += integrate_adaptive(f, 0.0, 1.0, tol * 0.4);
    }
    // [1, rend] with breakpoints bracketing the dip
    std::vector<double> pts{1.0};
    if (rstar > 1.2 && rstar < rend) {
        for (double m : {0.7, 0.9, 1.0, 1.12, 1.4})
            if (rstar * m > 1.0 && rstar * m < rend) pts.push_back(rstar * m);
    }
    pts.push_back(rend);
    total += integrate_adaptive_pts(f, pts, tol * 0.6);

    double e = total / kPi;
    if (a > 1.0) {
        std::complex<double> zeta = std::polar(rstar, kPi / a);
        std::complex<double> res = std::pow(zeta, 1.0 - b) * std::exp(zeta);
        e += (2.0 / a) * res.real();
    }
    return e;
}

double ml_hankel(double a, double b, double w) {
    // lower b until the integral representation applies, then undo via
    // E_{a,c+a}(-w) = (1/Gamma(c) - E_{a,c}(-w)) / w
    int drops = 0;
    double br = b;
    while (br >= std::min(1.0, a + 0.5) + 1e-12) {
        br -= a;
        ++drops;
    }
    double e = ml_hankel_core(a, br, w);
    for (int j = 0; j < drops; ++j) {
        e = (rgamma(br) - e) / w;
        br += a;
    }
    return e;
}

}  // namespace

double gamma_fn(double x) {
    if (x > 0.5) return lanczos_gamma_pos(x);
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    double s = sinpi(x);
    if (s == 0.0) throw std::domain_error("gamma_fn: pole at nonpositive integer");
    return kPi / (s * lanczos_gamma_pos(1.0 - x));
}

double log_gamma_pos(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma_pos: needs x > 0");
    if (x > 0.5) return lanczos_log_gamma_pos(x);
    return std::log(kPi / std::abs(sinpi(x))) - lanczos_log_gamma_pos(1.0 - x);
}

double rgamma(double x) {
    if (x > 0.5) {
        if (x > 170.0) {
            double lg = lanczos_log_gamma_pos(x);
            return (lg > 700.0) ? 0.0 : std::exp(-lg);
        }
        return 1.0 / lanczos_gamma_pos(x);
    }
    // 1/Gamma(x) = sin(pi x)/pi * Gamma(1-x); zero at the poles
    double s = sinpi(x);
    if (s == 0.0) return 0.0;
    double lg = lanczos_log_gamma_pos(1.0 - x);
    if (lg > 700.0) {
        // magnitude overflows only when the result itself overflows
        double v = lg + std::log(std::abs(s) / kPi);
        if (v > 709.0) return (s > 0.0) ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
        return std::copysign(std::exp(v), s);
    }
    return s / kPi * std::exp(lg);
}

double mittag_leffler(double a, double b, double x) {
    if (!(a > 0.0 && a < 2.0)) throw std::domain_error("mittag_leffler: a must be in (0,2)");
    if (!(x <= 0.0)) throw std::domain_error("mittag_leffler: defined here for finite x <= 0 only");
    double w = -x;
    if (w == 0.0) return rgamma(b);
    // series region: largest term ~ exp(w^{1/a}) must stay benign
    double gate = std::min(5.0, std::pow(8.5, a));
    if (w <= gate) return ml_taylor(a, b, w);
    if (a == 1.0) {
        if (b == 1.0) return std::exp(-w);
        double out;
        if (ml_asymptotic(a, b, w, out)) return out;
        return ml_exp_like(b, w);
    }
    double out;
    if (ml_asymptotic(a, b, w, out)) return out;
    return ml_hankel(a, b, w);
}

double scalar_ode_solution(double x, double beta, double t) {
    if (t == 0.0) return 0.0;
    if (!(beta > -1.0)) throw std::domain_error("scalar_ode_solution: beta must exceed -1");
    return gamma_fn(beta + 1.0) * std::pow(t, beta + 1.0) * mittag_leffler(1.0, beta + 2.0, -x * t);
}

}  // namespace gcq
