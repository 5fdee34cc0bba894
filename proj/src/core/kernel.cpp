#include "kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "special.hpp"
#include "specparse.hpp"

namespace gcq {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("kernel: alpha must lie in (0,1)");
}

// Kummer's M(a, c, x) for x >= 0, a > 0, c > a; all terms positive.
double kummer_m(double a, double c, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 20000; ++k) {
        term *= (a + k) * x / ((c + k) * (k + 1));
        sum += term;
        if (term < 1e-17 * sum) return sum;
    }
    throw std::runtime_error("kernel: confluent series did not converge");
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return g;
}

}  // namespace

double fit_sectorial_bound(const std::function<cplx(cplx)>& K, double alpha) {
    // sample the positive axis, both edges of the cut, and the imaginary rays
    const double angs[] = {0.0, kPi / 2, kPi - 1e-6, -kPi / 2, -(kPi - 1e-6)};
    double m = 0.0;
    for (double x : log_grid(1e-6, 1e6, 241))
        for (double a : angs)
            m = std::max(m, std::abs(K(std::polar(x, a))) * std::pow(x, alpha));
    return m;
}

double density_from_transfer(const Kernel& k, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("density_from_transfer: x must be positive");
    // signed zeros select the two edges of the cut through arg = atan2
    cplx below = k.K(cplx(-x, -0.0));  // x e^{-i pi}
    cplx above = k.K(cplx(-x, +0.0));  // x e^{+i pi}
    cplx jump = (below - above) / cplx(0.0, 2.0 * kPi);
    return jump.real();
}

Kernel kernel_fracint(double alpha) {
    check_alpha(alpha);
    Kernel k;
    k.name = "fracint";
    k.alpha = alpha;
    k.K = [alpha](cplx z) { return std::pow(z, -alpha); };
    double c = std::sin(kPi * alpha) / kPi;
    k.G = [c, alpha](double x) { return c * std::pow(x, -alpha); };
    k.exact_power = [alpha](double beta, double t) {
        if (t <= 0.0) return 0.0;
        return gamma_fn(beta + 1.0) * rgamma(alpha + beta + 1.0) * std::pow(t, alpha + beta);
    };
    k.M = fit_sectorial_bound(k.K, alpha);
    return k;
}

Kernel kernel_fracint_dual(double alpha) {
    check_alpha(alpha);
    Kernel k = kernel_fracint(1.0 - alpha);  // decay exponent of z^{alpha-1} is 1-alpha
    k.name = "fracintdual";
    return k;
}

Kernel kernel_resolvent(double alpha) {
    check_alpha(alpha);
    Kernel k;
    k.name = "ka";
    k.alpha = alpha;
    k.K = [alpha](cplx z) { return 1.0 / (std::pow(z, alpha) + 1.0); };
    double s = std::sin(kPi * alpha), c = std::cos(kPi * alpha);
    k.G = [s, c, alpha](double x) {
        double xa = std::pow(x, alpha);
        return (s / kPi) * xa / (xa * xa + 2.0 * xa * c + 1.0);
    };
    k.exact_power = [alpha](double beta, double t) {
        if (t <= 0.0) return 0.0;
        return gamma_fn(beta + 1.0) * std::pow(t, alpha + beta) *
               mittag_leffler(alpha, alpha + beta + 1.0, -std::pow(t, alpha));
    };
    // the density vanishes like x^alpha at 0, which the x^{-alpha}-weighted
    // panel of the gauss rule cannot represent; integrate it in log space
    k.prefers_log_rule = true;
    k.M = fit_sectorial_bound(k.K, alpha);
    return k;
}

Kernel kernel_shifted(double alpha) {
    check_alpha(alpha);
    Kernel k;
    k.name = "kb";
    k.alpha = alpha;
    k.shift = 1.0;
    k.K = [alpha](cplx z) { return std::pow(z + 1.0, -alpha); };
    double c = std::sin(kPi * alpha) / kPi;
    k.G = [c, alpha](double x) { return c * std::pow(x, -alpha); };
    k.exact_power = [alpha](double beta, double t) {
        if (t <= 0.0) return 0.0;
        double c0 = alpha + beta + 1.0;
        // convolution of e^{-t} t^{alpha-1}/Gamma(alpha) with t^beta;
        // Kummer-transformed series keeps every term positive
        return gamma_fn(beta + 1.0) * rgamma(c0) * std::pow(t, alpha + beta) *
               std::exp(-t) * kummer_m(beta + 1.0, c0, t);
    };
    k.M = fit_sectorial_bound(k.K, alpha);
    return k;
}

Kernel kernel_parse(const std::string& spec) {
    auto [kind, body] = split_kind(spec, "kernel");
    auto kv = parse_kv(body, "kernel");
    double alpha = need_key(kv, "alpha", "kernel");
    Kernel k;
    if (kind == "fracint")
        k = kernel_fracint(alpha);
    else if (kind == "fracintdual")
        k = kernel_fracint_dual(alpha);
    else if (kind == "ka")
        k = kernel_resolvent(alpha);
    else if (kind == "kb")
        k = kernel_shifted(alpha);
    else
        throw std::invalid_argument("kernel spec: unknown kind '" + kind + "'");
    validate_kernel(k);
    return k;
}

void validate_kernel(const Kernel& k) {
    if (!(k.alpha > 0.0) || !(k.alpha < 1.0))
        throw std::invalid_argument("kernel: alpha must lie in (0,1)");
    if (!k.K || !k.G) throw std::invalid_argument("kernel: K and G must be set");

    double mfit = fit_sectorial_bound(k.K, k.alpha);
    if (!(mfit > 0.0) || !std::isfinite(mfit))
        throw std::invalid_argument("kernel: sectorial bound is not finite");
    if (!(k.M >= 0.999 * mfit))
        throw std::invalid_argument("kernel: stored M does not dominate |K(z)| |z|^alpha");

    // genuine decay at infinity, not just boundedness on the sampled box
    double far = std::abs(k.K(cplx(1e12, 0.0)));
    if (!(far <= 2.0 * k.M * std::pow(1e12, -k.alpha)))
        throw std::invalid_argument("kernel: K does not decay like |z|^{-alpha}");

    // stored density within the cut-jump envelope (M/pi) x^{-alpha}
    for (double x : log_grid(1e-6, 1e6, 121)) {
        double g = k.G(x);
        if (!std::isfinite(g))
            throw std::invalid_argument("kernel: density not finite");
        if (!(std::abs(g) <= (k.M / kPi) * std::pow(x, -k.alpha) * (1.0 + 1e-9)))
            throw std::invalid_argument("kernel: density exceeds (M/pi) x^{-alpha}");
    }

    // stored density must reproduce the branch jump (shift-aware)
    for (double y : log_grid(1e-3, 1e5, 61)) {
        double g = k.G(y);
        double j = density_from_transfer(k, y + k.shift);
        if (!(std::abs(j - g) <= 1e-9 * std::max(std::abs(g), 1e-300)))
            throw std::invalid_argument("kernel: density disagrees with the cut jump of K");
    }
    if (k.shift > 0.0) {
        // analytic below the start of the cut: jump must vanish there
        double j = density_from_transfer(k, 0.5 * k.shift);
        if (!(std::abs(j) <= 1e-12))
            throw std::invalid_argument("kernel: nonzero jump before the cut starts");
    }
}

}  // namespace gcq
