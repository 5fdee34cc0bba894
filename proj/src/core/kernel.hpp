// Sectorial transfer functions and their branch-cut densities.
//
// A kernel here is an operator symbol K(z), holomorphic off the negative real
// axis, decaying like |K(z)| <= M |z|^{-alpha} with alpha in (0,1].  Its action
// on causal data is represented through the density of the cut,
//
//     G(x) = (K(x e^{-i pi}) - K(x e^{i pi})) / (2 pi i),   x > 0,
//
// so that K(z) = integral_0^inf G(x) / (z + x) dx.  Engines only ever touch
// G and the scalar resolvent chain; K itself is kept for validation.
//
// Kernels whose singularities start at -shift rather than 0 store the density
// of K(z - shift) (a plain power for the shifted fractional integral) and set
// `shift`; engines then run the scalar recursions at x + shift while sampling
// the stored density at x.
#pragma once

#include <complex>
#include <functional>
#include <string>

namespace gcq {

struct Kernel {
    std::string name;
    double alpha = 0.0;   // decay exponent of K at infinity
    double M = 0.0;       // fitted sectorial constant
    double shift = 0.0;   // cut starts at -shift; stored density is for x+shift
    std::function<std::complex<double>(std::complex<double>)> K;
    std::function<double(double)> G;  // stored density, sampled on (0,inf)

    // exact value of (K(d/dt) f)(t) for f = t^beta, when known in closed form
    std::function<double(double beta, double t)> exact_power;

    // false when the stored density is a pure power times a smooth function of
    // x itself (Jacobi-panel friendly); true when it has extra algebraic
    // structure at 0 that the panel cannot see (use the log-space rule then)
    bool prefers_log_rule = false;
};

// K(z) = z^{-alpha}, G = sin(pi alpha)/pi * x^{-alpha}
Kernel kernel_fracint(double alpha);

// K(z) = z^{alpha-1}: the fractional *derivative* complement d^{1-alpha},
// stored as a fractional integral of order 1-alpha
Kernel kernel_fracint_dual(double alpha);

// K(z) = 1/(z^alpha + 1)
Kernel kernel_resolvent(double alpha);

// K(z) = (z+1)^{-alpha}; stored density sin(pi alpha)/pi * x^{-alpha}, shift 1
Kernel kernel_shifted(double alpha);

// "fracint:alpha=0.5", "fracintdual:alpha=0.3", "ka:alpha=0.5",
// "kb:alpha=0.4"
Kernel kernel_parse(const std::string& spec);

// density recovered numerically from the jump of K across the cut; equals
// G(x - shift) for x > shift and 0 below it
double density_from_transfer(const Kernel& k, double x);

// refit the sectorial constant of K over both cut edges and the positive axis
double fit_sectorial_bound(const std::function<std::complex<double>(std::complex<double>)>& K,
                           double alpha);

// checks: M reproducible from K, far-field decay actually holds, stored
// density within (M/pi) x^{-alpha}, and density consistent with the cut jump.
// throws std::invalid_argument with a reason on failure.
void validate_kernel(const Kernel& k);

}  // namespace gcq
