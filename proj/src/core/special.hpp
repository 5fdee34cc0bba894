// Gamma-family special functions and the two-parameter Mittag-Leffler
// function on the negative real axis. Everything here is scalar double.

#pragma once

namespace gcq {

// Gamma(x) for real x away from the poles 0, -1, -2, ...
double gamma_fn(double x);

// log Gamma(x), x > 0.
double log_gamma_pos(double x);

// 1/Gamma(x) for any real x; returns 0 at the poles and on overflow of Gamma.
double rgamma(double x);

// E_{a,b}(x) for a in (0,2), x <= 0. Absolute accuracy target 1e-12 for
// |x| <= 1e4. b may be any real (poles of 1/Gamma handled as zeros).
double mittag_leffler(double a, double b, double x);

// Solution at time t of y' = -x y + t^beta, y(0) = 0, for beta > -1:
// Gamma(beta+1) t^{beta+1} E_{1,beta+2}(-x t).
double scalar_ode_solution(double x, double beta, double t);

}  // namespace gcq
