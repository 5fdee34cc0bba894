// Implicit Runge-Kutta tableaus (Radau IIA 2- and 3-stage, Lobatto IIIC
// 4-stage) together with the spectral data the convolution engines use:
// eigendecomposition of A, stability function, stage resolvents, and a
// fitted decay constant for |R(-x)|.

#pragma once

#include <string>

#include "smallmat.hpp"

namespace gcq {

struct Tableau {
    std::string name;
    int s = 0;
    int order = 0;        // classical order p
    int stage_order = 0;  // q
    RMatS A;
    RVecS b, c;
    CMatS V, Vinv;  // A = V diag(lambda) Vinv
    CVecS lambda;
    double bhat = 0.0;  // largest constant with |R(-x)| <= 1/(1 + bhat x), x >= 0

    bool stiffly_accurate() const;

    // R(z) = 1 + z b^T (I - z A)^{-1} 1
    cplx stability(cplx z) const;

    // (I - z A)^{-1} 1; for stiffly accurate tableaus its last entry is R(z)
    CVecS rvec(cplx z) const;
    RVecS rvec(double z) const;

    CMatS stage_resolvent(cplx z) const;   // (I - z A)^{-1}
    RMatS stage_resolvent(double z) const;
};

const Tableau& radau2();
const Tableau& radau3();
const Tableau& lobatto4();
const Tableau& tableau_by_name(const std::string& name);

// (tau A)^gamma through the eigensystem, principal branch
CMatS matrix_power(const Tableau& tb, double tau, double gamma);
// same, with the imaginary residue checked to be negligible
RMatS matrix_power_real(const Tableau& tb, double tau, double gamma);

}  // namespace gcq
