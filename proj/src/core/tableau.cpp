#include "tableau.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace gcq {

namespace {

// fit the largest bhat with |R(-x)| <= 1/(1 + bhat x) over a wide log grid
double fit_bhat(const Tableau& tb) {
    double best = std::numeric_limits<double>::infinity();
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        double x = 1e-6 * std::pow(1e14, double(i) / (n - 1));
        double r = std::abs(tb.stability(cplx(-x, 0.0)));
        if (r == 0.0) continue;
        best = std::min(best, (1.0 / r - 1.0) / x);
    }
    return best;
}

void decompose(Tableau& tb) {
    Eigen::MatrixXd a(tb.s, tb.s);
    for (int i = 0; i < tb.s; ++i)
        for (int j = 0; j < tb.s; ++j) a(i, j) = tb.A(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("tableau: eigendecomposition failed");
    tb.V = CMatS(tb.s);
    tb.lambda = CVecS(tb.s);
    for (int i = 0; i < tb.s; ++i) {
        tb.lambda[i] = es.eigenvalues()(i);
        for (int j = 0; j < tb.s; ++j) tb.V(j, i) = es.eigenvectors()(j, i);
    }
    tb.Vinv = inverse(tb.V);
}

void validate(Tableau& tb) {
    // row sums reproduce c, and the last row is b (stiffly accurate)
    for (int i = 0; i < tb.s; ++i) {
        double rs = 0.0;
        for (int j = 0; j < tb.s; ++j) rs += tb.A(i, j);
        if (std::abs(rs - tb.c[i]) > 1e-14)
            throw std::runtime_error("tableau: row sum mismatch");
    }
    if (!tb.stiffly_accurate())
        throw std::runtime_error("tableau: expected stiffly accurate data");
    // quadrature order conditions up to degree 3
    double s1 = 0, s2 = 0, s3 = 0;
    for (int j = 0; j < tb.s; ++j) {
        s1 += tb.b[j];
        s2 += tb.b[j] * tb.c[j];
        s3 += tb.b[j] * tb.c[j] * tb.c[j];
    }
    if (std::abs(s1 - 1.0) > 1e-14 || std::abs(s2 - 0.5) > 1e-14 ||
        std::abs(s3 - 1.0 / 3.0) > 1e-14)
        throw std::runtime_error("tableau: order conditions violated");
    // eigen round trip and spectrum in the right half plane
    CMatS lam(tb.s);
    for (int i = 0; i < tb.s; ++i) lam(i, i) = tb.lambda[i];
    CMatS rt = matmul(matmul(tb.V, lam), tb.Vinv);
    for (int i = 0; i < tb.s; ++i)
        for (int j = 0; j < tb.s; ++j)
            if (std::abs(rt(i, j) - tb.A(i, j)) > 1e-13)
                throw std::runtime_error("tableau: eigensystem round trip failed");
    for (int i = 0; i < tb.s; ++i)
        if (!(tb.lambda[i].real() > 0.0))
            throw std::runtime_error("tableau: eigenvalue not in right half plane");
    tb.bhat = fit_bhat(tb);
    if (!(tb.bhat > 1e-3))
        throw std::runtime_error("tableau: stability decay constant degenerate");
}

Tableau make_radau2() {
    Tableau tb;
    tb.name = "radau2";
    tb.s = 2;
    tb.order = 3;
    tb.stage_order = 2;
    tb.A = RMatS(2);
    tb.A(0, 0) = 5.0 / 12.0;
    tb.A(0, 1) = -1.0 / 12.0;
    tb.A(1, 0) = 3.0 / 4.0;
    tb.A(1, 1) = 1.0 / 4.0;
    tb.b = RVecS(2);
    tb.b[0] = 3.0 / 4.0;
    tb.b[1] = 1.0 / 4.0;
    tb.c = RVecS(2);
    tb.c[0] = 1.0 / 3.0;
    tb.c[1] = 1.0;
    decompose(tb);
    validate(tb);
    return tb;
}

Tableau make_radau3() {
    const double r6 = std::sqrt(6.0);
    Tableau tb;
    tb.name = "radau3";
    tb.s = 3;
    tb.order = 5;
    tb.stage_order = 3;
    tb.A = RMatS(3);
    tb.A(0, 0) = (88.0 - 7.0 * r6) / 360.0;
    tb.A(0, 1) = (296.0 - 169.0 * r6) / 1800.0;
    tb.A(0, 2) = (-2.0 + 3.0 * r6) / 225.0;
    tb.A(1, 0) = (296.0 + 169.0 * r6) / 1800.0;
    tb.A(1, 1) = (88.0 + 7.0 * r6) / 360.0;
    tb.A(1, 2) = (-2.0 - 3.0 * r6) / 225.0;
    tb.A(2, 0) = (16.0 - r6) / 36.0;
    tb.A(2, 1) = (16.0 + r6) / 36.0;
    tb.A(2, 2) = 1.0 / 9.0;
    tb.b = RVecS(3);
    tb.b[0] = tb.A(2, 0);
    tb.b[1] = tb.A(2, 1);
    tb.b[2] = tb.A(2, 2);
    tb.c = RVecS(3);
    tb.c[0] = (4.0 - r6) / 10.0;
    tb.c[1] = (4.0 + r6) / 10.0;
    tb.c[2] = 1.0;
    decompose(tb);
    validate(tb);
    return tb;
}

Tableau make_lobatto4() {
    const double r5 = std::sqrt(5.0);
    Tableau tb;
    tb.name = "lobatto4";
    tb.s = 4;
    tb.order = 6;
    tb.stage_order = 3;
    tb.A = RMatS(4);
    tb.A(0, 0) = 1.0 / 12.0;
    tb.A(0, 1) = -r5 / 12.0;
    tb.A(0, 2) = r5 / 12.0;
    tb.A(0, 3) = -1.0 / 12.0;
    tb.A(1, 0) = 1.0 / 12.0;
    tb.A(1, 1) = 1.0 / 4.0;
    tb.A(1, 2) = (10.0 - 7.0 * r5) / 60.0;
    tb.A(1, 3) = r5 / 60.0;
    tb.A(2, 0) = 1.0 / 12.0;
    tb.A(2, 1) = (10.0 + 7.0 * r5) / 60.0;
    tb.A(2, 2) = 1.0 / 4.0;
    tb.A(2, 3) = -r5 / 60.0;
    tb.A(3, 0) = 1.0 / 12.0;
    tb.A(3, 1) = 5.0 / 12.0;
    tb.A(3, 2) = 5.0 / 12.0;
    tb.A(3, 3) = 1.0 / 12.0;
    tb.b = RVecS(4);
    for (int j = 0; j < 4; ++j) tb.b[j] = tb.A(3, j);
    tb.c = RVecS(4);
    tb.c[0] = 0.0;
    tb.c[1] = (5.0 - r5) / 10.0;
    tb.c[2] = (5.0 + r5) / 10.0;
    tb.c[3] = 1.0;
    decompose(tb);
    validate(tb);
    return tb;
}

}  // namespace

bool Tableau::stiffly_accurate() const {
    for (int j = 0; j < s; ++j)
        if (A(s - 1, j) != b[j]) return false;
    return true;
}

cplx Tableau::stability(cplx z) const {
    CVecS r = rvec(z);
    cplx acc = 1.0;
    for (int j = 0; j < s; ++j) acc += z * b[j] * r[j];
    return acc;
}

CVecS Tableau::rvec(cplx z) const {
    CMatS m(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = ((i == j) ? 1.0 : 0.0) - z * A(i, j);
    CVecS ones(s, cplx(1.0, 0.0));
    return SLU<cplx>(m).solve(ones);
}

RVecS Tableau::rvec(double z) const {
    RMatS m(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = ((i == j) ? 1.0 : 0.0) - z * A(i, j);
    RVecS ones(s, 1.0);
    return SLU<double>(m).solve(ones);
}

CMatS Tableau::stage_resolvent(cplx z) const {
    CMatS m(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = ((i == j) ? 1.0 : 0.0) - z * A(i, j);
    return inverse(m);
}

RMatS Tableau::stage_resolvent(double z) const {
    RMatS m(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = ((i == j) ? 1.0 : 0.0) - z * A(i, j);
    return inverse(m);
}

const Tableau& radau2() {
    static const Tableau tb = make_radau2();
    return tb;
}

const Tableau& radau3() {
    static const Tableau tb = make_radau3();
    return tb;
}

const Tableau& lobatto4() {
    static const Tableau tb = make_lobatto4();
    return tb;
}

const Tableau& tableau_by_name(const std::string& name) {
    if (name == "radau2") return radau2();
    if (name == "radau3") return radau3();
    if (name == "lobatto4") return lobatto4();
    throw std::invalid_argument("unknown tableau: " + name);
}

CMatS matrix_power(const Tableau& tb, double tau, double gamma) {
    CMatS d(tb.s);
    for (int i = 0; i < tb.s; ++i) d(i, i) = std::pow(tau * tb.lambda[i], gamma);
    return matmul(matmul(tb.V, d), tb.Vinv);
}

RMatS matrix_power_real(const Tableau& tb, double tau, double gamma) {
    double max_imag = 0.0;
    RMatS r = real_part(matrix_power(tb, tau, gamma), &max_imag);
    double scale = 0.0;
    for (int i = 0; i < tb.s; ++i)
        for (int j = 0; j < tb.s; ++j) scale = std::max(scale, std::abs(r(i, j)));
    if (max_imag > 1e-10 * (scale + 1.0))
        throw std::runtime_error("matrix_power_real: residual imaginary part");
    return r;
}

}  // namespace gcq
