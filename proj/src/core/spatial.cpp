#include "core/spatial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gcq {

SpatialOperator::SpatialOperator(int dim, int J, double a, double b)
    : dim_(dim), J_(J), a_(a), b_(b) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("spatial: dim must be 1 or 2");
    if (J < 4) throw std::invalid_argument("spatial: need at least 4 subdivisions");
    if (!(b > a)) throw std::invalid_argument("spatial: empty domain");
    h_ = (b - a) / J;
    const int n = J - 1;
    mu_.resize(n);
    for (int k = 1; k <= n; ++k) {
        double s = std::sin(0.5 * k * std::numbers::pi / J);
        double sigma = 4.0 * s * s;  // eigenvalue of h^2 D2
        mu_[k - 1] = (sigma / (h_ * h_)) / (1.0 - sigma / 12.0);
    }
    sin_.resize(size_t(n) * n);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
            sin_[size_t(j - 1) * n + (k - 1)] = std::sin(j * k * std::numbers::pi / J);
}

int SpatialOperator::points() const {
    int n = J_ - 1;
    return dim_ == 1 ? n : n * n;
}

double SpatialOperator::coord(int j) const { return a_ + (j + 1) * h_; }

void SpatialOperator::check_size(const std::vector<double>& v) const {
    if (int(v.size()) != points())
        throw std::invalid_argument("spatial: grid vector has wrong size");
}

std::vector<double> SpatialOperator::to_modes(const std::vector<double>& v) const {
    check_size(v);
    const int n = J_ - 1;
    const double scale = 2.0 / J_;
    std::vector<double> out(v.size());
    if (dim_ == 1) {
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += sin_[size_t(j) * n + k] * v[j];
            out[k] = scale * acc;
        }
        return out;
    }
    // rows then columns; the tensor transform factorizes
    std::vector<double> tmp(v.size());
    for (int y = 0; y < n; ++y)
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += sin_[size_t(j) * n + k] * v[size_t(y) * n + j];
            tmp[size_t(y) * n + k] = scale * acc;
        }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            for (int y = 0; y < n; ++y) acc += sin_[size_t(y) * n + l] * tmp[size_t(y) * n + k];
            out[size_t(l) * n + k] = scale * acc;
        }
    return out;
}

std::vector<double> SpatialOperator::from_modes(const std::vector<double>& vhat) const {
    check_size(vhat);
    const int n = J_ - 1;
    std::vector<double> out(vhat.size());
    if (dim_ == 1) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += sin_[size_t(j) * n + k] * vhat[k];
            out[j] = acc;
        }
        return out;
    }
    std::vector<double> tmp(vhat.size());
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += sin_[size_t(j) * n + k] * vhat[size_t(l) * n + k];
            tmp[size_t(l) * n + j] = acc;
        }
    for (int j = 0; j < n; ++j)
        for (int y = 0; y < n; ++y) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) acc += sin_[size_t(y) * n + l] * tmp[size_t(l) * n + j];
            out[size_t(y) * n + j] = acc;
        }
    return out;
}

std::vector<double> SpatialOperator::apply(const std::vector<double>& v) const {
    std::vector<double> vhat = to_modes(v);
    const int n = J_ - 1;
    if (dim_ == 1) {
        for (int k = 0; k < n; ++k) vhat[k] *= mu_[k];
    } else {
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k) vhat[size_t(l) * n + k] *= mu_[k] + mu_[l];
    }
    return from_modes(vhat);
}

std::vector<double> SpatialOperator::apply_banded(const std::vector<double>& v, double left,
                                                  double right) const {
    if (dim_ != 1) throw std::invalid_argument("spatial: banded route is one-dimensional");
    check_size(v);
    const int n = J_ - 1;
    const double ih2 = 1.0 / (h_ * h_);
    // rhs = D2 v with the supplied boundary samples
    std::vector<double> rhs(n);
    for (int j = 0; j < n; ++j) {
        double vm = (j == 0) ? left : v[j - 1];
        double vp = (j == n - 1) ? right : v[j + 1];
        rhs[j] = ih2 * (2.0 * v[j] - vm - vp);
    }
    // Thomas solve with M = tridiag(1,10,1)/12
    std::vector<double> c(n), out(n);
    double beta = 10.0 / 12.0;
    out[0] = rhs[0] / beta;
    for (int j = 1; j < n; ++j) {
        c[j] = (1.0 / 12.0) / beta;
        beta = 10.0 / 12.0 - (1.0 / 12.0) * c[j];
        out[j] = (rhs[j] - (1.0 / 12.0) * out[j - 1]) / beta;
    }
    for (int j = n - 2; j >= 0; --j) out[j] -= c[j + 1] * out[j + 1];
    return out;
}

double SpatialOperator::norm(const std::vector<double>& v) const {
    check_size(v);
    double acc = 0.0;
    for (double x : v) acc += x * x;
    double w = (dim_ == 1) ? h_ : h_ * h_;
    return std::sqrt(w * acc);
}

SpatialOperator compact_laplacian(int dim, int J, double a, double b) {
    return SpatialOperator(dim, J, a, b);
}

}  // namespace gcq
