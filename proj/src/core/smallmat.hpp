// Fixed-capacity dense matrices and vectors for Runge-Kutta stage space.
// Stage counts are tiny (s <= 4), so everything lives on the stack and
// LU factorizations are written out directly with partial pivoting.

#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace gcq {

using cplx = std::complex<double>;

inline constexpr int kMaxStages = 4;

template <class T>
struct SVec {
    int n = 0;
    std::array<T, kMaxStages> v{};

    SVec() = default;
    explicit SVec(int size, T fill = T{}) : n(size) { v.fill(T{}); for (int i = 0; i < n; ++i) v[i] = fill; }
    T& operator[](int i) { return v[i]; }
    const T& operator[](int i) const { return v[i]; }
};

template <class T>
struct SMat {
    int n = 0;
    std::array<T, kMaxStages * kMaxStages> a{};

    SMat() = default;
    explicit SMat(int size) : n(size) { a.fill(T{}); }
    T& operator()(int i, int j) { return a[i * kMaxStages + j]; }
    const T& operator()(int i, int j) const { return a[i * kMaxStages + j]; }

    static SMat identity(int size) {
        SMat m(size);
        for (int i = 0; i < size; ++i) m(i, i) = T(1);
        return m;
    }
};

using RVecS = SVec<double>;
using CVecS = SVec<cplx>;
using RMatS = SMat<double>;
using CMatS = SMat<cplx>;

template <class T>
SVec<T> matvec(const SMat<T>& m, const SVec<T>& x) {
    assert(m.n == x.n);
    SVec<T> y(m.n);
    for (int i = 0; i < m.n; ++i) {
        T s{};
        for (int j = 0; j < m.n; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

template <class T>
SMat<T> matmul(const SMat<T>& a, const SMat<T>& b) {
    assert(a.n == b.n);
    SMat<T> c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            T aik = a(i, k);
            for (int j = 0; j < a.n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// In-place LU with partial pivoting; perm holds the row order.
template <class T>
struct SLU {
    SMat<T> lu;
    std::array<int, kMaxStages> perm{};

    explicit SLU(SMat<T> m) : lu(std::move(m)) {
        const int n = lu.n;
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(lu(k, k));
            for (int i = k + 1; i < n; ++i) {
                double v = std::abs(lu(i, k));
                if (v > best) { best = v; p = i; }
            }
            if (best == 0.0) throw std::runtime_error("SLU: singular stage matrix");
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
                std::swap(perm[k], perm[p]);
            }
            for (int i = k + 1; i < n; ++i) {
                lu(i, k) /= lu(k, k);
                T lik = lu(i, k);
                for (int j = k + 1; j < n; ++j) lu(i, j) -= lik * lu(k, j);
            }
        }
    }

    SVec<T> solve(const SVec<T>& b) const {
        const int n = lu.n;
        SVec<T> x(n);
        for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
            x[i] /= lu(i, i);
        }
        return x;
    }

    SMat<T> solve(const SMat<T>& b) const {
        const int n = lu.n;
        SMat<T> x(n);
        for (int c = 0; c < n; ++c) {
            SVec<T> col(n);
            for (int i = 0; i < n; ++i) col[i] = b(i, c);
            SVec<T> s = solve(col);
            for (int i = 0; i < n; ++i) x(i, c) = s[i];
        }
        return x;
    }
};

template <class T>
SMat<T> inverse(const SMat<T>& m) {
    return SLU<T>(m).solve(SMat<T>::identity(m.n));
}

inline CMatS to_complex(const RMatS& m) {
    CMatS c(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) c(i, j) = m(i, j);
    return c;
}

inline RMatS real_part(const CMatS& m, double* max_imag = nullptr) {
    RMatS r(m.n);
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            r(i, j) = m(i, j).real();
            worst = std::max(worst, std::abs(m(i, j).imag()));
        }
    if (max_imag) *max_imag = worst;
    return r;
}

}  // namespace gcq
