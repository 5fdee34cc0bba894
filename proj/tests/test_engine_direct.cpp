#include "core/engine_direct.hpp"

#include <cmath>
#include <vector>

#include "core/special.hpp"
#include "doctest.h"

using namespace gcq;

namespace {

double frob(const RMatS& m) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

double max_err_vs_exact(const std::vector<double>& u, const Mesh& mesh, const Kernel& k,
                        double beta) {
    double e = 0.0;
    for (int n = 0; n <= mesh.steps(); ++n)
        e = std::max(e, std::abs(u[n] - k.exact_power(beta, mesh.t[n])));
    return e;
}

}  // namespace

TEST_CASE("single-node recursion tracks the scalar ODE solution") {
    const double x = 2.0, T = 1.0;
    auto run = [&](const Tableau& tb, int N) {
        Mesh m = mesh_uniform(T, N);
        double y = 0.0;
        RVecS fst(tb.s);
        for (int n = 1; n <= N; ++n) {
            double tau = m.tau(n);
            for (int i = 0; i < tb.s; ++i) {
                double t = m.t[n - 1] + tb.c[i] * tau;
                fst[i] = t * t;
            }
            y = rk_node_step(tb, tau, x, y, fst)[tb.s - 1];
        }
        return std::abs(y - scalar_ode_solution(x, 2.0, T));
    };
    double e32 = run(radau2(), 32), e64 = run(radau2(), 64), e128 = run(radau2(), 128);
    double eoc1 = std::log2(e32 / e64), eoc2 = std::log2(e64 / e128);
    CHECK(eoc1 >= 2.7);
    CHECK(eoc2 >= 2.7);
    CHECK(eoc2 <= 3.3);
    CHECK(e128 <= 1e-7);

    double f32 = run(radau3(), 32), f64 = run(radau3(), 64);
    CHECK(std::log2(f32 / f64) >= 4.5);
    CHECK(std::log2(f32 / f64) <= 5.5);
}

TEST_CASE("pure integration of t^2 is exact for Radau nodes") {
    auto& tb = radau2();
    Mesh m = mesh_graded(1.0, 7, 2.0);
    double y = 0.0;
    RVecS fst(tb.s);
    for (int n = 1; n <= 7; ++n) {
        double tau = m.tau(n);
        for (int i = 0; i < tb.s; ++i) {
            double t = m.t[n - 1] + tb.c[i] * tau;
            fst[i] = t * t;
        }
        y = rk_node_step(tb, tau, 0.0, y, fst)[tb.s - 1];
    }
    CHECK(y == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("fractional integral of t^0.5 on a strongly graded mesh") {
    auto k = kernel_fracint(0.5);
    auto f = [](double t) { return std::sqrt(t); };
    Mesh m64 = mesh_graded(1.0, 64, 6.0);
    Mesh m128 = mesh_graded(1.0, 128, 6.0);
    auto u64 = gcq_direct(k, radau2(), m64, f, 1e-12);
    auto u128 = gcq_direct(k, radau2(), m128, f, 1e-12);
    CHECK(u64[0] == 0.0);
    double e64 = max_err_vs_exact(u64, m64, k, 0.5);
    double e128 = max_err_vs_exact(u128, m128, k, 0.5);
    CHECK(e64 <= 1e-3);
    double eoc = std::log2(e64 / e128);
    CHECK(eoc >= 2.5);
    CHECK(eoc <= 3.5);
}

TEST_CASE("resolvent kernel convolution through the log-space rule") {
    auto k = kernel_resolvent(0.5);
    auto f = [](double t) { return std::sqrt(t); };
    Mesh m32 = mesh_graded(1.0, 32, 3.0);
    Mesh m64 = mesh_graded(1.0, 64, 3.0);
    double e32 = max_err_vs_exact(gcq_direct(k, radau2(), m32, f, 1e-12), m32, k, 0.5);
    double e64 = max_err_vs_exact(gcq_direct(k, radau2(), m64, f, 1e-12), m64, k, 0.5);
    CHECK(e64 <= 2e-4);
    double eoc = std::log2(e32 / e64);
    CHECK(eoc >= 2.3);
    CHECK(eoc <= 3.7);
}

TEST_CASE("shifted kernel convolution agrees with its confluent closed form") {
    auto k = kernel_shifted(0.5);
    auto f = [](double t) { return t; };
    Mesh m32 = mesh_graded(1.0, 32, 2.0);
    Mesh m64 = mesh_graded(1.0, 64, 2.0);
    double e32 = max_err_vs_exact(gcq_direct(k, radau2(), m32, f, 1e-12), m32, k, 1.0);
    double e64 = max_err_vs_exact(gcq_direct(k, radau2(), m64, f, 1e-12), m64, k, 1.0);
    CHECK(e64 <= 1e-4);
    double eoc = std::log2(e32 / e64);
    CHECK(eoc >= 2.3);
    CHECK(eoc <= 3.7);
}

TEST_CASE("zero data stays zero; single step stays finite") {
    auto k = kernel_fracint(0.3);
    Mesh m = mesh_uniform(1.0, 4);
    auto u = gcq_direct(k, radau3(), m, [](double) { return 0.0; }, 1e-10);
    for (double v : u) CHECK(v == 0.0);
    Mesh m1 = mesh_uniform(0.5, 1);
    auto u1 = gcq_direct(k, radau2(), m1, [](double t) { return 1.0 + t; }, 1e-10);
    CHECK(std::isfinite(u1[1]));
    CHECK(u1[1] > 0.0);
}

TEST_CASE("stage weights reproduce the engine output") {
    auto k = kernel_fracint(0.5);
    auto& tb = radau2();
    Mesh m = mesh_graded(1.0, 8, 2.0);
    auto f = [](double t) { return std::sqrt(t) * (1.0 + t); };
    auto u = gcq_direct(k, tb, m, f, 1e-12);
    auto wt = gcq_weights(k, tb, m, 1e-12);
    for (int n = 1; n <= 8; ++n) {
        RVecS acc(tb.s);
        for (int j = 1; j <= n; ++j) {
            double tau = m.tau(j);
            for (int a = 0; a < tb.s; ++a)
                for (int b = 0; b < tb.s; ++b)
                    acc[a] += wt.at(n, j)(a, b) * f(m.t[j - 1] + tb.c[b] * tau);
        }
        CHECK(acc[tb.s - 1] == doctest::Approx(u[n]).epsilon(1e-10));
    }
}

TEST_CASE("diagonal weight is the fractional power of tau A") {
    for (auto tb : {&radau2(), &radau3()}) {
        Mesh m = mesh_graded(1.0, 6, 1.8);
        for (auto& k : {kernel_fracint(0.5), kernel_fracint_dual(0.3)}) {
            auto wt = gcq_weights(k, *tb, m, 1e-12);
            for (int n = 1; n <= 6; ++n) {
                RMatS ref = matrix_power_real(*tb, m.tau(n), k.alpha);
                double scale = frob(ref);
                RMatS got = wt.at(n, n);
                double d = 0.0;
                for (int i = 0; i < tb->s; ++i)
                    for (int j = 0; j < tb->s; ++j)
                        d = std::max(d, std::abs(got(i, j) - ref(i, j)));
                CHECK(d <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("uniform-mesh weights depend only on the lag") {
    auto k = kernel_fracint(0.5);
    auto& tb = radau2();
    Mesh m = mesh_uniform(1.0, 12);
    auto wt = gcq_weights(k, tb, m, 1e-12);
    for (int n = 2; n <= 11; ++n)
        for (int j = 1; j <= n; ++j) {
            const RMatS& a = wt.at(n, j);
            const RMatS& b = wt.at(n + 1, j + 1);
            for (int p = 0; p < tb.s; ++p)
                for (int q = 0; q < tb.s; ++q)
                    CHECK(std::abs(a(p, q) - b(p, q)) <= 1e-10 * (1.0 + std::abs(a(p, q))));
        }
}

TEST_CASE("weights of two fractional orders compose to their sum") {
    auto& tb = radau2();
    Mesh m = mesh_graded(1.0, 8, 1.7);
    auto wa = gcq_weights(kernel_fracint(0.35), tb, m, 1e-12);
    auto wb = gcq_weights(kernel_fracint(0.45), tb, m, 1e-12);
    auto wc = gcq_weights(kernel_fracint(0.80), tb, m, 1e-12);
    for (int n = 1; n <= 8; ++n)
        for (int j = 1; j <= n; ++j) {
            RMatS comp(tb.s);
            for (int k2 = j; k2 <= n; ++k2) {
                const RMatS& A = wa.at(n, k2);
                const RMatS& B = wb.at(k2, j);
                for (int p = 0; p < tb.s; ++p)
                    for (int r = 0; r < tb.s; ++r)
                        for (int q = 0; q < tb.s; ++q)
                            comp(p, q) += A(p, r) * B(r, q);
            }
            const RMatS& ref = wc.at(n, j);
            for (int p = 0; p < tb.s; ++p)
                for (int q = 0; q < tb.s; ++q)
                    CHECK(std::abs(comp(p, q) - ref(p, q)) <= 3e-8 * (1.0 + std::abs(ref(p, q))));
        }
}

TEST_CASE("weight norms sit under the mesh-width envelope with a stable constant") {
    for (double alpha : {0.3, 0.7}) {
        auto k = kernel_fracint(alpha);
        std::vector<double> cs;
        for (int N : {16, 32, 64}) {
            Mesh m = mesh_graded(1.0, N, 3.0);
            auto wt = gcq_weights(k, radau2(), m, 1e-10);
            double c = 0.0;
            for (int n = 1; n <= N; ++n)
                for (int j = 1; j <= n; ++j) {
                    double envelope = m.tau(j) * std::pow(m.t[n] - m.t[j - 1], alpha - 1.0);
                    c = std::max(c, frob(wt.at(n, j)) / envelope);
                }
            cs.push_back(c);
        }
        double lo = std::min({cs[0], cs[1], cs[2]}), hi = std::max({cs[0], cs[1], cs[2]});
        CHECK(hi / lo <= 2.0);
        CHECK(hi <= 50.0);
    }
}
