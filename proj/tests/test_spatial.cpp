#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "core/spatial.hpp"

using namespace gcq;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> random_interior(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(static_cast<size_t>(n));
    for (double& x : v) x = d(gen);
    return v;
}
}  // namespace

TEST_CASE("constructor rejects bad shapes") {
    CHECK_THROWS(SpatialOperator(3, 16, 0.0, 1.0));
    CHECK_THROWS(SpatialOperator(1, 3, 0.0, 1.0));
    CHECK_THROWS(SpatialOperator(1, 16, 1.0, 1.0));
    CHECK_THROWS(SpatialOperator(2, 16, 2.0, -1.0));
}

TEST_CASE("point counts, spacing, coordinates") {
    SpatialOperator s1(1, 8, 0.0, 2.0);
    CHECK(s1.points() == 7);
    CHECK(s1.spacing() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s1.coord(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s1.coord(6) == doctest::Approx(1.75).epsilon(1e-15));

    SpatialOperator s2(2, 8, -1.0, 1.0);
    CHECK(s2.points() == 49);
    CHECK(s2.spacing() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("mode values are positive and strictly increasing") {
    SpatialOperator sp(1, 32, 0.0, 1.0);
    const auto& mu = sp.mode_values();
    REQUIRE(mu.size() == 31);
    CHECK(mu[0] > 0.0);
    for (size_t k = 1; k < mu.size(); ++k) CHECK(mu[k] > mu[k - 1]);
}

TEST_CASE("sine transform round trip") {
    for (int dim : {1, 2}) {
        SpatialOperator sp(dim, 16, 0.0, 1.0);
        auto v = random_interior(sp.points(), 7u + unsigned(dim));
        auto w = sp.from_modes(sp.to_modes(v));
        auto z = sp.to_modes(sp.from_modes(v));
        for (int j = 0; j < sp.points(); ++j) {
            CHECK(w[size_t(j)] == doctest::Approx(v[size_t(j)]).epsilon(1e-13));
            CHECK(z[size_t(j)] == doctest::Approx(v[size_t(j)]).epsilon(1e-13));
        }
    }
}

TEST_CASE("pure sine mode is an eigenvector of both routes") {
    const int J = 24, k = 3;
    SpatialOperator sp(1, J, 0.0, 1.0);
    std::vector<double> v(size_t(J - 1));
    for (int j = 0; j < J - 1; ++j) v[size_t(j)] = std::sin(k * pi * sp.coord(j));
    const double mu = sp.mode_values()[size_t(k - 1)];

    auto a = sp.apply(v);
    auto b = sp.apply_banded(v, 0.0, 0.0);
    for (int j = 0; j < J - 1; ++j) {
        CHECK(a[size_t(j)] == doctest::Approx(mu * v[size_t(j)]).epsilon(1e-11));
        CHECK(b[size_t(j)] == doctest::Approx(mu * v[size_t(j)]).epsilon(1e-11));
    }
}

TEST_CASE("banded and spectral routes agree on arbitrary data") {
    const int J = 32;
    SpatialOperator sp(1, J, 0.0, 1.0);
    auto v = random_interior(J - 1, 11u);
    auto a = sp.apply(v);
    auto b = sp.apply_banded(v, 0.0, 0.0);
    // both are the same operator; the gap is pure roundoff scaled by |mu|_max
    const double scale = sp.mode_values().back();
    for (int j = 0; j < J - 1; ++j)
        CHECK(std::abs(a[size_t(j)] - b[size_t(j)]) <= 1e-12 * scale);
}

TEST_CASE("constants pass through the banded route to exact zero") {
    const int J = 16;
    SpatialOperator sp(1, J, 0.0, 1.0);
    std::vector<double> v(size_t(J - 1), 1.0);
    auto w = sp.apply_banded(v, 1.0, 1.0);
    for (double x : w) CHECK(x == 0.0);
}

TEST_CASE("fourth order on a two-mode function") {
    // u = sin(pi x) + sin(2 pi x): second derivatives vanish at both ends,
    // so the compact stencil keeps its full interior order
    auto worst = [](int J) {
        SpatialOperator sp(1, J, 0.0, 1.0);
        std::vector<double> v(size_t(J - 1)), exact(size_t(J - 1));
        for (int j = 0; j < J - 1; ++j) {
            const double x = sp.coord(j);
            v[size_t(j)] = std::sin(pi * x) + std::sin(2 * pi * x);
            exact[size_t(j)] =
                pi * pi * std::sin(pi * x) + 4 * pi * pi * std::sin(2 * pi * x);
        }
        auto w = sp.apply_banded(v, 0.0, 0.0);
        double e = 0.0;
        for (int j = 0; j < J - 1; ++j)
            e = std::max(e, std::abs(w[size_t(j)] - exact[size_t(j)]));
        return e;
    };
    const double e32 = worst(32), e64 = worst(64);
    const double ratio = e32 / e64;
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
}

TEST_CASE("2d tensor mode is an eigenvector") {
    const int J = 12;
    SpatialOperator sp(2, J, -1.0, 1.0);
    const int n = J - 1;
    std::vector<double> v(size_t(n) * size_t(n));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            v[size_t(l) * size_t(n) + size_t(k)] =
                std::sin(1 * pi * (k + 1) / double(J)) * std::sin(2 * pi * (l + 1) / double(J));
    const double lam = sp.mode_value_2d(0, 1);
    auto w = sp.apply(v);
    for (size_t j = 0; j < v.size(); ++j)
        CHECK(w[j] == doctest::Approx(lam * v[j]).epsilon(1e-11));
}

TEST_CASE("2d lowest mode approaches the Laplace eigenvalue at fourth order") {
    // on (-1,1)^2 the (1,1) mode of -Laplace has eigenvalue pi^2/2
    auto gap = [](int J) {
        SpatialOperator sp(2, J, -1.0, 1.0);
        return std::abs(sp.mode_value_2d(0, 0) - pi * pi / 2.0);
    };
    const double ratio = gap(16) / gap(32);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("discrete norm of the lowest mode matches the exact half-sum") {
    const int J = 20;
    SpatialOperator sp(1, J, 0.0, 1.0);
    std::vector<double> v(size_t(J - 1));
    for (int j = 0; j < J - 1; ++j) v[size_t(j)] = std::sin(pi * sp.coord(j));
    // h * sum sin^2(j pi / J) = h * J / 2 = 1/2 exactly
    CHECK(sp.norm(v) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}
