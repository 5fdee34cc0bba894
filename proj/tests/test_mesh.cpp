#include "doctest.h"

#include <cmath>

#include "core/mesh.hpp"

using namespace gcq;

TEST_CASE("graded mesh with unit exponent is uniform") {
    Mesh g = mesh_graded(2.0, 8, 1.0);
    Mesh u = mesh_uniform(2.0, 8);
    REQUIRE(g.steps() == 8);
    for (int n = 0; n <= 8; ++n) {
        CHECK(std::abs(g.t[n] - 0.25 * n) <= 1e-15);
        CHECK(g.t[n] == u.t[n]);
    }
    CHECK(u.quasi_uniformity() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quasi-uniformity of a short quadratically graded mesh") {
    Mesh m = mesh_graded(1.0, 4, 2.0);
    // steps 1/16, 3/16, 5/16, 7/16; worst neighbor ratio is 3
    CHECK(m.quasi_uniformity() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(m.tau_min() == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(m.tau_max() == doctest::Approx(7.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("graded mesh endpoints and monotone steps") {
    Mesh m = mesh_graded(1.0, 64, 3.0);
    CHECK(m.t[0] == 0.0);
    CHECK(m.t[64] == 1.0);
    for (int n = 2; n <= 64; ++n) CHECK(m.tau(n) > m.tau(n - 1));
    CHECK(m.tau_min() == m.tau(1));
    CHECK(m.tau_max() == m.tau(64));
}

TEST_CASE("two-singularity mesh hits sigma on a node and stays monotone") {
    Mesh m = mesh_two_singularities(1.0, 64, 0.28, 6.0, 10.0 / 3.0);
    REQUIRE(m.steps() == 64);
    int n1 = int(std::floor(64 * 0.28));
    CHECK(m.t[n1] == 0.28);
    CHECK(m.t[64] == 1.0);
    // step sizes shrink into sigma from both sides
    CHECK(m.tau(n1) < m.tau(n1 - 3));
    CHECK(m.tau(n1 + 1) < m.tau(n1 + 4));
    CHECK_THROWS(mesh_two_singularities(1.0, 5, 0.28, 6.0, 3.0));
    CHECK_THROWS(mesh_two_singularities(1.0, 64, 1.5, 6.0, 3.0));
}

TEST_CASE("midpoint refinement keeps even nodes bit-exact") {
    Mesh m = mesh_graded(1.0, 16, 3.0);
    Mesh r = mesh_refine_half(m);
    REQUIRE(r.steps() == 32);
    for (int k = 0; k <= 16; ++k) CHECK(r.t[2 * k] == m.t[k]);
}

TEST_CASE("mesh spec strings parse to the same nodes") {
    Mesh a = mesh_parse("graded:T=2,N=8,gamma=3");
    Mesh b = mesh_graded(2.0, 8, 3.0);
    REQUIRE(a.steps() == b.steps());
    for (size_t i = 0; i < a.t.size(); ++i) CHECK(a.t[i] == b.t[i]);
    Mesh c = mesh_parse("twosing:T=1,N=64,sigma=0.72,g1=6,g2=3.5");
    CHECK(c.steps() == 64);
    CHECK(mesh_parse("uniform:T=1,N=4").quasi_uniformity() == 1.0);

    CHECK_THROWS(mesh_parse("graded:T=1,N=8"));           // gamma missing
    CHECK_THROWS(mesh_parse("spiral:T=1,N=8"));           // unknown kind
    CHECK_THROWS(mesh_parse("graded:T=1,N=8,gamma=abc")); // not a number
    CHECK_THROWS(mesh_parse("graded"));                   // no body
    CHECK_THROWS(mesh_parse("graded:T=1,N=8,gamma=0.5")); // grading below 1
}
