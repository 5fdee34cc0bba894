// Time meshes on [0, T]: uniform, algebraically graded toward t = 0,
// graded toward two singular times, and the midpoint refinement used by
// self-convergence studies. Node vectors are strictly increasing with
// t[0] = 0.

#pragma once

#include <string>
#include <vector>

namespace gcq {

struct Mesh {
    std::vector<double> t;

    int steps() const { return int(t.size()) - 1; }
    double horizon() const { return t.back(); }
    double tau(int n) const { return t[n] - t[n - 1]; }  // n in [1, steps()]
    double tau_min() const;
    double tau_max() const;
    // (1/2) max_n (tau_n/tau_{n-1} + tau_{n-1}/tau_n)
    double quasi_uniformity() const;
};

Mesh mesh_uniform(double T, int N);
Mesh mesh_graded(double T, int N, double gamma);  // t_n = T (n/N)^gamma
// grading toward 0 (strength g1) and toward sigma from both sides (g2)
Mesh mesh_two_singularities(double T, int N, double sigma, double g1, double g2);
Mesh mesh_refine_half(const Mesh& m);  // 2N steps, even nodes coincide exactly

// seeded irregular mesh for property probes: sorted uniform draws blended
// with the equispaced grid so no step collapses below 0.2 T/N
Mesh mesh_random(double T, int N, unsigned seed);

// "uniform:T=1,N=64" | "graded:T=1,N=64,gamma=3" |
// "twosing:T=1,N=64,sigma=0.28,g1=6,g2=3.5" | "random:T=1,N=64,seed=7"
Mesh mesh_parse(const std::string& spec);

}  // namespace gcq
