#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "specparse.hpp"

namespace gcq {

namespace {

void check_monotone(const Mesh& m) {
    if (m.t.size() < 2) throw std::invalid_argument("mesh: needs at least one step");
    if (m.t.front() != 0.0) throw std::invalid_argument("mesh: must start at 0");
    for (size_t i = 1; i < m.t.size(); ++i)
        if (!(m.t[i] > m.t[i - 1]))
            throw std::invalid_argument("mesh: nodes must increase strictly");
}

}  // namespace

double Mesh::tau_min() const {
    double m = tau(1);
    for (int n = 2; n <= steps(); ++n) m = std::min(m, tau(n));
    return m;
}

double Mesh::tau_max() const {
    double m = tau(1);
    for (int n = 2; n <= steps(); ++n) m = std::max(m, tau(n));
    return m;
}

double Mesh::quasi_uniformity() const {
    double q = 1.0;
    for (int n = 2; n <= steps(); ++n) {
        double r = tau(n) / tau(n - 1);
        q = std::max(q, 0.5 * (r + 1.0 / r));
    }
    return q;
}

Mesh mesh_uniform(double T, int N) { return mesh_graded(T, N, 1.0); }

Mesh mesh_graded(double T, int N, double gamma) {
    if (!(T > 0.0)) throw std::invalid_argument("mesh: horizon must be positive");
    if (N < 1) throw std::invalid_argument("mesh: needs at least one step");
    if (!(gamma >= 1.0)) throw std::invalid_argument("mesh: grading exponent must be >= 1");
    Mesh m;
    m.t.resize(N + 1);
    for (int n = 0; n <= N; ++n) m.t[n] = T * std::pow(double(n) / N, gamma);
    m.t[N] = T;
    check_monotone(m);
    return m;
}

Mesh mesh_two_singularities(double T, int N, double sigma, double g1, double g2) {
    if (!(T > 0.0) || !(sigma > 0.0) || !(sigma < T))
        throw std::invalid_argument("mesh: need 0 < sigma < T");
    if (!(g1 >= 1.0) || !(g2 >= 1.0))
        throw std::invalid_argument("mesh: grading exponents must be >= 1");
    int N1 = int(std::floor(N * sigma / T));
    if (N1 < 2 || N - N1 < 2)
        throw std::invalid_argument("mesh: too few steps on one side of sigma");
    Mesh m;
    m.t.resize(N + 1);
    m.t[0] = 0.0;
    // [0, sigma]: step weights clustered at both segment ends
    std::vector<double> w(N1);
    double wsum = 0.0;
    for (int n = 1; n <= N1; ++n) {
        w[n - 1] = std::pow(double(n), g1 - 1.0) * std::pow(double(N1 - n + 1), g2 - 1.0);
        wsum += w[n - 1];
    }
    double acc = 0.0;
    for (int n = 1; n <= N1; ++n) {
        acc += w[n - 1];
        m.t[n] = sigma * (acc / wsum);
    }
    m.t[N1] = sigma;
    // [sigma, T]: graded away from sigma
    for (int k = N1 + 1; k <= N; ++k)
        m.t[k] = sigma + (T - sigma) * std::pow(double(k - N1) / (N - N1), g2);
    m.t[N] = T;
    check_monotone(m);
    return m;
}

Mesh mesh_refine_half(const Mesh& m) {
    Mesh r;
    r.t.reserve(2 * m.t.size() - 1);
    for (size_t i = 0; i + 1 < m.t.size(); ++i) {
        r.t.push_back(m.t[i]);
        r.t.push_back(0.5 * (m.t[i] + m.t[i + 1]));
    }
    r.t.push_back(m.t.back());
    check_monotone(r);
    return r;
}

Mesh mesh_random(double T, int N, unsigned seed) {
    if (!(T > 0.0)) throw std::invalid_argument("mesh: horizon must be positive");
    if (N < 1) throw std::invalid_argument("mesh: need at least one step");
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(0.0, T);
    std::vector<double> r(size_t(N) - 1);
    for (double& x : r) x = d(gen);
    std::sort(r.begin(), r.end());
    Mesh m;
    m.t.resize(size_t(N) + 1);
    m.t[0] = 0.0;
    m.t[size_t(N)] = T;
    for (int n = 1; n < N; ++n)
        m.t[size_t(n)] = 0.8 * r[size_t(n) - 1] + 0.2 * T * n / N;
    return m;
}

Mesh mesh_parse(const std::string& spec) {
    auto [kind, body] = split_kind(spec, "mesh");
    auto kv = parse_kv(body, "mesh");
    auto need = [&](const char* k) { return need_key(kv, k, "mesh"); };
    if (kind == "uniform")
        return mesh_uniform(need("T"), int(need("N")));
    if (kind == "graded")
        return mesh_graded(need("T"), int(need("N")), need("gamma"));
    if (kind == "twosing")
        return mesh_two_singularities(need("T"), int(need("N")),
                                      need("sigma"), need("g1"), need("g2"));
    if (kind == "random")
        return mesh_random(need("T"), int(need("N")), unsigned(need("seed")));
    throw std::invalid_argument("mesh spec: unknown kind '" + kind + "'");
}

}  // namespace gcq
