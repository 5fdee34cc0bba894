// Compact fourth-order discretization of -Laplace on an interval or square
// with homogeneous Dirichlet boundary. The operator is M^{-1} D2 with D2 the
// three-point second difference and M the 1/12(1,10,1) averaging stencil;
// both share the discrete sine eigenvectors, so the operator is diagonal in
// the sine basis with strictly positive eigenvalues.
#pragma once

#include <vector>

namespace gcq {

class SpatialOperator {
  public:
    // dim 1: interval [a,b] with J subdivisions, J-1 interior points.
    // dim 2: square [a,b]^2, (J-1)^2 interior points, x fastest.
    SpatialOperator(int dim, int J, double a, double b);

    int dim() const { return dim_; }
    int subdivisions() const { return J_; }
    double spacing() const { return h_; }
    int points() const;                       // interior point count
    double coord(int j) const;                // 1D interior abscissa, j in [0, J-2]
    const std::vector<double>& mode_values() const { return mu_; }
    double mode_value_2d(int kx, int ky) const { return mu_[kx] + mu_[ky]; }

    // sine-basis round trip; both are involutions up to the 2/J weight
    std::vector<double> to_modes(const std::vector<double>& v) const;
    std::vector<double> from_modes(const std::vector<double>& vhat) const;

    // -Laplacian approximation through the sine diagonalization
    std::vector<double> apply(const std::vector<double>& v) const;
    // same operator through the banded factors, with explicit boundary data;
    // kept as an independent route for cross-checking (1D only)
    std::vector<double> apply_banded(const std::vector<double>& v, double left,
                                     double right) const;

    // discrete L2 norm: h^dim weighted Euclidean norm
    double norm(const std::vector<double>& v) const;

  private:
    void check_size(const std::vector<double>& v) const;
    int dim_;
    int J_;
    double a_, b_, h_;
    std::vector<double> mu_;   // 1D eigenvalues, size J-1
    std::vector<double> sin_;  // (J-1)^2 table sin(jk pi / J)
};

SpatialOperator compact_laplacian(int dim, int J, double a, double b);

}  // namespace gcq
