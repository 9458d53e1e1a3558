#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gsig/graph.hpp"
#include "gsig/kernel.hpp"

namespace gsig {

/// Half-open index range [begin, end) of eigenvalues that are numerically
/// equal (gap below 1e-8 * lambda_max).
struct EigCluster {
  Eigen::Index begin;
  Eigen::Index end;
};

/// Eigenpairs of a Laplacian: ascending eigenvalues (lambda_0 = 0, tiny
/// negative round-off clamped) and orthonormal eigenvectors as columns of U
/// with a fixed sign convention.
class SpectralBasis {
public:
  SpectralBasis(Eigen::VectorXd lambdas, Eigen::MatrixXd U);

  const Eigen::VectorXd& lambdas() const noexcept { return lambdas_; }
  const Eigen::MatrixXd& U() const noexcept { return U_; }
  Eigen::Index n() const noexcept { return lambdas_.size(); }
  double lambda_max() const noexcept { return lambdas_[lambdas_.size() - 1]; }
  const std::vector<EigCluster>& clusters() const noexcept { return clusters_; }

private:
  Eigen::VectorXd lambdas_;
  Eigen::MatrixXd U_;
  std::vector<EigCluster> clusters_;
};

/// Dense eigendecomposition; guarded by `limit` because cost is O(n^3).
/// Larger problems should stay on the Chebyshev paths.
SpectralBasis eigendecompose(const Laplacian& lap, Eigen::Index limit = 5000);

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& x);
Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& xhat);

/// U g(Lambda) U' X.
Eigen::MatrixXd filter_exact(const SpectralBasis& basis, const Kernel& g,
                             const Eigen::MatrixXd& X);

/// Chebyshev-polynomial approximation of g(L) X on [0, lambda_max_bound],
/// three-term recurrence, cost O(order * nnz(L) * cols).
Eigen::MatrixXd filter_chebyshev(const Laplacian& lap, const Kernel& g,
                                 const Eigen::MatrixXd& X, int order = 30);

/// Chebyshev interpolation coefficients of g on [0, lambda_max],
/// c_0 halved already applied at evaluation time (raw coefficients here).
std::vector<double> chebyshev_coefficients(const Kernel& g, double lambda_max,
                                           int order);

/// g(L) delta_i: column i of the filter matrix.
Eigen::VectorXd localize(const SpectralBasis& basis, const Kernel& g,
                         Eigen::Index i);
Eigen::VectorXd localize(const Laplacian& lap, const Kernel& g, Eigen::Index i,
                         int order = 30);

}  // namespace gsig
