#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "gsig/graph.hpp"
#include "gsig/kernel.hpp"
#include "gsig/spectral.hpp"

namespace gsig {

enum class op_kind { identity, mask, filter, masked_filter };

/// Measurement operator H: identity, row-selection mask, graph filter h(L),
/// or mask composed after a graph filter. Filters apply exactly through a
/// basis or approximately through Chebyshev on a Laplacian.
class LinearOperator {
public:
  static LinearOperator identity(Eigen::Index n);
  static LinearOperator mask(Eigen::Index n, std::vector<Eigen::Index> indices);
  static LinearOperator graph_filter(std::shared_ptr<const SpectralBasis> basis,
                                     Kernel h);
  static LinearOperator graph_filter(std::shared_ptr<const Laplacian> lap,
                                     Kernel h, int order = 30);
  static LinearOperator masked_filter(LinearOperator filter_op,
                                      std::vector<Eigen::Index> indices);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd adjoint(const Eigen::VectorXd& y) const;

  Eigen::Index rows() const noexcept { return rows_; }
  Eigen::Index cols() const noexcept { return cols_; }
  /// Upper bound on the spectral norm (1 for masks, max |h| on a 1001-point
  /// grid of [0, lambda_max] for filters).
  double norm_bound() const noexcept { return norm_bound_; }
  op_kind kind() const noexcept { return kind_; }

  bool is_filter() const noexcept {
    return kind_ == op_kind::identity || kind_ == op_kind::filter;
  }
  /// Kernel of a filter/identity operator (identity reports constant 1).
  const Kernel& filter_kernel() const;
  const std::vector<Eigen::Index>& mask_indices() const;

  Eigen::MatrixXd to_dense() const;  ///< desk scale only

private:
  LinearOperator() = default;

  Eigen::VectorXd filter_apply(const Eigen::VectorXd& x) const;

  op_kind kind_ = op_kind::identity;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  double norm_bound_ = 1.0;
  std::vector<Eigen::Index> indices_;
  std::optional<Kernel> kernel_;
  std::shared_ptr<const SpectralBasis> basis_;
  std::shared_ptr<const Laplacian> lap_;
  int order_ = 30;
};

/// y = H x + noise, with signal PSD s2, noise PSD (constant sigma^2 for
/// i.i.d. noise), and prior mean (empty vector means zero).
struct WienerProblem {
  LinearOperator H;
  Kernel s2;
  Kernel noise = Kernel::constant(0.0);
  Eigen::VectorXd mean;
  Eigen::VectorXd y;
};

/// g = h s2 / (h^2 s2 + n), with 0/0 = 0.
Kernel wiener_kernel(const Kernel& h, const Kernel& s2, const Kernel& n);

/// x = m + g(L)(y - h(L)m) for filter-type H.
Eigen::VectorXd wiener_filter(const SpectralBasis& basis,
                              const WienerProblem& p);
Eigen::VectorXd wiener_filter(const Laplacian& lap, const WienerProblem& p,
                              int order = 30);

struct SolveOptions {
  double beta = 0.0;    ///< 0 selects 1/(2*norm_bound^2)
  double eps = 1e-8;    ///< relative-change stopping tolerance
  int max_iter = 2000;
  double delta = 1e-12;
  int order = 30;       ///< Chebyshev order on the Laplacian-only path
};

struct SolveResult {
  Eigen::VectorXd x;
  std::vector<double> objective;  ///< one entry per accepted iterate
  int iterations = 0;
  bool converged = false;
};

/// Accelerated proximal-gradient minimization of
///   ||Hx - y||^2 + ||w(L)(x - m)||^2,  w^2 = n/s2,
/// with the proximal step applied as the spectral kernel s2/(s2 + beta*n)
/// (0/0 = 0, so the solution is pinned to the mean where s2 vanishes).
SolveResult wiener_optimize(const SpectralBasis& basis, const WienerProblem& p,
                            const SolveOptions& opts = {});
SolveResult wiener_optimize(const Laplacian& lap, const WienerProblem& p,
                            const SolveOptions& opts = {});

/// Closed-form estimator for linear measurements with i.i.d. noise:
/// x = m + Sxy Sy^{-1} (y - Hm), Sxy = Sigma H', Sy = H Sigma H' + sigma2 I.
Eigen::VectorXd lmmse_from_covariance(const Eigen::MatrixXd& sigma_x,
                                      const LinearOperator& H, double sigma2,
                                      const Eigen::VectorXd& mean,
                                      const Eigen::VectorXd& y);

/// Same with Sigma built from the PSD kernel of the problem; the noise
/// kernel must be constant.
Eigen::VectorXd lmmse_closed_form(const SpectralBasis& basis,
                                  const WienerProblem& p);

/// Noise-free interpolation: x = m + Sigma H'(H Sigma H')^{-1}(y - Hm);
/// satisfies Hx = y exactly when the reduced system is invertible.
Eigen::VectorXd wiener_interpolate_noiseless(const SpectralBasis& basis,
                                             const LinearOperator& H,
                                             const Eigen::VectorXd& y,
                                             const Kernel& s2,
                                             const Eigen::VectorXd& mean);

struct ConstrainedOptions {
  double bisect_tol = 1e-3;  ///< accept residual in [eps*(1-tol), eps]
  int max_bisect = 200;
  double cg_tol = 1e-12;
  int cg_max_iter = 20000;
  int pd_max_iter = 40000;
  double pd_tol = 1e-11;
};

struct ConstrainedResult {
  Eigen::VectorXd x;
  double residual = 0.0;   ///< ||Hx - y||
  double objective = 0.0;  ///< x'Lx, or ||grad x||_1 for the TV solver
  bool converged = true;
};

/// min x'Lx  s.t. ||Hx - y|| <= eps, via bisection on the Lagrangian
/// parameter with warm-started conjugate-gradient solves. The returned
/// iterate is always on the feasible side.
ConstrainedResult tikhonov_solve(const Laplacian& lap, const LinearOperator& H,
                                 const Eigen::VectorXd& y, double eps,
                                 const ConstrainedOptions& opts = {},
                                 const SpectralBasis* basis = nullptr);

/// min ||grad x||_1  s.t. ||Hx - y|| <= eps, bisection over the penalty
/// parameter with a warm-started primal-dual inner solver.
ConstrainedResult tv_solve(const Laplacian& lap,
                           const Eigen::SparseMatrix<double>& grad,
                           const LinearOperator& H, const Eigen::VectorXd& y,
                           double eps, const ConstrainedOptions& opts = {},
                           const SpectralBasis* basis = nullptr);

/// eps = sigma * sqrt(measurement count).
double epsilon_rule(double sigma, Eigen::Index m);

}  // namespace gsig
