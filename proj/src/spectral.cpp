#include "gsig/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gsig/threading.hpp"

namespace gsig {

SpectralBasis::SpectralBasis(Eigen::VectorXd lambdas, Eigen::MatrixXd U)
    : lambdas_(std::move(lambdas)), U_(std::move(U)) {
  const Eigen::Index n = lambdas_.size();
  require(n >= 1 && U_.rows() == n && U_.cols() == n, errc::dimension_mismatch,
          "spectral basis: U must be n x n with n eigenvalues");
  // zero eigenvalues land within solver round-off of 0, on either side
  double zero_thr = 1e-12 * std::max(lambdas_[n - 1], 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambdas_[i] < zero_thr) lambdas_[i] = 0;
    require(i == 0 || lambdas_[i] >= lambdas_[i - 1], errc::bad_input,
            "spectral basis: eigenvalues must be ascending");
  }
  double thr = 1e-8 * lambdas_[n - 1];
  if (thr <= 0) thr = 1e-12;
  clusters_.push_back({0, 1});
  for (Eigen::Index i = 1; i < n; ++i) {
    if (lambdas_[i] - lambdas_[i - 1] < thr)
      clusters_.back().end = i + 1;
    else
      clusters_.push_back({i, i + 1});
  }
}

SpectralBasis eigendecompose(const Laplacian& lap, Eigen::Index limit) {
  const Eigen::Index n = lap.n();
  require(n <= limit, errc::too_large,
          "eigendecompose: n=" + std::to_string(n) + " exceeds the dense limit " +
              std::to_string(limit) + "; use the Chebyshev filtering paths");
  Eigen::MatrixXd Ld(lap.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ld);
  require(es.info() == Eigen::Success, errc::singular_system,
          "eigendecompose: solver failed to converge");
  Eigen::MatrixXd U = es.eigenvectors();
  // Deterministic sign: first entry of significant magnitude made positive.
  for (Eigen::Index c = 0; c < n; ++c) {
    double mx = U.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(U(r, c)) > 1e-12 * mx) {
        if (U(r, c) < 0) U.col(c) = -U.col(c);
        break;
      }
    }
  }
  return SpectralBasis(es.eigenvalues(), std::move(U));
}

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& x) {
  require(x.size() == basis.n(), errc::dimension_mismatch,
          "gft: signal length does not match the basis");
  return basis.U().transpose() * x;
}

Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& xhat) {
  require(xhat.size() == basis.n(), errc::dimension_mismatch,
          "igft: coefficient length does not match the basis");
  return basis.U() * xhat;
}

Eigen::MatrixXd filter_exact(const SpectralBasis& basis, const Kernel& g,
                             const Eigen::MatrixXd& X) {
  require(X.rows() == basis.n(), errc::dimension_mismatch,
          "filter_exact: X has " + std::to_string(X.rows()) +
              " rows, basis has n=" + std::to_string(basis.n()));
  Eigen::VectorXd gl = g(basis.lambdas().array()).matrix();
  return basis.U() * (gl.asDiagonal() * (basis.U().transpose() * X));
}

std::vector<double> chebyshev_coefficients(const Kernel& g, double lambda_max,
                                           int order) {
  require(order >= 1, errc::bad_input, "chebyshev: order must be >= 1");
  require(lambda_max > 0, errc::bad_input, "chebyshev: lambda_max must be > 0");
  const int np = order + 1;
  const double a = lambda_max / 2.0;
  std::vector<double> theta(np), f(np);
  for (int p = 0; p < np; ++p) {
    theta[p] = std::numbers::pi * (p + 0.5) / np;
    f[p] = g(a * (std::cos(theta[p]) + 1.0));
  }
  std::vector<double> c(np, 0.0);
  for (int k = 0; k < np; ++k) {
    double s = 0.0;
    for (int p = 0; p < np; ++p) s += f[p] * std::cos(k * theta[p]);
    c[k] = 2.0 * s / np;
  }
  return c;
}

Eigen::MatrixXd filter_chebyshev(const Laplacian& lap, const Kernel& g,
                                 const Eigen::MatrixXd& X, int order) {
  require(order >= 1, errc::bad_input, "filter_chebyshev: order must be >= 1");
  require(X.rows() == lap.n(), errc::dimension_mismatch,
          "filter_chebyshev: X has " + std::to_string(X.rows()) +
              " rows, Laplacian has n=" + std::to_string(lap.n()));
  const double lmax = lap.lambda_max_bound();
  if (lmax <= 0) return g(0.0) * X;  // L == 0

  const std::vector<double> c = chebyshev_coefficients(g, lmax, order);
  const double a = lmax / 2.0;
  const auto& L = lap.matrix();
  Eigen::MatrixXd Y(X.rows(), X.cols());

  parallel_chunks(static_cast<std::size_t>(X.cols()), 64, [&](std::size_t b,
                                                          std::size_t e) {
    const Eigen::Index col = static_cast<Eigen::Index>(b);
    const Eigen::Index w = static_cast<Eigen::Index>(e - b);
    Eigen::MatrixXd T0 = X.middleCols(col, w);
    // T1 = (L/a - I) X
    Eigen::MatrixXd T1 = (L * T0) / a - T0;
    Eigen::MatrixXd out = 0.5 * c[0] * T0 + c[1] * T1;
    for (int k = 2; k <= order; ++k) {
      Eigen::MatrixXd T2 = 2.0 * ((L * T1) / a - T1) - T0;
      out.noalias() += c[static_cast<std::size_t>(k)] * T2;
      T0.swap(T1);
      T1.swap(T2);
    }
    Y.middleCols(col, w) = out;
  });
  return Y;
}

Eigen::VectorXd localize(const SpectralBasis& basis, const Kernel& g,
                         Eigen::Index i) {
  require(i >= 0 && i < basis.n(), errc::index_out_of_range,
          "localize: vertex " + std::to_string(i) + " out of range");
  Eigen::VectorXd gl = g(basis.lambdas().array()).matrix();
  return basis.U() * (gl.asDiagonal() * basis.U().row(i).transpose());
}

Eigen::VectorXd localize(const Laplacian& lap, const Kernel& g, Eigen::Index i,
                         int order) {
  require(i >= 0 && i < lap.n(), errc::index_out_of_range,
          "localize: vertex " + std::to_string(i) + " out of range");
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(lap.n());
  delta[i] = 1.0;
  return filter_chebyshev(lap, g, delta, order);
}

}  // namespace gsig
