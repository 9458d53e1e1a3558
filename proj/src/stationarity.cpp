#include "gsig/stationarity.hpp"

#include <cmath>
#include <string>

namespace gsig {

namespace {
void require_nonempty(const SignalEnsemble& ens) {
  require(ens.data.rows() >= 1 && ens.data.cols() >= 1, errc::empty_ensemble,
          "ensemble: no data");
}
}  // namespace

Eigen::VectorXd empirical_mean(const SignalEnsemble& ens) {
  require_nonempty(ens);
  return ens.data.rowwise().mean();
}

SignalEnsemble center(const SignalEnsemble& ens) {
  require_nonempty(ens);
  SignalEnsemble out;
  out.data = ens.data.colwise() - ens.data.rowwise().mean();
  out.centered = true;
  return out;
}

Eigen::MatrixXd empirical_covariance(const SignalEnsemble& ens) {
  require_nonempty(ens);
  const Eigen::Index k = ens.data.cols();
  require(k >= 2, errc::too_few_realizations,
          "empirical_covariance: need K >= 2 realizations, got " +
              std::to_string(k));
  Eigen::MatrixXd c = ens.data.colwise() - ens.data.rowwise().mean();
  return (c * c.transpose()) / static_cast<double>(k - 1);
}

Eigen::MatrixXd spectral_covariance(const SpectralBasis& basis,
                                    const Eigen::MatrixXd& sigma) {
  require(sigma.rows() == basis.n() && sigma.cols() == basis.n(),
          errc::dimension_mismatch,
          "spectral_covariance: covariance must be n x n");
  return basis.U().transpose() * sigma * basis.U();
}

Kernel psd_from_covariance(const SpectralBasis& basis,
                           const Eigen::MatrixXd& sigma) {
  require(sigma.rows() == basis.n() && sigma.cols() == basis.n(),
          errc::dimension_mismatch,
          "psd_from_covariance: covariance must be n x n");
  // diag(U' Sigma U) without forming the full matrix.
  Eigen::MatrixXd SU = sigma * basis.U();
  Eigen::VectorXd d =
      (basis.U().array() * SU.array()).colwise().sum().transpose();

  double scale = d.cwiseAbs().maxCoeff();
  double tol = 1e-8 * std::max(scale, 1e-300);
  for (Eigen::Index i = 0; i < d.size(); ++i)
    require(d[i] >= -tol, errc::negative_diagonal,
            "psd_from_covariance: spectral diagonal entry " + std::to_string(i) +
                " is negative beyond tolerance (input not PSD)");

  const auto& lam = basis.lambdas();
  std::vector<std::array<double, 2>> knots;
  knots.reserve(basis.clusters().size());
  for (const auto& cl : basis.clusters()) {
    double lsum = 0.0, vsum = 0.0;
    for (Eigen::Index i = cl.begin; i < cl.end; ++i) {
      lsum += lam[i];
      vsum += d[i];
    }
    double cnt = static_cast<double>(cl.end - cl.begin);
    knots.push_back({lsum / cnt, std::max(vsum / cnt, 0.0)});
  }
  return Kernel::sampled(std::move(knots), /*clamp_nonnegative=*/true);
}

double stationarity_measure(const Eigen::MatrixXd& gamma) {
  require(gamma.rows() == gamma.cols(), errc::dimension_mismatch,
          "stationarity_measure: matrix must be square");
  double fro = gamma.norm();
  require(fro > 0, errc::zero_matrix,
          "stationarity_measure: zero spectral covariance");
  return gamma.diagonal().norm() / fro;
}

Eigen::MatrixXd gram_from_distances(const Eigen::MatrixXd& D) {
  const Eigen::Index n = D.rows();
  require(D.cols() == n, errc::dimension_mismatch,
          "gram_from_distances: matrix must be square");
  double scale = std::max(D.cwiseAbs().maxCoeff(), 1.0);
  require((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          errc::asymmetric_input, "gram_from_distances: matrix not symmetric");
  require(D.diagonal().cwiseAbs().maxCoeff() <= 1e-12 * scale,
          errc::nonzero_diagonal,
          "gram_from_distances: diagonal must be zero");
  Eigen::VectorXd rm = D.rowwise().mean();
  Eigen::VectorXd cm = D.colwise().mean();
  double tm = D.mean();
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      G(i, j) = -0.5 * (D(i, j) - rm[i] - cm[j] + tm);
  return G;
}

StationarityReport stationarity_report(const SpectralBasis& basis,
                                       const SignalEnsemble& ens,
                                       double threshold) {
  Eigen::MatrixXd sigma = empirical_covariance(ens);
  Eigen::MatrixXd gamma = spectral_covariance(basis, sigma);
  double s_r = stationarity_measure(gamma);
  return {s_r,
          basis.n(),
          ens.data.cols(),
          static_cast<Eigen::Index>(basis.clusters().size()),
          threshold,
          s_r >= threshold};
}

}  // namespace gsig
