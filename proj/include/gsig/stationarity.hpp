#pragma once

#include <Eigen/Dense>

#include "gsig/kernel.hpp"
#include "gsig/spectral.hpp"

namespace gsig {

/// K realizations of a graph signal, one per column.
struct SignalEnsemble {
  Eigen::MatrixXd data;   ///< N x K
  bool centered = false;  ///< set once the per-vertex mean was removed
};

Eigen::VectorXd empirical_mean(const SignalEnsemble& ens);
SignalEnsemble center(const SignalEnsemble& ens);

/// Unbiased sample covariance, 1/(K-1) normalization; requires K >= 2.
Eigen::MatrixXd empirical_covariance(const SignalEnsemble& ens);

/// Gamma = U' Sigma U.
Eigen::MatrixXd spectral_covariance(const SpectralBasis& basis,
                                    const Eigen::MatrixXd& sigma);

/// Diagonal of U' Sigma U as a sampled kernel over the eigenvalues.
/// Entries inside a degenerate eigenvalue cluster are averaged into a single
/// knot; small negative values are clamped to 0, values below the -1e-8
/// (relative) tolerance abort.
Kernel psd_from_covariance(const SpectralBasis& basis,
                           const Eigen::MatrixXd& sigma);

/// ||diag(Gamma)||_2 / ||Gamma||_F, in (0,1]; 1 iff Gamma is diagonal.
double stationarity_measure(const Eigen::MatrixXd& gamma);

/// -1/2 J D J with J = I - 11'/N applied to a squared-distance matrix D;
/// equals the 1/K-normalized Gram matrix of the underlying samples when each
/// sample sums to zero.
Eigen::MatrixXd gram_from_distances(const Eigen::MatrixXd& D);

struct StationarityReport {
  double s_r;
  Eigen::Index n;
  Eigen::Index k;
  Eigen::Index cluster_count;
  double threshold;
  bool approximately_stationary;
};

/// Empirical covariance -> spectral covariance -> s_r, reported against a
/// soft threshold (informational only, never a gate).
StationarityReport stationarity_report(const SpectralBasis& basis,
                                       const SignalEnsemble& ens,
                                       double threshold = 0.8);

}  // namespace gsig
