#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsig/stationarity.hpp"
#include "gsig/wiener.hpp"

namespace gsig {

/// x_k = mean*1 + g(L) w_k with i.i.d. standard-normal w_k; the ensemble is
/// wide-sense stationary with PSD g^2.
SignalEnsemble generate_stationary(const SpectralBasis& basis, const Kernel& g,
                                   int K, double mean, std::uint64_t seed);
SignalEnsemble generate_stationary(const Laplacian& lap, const Kernel& g, int K,
                                   double mean, std::uint64_t seed,
                                   int order = 30);

struct DegradationModel {
  LinearOperator H;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// y = H x + sigma * w, standard-normal w drawn from the model seed.
Eigen::VectorXd degrade(const Eigen::VectorXd& x, const DegradationModel& model);

/// -10 log10(var(x - est)/var(x)), capped at +300 dB.
double snr_db(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_est);

/// Unit plateau up to lambda_max/4, raised-cosine rolloff to 0 at
/// lambda_max/2; the experiments' band-limited signal profile.
Kernel lowpass_profile(double lambda_max);

struct ExperimentReport {
  std::vector<std::string> methods;
  std::vector<double> noise_levels;
  Eigen::MatrixXd mean_snr_db;  ///< methods x noise levels
  Eigen::MatrixXd stderr_db;
  int trials = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::string notes;
};

struct DeconvParams {
  int n_nodes = 300;
  int knn = 10;
  std::vector<double> noise_levels = {0.0, 0.05, 0.1, 0.2};
  int trials = 20;
  std::uint64_t seed = 0;
};

/// Band-limited stationary signals blurred by the heat kernel
/// exp(-10 lambda/lambda_max) plus noise, recovered with the Wiener filter
/// (known PSD and noise) and the Tikhonov/TV baselines.
ExperimentReport experiment_deconvolution(const DeconvParams& params);

struct InpaintParams {
  int n_nodes = 400;
  int knn = 10;
  double mask_fraction = 0.5;
  std::vector<double> noise_levels = {0.02, 0.05, 0.1, 0.2};
  int trials = 20;
  int k1 = 50;  ///< training realizations for the estimated PSD
  int bands = 30;
  int order = 30;
  int k2 = 4;
  std::uint64_t seed = 0;
};

/// Random-mask recovery comparing Wiener optimization with the true and the
/// estimated PSD against Tikhonov, TV, and the closed-form estimator on the
/// empirical covariance (the latter only when k1 >= 2 training signals exist).
ExperimentReport experiment_inpainting(const InpaintParams& params);

}  // namespace gsig
