#include "gsig/psd.hpp"

#include <cmath>
#include <cstdio>

#include "gsig/rng.hpp"
#include "gsig/threading.hpp"

namespace gsig {

Kernel Filterbank::band(int m) const {
  require(m >= 1 && m <= M, errc::index_out_of_range,
          "filterbank: band index out of range");
  return Kernel::gaussian(m * tau, sigma2);
}

Filterbank design_filterbank(double lambda_max, int M) {
  require(M >= 1, errc::bad_input, "design_filterbank: M must be >= 1");
  require(lambda_max > 0 && std::isfinite(lambda_max), errc::bad_input,
          "design_filterbank: lambda_max must be positive");
  double step = (M + 1) * lambda_max / (static_cast<double>(M) * M);
  return Filterbank{M, step, step, lambda_max};
}

std::vector<double> exact_filter_norms(const SpectralBasis& basis,
                                       const Filterbank& fb) {
  std::vector<double> norms(static_cast<std::size_t>(fb.M));
  for (int m = 1; m <= fb.M; ++m) {
    Eigen::ArrayXd g = fb.band(m)(basis.lambdas().array());
    norms[static_cast<std::size_t>(m - 1)] = (g * g).sum();
  }
  return norms;
}

namespace {

double stochastic_band_norm(const Laplacian& lap, const Kernel& g, int k2,
                            std::uint64_t seed, int band, int order) {
  const Eigen::Index n = lap.n();
  Eigen::MatrixXd W(n, k2);
  for (int p = 0; p < k2; ++p)
    W.col(p) = gaussian_vector(
        n, derive_seed(seed, static_cast<std::uint64_t>(band),
                       static_cast<std::uint64_t>(p)));
  Eigen::MatrixXd Y = filter_chebyshev(lap, g, W, order);
  return Y.squaredNorm() / static_cast<double>(k2);
}

Eigen::MatrixXd prepare_ensemble(const SignalEnsemble& ens) {
  require(ens.data.rows() >= 1 && ens.data.cols() >= 1, errc::empty_ensemble,
          "estimate_psd: empty ensemble");
  if (!ens.centered && ens.data.cols() >= 2) {
    std::fprintf(stderr,
                 "warning: ensemble not centered; removing the per-vertex "
                 "empirical mean\n");
    return ens.data.colwise() - ens.data.rowwise().mean();
  }
  return ens.data;
}

PsdEstimate run_estimator(const Laplacian& lap, const Eigen::MatrixXd& data,
                          const Filterbank& fb, int order,
                          const std::vector<double>* fixed_norms, int k2,
                          std::uint64_t seed) {
  require(data.rows() == lap.n(), errc::dimension_mismatch,
          "estimate_psd: signal length does not match the graph");
  require(order >= 1, errc::bad_input, "estimate_psd: order must be >= 1");
  if (!fixed_norms)
    require(k2 >= 1, errc::bad_input, "estimate_psd: K2 must be >= 1");

  const int k1 = static_cast<int>(data.cols());
  PsdEstimate est;
  est.lambda_max = fb.lambda_max;
  est.M = fb.M;
  est.order = order;
  est.k1 = k1;
  est.k2 = fixed_norms ? 0 : k2;
  est.seed = seed;
  est.points.resize(static_cast<std::size_t>(fb.M));

  parallel_chunks(static_cast<std::size_t>(fb.M), 1, [&](std::size_t b,
                                                         std::size_t e) {
    for (std::size_t mi = b; mi < e; ++mi) {
      const int m = static_cast<int>(mi) + 1;
      Kernel g = fb.band(m);
      double norm = fixed_norms
                        ? (*fixed_norms)[mi]
                        : stochastic_band_norm(lap, g, k2, seed, m, order);
      require(norm > 0, errc::bad_input,
              "estimate_psd: nonpositive filter norm in band " +
                  std::to_string(m));
      Eigen::MatrixXd Y = filter_chebyshev(lap, g, data, order);
      double v = Y.squaredNorm() / (static_cast<double>(k1) * norm);
      est.points[mi] = {m * fb.tau, std::max(v, 0.0)};
    }
  });
  return est;
}

}  // namespace

std::vector<double> estimate_filter_norms(const Laplacian& lap,
                                          const Filterbank& fb, int k2,
                                          std::uint64_t seed, int order) {
  require(k2 >= 1, errc::bad_input, "estimate_filter_norms: K2 must be >= 1");
  std::vector<double> norms(static_cast<std::size_t>(fb.M));
  parallel_chunks(static_cast<std::size_t>(fb.M), 1,
                  [&](std::size_t b, std::size_t e) {
                    for (std::size_t mi = b; mi < e; ++mi) {
                      const int m = static_cast<int>(mi) + 1;
                      norms[mi] = stochastic_band_norm(lap, fb.band(m), k2,
                                                       seed, m, order);
                    }
                  });
  return norms;
}

PsdEstimate estimate_psd(const Laplacian& lap, const SignalEnsemble& ens,
                         const Filterbank& fb, int order, int k2,
                         std::uint64_t seed) {
  Eigen::MatrixXd data = prepare_ensemble(ens);
  return run_estimator(lap, data, fb, order, nullptr, k2, seed);
}

PsdEstimate estimate_psd_with_norms(const Laplacian& lap,
                                    const SignalEnsemble& ens,
                                    const Filterbank& fb,
                                    const std::vector<double>& band_norms,
                                    int order, std::uint64_t seed) {
  require(band_norms.size() == static_cast<std::size_t>(fb.M), errc::dimension_mismatch,
          "estimate_psd: need one norm per band");
  Eigen::MatrixXd data = prepare_ensemble(ens);
  return run_estimator(lap, data, fb, order, &band_norms, 0, seed);
}

std::vector<double> bias_oracle(const SpectralBasis& basis, const Filterbank& fb,
                                const Kernel& true_psd) {
  Eigen::ArrayXd gamma = true_psd(basis.lambdas().array());
  std::vector<double> out(static_cast<std::size_t>(fb.M));
  for (int m = 1; m <= fb.M; ++m) {
    Eigen::ArrayXd g2 = fb.band(m)(basis.lambdas().array()).square();
    double den = g2.sum();
    out[static_cast<std::size_t>(m - 1)] =
        den > 0 ? (g2 * gamma).sum() / den : 0.0;
  }
  return out;
}

Kernel psd_to_kernel(const PsdEstimate& est) {
  require(!est.points.empty(), errc::bad_input,
          "psd_to_kernel: estimate holds no points");
  return Kernel::sampled(est.points, /*clamp_nonnegative=*/true);
}

}  // namespace gsig
