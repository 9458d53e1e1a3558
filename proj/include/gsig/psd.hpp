#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gsig/graph.hpp"
#include "gsig/kernel.hpp"
#include "gsig/spectral.hpp"
#include "gsig/stationarity.hpp"

namespace gsig {

/// Bank of shifted Gaussian bands g_m(l) = exp(-(l - m*tau)^2/sigma2),
/// m = 1..M. The standard design uses tau = sigma2 = (M+1)*lambda_max/M^2
/// (adjacent bands overlap by roughly a factor 2); the last center then sits
/// at lambda_max*(1+1/M), slightly past lambda_max.
struct Filterbank {
  int M;
  double tau;
  double sigma2;
  double lambda_max;

  Kernel band(int m) const;  ///< 1-based band index
};

Filterbank design_filterbank(double lambda_max, int M);

/// ||g_m(L)||_F^2 per band from the eigenvalues (dense oracle path).
std::vector<double> exact_filter_norms(const SpectralBasis& basis,
                                       const Filterbank& fb);

/// Stochastic estimate of ||g_m(L)||_F^2 per band: average of
/// ||g_m(L)w||^2 over k2 standard-normal probes, Chebyshev filtering.
/// Probe vectors depend only on (seed, band, probe index).
std::vector<double> estimate_filter_norms(const Laplacian& lap,
                                          const Filterbank& fb, int k2,
                                          std::uint64_t seed, int order = 30);

struct PsdEstimate {
  double lambda_max;
  std::vector<std::array<double, 2>> points;  ///< (m*tau, value >= 0)
  int M;
  int order;
  int k1;
  int k2;
  std::uint64_t seed;
};

/// Average of ||g_m(L)x_k||^2 over the ensemble, normalized per band by the
/// (stochastically estimated) filter norm. The ensemble must be centered;
/// uncentered multi-realization input is centered on the fly with a warning,
/// a single realization is taken as-is (assumed zero-mean process).
PsdEstimate estimate_psd(const Laplacian& lap, const SignalEnsemble& ens,
                         const Filterbank& fb, int order = 30, int k2 = 4,
                         std::uint64_t seed = 0);

/// Same estimator with caller-supplied band norms (e.g. exact_filter_norms).
PsdEstimate estimate_psd_with_norms(const Laplacian& lap,
                                    const SignalEnsemble& ens,
                                    const Filterbank& fb,
                                    const std::vector<double>& band_norms,
                                    int order = 30, std::uint64_t seed = 0);

/// Exact expectation of the estimator per band for a known PSD:
/// sum_l g_m(l)^2 psd(l) / sum_l g_m(l)^2 over the eigenvalues.
std::vector<double> bias_oracle(const SpectralBasis& basis, const Filterbank& fb,
                                const Kernel& true_psd);

/// Linear interpolation through the band points, clamped outside; the value
/// below the first band center repeats the first band.
Kernel psd_to_kernel(const PsdEstimate& est);

}  // namespace gsig
