#include "gsig/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "gsig/psd.hpp"
#include "gsig/rng.hpp"
#include "gsig/threading.hpp"

namespace gsig {

namespace {

template <typename FilterFn>
SignalEnsemble generate_impl(Eigen::Index n, const Kernel& g, int K, double mean,
                             std::uint64_t seed, FilterFn&& filt) {
  require(K >= 1, errc::bad_input, "generate_stationary: K must be >= 1");
  Eigen::MatrixXd W = gaussian_matrix(n, K, seed);
  SignalEnsemble ens;
  ens.data = filt(g, W);
  if (mean != 0.0) ens.data.array() += mean;
  ens.centered = false;
  return ens;
}

}  // namespace

SignalEnsemble generate_stationary(const SpectralBasis& basis, const Kernel& g,
                                   int K, double mean, std::uint64_t seed) {
  return generate_impl(basis.n(), g, K, mean, seed,
                       [&](const Kernel& k, const Eigen::MatrixXd& W) {
                         return filter_exact(basis, k, W);
                       });
}

SignalEnsemble generate_stationary(const Laplacian& lap, const Kernel& g, int K,
                                   double mean, std::uint64_t seed, int order) {
  return generate_impl(lap.n(), g, K, mean, seed,
                       [&](const Kernel& k, const Eigen::MatrixXd& W) {
                         return filter_chebyshev(lap, k, W, order);
                       });
}

Eigen::VectorXd degrade(const Eigen::VectorXd& x, const DegradationModel& model) {
  require(model.sigma >= 0, errc::bad_input, "degrade: sigma must be >= 0");
  Eigen::VectorXd y = model.H.apply(x);
  if (model.sigma > 0)
    y += model.sigma * gaussian_vector(y.size(), model.seed);
  return y;
}

double snr_db(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_est) {
  require(x_true.size() == x_est.size(), errc::dimension_mismatch,
          "snr_db: length mismatch");
  require(x_true.size() >= 1, errc::bad_input, "snr_db: empty signals");
  auto var = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd c = v.array() - v.mean();
    return c.squaredNorm() / static_cast<double>(v.size());
  };
  double vx = var(x_true);
  require(vx > 0, errc::zero_variance_reference,
          "snr_db: reference signal has zero variance");
  double vd = var(x_true - x_est);
  if (vd == 0) return 300.0;
  return std::min(-10.0 * std::log10(vd / vx), 300.0);
}

Kernel lowpass_profile(double lambda_max) {
  require(lambda_max > 0, errc::bad_input,
          "lowpass_profile: lambda_max must be positive");
  double a = lambda_max / 4.0;
  return Kernel::custom(
      [a](double l) {
        if (l <= a) return 1.0;
        if (l >= 2.0 * a) return 0.0;
        return 0.5 * (1.0 + std::cos(std::numbers::pi * (l - a) / a));
      },
      "lowpass_profile");
}

namespace {

void finalize_report(ExperimentReport& rep,
                     const std::vector<Eigen::MatrixXd>& per_trial) {
  const auto n_methods = static_cast<Eigen::Index>(rep.methods.size());
  const auto n_levels = static_cast<Eigen::Index>(rep.noise_levels.size());
  const int T = rep.trials;
  rep.mean_snr_db = Eigen::MatrixXd::Zero(n_methods, n_levels);
  rep.stderr_db = Eigen::MatrixXd::Zero(n_methods, n_levels);
  for (Eigen::Index mi = 0; mi < n_methods; ++mi)
    for (Eigen::Index ni = 0; ni < n_levels; ++ni) {
      double sum = 0.0;
      for (int t = 0; t < T; ++t) sum += per_trial[static_cast<std::size_t>(t)](mi, ni);
      double mean = sum / T;
      double sq = 0.0;
      for (int t = 0; t < T; ++t) {
        double d = per_trial[static_cast<std::size_t>(t)](mi, ni) - mean;
        sq += d * d;
      }
      rep.mean_snr_db(mi, ni) = mean;
      rep.stderr_db(mi, ni) = T > 1 ? std::sqrt(sq / (T - 1) / T) : 0.0;
    }
}

double safe_snr(const Eigen::VectorXd& x, const Eigen::VectorXd& est) {
  try {
    return snr_db(x, est);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

void check_experiment_params(int n_nodes, int trials,
                             const std::vector<double>& noise_levels) {
  require(n_nodes >= 10, errc::bad_input, "experiment: need at least 10 nodes");
  require(trials >= 1, errc::bad_input, "experiment: trials must be >= 1");
  require(!noise_levels.empty(), errc::bad_input,
          "experiment: at least one noise level required");
  for (double s : noise_levels)
    require(s >= 0, errc::bad_input, "experiment: noise levels must be >= 0");
}

}  // namespace

ExperimentReport experiment_deconvolution(const DeconvParams& params) {
  check_experiment_params(params.n_nodes, params.trials, params.noise_levels);
  auto t_start = std::chrono::steady_clock::now();

  Graph graph = random_geometric_graph(params.n_nodes, params.knn,
                                       derive_seed(params.seed, 101));
  auto lap = std::make_shared<const Laplacian>(graph);
  auto basis = std::make_shared<const SpectralBasis>(eigendecompose(*lap));
  Eigen::SparseMatrix<double> grad = gradient_operator(graph);
  const double lmax = lap->lambda_max_bound();
  const Eigen::Index n = lap->n();

  Kernel h = Kernel::heat(10.0 / lmax);
  Kernel s = lowpass_profile(lmax);
  Kernel s2 = kernel_squared(s);
  LinearOperator H = LinearOperator::graph_filter(basis, h);

  ExperimentReport rep;
  rep.methods = {"wiener", "tikhonov", "tv"};
  rep.noise_levels = params.noise_levels;
  rep.trials = params.trials;
  rep.seed = params.seed;
  rep.notes =
      "deconvolution: heat blur exp(-10*lambda/lambda_max); signal PSD = "
      "squared unit plateau to lambda_max/4 with raised-cosine rolloff to "
      "lambda_max/2; eps = sigma*sqrt(n)";

  const auto n_levels = static_cast<Eigen::Index>(params.noise_levels.size());
  std::vector<Eigen::MatrixXd> per_trial(
      static_cast<std::size_t>(params.trials),
      Eigen::MatrixXd::Zero(3, n_levels));

  parallel_chunks(static_cast<std::size_t>(params.trials), 1,
                  [&](std::size_t tb, std::size_t te) {
    for (std::size_t t = tb; t < te; ++t) {
      Eigen::VectorXd x =
          generate_stationary(*basis, s, 1, 0.0, derive_seed(params.seed, 1, t))
              .data.col(0);
      Eigen::VectorXd hx = filter_exact(*basis, h, x);
      for (Eigen::Index ni = 0; ni < n_levels; ++ni) {
        double sigma = params.noise_levels[static_cast<std::size_t>(ni)];
        Eigen::VectorXd y = hx;
        if (sigma > 0)
          y += sigma * gaussian_vector(
                           n, derive_seed(params.seed, 2,
                                          t * 1000 + static_cast<std::size_t>(ni)));
        WienerProblem wp{H, s2, Kernel::constant(sigma * sigma), {}, y};
        Eigen::VectorXd xw = wiener_filter(*basis, wp);
        double eps = epsilon_rule(sigma, n);
        Eigen::VectorXd xt =
            tikhonov_solve(*lap, H, y, eps, {}, basis.get()).x;
        Eigen::VectorXd xv =
            tv_solve(*lap, grad, H, y, eps, {}, basis.get()).x;
        per_trial[t](0, ni) = safe_snr(x, xw);
        per_trial[t](1, ni) = safe_snr(x, xt);
        per_trial[t](2, ni) = safe_snr(x, xv);
      }
    }
  });

  finalize_report(rep, per_trial);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

ExperimentReport experiment_inpainting(const InpaintParams& params) {
  check_experiment_params(params.n_nodes, params.trials, params.noise_levels);
  require(params.mask_fraction > 0 && params.mask_fraction < 1, errc::bad_input,
          "experiment: mask_fraction must lie in (0,1)");
  require(params.k1 >= 1, errc::bad_input, "experiment: k1 must be >= 1");
  auto t_start = std::chrono::steady_clock::now();

  Graph graph = random_geometric_graph(params.n_nodes, params.knn,
                                       derive_seed(params.seed, 201));
  auto lap = std::make_shared<const Laplacian>(graph);
  auto basis = std::make_shared<const SpectralBasis>(eigendecompose(*lap));
  Eigen::SparseMatrix<double> grad = gradient_operator(graph);
  const double lmax = lap->lambda_max_bound();
  const Eigen::Index n = lap->n();

  Kernel s = lowpass_profile(lmax);
  Kernel s2 = kernel_squared(s);

  SignalEnsemble training = generate_stationary(
      *basis, s, params.k1, 0.0, derive_seed(params.seed, 202));
  training.centered = true;  // zero-mean process by construction
  Filterbank fb = design_filterbank(lmax, params.bands);
  PsdEstimate est = estimate_psd(*lap, training, fb, params.order, params.k2,
                                 derive_seed(params.seed, 203));
  Kernel s2_est = psd_to_kernel(est);

  const bool with_lmmse = params.k1 >= 2;
  Eigen::MatrixXd emp_cov;
  if (with_lmmse) emp_cov = empirical_covariance(training);

  ExperimentReport rep;
  rep.methods = {"wiener_true_psd", "wiener_estimated_psd", "tikhonov", "tv"};
  if (with_lmmse) rep.methods.push_back("lmmse_empirical_cov");
  rep.noise_levels = params.noise_levels;
  rep.trials = params.trials;
  rep.seed = params.seed;
  rep.notes =
      "inpainting: uniform random mask per trial; signal PSD = squared unit "
      "plateau to lambda_max/4 with raised-cosine rolloff to lambda_max/2; "
      "estimated PSD from " + std::to_string(params.k1) +
      " training signals; eps = sigma*sqrt(#measurements)";

  Eigen::Index mcount = static_cast<Eigen::Index>(
      std::lround(params.mask_fraction * static_cast<double>(n)));
  mcount = std::min(n, std::max<Eigen::Index>(1, mcount));

  const auto n_levels = static_cast<Eigen::Index>(params.noise_levels.size());
  const auto n_methods = static_cast<Eigen::Index>(rep.methods.size());
  std::vector<Eigen::MatrixXd> per_trial(
      static_cast<std::size_t>(params.trials),
      Eigen::MatrixXd::Zero(n_methods, n_levels));

  parallel_chunks(static_cast<std::size_t>(params.trials), 1,
                  [&](std::size_t tb, std::size_t te) {
    for (std::size_t t = tb; t < te; ++t) {
      Eigen::VectorXd x =
          generate_stationary(*basis, s, 1, 0.0, derive_seed(params.seed, 1, t))
              .data.col(0);
      std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
      for (Eigen::Index v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
      auto engine = make_engine(derive_seed(params.seed, 3, t));
      std::shuffle(all.begin(), all.end(), engine);
      std::vector<Eigen::Index> idx(all.begin(), all.begin() + mcount);
      std::sort(idx.begin(), idx.end());
      LinearOperator Hm = LinearOperator::mask(n, idx);
      Eigen::VectorXd hx = Hm.apply(x);

      for (Eigen::Index ni = 0; ni < n_levels; ++ni) {
        double sigma = params.noise_levels[static_cast<std::size_t>(ni)];
        Eigen::VectorXd y = hx;
        if (sigma > 0)
          y += sigma * gaussian_vector(
                           mcount, derive_seed(params.seed, 2,
                                               t * 1000 + static_cast<std::size_t>(ni)));
        Kernel noise = Kernel::constant(sigma * sigma);
        SolveOptions sopts;
        Eigen::VectorXd xw =
            wiener_optimize(*basis, {Hm, s2, noise, {}, y}, sopts).x;
        Eigen::VectorXd xe =
            wiener_optimize(*basis, {Hm, s2_est, noise, {}, y}, sopts).x;
        double eps = epsilon_rule(sigma, mcount);
        Eigen::VectorXd xt =
            tikhonov_solve(*lap, Hm, y, eps, {}, basis.get()).x;
        Eigen::VectorXd xv = tv_solve(*lap, grad, Hm, y, eps, {}, basis.get()).x;
        per_trial[t](0, ni) = safe_snr(x, xw);
        per_trial[t](1, ni) = safe_snr(x, xe);
        per_trial[t](2, ni) = safe_snr(x, xt);
        per_trial[t](3, ni) = safe_snr(x, xv);
        if (with_lmmse) {
          double v;
          try {
            Eigen::VectorXd xl = lmmse_from_covariance(
                emp_cov, Hm, sigma * sigma, Eigen::VectorXd(), y);
            v = safe_snr(x, xl);
          } catch (const Error&) {
            v = std::numeric_limits<double>::quiet_NaN();
          }
          per_trial[t](4, ni) = v;
        }
      }
    }
  });

  finalize_report(rep, per_trial);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

}  // namespace gsig
