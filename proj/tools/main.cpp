#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "gsig/io.hpp"
#include "gsig/psd.hpp"
#include "gsig/spectral.hpp"
#include "gsig/synth.hpp"
#include "gsig/threading.hpp"

namespace {

struct Common {
  std::uint64_t seed = 0;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "master RNG seed")->capture_default_str();
  sub->add_option("--threads", c.threads,
                  "worker thread cap, 0 = hardware (env GSIG_THREADS)");
}

void apply(const Common& c) { gsig::set_max_threads(c.threads); }

int env_threads() {
  const char* v = std::getenv("GSIG_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  long t = std::strtol(v, &end, 10);
  if (end == v || *end || t < 0) return 0;
  return static_cast<int>(t);
}

nlohmann::json json_arg(const std::string& arg) {
  std::size_t b = arg.find_first_not_of(" \t\n");
  if (b != std::string::npos && (arg[b] == '{' || arg[b] == '[')) {
    try {
      return nlohmann::json::parse(arg);
    } catch (const nlohmann::json::parse_error& e) {
      gsig::fail(gsig::errc::bad_input, std::string("inline JSON: ") + e.what());
    }
  }
  return gsig::load_json_file(arg);
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

nlohmann::json graph_stats(const gsig::Graph& g) {
  gsig::Laplacian lap(g);
  return {{"n", g.n_vertices()},
          {"edges", g.edges().size()},
          {"lambda_max_bound", lap.lambda_max_bound()}};
}

void finish_graph(const gsig::Graph& g, const std::string& out) {
  if (!out.empty()) gsig::write_edge_csv(out, g);
  emit(graph_stats(g));
}

struct GraphArgs {
  std::string edges, features, out;
  Eigen::Index n = 0, rows = 0, cols = 0;
  int k = 10;
  double sigma2 = 0.0;
  bool has_sigma2 = false;
};

struct SynthArgs {
  std::string graph, kernel, out;
  int k = 1;
  double mean = 0.0;
  int order = 30;
  bool exact = false;
};

struct PsdArgs {
  std::string graph, signals, out;
  int m = 30, order = 30, k2 = 4;
  bool center = false, exact = false;
};

struct SolveArgs {
  std::string method, graph, problem, y, out;
  double eps = -1.0;
  bool trace = false, exact = false, fast = false;
};

struct StatArgs {
  std::string graph, signals;
  double threshold = 0.8;
};

void run_synth(const SynthArgs& a, const Common& c) {
  gsig::Graph g = gsig::read_edge_csv(a.graph);
  gsig::Kernel kern = gsig::kernel_from_json(json_arg(a.kernel));
  gsig::Laplacian lap(g);
  gsig::SignalEnsemble ens;
  if (a.exact) {
    gsig::SpectralBasis basis = gsig::eigendecompose(lap);
    ens = gsig::generate_stationary(basis, kern, a.k, a.mean, c.seed);
  } else {
    ens = gsig::generate_stationary(lap, kern, a.k, a.mean, c.seed, a.order);
  }
  gsig::write_matrix_csv(a.out, ens.data);
  emit({{"n", ens.data.rows()},
        {"k", ens.data.cols()},
        {"mean", a.mean},
        {"seed", c.seed},
        {"output", a.out}});
}

void run_psd(const PsdArgs& a, const Common& c) {
  gsig::Graph g = gsig::read_edge_csv(a.graph);
  gsig::Laplacian lap(g);
  Eigen::MatrixXd x = gsig::read_matrix_csv(a.signals);
  gsig::require(x.rows() == lap.n(), gsig::errc::dimension_mismatch,
                "signals have " + std::to_string(x.rows()) +
                    " rows, graph has " + std::to_string(lap.n()) + " vertices");
  gsig::SignalEnsemble ens{x, false};
  if (a.center) ens = gsig::center(ens);
  gsig::Filterbank fb = gsig::design_filterbank(lap.lambda_max_bound(), a.m);
  gsig::PsdEstimate est =
      gsig::estimate_psd(lap, ens, fb, a.order, a.k2, c.seed);
  nlohmann::json j = gsig::psd_estimate_to_json(est);
  if (a.exact) {
    gsig::SpectralBasis basis = gsig::eigendecompose(lap);
    Eigen::MatrixXd sigma;
    if (ens.data.cols() >= 2) {
      sigma = gsig::empirical_covariance(ens);
    } else {
      sigma = ens.data.col(0) * ens.data.col(0).transpose();
    }
    gsig::Kernel exact_psd = gsig::psd_from_covariance(basis, sigma);
    std::vector<double> expect = gsig::bias_oracle(basis, fb, exact_psd);
    nlohmann::json bands = nlohmann::json::array();
    for (int m = 1; m <= fb.M; ++m)
      bands.push_back({m * fb.tau, expect[static_cast<std::size_t>(m - 1)]});
    j["exact"] = {{"psd", gsig::kernel_to_json(exact_psd)},
                  {"band_expectation", bands}};
  }
  if (!a.out.empty()) gsig::write_json_file(a.out, j);
  emit(j);
}

void run_solve(const SolveArgs& a, const Common& c) {
  gsig::Graph g = gsig::read_edge_csv(a.graph);
  auto lap = std::make_shared<const gsig::Laplacian>(g);
  gsig::ProblemSpec spec = gsig::problem_from_json(json_arg(a.problem));
  Eigen::VectorXd y = gsig::read_vector_csv(a.y);

  bool use_basis = a.exact || a.method == "lmmse" || a.method == "interp" ||
                   (!a.fast && lap->n() <= 1000);
  std::shared_ptr<const gsig::SpectralBasis> basis;
  if (use_basis)
    basis = std::make_shared<const gsig::SpectralBasis>(gsig::eigendecompose(*lap));

  gsig::LinearOperator H = spec.make_operator(basis, lap);
  Eigen::VectorXd mean = spec.make_mean(lap->n());
  gsig::require(y.size() == H.rows(), gsig::errc::dimension_mismatch,
                "y has length " + std::to_string(y.size()) +
                    ", operator produces " + std::to_string(H.rows()));

  auto need_psd = [&] {
    gsig::require(spec.has_psd, gsig::errc::bad_input,
                  "problem JSON: missing field \"psd\"");
  };
  auto residual_budget = [&]() -> double {
    if (a.eps >= 0) return a.eps;
    gsig::require(spec.noise.kind() == gsig::kernel_kind::constant,
                  gsig::errc::bad_input,
                  "method needs --eps or a constant \"noise\" field");
    return gsig::epsilon_rule(std::sqrt(spec.noise.param0()), y.size());
  };

  gsig::SolveResult res;
  if (a.method == "wiener") {
    need_psd();
    gsig::WienerProblem p{H, spec.psd, spec.noise, mean, y};
    res = basis ? gsig::wiener_optimize(*basis, p, spec.solver)
                : gsig::wiener_optimize(*lap, p, spec.solver);
  } else if (a.method == "filter") {
    need_psd();
    gsig::WienerProblem p{H, spec.psd, spec.noise, mean, y};
    res.x = basis ? gsig::wiener_filter(*basis, p)
                  : gsig::wiener_filter(*lap, p, spec.solver.order);
    res.converged = true;
  } else if (a.method == "tikhonov") {
    auto r = gsig::tikhonov_solve(*lap, H, y, residual_budget(), {}, basis.get());
    res.x = r.x;
    res.objective = {r.objective};
    res.converged = r.converged;
  } else if (a.method == "tv") {
    Eigen::SparseMatrix<double> grad = gsig::gradient_operator(g);
    auto r = gsig::tv_solve(*lap, grad, H, y, residual_budget(), {}, basis.get());
    res.x = r.x;
    res.objective = {r.objective};
    res.converged = r.converged;
  } else if (a.method == "lmmse") {
    need_psd();
    gsig::WienerProblem p{H, spec.psd, spec.noise, mean, y};
    res.x = gsig::lmmse_closed_form(*basis, p);
    res.converged = true;
  } else {  // interp
    need_psd();
    res.x = gsig::wiener_interpolate_noiseless(*basis, H, y, spec.psd, mean);
    res.converged = true;
  }

  if (!a.out.empty()) gsig::write_vector_csv(a.out, res.x);
  nlohmann::json j = gsig::solve_trace_to_json(res);
  if (!a.trace) j.erase("objective");
  j["method"] = a.method;
  if (!a.out.empty()) j["output"] = a.out;
  emit(j);
}

void run_stationarity(const StatArgs& a) {
  gsig::Graph g = gsig::read_edge_csv(a.graph);
  gsig::Laplacian lap(g);
  Eigen::MatrixXd x = gsig::read_matrix_csv(a.signals);
  gsig::require(x.rows() == lap.n(), gsig::errc::dimension_mismatch,
                "signals have " + std::to_string(x.rows()) +
                    " rows, graph has " + std::to_string(lap.n()) + " vertices");
  gsig::SpectralBasis basis = gsig::eigendecompose(lap);
  gsig::StationarityReport rep =
      gsig::stationarity_report(basis, {x, false}, a.threshold);
  emit(gsig::stationarity_report_to_json(rep));
}

void emit_report(const gsig::ExperimentReport& rep, const std::string& out,
                 const std::string& json_out) {
  std::string csv = gsig::report_to_csv(rep);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out);
    gsig::require(f.good(), gsig::errc::bad_input,
                  "cannot open for writing: " + out);
    f << csv;
  }
  if (!json_out.empty()) gsig::write_json_file(json_out, gsig::report_to_json(rep));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary graph signal toolbox"};
  app.require_subcommand(1);
  Common common;
  common.threads = env_threads();

  // graph
  auto* graph = app.add_subcommand("graph", "build graphs, emit edge CSV + stats");
  graph->require_subcommand(1);
  GraphArgs ga;
  Common gc = common;
  auto* g_build = graph->add_subcommand("build", "canonicalize an edge list");
  g_build->add_option("--edges", ga.edges, "edge CSV input")->required();
  g_build->add_option("--n", ga.n, "vertex count override");
  g_build->add_option("-o,--output", ga.out, "edge CSV output");
  add_common(g_build, gc);
  g_build->callback([&] {
    gsig::Graph g = gsig::read_edge_csv(ga.edges);
    if (ga.n > 0) g = gsig::graph_from_edge_list(ga.n, g.edges());
    finish_graph(g, ga.out);
  });
  auto* g_knn = graph->add_subcommand("knn", "k-nearest-neighbor graph from features");
  g_knn->add_option("--features", ga.features, "feature CSV, one row per point")
      ->required();
  g_knn->add_option("--k", ga.k, "neighbor count")->required();
  auto* s2opt = g_knn->add_option("--sigma2", ga.sigma2,
                                  "Gaussian weight scale (default: mean distance)");
  g_knn->add_option("-o,--output", ga.out, "edge CSV output");
  add_common(g_knn, gc);
  g_knn->callback([&, s2opt] {
    Eigen::MatrixXd f = gsig::read_matrix_csv(ga.features);
    std::optional<double> s2;
    if (s2opt->count()) s2 = ga.sigma2;
    finish_graph(gsig::knn_graph(f, ga.k, s2), ga.out);
  });
  auto* g_ring = graph->add_subcommand("ring", "cycle graph");
  g_ring->add_option("--n", ga.n, "vertex count")->required();
  g_ring->add_option("-o,--output", ga.out, "edge CSV output");
  add_common(g_ring, gc);
  g_ring->callback([&] { finish_graph(gsig::ring_graph(ga.n), ga.out); });
  auto* g_grid = graph->add_subcommand("grid", "2d lattice");
  g_grid->add_option("--rows", ga.rows)->required();
  g_grid->add_option("--cols", ga.cols)->required();
  g_grid->add_option("-o,--output", ga.out, "edge CSV output");
  add_common(g_grid, gc);
  g_grid->callback([&] { finish_graph(gsig::grid_graph(ga.rows, ga.cols), ga.out); });
  auto* g_geo = graph->add_subcommand("geometric",
                                      "k-NN graph over random points in the unit square");
  g_geo->add_option("--n", ga.n, "vertex count")->required();
  g_geo->add_option("--k", ga.k, "neighbor count");
  g_geo->add_option("-o,--output", ga.out, "edge CSV output");
  add_common(g_geo, gc);
  g_geo->callback([&] {
    finish_graph(gsig::random_geometric_graph(ga.n, ga.k, gc.seed), ga.out);
  });

  // synth
  SynthArgs sa;
  Common sc = common;
  auto* synth = app.add_subcommand("synth", "draw stationary signals with PSD g^2");
  synth->add_option("--graph", sa.graph, "edge CSV")->required();
  synth->add_option("--kernel", sa.kernel, "kernel JSON, inline or a file path")
      ->required();
  synth->add_option("--k", sa.k, "number of realizations")->capture_default_str();
  synth->add_option("--mean", sa.mean, "constant mean")->capture_default_str();
  synth->add_option("--order", sa.order, "Chebyshev order")->capture_default_str();
  synth->add_flag("--exact", sa.exact, "eigendecomposition instead of Chebyshev");
  synth->add_option("-o,--output", sa.out, "signal matrix CSV")->required();
  add_common(synth, sc);
  synth->callback([&] { apply(sc); run_synth(sa, sc); });

  // psd
  PsdArgs pa;
  Common pc = common;
  auto* psd = app.add_subcommand("psd", "estimate the power spectral density");
  psd->add_option("--graph", pa.graph, "edge CSV")->required();
  psd->add_option("--signals", pa.signals, "signal matrix CSV")->required();
  psd->add_option("--m", pa.m, "number of bands")->capture_default_str();
  psd->add_option("--order", pa.order, "Chebyshev order")->capture_default_str();
  psd->add_option("--k2", pa.k2, "probes per band norm")->capture_default_str();
  psd->add_flag("--center", pa.center, "subtract the empirical mean first");
  psd->add_flag("--exact", pa.exact,
                "also report the eigendecomposition-path PSD and per-band expectation");
  psd->add_option("-o,--output", pa.out, "write the same JSON to a file");
  add_common(psd, pc);
  psd->callback([&] { apply(pc); run_psd(pa, pc); });

  // solve
  SolveArgs va;
  Common vc = common;
  auto* solve = app.add_subcommand("solve", "recover a signal from measurements");
  solve->add_option("--method", va.method)
      ->required()
      ->check(CLI::IsMember({"wiener", "filter", "tikhonov", "tv", "lmmse", "interp"}));
  solve->add_option("--graph", va.graph, "edge CSV")->required();
  solve->add_option("--problem", va.problem, "problem JSON, inline or a file path")
      ->required();
  solve->add_option("--y", va.y, "measurement vector CSV")->required();
  solve->add_option("--eps", va.eps,
                    "residual budget for tikhonov/tv (default sigma*sqrt(m))");
  solve->add_flag("--trace", va.trace, "include the objective series");
  solve->add_flag("--exact", va.exact, "force the eigendecomposition path");
  solve->add_flag("--fast", va.fast, "force the Chebyshev path");
  solve->add_option("-o,--output", va.out, "solution vector CSV");
  add_common(solve, vc);
  solve->callback([&] { apply(vc); run_solve(va, vc); });

  // stationarity
  StatArgs ta;
  Common tc = common;
  auto* stat = app.add_subcommand("stationarity", "report the stationarity measure");
  stat->add_option("--graph", ta.graph, "edge CSV")->required();
  stat->add_option("--signals", ta.signals, "signal matrix CSV, K >= 2 columns")
      ->required();
  stat->add_option("--threshold", ta.threshold, "reporting threshold")
      ->capture_default_str();
  add_common(stat, tc);
  stat->callback([&] { apply(tc); run_stationarity(ta); });

  // experiment
  auto* exp = app.add_subcommand("experiment", "synthetic recovery benchmarks");
  exp->require_subcommand(1);
  gsig::DeconvParams dp;
  gsig::InpaintParams ip;
  std::string exp_out, exp_json;
  Common ec = common;
  auto* deconv = exp->add_subcommand("deconv", "heat-kernel deconvolution benchmark");
  deconv->add_option("--nodes", dp.n_nodes)->capture_default_str();
  deconv->add_option("--knn", dp.knn)->capture_default_str();
  deconv->add_option("--trials", dp.trials)->capture_default_str();
  deconv->add_option("--noise", dp.noise_levels, "noise std levels")
      ->delimiter(',')
      ->capture_default_str();
  deconv->add_option("-o,--output", exp_out, "report CSV (default stdout)");
  deconv->add_option("--json", exp_json, "report JSON mirror");
  add_common(deconv, ec);
  deconv->callback([&] {
    apply(ec);
    dp.seed = ec.seed;
    emit_report(gsig::experiment_deconvolution(dp), exp_out, exp_json);
  });
  auto* inpaint = exp->add_subcommand("inpaint", "random-mask recovery benchmark");
  inpaint->add_option("--nodes", ip.n_nodes)->capture_default_str();
  inpaint->add_option("--knn", ip.knn)->capture_default_str();
  inpaint->add_option("--mask", ip.mask_fraction, "observed fraction removed")
      ->capture_default_str();
  inpaint->add_option("--trials", ip.trials)->capture_default_str();
  inpaint->add_option("--noise", ip.noise_levels, "noise std levels")
      ->delimiter(',')
      ->capture_default_str();
  inpaint->add_option("--k1", ip.k1, "training realizations for the estimated PSD")
      ->capture_default_str();
  inpaint->add_option("--bands", ip.bands)->capture_default_str();
  inpaint->add_option("--order", ip.order)->capture_default_str();
  inpaint->add_option("--k2", ip.k2)->capture_default_str();
  inpaint->add_option("-o,--output", exp_out, "report CSV (default stdout)");
  inpaint->add_option("--json", exp_json, "report JSON mirror");
  add_common(inpaint, ec);
  inpaint->callback([&] {
    apply(ec);
    ip.seed = ec.seed;
    emit_report(gsig::experiment_inpainting(ip), exp_out, exp_json);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const gsig::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
