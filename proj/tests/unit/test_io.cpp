#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gsig/io.hpp"
#include "gsig/rng.hpp"
#include "gsig/spectral.hpp"

using namespace gsig;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() /
            ("gsig_io_" + name + "_" + std::to_string(::getpid())))
               .string();
  }
  ~TempFile() { std::remove(path.c_str()); }
  void fill(const std::string& text) const {
    std::ofstream out(path);
    out << text;
  }
};

bool mentions(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("edge lists survive a csv round trip") {
  Graph g = random_geometric_graph(25, 4, 6);
  TempFile f("edges");
  write_edge_csv(f.path, g);
  Graph back = read_edge_csv(f.path);
  REQUIRE(back.n_vertices() == g.n_vertices());
  REQUIRE(back.edges().size() == g.edges().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    CHECK(back.edges()[e].i == g.edges()[e].i);
    CHECK(back.edges()[e].j == g.edges()[e].j);
    CHECK(back.edges()[e].w == g.edges()[e].w);  // exact: shortest round trip
  }
}

TEST_CASE("edge csv errors carry file and line positions") {
  TempFile f("badedge");
  f.fill("i,j,w\n0,1,1.0\n0,nope,2.0\n");
  try {
    read_edge_csv(f.path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(mentions(e.what(), f.path));
    CHECK(mentions(e.what(), ":3:"));
  }

  TempFile g("badhead");
  g.fill("a,b,c\n0,1,1.0\n");
  CHECK_THROWS_AS(read_edge_csv(g.path), Error);

  CHECK_THROWS_AS(read_edge_csv("/nonexistent/gsig.csv"), Error);
}

TEST_CASE("matrices survive a csv round trip bit for bit") {
  Eigen::MatrixXd m = gaussian_matrix(7, 3, 61);
  m(0, 0) = 0.05;
  m(1, 2) = -3.0;
  m(2, 1) = 1e-17;
  TempFile f("matrix");
  write_matrix_csv(f.path, m);
  Eigen::MatrixXd back = read_matrix_csv(f.path);
  REQUIRE(back.rows() == 7);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("clean decimals are written without noise digits") {
  Eigen::VectorXd v(2);
  v << 0.05, 2.0;
  TempFile f("vec");
  write_vector_csv(f.path, v);
  std::ifstream in(f.path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "0.05");
  std::getline(in, line);
  CHECK(line == "2");
}

TEST_CASE("vector readers reject multi-column files") {
  TempFile f("wide");
  f.fill("1.0,2.0\n3.0,4.0\n");
  CHECK_THROWS_AS(read_vector_csv(f.path), Error);
  Eigen::MatrixXd m = read_matrix_csv(f.path);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
}

TEST_CASE("ragged csv rows are rejected with the offending line") {
  TempFile f("ragged");
  f.fill("1.0,2.0\n3.0\n");
  try {
    read_matrix_csv(f.path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(mentions(e.what(), ":2:"));
  }
  TempFile g("empty");
  g.fill("");
  CHECK_THROWS_AS(read_matrix_csv(g.path), Error);
}

TEST_CASE("named kernels survive a json round trip") {
  Laplacian lap(ring_graph(16));
  auto check_round_trip = [&](const Kernel& k) {
    Kernel back = kernel_from_json(kernel_to_json(k));
    for (int i = 0; i <= 40; ++i) {
      double lam = 4.0 * i / 40.0;
      CHECK(back(lam) == k(lam));
    }
  };
  check_round_trip(Kernel::heat(1.7));
  check_round_trip(Kernel::gaussian(0.9, 0.3));
  check_round_trip(Kernel::inverse_lambda(1e-3));
  check_round_trip(Kernel::bandlimit(2.5));
  check_round_trip(Kernel::constant(0.25));
  check_round_trip(Kernel::sampled({{0.0, 1.0}, {2.0, 0.5}, {4.0, 0.1}}, false));
  check_round_trip(Kernel::sampled({{0.0, 1.0}, {4.0, -0.5}}, true));
}

TEST_CASE("sampled kernel serialization keeps the clamp flag") {
  Kernel clamped = Kernel::sampled({{0.0, 1.0}, {2.0, -1.0}}, true);
  Kernel raw = Kernel::sampled({{0.0, 1.0}, {2.0, -1.0}}, false);
  Kernel cb = kernel_from_json(kernel_to_json(clamped));
  Kernel rb = kernel_from_json(kernel_to_json(raw));
  CHECK(cb(2.0) == 0.0);
  CHECK(rb(2.0) == -1.0);
}

TEST_CASE("custom kernels refuse to serialize") {
  Kernel k = Kernel::custom([](double) { return 1.0; }, "mystery");
  try {
    kernel_to_json(k);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(mentions(e.what(), "mystery"));
  }
}

TEST_CASE("unknown kernel types are named in the error") {
  try {
    kernel_from_json(nlohmann::json{{"type", "sinc"}});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(mentions(e.what(), "sinc"));
  }
  CHECK_THROWS_AS(kernel_from_json(nlohmann::json{{"type", "heat"}}), Error);
  CHECK_THROWS_AS(kernel_from_json(nlohmann::json::array()), Error);
}

TEST_CASE("psd estimates survive a json round trip") {
  PsdEstimate est;
  est.lambda_max = 6.5;
  est.points = {{0.2, 1.5}, {0.4, 1.1}, {0.6, 0.3}};
  est.M = 3;
  est.order = 20;
  est.k1 = 12;
  est.k2 = 4;
  est.seed = 99;
  PsdEstimate back = psd_estimate_from_json(psd_estimate_to_json(est));
  CHECK(back.lambda_max == est.lambda_max);
  CHECK(back.points == est.points);
  CHECK(back.M == 3);
  CHECK(back.order == 20);
  CHECK(back.k1 == 12);
  CHECK(back.k2 == 4);
  CHECK(back.seed == 99);
}

TEST_CASE("json files that fail to parse name the file") {
  TempFile f("badjson");
  f.fill("{\"a\": ");
  try {
    load_json_file(f.path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(mentions(e.what(), f.path));
  }
}

TEST_CASE("json files round trip through the writer") {
  TempFile f("json");
  nlohmann::json j = {{"a", 1}, {"b", {1.5, "x"}}};
  write_json_file(f.path, j);
  CHECK(load_json_file(f.path) == j);
}

TEST_CASE("problem descriptions parse masks filters and defaults") {
  nlohmann::json jm = {
      {"operator", {{"type", "mask"}, {"indices", {0, 3, 5}}}},
      {"psd", {{"type", "heat"}, {"tau", 0.5}}},
      {"noise", {{"sigma2", 0.01}}},
      {"mean", 1.5},
      {"solver", {{"beta", 0.2}, {"eps", 1e-6}, {"J", 500}}}};
  ProblemSpec sm = problem_from_json(jm);
  CHECK(sm.operator_type == "mask");
  CHECK(sm.mask_indices == std::vector<Eigen::Index>{0, 3, 5});
  REQUIRE(sm.has_psd);
  CHECK(sm.psd(1.0) == Kernel::heat(0.5)(1.0));
  CHECK(sm.noise(3.0) == 0.01);
  CHECK(sm.mean_is_scalar);
  CHECK(sm.mean_scalar == 1.5);
  CHECK(sm.solver.beta == 0.2);
  CHECK(sm.solver.eps == 1e-6);
  CHECK(sm.solver.max_iter == 500);

  nlohmann::json jf = {
      {"operator",
       {{"type", "filter"}, {"kernel", {{"type", "heat"}, {"tau", 2.0}}}}},
      {"mean", {1.0, 2.0, 3.0}}};
  ProblemSpec sf = problem_from_json(jf);
  CHECK(sf.operator_type == "filter");
  CHECK(!sf.has_psd);
  CHECK(!sf.mean_is_scalar);
  CHECK((sf.make_mean(3) - Eigen::Vector3d(1.0, 2.0, 3.0)).norm() == 0.0);
  CHECK_THROWS_AS(sf.make_mean(4), Error);

  ProblemSpec sd = problem_from_json(nlohmann::json::object());
  CHECK(sd.operator_type == "identity");
  CHECK(sd.noise(1.0) == 0.0);
  CHECK(sd.make_mean(5).size() == 0);

  CHECK_THROWS_AS(
      problem_from_json(nlohmann::json{{"operator", {{"type", "conv"}}}}),
      Error);
  CHECK_THROWS_AS(
      problem_from_json(nlohmann::json{{"noise", {{"sigma2", -1.0}}}}), Error);
}

TEST_CASE("problem operators materialize against a graph") {
  auto lap = std::make_shared<const Laplacian>(ring_graph(10));
  auto basis = std::make_shared<const SpectralBasis>(eigendecompose(*lap));

  ProblemSpec mask;
  mask.operator_type = "mask";
  mask.mask_indices = {0, 4, 8};
  LinearOperator Hm = mask.make_operator(basis, lap);
  CHECK(Hm.rows() == 3);
  CHECK(Hm.cols() == 10);

  ProblemSpec filt;
  filt.operator_type = "filter";
  filt.operator_kernel = Kernel::heat(0.5);
  LinearOperator Hf = filt.make_operator(basis, lap);
  Eigen::VectorXd x = gaussian_vector(10, 63);
  CHECK((Hf.apply(x) - filter_exact(*basis, Kernel::heat(0.5), x)).norm() <
        1e-12);
  LinearOperator Hc = filt.make_operator(nullptr, lap);
  CHECK((Hc.apply(x) - Hf.apply(x)).norm() < 1e-6 * x.norm());

  ProblemSpec ident;
  LinearOperator Hi = ident.make_operator(nullptr, lap);
  CHECK((Hi.apply(x) - x).norm() == 0.0);
}

TEST_CASE("experiment reports print one csv row per method and level") {
  ExperimentReport rep;
  rep.methods = {"wiener", "tv"};
  rep.noise_levels = {0.05, 0.1};
  rep.mean_snr_db.resize(2, 2);
  rep.mean_snr_db << 12.5, 10.0, 8.25, 7.0;
  rep.stderr_db.resize(2, 2);
  rep.stderr_db << 0.5, 0.25, 0.125, 0.0625;
  rep.trials = 4;
  std::string csv = report_to_csv(rep);
  CHECK(csv ==
        "method,noise_std,mean_snr_db,stderr_db,trials\n"
        "wiener,0.05,12.5,0.5,4\n"
        "wiener,0.1,10,0.25,4\n"
        "tv,0.05,8.25,0.125,4\n"
        "tv,0.1,7,0.0625,4\n");

  nlohmann::json j = report_to_json(rep);
  CHECK(j["rows"].size() == 4);
  CHECK(j["methods"].size() == 2);
  CHECK(j["rows"][0]["method"] == "wiener");
  CHECK(j["rows"][0]["mean_snr_db"].get<double>() == 12.5);
}

TEST_CASE("stationarity reports serialize their summary fields") {
  Laplacian lap(ring_graph(12));
  SpectralBasis basis = eigendecompose(lap);
  SignalEnsemble ens;
  ens.data = gaussian_matrix(12, 30, 64);
  ens.centered = false;
  StationarityReport rep = stationarity_report(basis, ens, 0.8);
  nlohmann::json j = stationarity_report_to_json(rep);
  CHECK(j["n"].get<int>() == 12);
  CHECK(j["k"].get<int>() == 30);
  CHECK(j["s_r"].get<double>() == rep.s_r);
  CHECK(j["threshold"].get<double>() == 0.8);
  CHECK(j.contains("approximately_stationary"));
  CHECK(j.contains("cluster_count"));
}

TEST_CASE("solver traces serialize objective and convergence") {
  SolveResult res;
  res.objective = {3.0, 2.0, 1.5};
  res.iterations = 3;
  res.converged = true;
  nlohmann::json j = solve_trace_to_json(res);
  CHECK(j["objective"].size() == 3);
  CHECK(j["iterations"].get<int>() == 3);
  CHECK(j["converged"].get<bool>() == true);
}
