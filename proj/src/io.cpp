#include "gsig/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gsig {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail_at(const std::string& path, std::size_t lineno,
                          const std::string& msg) {
  fail(errc::bad_input, path + ":" + std::to_string(lineno) + ": " + msg);
}

double parse_double(const std::string& tok, const std::string& path,
                    std::size_t lineno) {
  if (tok.empty()) fail_at(path, lineno, "empty numeric field");
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size())
    fail_at(path, lineno, "not a number: \"" + tok + "\"");
  return v;
}

Eigen::Index parse_index(const std::string& tok, const std::string& path,
                         std::size_t lineno) {
  long long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || v < 0)
    fail_at(path, lineno, "not a vertex index: \"" + tok + "\"");
  return static_cast<Eigen::Index>(v);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  require(f.good(), errc::bad_input, "cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), errc::bad_input, "cannot open: " + path);
  return f;
}

}  // namespace

void write_edge_csv(const std::string& path, const Graph& g) {
  auto f = open_out(path);
  f << "i,j,w\n";
  for (const Edge& e : g.edges())
    f << e.i << ',' << e.j << ',' << fmt_double(e.w) << '\n';
  require(f.good(), errc::bad_input, "write failed: " + path);
}

Graph read_edge_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<Edge> edges;
  Eigen::Index max_vertex = -1;
  bool header_seen = false;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (!header_seen) {
      if (t != "i,j,w")
        fail_at(path, lineno, "expected header \"i,j,w\", got \"" + t + "\"");
      header_seen = true;
      continue;
    }
    auto fields = split_fields(t);
    if (fields.size() != 3)
      fail_at(path, lineno, "expected 3 fields, got " +
                                std::to_string(fields.size()));
    Edge e{parse_index(fields[0], path, lineno),
           parse_index(fields[1], path, lineno),
           parse_double(fields[2], path, lineno)};
    max_vertex = std::max({max_vertex, e.i, e.j});
    edges.push_back(e);
  }
  if (!header_seen) fail_at(path, 1, "empty edge file");
  return graph_from_edge_list(max_vertex + 1, std::move(edges));
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  auto f = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) f << ',';
      f << fmt_double(m(r, c));
    }
    f << '\n';
  }
  require(f.good(), errc::bad_input, "write failed: " + path);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto fields = split_fields(t);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& tok : fields) row.push_back(parse_double(tok, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      fail_at(path, lineno,
              "expected " + std::to_string(rows.front().size()) +
                  " fields, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), errc::bad_input, path + ": empty matrix file");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

void write_vector_csv(const std::string& path, const Eigen::VectorXd& v) {
  write_matrix_csv(path, v);
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  Eigen::MatrixXd m = read_matrix_csv(path);
  require(m.cols() == 1, errc::bad_input,
          path + ": expected a single-column vector, got " +
              std::to_string(m.cols()) + " columns");
  return m.col(0);
}

nlohmann::json load_json_file(const std::string& path) {
  auto f = open_in(path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::bad_input, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  require(f.good(), errc::bad_input, "write failed: " + path);
}

namespace {

double get_number(const nlohmann::json& j, const char* key,
                  const std::string& ctx) {
  require(j.contains(key), errc::bad_input,
          ctx + ": missing field \"" + key + "\"");
  require(j[key].is_number(), errc::bad_input,
          ctx + ": field \"" + key + "\" must be a number");
  return j[key].get<double>();
}

}  // namespace

nlohmann::json kernel_to_json(const Kernel& k) {
  nlohmann::json j;
  switch (k.kind()) {
    case kernel_kind::heat:
      j["type"] = "heat";
      j["tau"] = k.param0();
      break;
    case kernel_kind::gaussian:
      j["type"] = "gaussian";
      j["mu"] = k.param0();
      j["sigma2"] = k.param1();
      break;
    case kernel_kind::inverse_lambda:
      j["type"] = "inverse_lambda";
      j["delta"] = k.param0();
      break;
    case kernel_kind::bandlimit:
      j["type"] = "bandlimit";
      j["cutoff"] = k.param0();
      break;
    case kernel_kind::constant:
      j["type"] = "constant";
      j["value"] = k.param0();
      break;
    case kernel_kind::sampled:
      j["type"] = "sampled";
      j["knots"] = k.knots();
      if (k.clamp_nonnegative()) j["clamp_nonnegative"] = true;
      break;
    case kernel_kind::custom:
      fail(errc::bad_input,
           "kernel \"" + k.label() + "\" is not serializable");
  }
  return j;
}

Kernel kernel_from_json(const nlohmann::json& j) {
  require(j.is_object(), errc::bad_input, "kernel JSON must be an object");
  require(j.contains("type") && j["type"].is_string(), errc::bad_input,
          "kernel JSON: missing string field \"type\"");
  const std::string type = j["type"].get<std::string>();
  const std::string ctx = "kernel \"" + type + "\"";
  if (type == "heat") return Kernel::heat(get_number(j, "tau", ctx));
  if (type == "gaussian")
    return Kernel::gaussian(get_number(j, "mu", ctx),
                            get_number(j, "sigma2", ctx));
  if (type == "inverse_lambda")
    return Kernel::inverse_lambda(get_number(j, "delta", ctx));
  if (type == "bandlimit")
    return Kernel::bandlimit(get_number(j, "cutoff", ctx));
  if (type == "constant") return Kernel::constant(get_number(j, "value", ctx));
  if (type == "sampled") {
    require(j.contains("knots") && j["knots"].is_array(), errc::bad_input,
            ctx + ": missing array field \"knots\"");
    std::vector<std::array<double, 2>> knots;
    for (const auto& kn : j["knots"]) {
      require(kn.is_array() && kn.size() == 2 && kn[0].is_number() &&
                  kn[1].is_number(),
              errc::bad_input, ctx + ": each knot must be a [lambda, value] pair");
      knots.push_back({kn[0].get<double>(), kn[1].get<double>()});
    }
    bool clamp = j.value("clamp_nonnegative", false);
    return Kernel::sampled(std::move(knots), clamp);
  }
  fail(errc::bad_input, "unknown kernel type \"" + type + "\"");
}

nlohmann::json psd_estimate_to_json(const PsdEstimate& est) {
  nlohmann::json j;
  j["lambda_max"] = est.lambda_max;
  j["points"] = est.points;
  j["meta"] = {{"M", est.M},
               {"order", est.order},
               {"k1", est.k1},
               {"k2", est.k2},
               {"seed", est.seed}};
  return j;
}

PsdEstimate psd_estimate_from_json(const nlohmann::json& j) {
  const std::string ctx = "PSD estimate JSON";
  PsdEstimate est;
  est.lambda_max = get_number(j, "lambda_max", ctx);
  require(j.contains("points") && j["points"].is_array(), errc::bad_input,
          ctx + ": missing array field \"points\"");
  for (const auto& p : j["points"]) {
    require(p.is_array() && p.size() == 2, errc::bad_input,
            ctx + ": each point must be an [x, value] pair");
    est.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  const nlohmann::json meta =
      j.contains("meta") ? j["meta"] : nlohmann::json::object();
  est.M = static_cast<int>(meta.value("M", est.points.size()));
  est.order = meta.value("order", 30);
  est.k1 = meta.value("k1", 0);
  est.k2 = meta.value("k2", 0);
  est.seed = meta.value("seed", std::uint64_t{0});
  return est;
}

nlohmann::json stationarity_report_to_json(const StationarityReport& rep) {
  return {{"s_r", rep.s_r},
          {"n", rep.n},
          {"k", rep.k},
          {"cluster_count", rep.cluster_count},
          {"threshold", rep.threshold},
          {"approximately_stationary", rep.approximately_stationary}};
}

LinearOperator ProblemSpec::make_operator(
    std::shared_ptr<const SpectralBasis> basis,
    std::shared_ptr<const Laplacian> lap) const {
  require(basis || lap, errc::bad_input, "no graph supplied for the operator");
  const Eigen::Index n = basis ? basis->n() : lap->n();
  if (operator_type == "identity") return LinearOperator::identity(n);
  if (operator_type == "mask") return LinearOperator::mask(n, mask_indices);
  if (operator_type == "filter") {
    if (basis) return LinearOperator::graph_filter(basis, operator_kernel);
    return LinearOperator::graph_filter(lap, operator_kernel, solver.order);
  }
  fail(errc::bad_input, "unknown operator type \"" + operator_type + "\"");
}

Eigen::VectorXd ProblemSpec::make_mean(Eigen::Index n) const {
  if (mean_is_scalar) {
    if (mean_scalar == 0.0) return {};
    return Eigen::VectorXd::Constant(n, mean_scalar);
  }
  require(mean_vector.size() == n, errc::dimension_mismatch,
          "problem mean has length " + std::to_string(mean_vector.size()) +
          ", graph has " + std::to_string(n) + " vertices");
  return mean_vector;
}

ProblemSpec problem_from_json(const nlohmann::json& j) {
  require(j.is_object(), errc::bad_input, "problem JSON must be an object");
  ProblemSpec spec;
  if (j.contains("operator")) {
    const auto& op = j["operator"];
    require(op.is_object() && op.contains("type") && op["type"].is_string(),
            errc::bad_input,
            "problem JSON: \"operator\" needs a string field \"type\"");
    spec.operator_type = op["type"].get<std::string>();
    if (spec.operator_type == "mask") {
      require(op.contains("indices") && op["indices"].is_array(),
              errc::bad_input,
              "problem JSON: mask operator needs an array field \"indices\"");
      for (const auto& v : op["indices"]) {
        require(v.is_number_integer(), errc::bad_input,
                "problem JSON: mask indices must be integers");
        spec.mask_indices.push_back(v.get<Eigen::Index>());
      }
    } else if (spec.operator_type == "filter") {
      require(op.contains("kernel"), errc::bad_input,
              "problem JSON: filter operator needs a field \"kernel\"");
      spec.operator_kernel = kernel_from_json(op["kernel"]);
    } else {
      require(spec.operator_type == "identity", errc::bad_input,
              "unknown operator type \"" + spec.operator_type + "\"");
    }
  }
  if (j.contains("psd")) {
    spec.psd = kernel_from_json(j["psd"]);
    spec.has_psd = true;
  }
  if (j.contains("noise")) {
    const auto& nj = j["noise"];
    if (nj.is_object() && nj.contains("sigma2")) {
      double s2 = get_number(nj, "sigma2", "problem JSON noise");
      require(s2 >= 0, errc::bad_input, "noise sigma2 must be >= 0");
      spec.noise = Kernel::constant(s2);
    } else {
      spec.noise = kernel_from_json(nj);
    }
  }
  if (j.contains("mean")) {
    const auto& mj = j["mean"];
    if (mj.is_number()) {
      spec.mean_is_scalar = true;
      spec.mean_scalar = mj.get<double>();
    } else if (mj.is_array()) {
      spec.mean_is_scalar = false;
      spec.mean_vector.resize(static_cast<Eigen::Index>(mj.size()));
      Eigen::Index i = 0;
      for (const auto& v : mj) {
        require(v.is_number(), errc::bad_input,
                "problem JSON: mean entries must be numbers");
        spec.mean_vector[i++] = v.get<double>();
      }
    } else {
      fail(errc::bad_input, "problem JSON: \"mean\" must be a number or array");
    }
  }
  if (j.contains("solver")) {
    const auto& sj = j["solver"];
    require(sj.is_object(), errc::bad_input,
            "problem JSON: \"solver\" must be an object");
    if (sj.contains("beta")) spec.solver.beta = get_number(sj, "beta", "solver");
    if (sj.contains("eps")) spec.solver.eps = get_number(sj, "eps", "solver");
    if (sj.contains("J"))
      spec.solver.max_iter = static_cast<int>(get_number(sj, "J", "solver"));
  }
  return spec;
}

std::string report_to_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  out << "method,noise_std,mean_snr_db,stderr_db,trials\n";
  for (std::size_t mi = 0; mi < rep.methods.size(); ++mi)
    for (std::size_t ni = 0; ni < rep.noise_levels.size(); ++ni) {
      auto r = static_cast<Eigen::Index>(mi);
      auto c = static_cast<Eigen::Index>(ni);
      out << rep.methods[mi] << ',' << fmt_double(rep.noise_levels[ni]) << ','
          << fmt_double(rep.mean_snr_db(r, c)) << ','
          << fmt_double(rep.stderr_db(r, c)) << ',' << rep.trials << '\n';
    }
  return out.str();
}

nlohmann::json report_to_json(const ExperimentReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t mi = 0; mi < rep.methods.size(); ++mi)
    for (std::size_t ni = 0; ni < rep.noise_levels.size(); ++ni) {
      auto r = static_cast<Eigen::Index>(mi);
      auto c = static_cast<Eigen::Index>(ni);
      rows.push_back({{"method", rep.methods[mi]},
                      {"noise_std", rep.noise_levels[ni]},
                      {"mean_snr_db", rep.mean_snr_db(r, c)},
                      {"stderr_db", rep.stderr_db(r, c)},
                      {"trials", rep.trials}});
    }
  return {{"rows", rows},
          {"methods", rep.methods},
          {"noise_levels", rep.noise_levels},
          {"trials", rep.trials},
          {"seed", rep.seed},
          {"runtime_seconds", rep.runtime_seconds},
          {"notes", rep.notes}};
}

nlohmann::json solve_trace_to_json(const SolveResult& res) {
  return {{"objective", res.objective},
          {"iterations", res.iterations},
          {"converged", res.converged}};
}

}  // namespace gsig
