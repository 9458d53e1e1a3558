#pragma once

#include <string>

#include <json.hpp>

#include "gsig/graph.hpp"
#include "gsig/psd.hpp"
#include "gsig/stationarity.hpp"
#include "gsig/synth.hpp"
#include "gsig/wiener.hpp"

namespace gsig {

/// Edge-list CSV with header `i,j,w`, one row per unordered edge, 0-based.
void write_edge_csv(const std::string& path, const Graph& g);
Graph read_edge_csv(const std::string& path);

/// Dense numeric CSV, no header, one row per line. Doubles written with
/// enough digits to round-trip. A vector is a single-column matrix.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector_csv(const std::string& path);

/// Parse a JSON file; errors name the file and byte position.
nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// {"type":"heat","tau":..} | {"type":"gaussian","mu":..,"sigma2":..} |
/// {"type":"inverse_lambda","delta":..} | {"type":"bandlimit","cutoff":..} |
/// {"type":"constant","value":..} | {"type":"sampled","knots":[[l,v],..]}.
/// Custom kernels are not serializable.
nlohmann::json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const nlohmann::json& j);

nlohmann::json psd_estimate_to_json(const PsdEstimate& est);
PsdEstimate psd_estimate_from_json(const nlohmann::json& j);

nlohmann::json stationarity_report_to_json(const StationarityReport& rep);

/// Inverse-problem description:
/// {"operator":{"type":"mask","indices":[..]}|{"type":"filter","kernel":{..}}
///             |{"type":"identity"},
///  "psd":{kernel}, "noise":{"sigma2":..}|{kernel},
///  "mean":scalar|[..], "solver":{"beta":..,"eps":..,"J":..}}
/// psd, noise, mean, solver are optional; defaults are zero mean, zero noise.
struct ProblemSpec {
  std::string operator_type = "identity";
  std::vector<Eigen::Index> mask_indices;
  Kernel operator_kernel;

  bool has_psd = false;
  Kernel psd;
  Kernel noise = Kernel::constant(0.0);

  bool mean_is_scalar = true;
  double mean_scalar = 0.0;
  Eigen::VectorXd mean_vector;

  SolveOptions solver;

  /// Materializes the operator on an n-vertex graph, exact or Chebyshev path.
  LinearOperator make_operator(std::shared_ptr<const SpectralBasis> basis,
                               std::shared_ptr<const Laplacian> lap) const;
  Eigen::VectorXd make_mean(Eigen::Index n) const;
};

ProblemSpec problem_from_json(const nlohmann::json& j);

/// Rows `method,noise_std,mean_snr_db,stderr_db,trials`, one per
/// (method, noise level) pair.
std::string report_to_csv(const ExperimentReport& rep);
nlohmann::json report_to_json(const ExperimentReport& rep);

nlohmann::json solve_trace_to_json(const SolveResult& res);

}  // namespace gsig
