#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include <gsig/errors.hpp>
#include <gsig/graph.hpp>
#include <gsig/io.hpp>
#include <gsig/kernel.hpp>
#include <gsig/psd.hpp>
#include <gsig/rng.hpp>
#include <gsig/spectral.hpp>
#include <gsig/stationarity.hpp>
#include <gsig/synth.hpp>
#include <gsig/threading.hpp>
#include <gsig/wiener.hpp>

namespace py = pybind11;
using namespace gsig;

namespace {

const char* kernel_kind_name(kernel_kind k) {
  switch (k) {
    case kernel_kind::heat: return "heat";
    case kernel_kind::gaussian: return "gaussian";
    case kernel_kind::inverse_lambda: return "inverse_lambda";
    case kernel_kind::bandlimit: return "bandlimit";
    case kernel_kind::constant: return "constant";
    case kernel_kind::sampled: return "sampled";
    case kernel_kind::custom: return "custom";
  }
  return "?";
}

const char* op_kind_name(op_kind k) {
  switch (k) {
    case op_kind::identity: return "identity";
    case op_kind::mask: return "mask";
    case op_kind::filter: return "filter";
    case op_kind::masked_filter: return "masked_filter";
  }
  return "?";
}

Graph make_graph(Eigen::Index n,
                 const std::vector<std::tuple<Eigen::Index, Eigen::Index, double>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [i, j, w] : edges) es.push_back({i, j, w});
  return graph_from_edge_list(n, std::move(es));
}

py::handle error_type;

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json json_from_py(const py::object& obj) {
  std::string s =
      py::cast<std::string>(py::module_::import("json").attr("dumps")(obj));
  return nlohmann::json::parse(s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stationary graph signal processing: spectral filters, PSD "
            "estimation, and Wiener-type recovery on weighted graphs.";
  m.attr("__version__") = "0.1.0";

  error_type = py::exception<Error>(m, "Error").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      std::string msg = std::string(errc_name(e.code())) + ": " + e.what();
      py::set_error(error_type, msg.c_str());
    }
  });

  // ---- graphs -------------------------------------------------------------

  py::class_<Graph>(m, "Graph",
                    "Undirected weighted graph; edges stored once per "
                    "unordered pair with i < j, weights strictly positive.")
      .def(py::init(&make_graph), py::arg("n"), py::arg("edges"),
           "Build from an edge list of (i, j, w) triples; (i,j) and (j,i) "
           "are the same pair and may appear at most once.")
      .def_property_readonly("n_vertices", &Graph::n_vertices)
      .def_property_readonly("degrees",
                             [](const Graph& g) { return g.degrees(); })
      .def("edges",
           [](const Graph& g) {
             std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> out;
             out.reserve(g.edges().size());
             for (const Edge& e : g.edges()) out.emplace_back(e.i, e.j, e.w);
             return out;
           },
           "Canonical edge list as (i, j, w) tuples sorted by (i, j).")
      .def("neighbors",
           [](const Graph& g, Eigen::Index i) {
             std::vector<std::pair<Eigen::Index, double>> out;
             for (const auto& nb : g.neighbors(i)) out.emplace_back(nb.j, nb.w);
             return out;
           },
           py::arg("i"))
      .def("weight_matrix", &Graph::weight_matrix)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.n_vertices()) +
               " edges=" + std::to_string(g.edges().size()) + ">";
      });

  m.def("knn_graph", &knn_graph, py::arg("features"), py::arg("k"),
        py::arg("sigma2") = std::nullopt,
        "k-NN graph over feature rows, symmetrized by union, weights "
        "exp(-d^2/sigma2); sigma2=None picks the mean retained squared "
        "distance.");
  m.def("ring_graph", &ring_graph, py::arg("n"));
  m.def("grid_graph", &grid_graph, py::arg("rows"), py::arg("cols"));
  m.def("random_geometric_graph", &random_geometric_graph, py::arg("n"),
        py::arg("k"), py::arg("seed"),
        "k-NN graph over n uniform points in the unit square.");

  py::class_<Laplacian, std::shared_ptr<Laplacian>>(
      m, "Laplacian", "Combinatorial Laplacian L = D - W.")
      .def(py::init<const Graph&>(), py::arg("graph"))
      .def_property_readonly("matrix",
                             [](const Laplacian& l) { return l.matrix(); })
      .def_property_readonly("lambda_max_bound", &Laplacian::lambda_max_bound)
      .def_property_readonly("n", &Laplacian::n);

  m.def("gradient_operator", &gradient_operator, py::arg("graph"),
        "|E| x N incidence matrix with rows ordered like Graph.edges(); "
        "||grad @ x||^2 == x' L x exactly.");

  // ---- kernels ------------------------------------------------------------

  py::class_<Kernel>(m, "Kernel",
                     "Scalar spectral kernel g(lambda); immutable. Arguments "
                     "below 0 clamp to 0, sampled kernels clamp to their end "
                     "knots.")
      .def_static("heat", &Kernel::heat, py::arg("tau"), "exp(-tau*lambda)")
      .def_static("gaussian", &Kernel::gaussian, py::arg("mu"),
                  py::arg("sigma2"), "exp(-(lambda-mu)^2/sigma2)")
      .def_static("inverse_lambda", &Kernel::inverse_lambda, py::arg("delta"),
                  "1/(lambda+delta)")
      .def_static("bandlimit", &Kernel::bandlimit, py::arg("lambda_c"),
                  "1 for lambda <= lambda_c, else 0")
      .def_static("constant", &Kernel::constant, py::arg("value"))
      .def_static("sampled", &Kernel::sampled, py::arg("knots"),
                  py::arg("clamp_nonnegative") = false,
                  "Piecewise-linear through (lambda, value) knots with "
                  "strictly increasing lambda.")
      .def_static("custom", &Kernel::custom, py::arg("fn"),
                  py::arg("label") = std::string("custom"),
                  "Arbitrary callable; not serializable.")
      .def("__call__",
           [](const Kernel& k, double lam) { return k(lam); },
           py::arg("lam"))
      .def("__call__",
           [](const Kernel& k, const Eigen::ArrayXd& lams) { return k(lams); },
           py::arg("lams"))
      .def_property_readonly(
          "kind", [](const Kernel& k) { return kernel_kind_name(k.kind()); })
      .def_property_readonly("label", &Kernel::label)
      .def_property_readonly("serializable", &Kernel::serializable)
      .def_property_readonly("clamp_nonnegative", &Kernel::clamp_nonnegative)
      .def_property_readonly("param0", &Kernel::param0)
      .def_property_readonly("param1", &Kernel::param1)
      .def_property_readonly("knots",
                             [](const Kernel& k) { return k.knots(); })
      .def("to_json", [](const Kernel& k) { return json_to_py(kernel_to_json(k)); },
           "Kernel as a JSON-compatible dict; raises for custom kernels.")
      .def_static("from_json",
                  [](const py::object& obj) {
                    return kernel_from_json(json_from_py(obj));
                  },
                  py::arg("obj"))
      .def("__repr__", [](const Kernel& k) {
        return "<Kernel " + k.label() + ">";
      });

  m.def("kernel_product", &kernel_product, py::arg("a"), py::arg("b"));
  m.def("kernel_squared", &kernel_squared, py::arg("a"));

  // ---- spectral -----------------------------------------------------------

  py::class_<SpectralBasis, std::shared_ptr<SpectralBasis>>(
      m, "SpectralBasis",
      "Laplacian eigenpairs: ascending eigenvalues (lambda_0 = 0) and "
      "orthonormal eigenvectors as columns of U.")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("lambdas"),
           py::arg("U"))
      .def_property_readonly("lambdas",
                             [](const SpectralBasis& b) { return b.lambdas(); })
      .def_property_readonly("U", [](const SpectralBasis& b) { return b.U(); })
      .def_property_readonly("n", &SpectralBasis::n)
      .def_property_readonly("lambda_max", &SpectralBasis::lambda_max)
      .def_property_readonly("clusters", [](const SpectralBasis& b) {
        std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
        for (const EigCluster& c : b.clusters())
          out.emplace_back(c.begin, c.end);
        return out;
      });

  m.def("eigendecompose", &eigendecompose, py::arg("lap"),
        py::arg("limit") = 5000,
        "Dense eigendecomposition; guarded by `limit` because cost is "
        "O(n^3).");
  m.def("gft", &gft, py::arg("basis"), py::arg("x"));
  m.def("igft", &igft, py::arg("basis"), py::arg("xhat"));
  m.def("filter_exact", &filter_exact, py::arg("basis"), py::arg("g"),
        py::arg("X"), "U g(Lambda) U' X.");
  m.def("filter_chebyshev", &filter_chebyshev, py::arg("lap"), py::arg("g"),
        py::arg("X"), py::arg("order") = 30,
        "Chebyshev approximation of g(L) X, cost O(order * nnz * cols).");
  m.def("chebyshev_coefficients", &chebyshev_coefficients, py::arg("g"),
        py::arg("lambda_max"), py::arg("order"));
  m.def("localize",
        py::overload_cast<const SpectralBasis&, const Kernel&, Eigen::Index>(
            &localize),
        py::arg("basis"), py::arg("g"), py::arg("i"),
        "g(L) delta_i: column i of the filter matrix.");
  m.def("localize",
        py::overload_cast<const Laplacian&, const Kernel&, Eigen::Index, int>(
            &localize),
        py::arg("lap"), py::arg("g"), py::arg("i"), py::arg("order") = 30);

  // ---- stationarity -------------------------------------------------------

  py::class_<SignalEnsemble>(m, "SignalEnsemble",
                             "K realizations of a graph signal, one per "
                             "column of an N x K matrix.")
      .def(py::init([](Eigen::MatrixXd data, bool centered) {
             SignalEnsemble e;
             e.data = std::move(data);
             e.centered = centered;
             return e;
           }),
           py::arg("data"), py::arg("centered") = false)
      .def_readwrite("data", &SignalEnsemble::data)
      .def_readwrite("centered", &SignalEnsemble::centered);

  m.def("empirical_mean", &empirical_mean, py::arg("ens"));
  m.def("center", &center, py::arg("ens"));
  m.def("empirical_covariance", &empirical_covariance, py::arg("ens"),
        "Unbiased sample covariance, 1/(K-1); requires K >= 2.");
  m.def("spectral_covariance", &spectral_covariance, py::arg("basis"),
        py::arg("sigma"), "Gamma = U' Sigma U.");
  m.def("psd_from_covariance", &psd_from_covariance, py::arg("basis"),
        py::arg("sigma"),
        "diag(U' Sigma U) as a sampled kernel over the eigenvalues; entries "
        "in a degenerate cluster are averaged into one knot.");
  m.def("stationarity_measure", &stationarity_measure, py::arg("gamma"),
        "||diag(Gamma)||_2 / ||Gamma||_F, in (0,1].");
  m.def("gram_from_distances", &gram_from_distances, py::arg("D"),
        "-1/2 J D J applied to a squared-distance matrix.");

  py::class_<StationarityReport>(m, "StationarityReport")
      .def_readonly("s_r", &StationarityReport::s_r)
      .def_readonly("n", &StationarityReport::n)
      .def_readonly("k", &StationarityReport::k)
      .def_readonly("cluster_count", &StationarityReport::cluster_count)
      .def_readonly("threshold", &StationarityReport::threshold)
      .def_readonly("approximately_stationary",
                    &StationarityReport::approximately_stationary)
      .def("to_json", [](const StationarityReport& r) {
        return json_to_py(stationarity_report_to_json(r));
      });

  m.def("stationarity_report", &stationarity_report, py::arg("basis"),
        py::arg("ens"), py::arg("threshold") = 0.8);

  // ---- psd estimation -----------------------------------------------------

  py::class_<Filterbank>(m, "Filterbank",
                         "Bank of shifted Gaussian bands "
                         "g_m(l) = exp(-(l - m*tau)^2/sigma2), m = 1..M.")
      .def_readonly("M", &Filterbank::M)
      .def_readonly("tau", &Filterbank::tau)
      .def_readonly("sigma2", &Filterbank::sigma2)
      .def_readonly("lambda_max", &Filterbank::lambda_max)
      .def("band", &Filterbank::band, py::arg("m"), "1-based band index.");

  m.def("design_filterbank", &design_filterbank, py::arg("lambda_max"),
        py::arg("M"), "tau = sigma2 = (M+1)*lambda_max/M^2.");
  m.def("exact_filter_norms", &exact_filter_norms, py::arg("basis"),
        py::arg("fb"), "||g_m(L)||_F^2 per band from the eigenvalues.");
  m.def("estimate_filter_norms", &estimate_filter_norms, py::arg("lap"),
        py::arg("fb"), py::arg("k2"), py::arg("seed"), py::arg("order") = 30,
        "Stochastic ||g_m(L)||_F^2 per band from k2 normal probes.");

  py::class_<PsdEstimate>(m, "PsdEstimate")
      .def_readonly("lambda_max", &PsdEstimate::lambda_max)
      .def_readonly("points", &PsdEstimate::points)
      .def_readonly("M", &PsdEstimate::M)
      .def_readonly("order", &PsdEstimate::order)
      .def_readonly("k1", &PsdEstimate::k1)
      .def_readonly("k2", &PsdEstimate::k2)
      .def_readonly("seed", &PsdEstimate::seed)
      .def("to_json", [](const PsdEstimate& e) {
        return json_to_py(psd_estimate_to_json(e));
      })
      .def_static("from_json", [](const py::object& obj) {
        return psd_estimate_from_json(json_from_py(obj));
      }, py::arg("obj"));

  m.def("estimate_psd", &estimate_psd, py::arg("lap"), py::arg("ens"),
        py::arg("fb"), py::arg("order") = 30, py::arg("k2") = 4,
        py::arg("seed") = 0,
        "Average of ||g_m(L)x_k||^2 over the ensemble, normalized per band "
        "by a stochastic filter norm.");
  m.def("estimate_psd_with_norms", &estimate_psd_with_norms, py::arg("lap"),
        py::arg("ens"), py::arg("fb"), py::arg("band_norms"),
        py::arg("order") = 30, py::arg("seed") = 0);
  m.def("bias_oracle", &bias_oracle, py::arg("basis"), py::arg("fb"),
        py::arg("true_psd"),
        "Exact per-band expectation of the estimator for a known PSD.");
  m.def("psd_to_kernel", &psd_to_kernel, py::arg("est"),
        "Linear interpolation through the band points, clamped outside.");

  // ---- operators and recovery ----------------------------------------------

  py::class_<LinearOperator>(m, "LinearOperator",
                             "Measurement operator: identity, row-selection "
                             "mask, graph filter h(L), or mask after filter.")
      .def_static("identity", &LinearOperator::identity, py::arg("n"))
      .def_static("mask", &LinearOperator::mask, py::arg("n"),
                  py::arg("indices"))
      .def_static("graph_filter",
                  py::overload_cast<std::shared_ptr<const SpectralBasis>,
                                    Kernel>(&LinearOperator::graph_filter),
                  py::arg("basis"), py::arg("h"))
      .def_static("graph_filter",
                  py::overload_cast<std::shared_ptr<const Laplacian>, Kernel,
                                    int>(&LinearOperator::graph_filter),
                  py::arg("lap"), py::arg("h"), py::arg("order") = 30)
      .def_static("masked_filter", &LinearOperator::masked_filter,
                  py::arg("filter_op"), py::arg("indices"))
      .def("apply", &LinearOperator::apply, py::arg("x"))
      .def("adjoint", &LinearOperator::adjoint, py::arg("y"))
      .def_property_readonly("rows", &LinearOperator::rows)
      .def_property_readonly("cols", &LinearOperator::cols)
      .def_property_readonly("norm_bound", &LinearOperator::norm_bound)
      .def_property_readonly(
          "kind", [](const LinearOperator& o) { return op_kind_name(o.kind()); })
      .def_property_readonly("is_filter", &LinearOperator::is_filter)
      .def_property_readonly("filter_kernel", &LinearOperator::filter_kernel)
      .def_property_readonly("mask_indices",
                             [](const LinearOperator& o) {
                               return o.mask_indices();
                             })
      .def("to_dense", &LinearOperator::to_dense, "Desk scale only.");

  py::class_<WienerProblem>(m, "WienerProblem",
                            "y = H x + noise with signal PSD s2, noise PSD, "
                            "and prior mean (empty means zero).")
      .def(py::init([](LinearOperator H, Kernel s2, Eigen::VectorXd y,
                       Kernel noise, Eigen::VectorXd mean) {
             return WienerProblem{std::move(H), std::move(s2),
                                  std::move(noise), std::move(mean),
                                  std::move(y)};
           }),
           py::arg("H"), py::arg("s2"), py::arg("y"),
           py::arg("noise") = Kernel::constant(0.0),
           py::arg("mean") = Eigen::VectorXd())
      .def_readwrite("H", &WienerProblem::H)
      .def_readwrite("s2", &WienerProblem::s2)
      .def_readwrite("noise", &WienerProblem::noise)
      .def_readwrite("mean", &WienerProblem::mean)
      .def_readwrite("y", &WienerProblem::y);

  m.def("wiener_kernel", &wiener_kernel, py::arg("h"), py::arg("s2"),
        py::arg("n"), "g = h s2 / (h^2 s2 + n), with 0/0 = 0.");
  m.def("wiener_filter",
        py::overload_cast<const SpectralBasis&, const WienerProblem&>(
            &wiener_filter),
        py::arg("basis"), py::arg("p"),
        "x = m + g(L)(y - h(L)m) for filter-type H.");
  m.def("wiener_filter",
        py::overload_cast<const Laplacian&, const WienerProblem&, int>(
            &wiener_filter),
        py::arg("lap"), py::arg("p"), py::arg("order") = 30);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init([](double beta, double eps, int max_iter, double delta,
                       int order) {
             SolveOptions o;
             o.beta = beta;
             o.eps = eps;
             o.max_iter = max_iter;
             o.delta = delta;
             o.order = order;
             return o;
           }),
           py::arg("beta") = 0.0, py::arg("eps") = 1e-8,
           py::arg("max_iter") = 2000, py::arg("delta") = 1e-12,
           py::arg("order") = 30)
      .def_readwrite("beta", &SolveOptions::beta)
      .def_readwrite("eps", &SolveOptions::eps)
      .def_readwrite("max_iter", &SolveOptions::max_iter)
      .def_readwrite("delta", &SolveOptions::delta)
      .def_readwrite("order", &SolveOptions::order);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x", &SolveResult::x)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("converged", &SolveResult::converged)
      .def("to_json", [](const SolveResult& r) {
        return json_to_py(solve_trace_to_json(r));
      });

  m.def("wiener_optimize",
        py::overload_cast<const SpectralBasis&, const WienerProblem&,
                          const SolveOptions&>(&wiener_optimize),
        py::arg("basis"), py::arg("p"), py::arg("opts") = SolveOptions{},
        "Accelerated proximal-gradient minimization of "
        "||Hx - y||^2 + ||w(L)(x - m)||^2 with w^2 = n/s2.");
  m.def("wiener_optimize",
        py::overload_cast<const Laplacian&, const WienerProblem&,
                          const SolveOptions&>(&wiener_optimize),
        py::arg("lap"), py::arg("p"), py::arg("opts") = SolveOptions{});
  m.def("lmmse_from_covariance", &lmmse_from_covariance, py::arg("sigma_x"),
        py::arg("H"), py::arg("sigma2"), py::arg("mean"), py::arg("y"),
        "x = m + Sxy Sy^{-1} (y - Hm) for linear measurements with i.i.d. "
        "noise.");
  m.def("lmmse_closed_form", &lmmse_closed_form, py::arg("basis"),
        py::arg("p"), "Same with Sigma built from the problem PSD kernel.");
  m.def("wiener_interpolate_noiseless", &wiener_interpolate_noiseless,
        py::arg("basis"), py::arg("H"), py::arg("y"), py::arg("s2"),
        py::arg("mean"), "Hx = y exactly when the reduced system is "
        "invertible.");

  py::class_<ConstrainedOptions>(m, "ConstrainedOptions")
      .def(py::init([](double bisect_tol, int max_bisect, double cg_tol,
                       int cg_max_iter, int pd_max_iter, double pd_tol) {
             ConstrainedOptions o;
             o.bisect_tol = bisect_tol;
             o.max_bisect = max_bisect;
             o.cg_tol = cg_tol;
             o.cg_max_iter = cg_max_iter;
             o.pd_max_iter = pd_max_iter;
             o.pd_tol = pd_tol;
             return o;
           }),
           py::arg("bisect_tol") = 1e-3, py::arg("max_bisect") = 200,
           py::arg("cg_tol") = 1e-12, py::arg("cg_max_iter") = 20000,
           py::arg("pd_max_iter") = 40000, py::arg("pd_tol") = 1e-11)
      .def_readwrite("bisect_tol", &ConstrainedOptions::bisect_tol)
      .def_readwrite("max_bisect", &ConstrainedOptions::max_bisect)
      .def_readwrite("cg_tol", &ConstrainedOptions::cg_tol)
      .def_readwrite("cg_max_iter", &ConstrainedOptions::cg_max_iter)
      .def_readwrite("pd_max_iter", &ConstrainedOptions::pd_max_iter)
      .def_readwrite("pd_tol", &ConstrainedOptions::pd_tol);

  py::class_<ConstrainedResult>(m, "ConstrainedResult")
      .def_readonly("x", &ConstrainedResult::x)
      .def_readonly("residual", &ConstrainedResult::residual)
      .def_readonly("objective", &ConstrainedResult::objective)
      .def_readonly("converged", &ConstrainedResult::converged);

  m.def("tikhonov_solve", &tikhonov_solve, py::arg("lap"), py::arg("H"),
        py::arg("y"), py::arg("eps"),
        py::arg("opts") = ConstrainedOptions{},
        py::arg("basis") = static_cast<const SpectralBasis*>(nullptr),
        "min x'Lx s.t. ||Hx - y|| <= eps; the iterate is always on the "
        "feasible side.");
  m.def("tv_solve", &tv_solve, py::arg("lap"), py::arg("grad"), py::arg("H"),
        py::arg("y"), py::arg("eps"), py::arg("opts") = ConstrainedOptions{},
        py::arg("basis") = static_cast<const SpectralBasis*>(nullptr),
        "min ||grad x||_1 s.t. ||Hx - y|| <= eps.");
  m.def("epsilon_rule", &epsilon_rule, py::arg("sigma"), py::arg("m"),
        "eps = sigma * sqrt(m).");

  // ---- synthesis and experiments --------------------------------------------

  m.def("generate_stationary",
        py::overload_cast<const SpectralBasis&, const Kernel&, int, double,
                          std::uint64_t>(&generate_stationary),
        py::arg("basis"), py::arg("g"), py::arg("K"), py::arg("mean"),
        py::arg("seed"),
        "x_k = mean*1 + g(L) w_k with i.i.d. standard-normal w_k; "
        "wide-sense stationary with PSD g^2.");
  m.def("generate_stationary",
        py::overload_cast<const Laplacian&, const Kernel&, int, double,
                          std::uint64_t, int>(&generate_stationary),
        py::arg("lap"), py::arg("g"), py::arg("K"), py::arg("mean"),
        py::arg("seed"), py::arg("order") = 30);

  py::class_<DegradationModel>(m, "DegradationModel")
      .def(py::init([](LinearOperator H, double sigma, std::uint64_t seed) {
             return DegradationModel{std::move(H), sigma, seed};
           }),
           py::arg("H"), py::arg("sigma") = 0.0, py::arg("seed") = 0)
      .def_readwrite("H", &DegradationModel::H)
      .def_readwrite("sigma", &DegradationModel::sigma)
      .def_readwrite("seed", &DegradationModel::seed);

  m.def("degrade", &degrade, py::arg("x"), py::arg("model"),
        "y = H x + sigma * w.");
  m.def("snr_db", &snr_db, py::arg("x_true"), py::arg("x_est"),
        "-10 log10(var(x - est)/var(x)), capped at +300 dB.");
  m.def("lowpass_profile", &lowpass_profile, py::arg("lambda_max"),
        "Unit plateau up to lambda_max/4, raised-cosine rolloff to 0 at "
        "lambda_max/2.");

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("methods", &ExperimentReport::methods)
      .def_readonly("noise_levels", &ExperimentReport::noise_levels)
      .def_readonly("mean_snr_db", &ExperimentReport::mean_snr_db)
      .def_readonly("stderr_db", &ExperimentReport::stderr_db)
      .def_readonly("trials", &ExperimentReport::trials)
      .def_readonly("seed", &ExperimentReport::seed)
      .def_readonly("runtime_seconds", &ExperimentReport::runtime_seconds)
      .def_readonly("notes", &ExperimentReport::notes)
      .def("to_csv", [](const ExperimentReport& r) { return report_to_csv(r); })
      .def("to_json", [](const ExperimentReport& r) {
        return json_to_py(report_to_json(r));
      });

  py::class_<DeconvParams>(m, "DeconvParams")
      .def(py::init([](int n_nodes, int knn, std::vector<double> noise_levels,
                       int trials, std::uint64_t seed) {
             DeconvParams p;
             p.n_nodes = n_nodes;
             p.knn = knn;
             p.noise_levels = std::move(noise_levels);
             p.trials = trials;
             p.seed = seed;
             return p;
           }),
           py::arg("n_nodes") = 300, py::arg("knn") = 10,
           py::arg("noise_levels") = std::vector<double>{0.0, 0.05, 0.1, 0.2},
           py::arg("trials") = 20, py::arg("seed") = 0)
      .def_readwrite("n_nodes", &DeconvParams::n_nodes)
      .def_readwrite("knn", &DeconvParams::knn)
      .def_readwrite("noise_levels", &DeconvParams::noise_levels)
      .def_readwrite("trials", &DeconvParams::trials)
      .def_readwrite("seed", &DeconvParams::seed);

  py::class_<InpaintParams>(m, "InpaintParams")
      .def(py::init([](int n_nodes, int knn, double mask_fraction,
                       std::vector<double> noise_levels, int trials, int k1,
                       int bands, int order, int k2, std::uint64_t seed) {
             InpaintParams p;
             p.n_nodes = n_nodes;
             p.knn = knn;
             p.mask_fraction = mask_fraction;
             p.noise_levels = std::move(noise_levels);
             p.trials = trials;
             p.k1 = k1;
             p.bands = bands;
             p.order = order;
             p.k2 = k2;
             p.seed = seed;
             return p;
           }),
           py::arg("n_nodes") = 400, py::arg("knn") = 10,
           py::arg("mask_fraction") = 0.5,
           py::arg("noise_levels") = std::vector<double>{0.02, 0.05, 0.1, 0.2},
           py::arg("trials") = 20, py::arg("k1") = 50, py::arg("bands") = 30,
           py::arg("order") = 30, py::arg("k2") = 4, py::arg("seed") = 0)
      .def_readwrite("n_nodes", &InpaintParams::n_nodes)
      .def_readwrite("knn", &InpaintParams::knn)
      .def_readwrite("mask_fraction", &InpaintParams::mask_fraction)
      .def_readwrite("noise_levels", &InpaintParams::noise_levels)
      .def_readwrite("trials", &InpaintParams::trials)
      .def_readwrite("k1", &InpaintParams::k1)
      .def_readwrite("bands", &InpaintParams::bands)
      .def_readwrite("order", &InpaintParams::order)
      .def_readwrite("k2", &InpaintParams::k2)
      .def_readwrite("seed", &InpaintParams::seed);

  m.def("experiment_deconvolution", &experiment_deconvolution,
        py::arg("params") = DeconvParams{},
        "Band-limited stationary signals blurred by a heat kernel plus "
        "noise, recovered with the Wiener filter and the Tikhonov/TV "
        "baselines.");
  m.def("experiment_inpainting", &experiment_inpainting,
        py::arg("params") = InpaintParams{},
        "Random-mask recovery comparing Wiener optimization with true and "
        "estimated PSDs against Tikhonov, TV, and the empirical-covariance "
        "closed form.");

  // ---- randomness, threading, io -------------------------------------------

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("stream"),
        py::arg("index") = 0,
        "Deterministic decorrelated sub-seed from a master seed and a "
        "stream label.");
  m.def("gaussian_vector", &gaussian_vector, py::arg("n"), py::arg("seed"));
  m.def("gaussian_matrix", &gaussian_matrix, py::arg("rows"), py::arg("cols"),
        py::arg("seed"));
  m.def("uniform_points", &uniform_points, py::arg("n"), py::arg("dim"),
        py::arg("seed"));
  m.def("set_max_threads", &set_max_threads, py::arg("n"),
        "Caps worker threads used by parallel kernels; 0 restores the "
        "hardware default.");
  m.def("max_threads", &max_threads);

  m.def("write_edge_csv", &write_edge_csv, py::arg("path"), py::arg("graph"),
        "Edge-list CSV with header i,j,w, one row per unordered edge, "
        "0-based.");
  m.def("read_edge_csv", &read_edge_csv, py::arg("path"));
  m.def("write_matrix_csv", &write_matrix_csv, py::arg("path"), py::arg("m"),
        "Dense numeric CSV, no header; doubles round-trip exactly.");
  m.def("read_matrix_csv", &read_matrix_csv, py::arg("path"));
  m.def("write_vector_csv", &write_vector_csv, py::arg("path"), py::arg("v"));
  m.def("read_vector_csv", &read_vector_csv, py::arg("path"));
}
