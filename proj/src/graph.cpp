#include "gsig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsig/rng.hpp"

namespace gsig {

namespace {
std::string edge_str(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}
}  // namespace

Graph::Graph(Eigen::Index n, std::vector<Edge> edges) : n_(n) {
  require(n >= 1, errc::bad_input, "graph: vertex count must be positive");
  for (auto& e : edges) {
    require(e.i >= 0 && e.i < n && e.j >= 0 && e.j < n, errc::index_out_of_range,
            "graph: edge " + edge_str(e.i, e.j) + " out of range for n=" +
                std::to_string(n));
    require(e.i != e.j, errc::self_loop,
            "graph: self-loop at vertex " + std::to_string(e.i));
    require(std::isfinite(e.w) && e.w > 0, errc::non_positive_weight,
            "graph: edge " + edge_str(e.i, e.j) + " has non-positive weight");
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < edges.size(); ++k)
    require(edges[k].i != edges[k - 1].i || edges[k].j != edges[k - 1].j,
            errc::duplicate_edge,
            "graph: duplicate edge " + edge_str(edges[k].i, edges[k].j));
  edges_ = std::move(edges);

  std::vector<std::size_t> deg_count(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++deg_count[static_cast<std::size_t>(e.i)];
    ++deg_count[static_cast<std::size_t>(e.j)];
  }
  adj_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (Eigen::Index v = 0; v < n_; ++v)
    adj_offsets_[static_cast<std::size_t>(v) + 1] =
        adj_offsets_[static_cast<std::size_t>(v)] + deg_count[static_cast<std::size_t>(v)];
  adj_.resize(adj_offsets_.back());
  std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[cursor[static_cast<std::size_t>(e.i)]++] = {e.j, e.w};
    adj_[cursor[static_cast<std::size_t>(e.j)]++] = {e.i, e.w};
  }
  for (Eigen::Index v = 0; v < n_; ++v) {
    auto begin = adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[static_cast<std::size_t>(v)]);
    auto end = adj_.begin() + static_cast<std::ptrdiff_t>(adj_offsets_[static_cast<std::size_t>(v) + 1]);
    std::sort(begin, end, [](const Neighbor& a, const Neighbor& b) { return a.j < b.j; });
  }
  degrees_ = Eigen::VectorXd::Zero(n_);
  for (Eigen::Index v = 0; v < n_; ++v)
    for (const auto& nb : neighbors(v)) degrees_[v] += nb.w;
}

std::span<const Graph::Neighbor> Graph::neighbors(Eigen::Index i) const {
  require(i >= 0 && i < n_, errc::index_out_of_range,
          "graph: vertex " + std::to_string(i) + " out of range");
  return {adj_.data() + adj_offsets_[static_cast<std::size_t>(i)],
          adj_offsets_[static_cast<std::size_t>(i) + 1] -
              adj_offsets_[static_cast<std::size_t>(i)]};
}

Eigen::SparseMatrix<double> Graph::weight_matrix() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(edges_.size() * 2);
  for (const auto& e : edges_) {
    trips.emplace_back(e.i, e.j, e.w);
    trips.emplace_back(e.j, e.i, e.w);
  }
  Eigen::SparseMatrix<double> W(n_, n_);
  W.setFromTriplets(trips.begin(), trips.end());
  return W;
}

Graph graph_from_edge_list(Eigen::Index n, std::vector<Edge> edges) {
  return Graph(n, std::move(edges));
}

Graph knn_graph(const Eigen::MatrixXd& features, int k,
                std::optional<double> sigma2) {
  const Eigen::Index n = features.rows();
  require(n >= 2, errc::degenerate_features,
          "knn_graph: need at least two feature rows");
  require(k >= 1 && k < n, errc::bad_input,
          "knn_graph: k must satisfy 1 <= k < n");
  if (sigma2)
    require(*sigma2 > 0 && std::isfinite(*sigma2), errc::bad_input,
            "knn_graph: sigma2 must be positive");

  struct Pick {
    Eigen::Index i, j;  // i < j
    double d2;
  };
  std::vector<Pick> picks;
  picks.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  std::vector<std::pair<double, Eigen::Index>> cand(static_cast<std::size_t>(n) - 1);
  double d2_sum = 0.0;
  std::size_t d2_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[c++] = {(features.row(i) - features.row(j)).squaredNorm(), j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int t = 0; t < k; ++t) {
      auto [d2, j] = cand[static_cast<std::size_t>(t)];
      d2_sum += d2;
      ++d2_count;
      picks.push_back({std::min(i, j), std::max(i, j), d2});
    }
  }

  double s2;
  if (sigma2) {
    s2 = *sigma2;
  } else {
    s2 = d2_sum / static_cast<double>(d2_count);
    if (s2 <= 0) s2 = 1.0;  // all retained distances zero: weights become 1
  }

  std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<Edge> edges;
  edges.reserve(picks.size());
  for (std::size_t t = 0; t < picks.size(); ++t) {
    if (t > 0 && picks[t].i == picks[t - 1].i && picks[t].j == picks[t - 1].j)
      continue;
    edges.push_back({picks[t].i, picks[t].j, std::exp(-picks[t].d2 / s2)});
  }
  return Graph(n, std::move(edges));
}

Graph ring_graph(Eigen::Index n) {
  require(n >= 3, errc::bad_input, "ring_graph: need n >= 3");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  edges.push_back({0, n - 1, 1.0});
  return Graph(n, std::move(edges));
}

Graph grid_graph(Eigen::Index rows, Eigen::Index cols) {
  require(rows >= 1 && cols >= 1, errc::bad_input,
          "grid_graph: rows and cols must be positive");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(rows * cols * 2));
  auto id = [cols](Eigen::Index r, Eigen::Index c) { return r * cols + c; };
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  return Graph(rows * cols, std::move(edges));
}

Graph random_geometric_graph(Eigen::Index n, int k, std::uint64_t seed) {
  require(n >= 2, errc::bad_input, "random_geometric_graph: need n >= 2");
  Eigen::MatrixXd pts = uniform_points(n, 2, seed);
  return knn_graph(pts, k, std::nullopt);
}

namespace {
double power_iteration_bound(const Eigen::SparseMatrix<double>& L) {
  const Eigen::Index n = L.rows();
  Eigen::VectorXd v = gaussian_vector(n, 0x9e3779b97f4a7c15ULL);
  double nv = v.norm();
  if (nv == 0) return 0.0;
  v /= nv;
  double value = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = L * v;
    double nw = w.norm();
    if (nw == 0) return 0.0;
    if (std::abs(nw - value) <= 1e-6 * std::max(nw, 1.0)) {
      value = nw;
      break;
    }
    value = nw;
    v = w / nw;
  }
  return value;
}
}  // namespace

Laplacian::Laplacian(const Graph& g) {
  const Eigen::Index n = g.n_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.edges().size() * 2 + static_cast<std::size_t>(n));
  for (const auto& e : g.edges()) {
    trips.emplace_back(e.i, e.j, -e.w);
    trips.emplace_back(e.j, e.i, -e.w);
  }
  const Eigen::VectorXd& d = g.degrees();
  for (Eigen::Index v = 0; v < n; ++v) trips.emplace_back(v, v, d[v]);
  L_.resize(n, n);
  L_.setFromTriplets(trips.begin(), trips.end());
  L_.makeCompressed();
  lambda_max_bound_ = power_iteration_bound(L_) * 1.01;
}

Eigen::SparseMatrix<double> gradient_operator(const Graph& g) {
  const auto& edges = g.edges();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(edges.size() * 2);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double s = std::sqrt(edges[e].w);
    trips.emplace_back(static_cast<Eigen::Index>(e), edges[e].i, s);
    trips.emplace_back(static_cast<Eigen::Index>(e), edges[e].j, -s);
  }
  Eigen::SparseMatrix<double> grad(static_cast<Eigen::Index>(edges.size()),
                                   g.n_vertices());
  grad.setFromTriplets(trips.begin(), trips.end());
  grad.makeCompressed();
  return grad;
}

}  // namespace gsig
