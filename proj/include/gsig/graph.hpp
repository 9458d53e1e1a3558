#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsig/errors.hpp"

namespace gsig {

struct Edge {
  Eigen::Index i;
  Eigen::Index j;
  double w;
};

/// Undirected weighted graph. Edges are stored once per unordered pair with
/// i < j, sorted by (i, j); weights strictly positive; no self-loops.
class Graph {
public:
  Graph(Eigen::Index n, std::vector<Edge> edges);

  Eigen::Index n_vertices() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  struct Neighbor {
    Eigen::Index j;
    double w;
  };
  std::span<const Neighbor> neighbors(Eigen::Index i) const;
  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
  Eigen::SparseMatrix<double> weight_matrix() const;

private:
  Eigen::Index n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<Neighbor> adj_;
  Eigen::VectorXd degrees_;
};

/// Validates and canonicalizes an edge list; (i,j) and (j,i) are the same
/// unordered pair and may appear at most once.
Graph graph_from_edge_list(Eigen::Index n, std::vector<Edge> edges);

/// k-nearest-neighbor graph over feature rows, symmetrized by union, with
/// weights exp(-d^2/sigma2). Empty sigma2 picks the mean of the retained
/// squared distances (or 1 when all of them are zero).
Graph knn_graph(const Eigen::MatrixXd& features, int k,
                std::optional<double> sigma2 = std::nullopt);

Graph ring_graph(Eigen::Index n);
Graph grid_graph(Eigen::Index rows, Eigen::Index cols);

/// k-NN graph (auto sigma2) over n uniform points in the unit square.
Graph random_geometric_graph(Eigen::Index n, int k, std::uint64_t seed);

/// Combinatorial Laplacian L = D - W with a cached upper bound on its
/// largest eigenvalue (power iteration result inflated by 1%).
class Laplacian {
public:
  explicit Laplacian(const Graph& g);

  const Eigen::SparseMatrix<double>& matrix() const noexcept { return L_; }
  double lambda_max_bound() const noexcept { return lambda_max_bound_; }
  Eigen::Index n() const noexcept { return L_.rows(); }

private:
  Eigen::SparseMatrix<double> L_;
  double lambda_max_bound_;
};

inline Laplacian laplacian(const Graph& g) { return Laplacian(g); }

/// |E| x N edge-incidence matrix with rows ordered like Graph::edges();
/// row for edge (i,j,w) holds +sqrt(w) at i and -sqrt(w) at j, so that
/// ||grad * x||^2 == x' L x exactly.
Eigen::SparseMatrix<double> gradient_operator(const Graph& g);

}  // namespace gsig
