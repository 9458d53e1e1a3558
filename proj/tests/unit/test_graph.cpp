#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gsig/graph.hpp"
#include "gsig/rng.hpp"

using namespace gsig;

namespace {

Eigen::MatrixXd dense_laplacian(const Graph& g) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n_vertices(), g.n_vertices());
  for (const Edge& e : g.edges()) {
    L(e.i, e.i) += e.w;
    L(e.j, e.j) += e.w;
    L(e.i, e.j) -= e.w;
    L(e.j, e.i) -= e.w;
  }
  return L;
}

}  // namespace

TEST_CASE("edge lists are canonicalized to sorted i<j pairs") {
  Graph g = graph_from_edge_list(4, {{3, 1, 2.0}, {0, 2, 1.0}, {1, 0, 0.5}});
  REQUIRE(g.edges().size() == 3);
  CHECK(g.edges()[0].i == 0);
  CHECK(g.edges()[0].j == 1);
  CHECK(g.edges()[0].w == 0.5);
  CHECK(g.edges()[1].i == 0);
  CHECK(g.edges()[1].j == 2);
  CHECK(g.edges()[2].i == 1);
  CHECK(g.edges()[2].j == 3);
}

TEST_CASE("invalid edges are rejected") {
  CHECK_THROWS_AS(graph_from_edge_list(3, {{0, 3, 1.0}}), Error);
  CHECK_THROWS_AS(graph_from_edge_list(3, {{1, 1, 1.0}}), Error);
  CHECK_THROWS_AS(graph_from_edge_list(3, {{0, 1, 0.0}}), Error);
  CHECK_THROWS_AS(graph_from_edge_list(3, {{0, 1, -2.0}}), Error);
  CHECK_THROWS_AS(graph_from_edge_list(3, {{0, 1, 1.0}, {1, 0, 1.0}}), Error);
  try {
    graph_from_edge_list(3, {{0, 1, 1.0}, {1, 0, 2.0}});
    FAIL("expected duplicate edge error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::duplicate_edge);
  }
}

TEST_CASE("degrees and neighbors reflect incident weights") {
  Graph g = graph_from_edge_list(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 4.0}});
  CHECK(g.degrees()(0) == 5.0);
  CHECK(g.degrees()(1) == 3.0);
  CHECK(g.degrees()(2) == 6.0);
  auto nb = g.neighbors(1);
  REQUIRE(nb.size() == 2);
  CHECK(nb[0].j == 0);
  CHECK(nb[0].w == 1.0);
  CHECK(nb[1].j == 2);
  CHECK(nb[1].w == 2.0);
}

TEST_CASE("weight matrix is symmetric with zero diagonal") {
  Graph g = graph_from_edge_list(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 3.0}});
  Eigen::MatrixXd W = g.weight_matrix();
  CHECK((W - W.transpose()).norm() == 0.0);
  CHECK(W.diagonal().norm() == 0.0);
  CHECK(W(1, 2) == 2.0);
}

TEST_CASE("knn graph connects nearest points with Gaussian weights") {
  Eigen::MatrixXd f(3, 1);
  f << 0.0, 1.0, 2.1;
  Graph g = knn_graph(f, 1, 1.0);
  REQUIRE(g.edges().size() == 2);  // union symmetrization keeps 2's pick of 1
  CHECK(g.edges()[0].i == 0);
  CHECK(g.edges()[0].j == 1);
  CHECK(g.edges()[0].w == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(g.edges()[1].i == 1);
  CHECK(g.edges()[1].j == 2);
  CHECK(g.edges()[1].w ==
        doctest::Approx(std::exp(-1.1 * 1.1)).epsilon(1e-12));
}

TEST_CASE("knn auto scale uses the mean retained squared distance") {
  Eigen::MatrixXd f(3, 1);
  f << 0.0, 1.0, 2.0;  // all retained d^2 equal 1
  Graph g = knn_graph(f, 1);
  for (const Edge& e : g.edges())
    CHECK(e.w == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("knn rejects degenerate inputs") {
  Eigen::MatrixXd one(1, 2);
  one << 0.0, 0.0;
  CHECK_THROWS_AS(knn_graph(one, 1), Error);
  Eigen::MatrixXd f(3, 1);
  f << 0.0, 1.0, 2.0;
  CHECK_THROWS_AS(knn_graph(f, 3), Error);
  CHECK_THROWS_AS(knn_graph(f, 0), Error);
  CHECK_THROWS_AS(knn_graph(f, 1, -1.0), Error);
}

TEST_CASE("ring graph is 2-regular with n edges") {
  Graph g = ring_graph(6);
  CHECK(g.edges().size() == 6);
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(g.degrees()(i) == 2.0);
  CHECK_THROWS_AS(ring_graph(2), Error);
  CHECK(ring_graph(3).edges().size() == 3);
}

TEST_CASE("grid graph has lattice shape") {
  Graph g = grid_graph(3, 4);
  CHECK(g.n_vertices() == 12);
  CHECK(g.edges().size() == 3 * 3 + 2 * 4);
  CHECK(g.degrees()(0) == 2.0);   // corner
  CHECK(g.degrees()(1) == 3.0);   // border
  CHECK(g.degrees()(5) == 4.0);   // interior
}

TEST_CASE("random geometric graph is reproducible per seed") {
  Graph a = random_geometric_graph(40, 4, 7);
  Graph b = random_geometric_graph(40, 4, 7);
  Graph c = random_geometric_graph(40, 4, 8);
  REQUIRE(a.edges().size() == b.edges().size());
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    CHECK(a.edges()[i].i == b.edges()[i].i);
    CHECK(a.edges()[i].j == b.edges()[i].j);
    CHECK(a.edges()[i].w == b.edges()[i].w);
  }
  bool differs = c.edges().size() != a.edges().size();
  for (std::size_t i = 0; !differs && i < a.edges().size(); ++i)
    differs = a.edges()[i].i != c.edges()[i].i || a.edges()[i].j != c.edges()[i].j;
  CHECK(differs);
}

TEST_CASE("laplacian equals degree minus weight matrix") {
  Graph g = random_geometric_graph(30, 3, 1);
  Laplacian lap(g);
  Eigen::MatrixXd L = lap.matrix();
  CHECK((L - dense_laplacian(g)).norm() < 1e-14);
  CHECK(L.rowwise().sum().norm() < 1e-12);
}

TEST_CASE("lambda max bound brackets the true top eigenvalue") {
  Graph g = random_geometric_graph(50, 5, 3);
  Laplacian lap(g);
  Eigen::MatrixXd L = lap.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  double top = es.eigenvalues().maxCoeff();
  CHECK(lap.lambda_max_bound() >= top);
  CHECK(lap.lambda_max_bound() <= 1.011 * top);
}

TEST_CASE("ring of four has lambda max bound just above 4") {
  Laplacian lap(ring_graph(4));
  CHECK(lap.lambda_max_bound() >= 4.0);
  CHECK(lap.lambda_max_bound() <= 4.4);
}

TEST_CASE("gradient energy equals the Laplacian quadratic form") {
  Graph g = random_geometric_graph(40, 4, 11);
  Laplacian lap(g);
  auto grad = gradient_operator(g);
  CHECK(grad.rows() == static_cast<Eigen::Index>(g.edges().size()));
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd x = gaussian_vector(g.n_vertices(), 100 + t);
    double a = (grad * x).squaredNorm();
    double b = x.dot(lap.matrix() * x);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("gradient rows follow the canonical edge order") {
  Graph g = graph_from_edge_list(3, {{0, 1, 4.0}, {1, 2, 9.0}});
  Eigen::MatrixXd grad = gradient_operator(g);
  CHECK(grad(0, 0) == 2.0);
  CHECK(grad(0, 1) == -2.0);
  CHECK(grad(1, 1) == 3.0);
  CHECK(grad(1, 2) == -3.0);
}
