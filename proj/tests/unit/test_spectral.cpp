#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "gsig/rng.hpp"
#include "gsig/spectral.hpp"
#include "gsig/threading.hpp"

using namespace gsig;

namespace {

const Kernel kOne = Kernel::constant(1.0);

std::vector<double> ring_eigenvalues(Eigen::Index n) {
  std::vector<double> v;
  for (Eigen::Index k = 0; k < n; ++k)
    v.push_back(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n));
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<std::complex<double>> dft(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  std::vector<std::complex<double>> X(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> s = 0;
    for (Eigen::Index t = 0; t < n; ++t)
      s += x(t) * std::polar(1.0, -2.0 * std::numbers::pi * k * t / n);
    X[k] = s / std::sqrt(static_cast<double>(n));
  }
  return X;
}

}  // namespace

TEST_CASE("ring eigenvalues match the circulant closed form") {
  Laplacian lap(ring_graph(8));
  SpectralBasis basis = eigendecompose(lap);
  auto expect = ring_eigenvalues(8);
  for (Eigen::Index i = 0; i < 8; ++i)
    CHECK(basis.lambdas()(i) == doctest::Approx(expect[i]).epsilon(1e-10));
  CHECK(basis.lambdas()(0) == 0.0);
}

TEST_CASE("eigendecomposition refuses desk-scale overruns") {
  Laplacian lap(ring_graph(64));
  CHECK_THROWS_AS(eigendecompose(lap, 63), Error);
  try {
    eigendecompose(lap, 63);
  } catch (const Error& e) {
    CHECK(e.code() == errc::too_large);
  }
}

TEST_CASE("eigenvectors are orthonormal and diagonalize the Laplacian") {
  Laplacian lap(random_geometric_graph(40, 4, 2));
  SpectralBasis basis = eigendecompose(lap);
  const auto& U = basis.U();
  CHECK((U.transpose() * U - Eigen::MatrixXd::Identity(40, 40)).norm() < 1e-12);
  Eigen::MatrixXd L = lap.matrix();
  Eigen::MatrixXd D = U.transpose() * L * U;
  CHECK((D - basis.lambdas().asDiagonal().toDenseMatrix()).norm() < 1e-10);
}

TEST_CASE("gft is an isometry and igft inverts it") {
  Laplacian lap(random_geometric_graph(50, 5, 4));
  SpectralBasis basis = eigendecompose(lap);
  Eigen::VectorXd x = gaussian_vector(50, 9);
  Eigen::VectorXd xh = gft(basis, x);
  CHECK(xh.norm() == doctest::Approx(x.norm()).epsilon(1e-12));
  CHECK((igft(basis, xh) - x).norm() < 1e-12);
}

TEST_CASE("constant vectors concentrate on the zero eigenvalue") {
  Laplacian lap(ring_graph(9));
  SpectralBasis basis = eigendecompose(lap);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(9, 2.0);
  Eigen::VectorXd xh = gft(basis, x);
  CHECK(xh(0) == doctest::Approx(2.0 * 3.0).epsilon(1e-12));
  CHECK(xh.tail(8).norm() < 1e-12);
}

TEST_CASE("ring spectrum carries the DFT energy per frequency cluster") {
  const Eigen::Index n = 8;
  Laplacian lap(ring_graph(n));
  SpectralBasis basis = eigendecompose(lap);
  Eigen::VectorXd x = gaussian_vector(n, 21);
  Eigen::VectorXd xh = gft(basis, x);
  auto X = dft(x);

  for (const EigCluster& cl : basis.clusters()) {
    double got = xh.segment(cl.begin, cl.end - cl.begin).squaredNorm();
    // frequencies k and n-k share the Laplacian eigenvalue 2-2cos(2 pi k/n)
    double lambda = basis.lambdas()(cl.begin);
    double want = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      double lk = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n);
      if (std::abs(lk - lambda) < 1e-9) want += std::norm(X[k]);
    }
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("identity kernel leaves signals unchanged") {
  Laplacian lap(random_geometric_graph(30, 4, 5));
  SpectralBasis basis = eigendecompose(lap);
  Eigen::MatrixXd X = gaussian_matrix(30, 3, 17);
  CHECK((filter_exact(basis, kOne, X) - X).norm() < 1e-12);
}

TEST_CASE("the linear kernel reproduces the Laplacian action") {
  Laplacian lap(random_geometric_graph(35, 4, 6));
  SpectralBasis basis = eigendecompose(lap);
  Kernel id = Kernel::custom([](double l) { return l; }, "lambda");
  Eigen::MatrixXd X = gaussian_matrix(35, 2, 23);
  Eigen::MatrixXd LX = lap.matrix() * X;
  CHECK((filter_exact(basis, id, X) - LX).norm() < 1e-10 * LX.norm());
}

TEST_CASE("heat diffusion conserves mass") {
  Laplacian lap(random_geometric_graph(40, 4, 7));
  SpectralBasis basis = eigendecompose(lap);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(40);
  delta(11) = 1.0;
  Eigen::VectorXd out = filter_exact(basis, Kernel::heat(0.7), delta);
  CHECK(out.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("composing filters multiplies their kernels") {
  Laplacian lap(random_geometric_graph(30, 4, 8));
  SpectralBasis basis = eigendecompose(lap);
  Kernel g = Kernel::heat(0.4);
  Kernel h = Kernel::gaussian(1.0, 2.0);
  Eigen::MatrixXd X = gaussian_matrix(30, 2, 31);
  Eigen::MatrixXd once = filter_exact(basis, kernel_product(g, h), X);
  Eigen::MatrixXd twice = filter_exact(basis, g, filter_exact(basis, h, X));
  CHECK((once - twice).norm() < 1e-10 * once.norm());
}

TEST_CASE("filtering multiplies spectral coefficients pointwise") {
  Laplacian lap(random_geometric_graph(25, 3, 9));
  SpectralBasis basis = eigendecompose(lap);
  Kernel g = Kernel::heat(0.3);
  Eigen::VectorXd x = gaussian_vector(25, 41);
  Eigen::VectorXd got = gft(basis, filter_exact(basis, g, x));
  Eigen::VectorXd want =
      g(basis.lambdas().array()).matrix().cwiseProduct(gft(basis, x));
  CHECK((got - want).norm() < 1e-10);
}

TEST_CASE("chebyshev reproduces polynomial kernels exactly") {
  Laplacian lap(random_geometric_graph(40, 4, 10));
  SpectralBasis basis = eigendecompose(lap);
  Kernel poly = Kernel::custom(
      [](double l) { return 1.0 + 0.5 * l - 0.25 * l * l + 0.01 * l * l * l; },
      "cubic");
  Eigen::MatrixXd X = gaussian_matrix(40, 3, 51);
  Eigen::MatrixXd exact = filter_exact(basis, poly, X);
  Eigen::MatrixXd cheb = filter_chebyshev(lap, poly, X, 5);
  CHECK((cheb - exact).norm() < 1e-10 * exact.norm());
}

TEST_CASE("chebyshev coefficients of a linear kernel") {
  Kernel id = Kernel::custom([](double l) { return l; }, "lambda");
  auto c = chebyshev_coefficients(id, 2.0, 4);
  REQUIRE(c.size() == 5);
  CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-13));  // applied as c0/2
  CHECK(c[1] == doctest::Approx(1.0).epsilon(1e-13));
  for (std::size_t k = 2; k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-13);
}

TEST_CASE("order-30 chebyshev tracks the heat kernel to 1e-6") {
  Laplacian lap(random_geometric_graph(200, 10, 12));
  SpectralBasis basis = eigendecompose(lap);
  Kernel heat = Kernel::heat(10.0 / lap.lambda_max_bound());
  Eigen::MatrixXd X = gaussian_matrix(200, 4, 61);
  Eigen::MatrixXd exact = filter_exact(basis, heat, X);
  Eigen::MatrixXd cheb = filter_chebyshev(lap, heat, X, 30);
  CHECK((cheb - exact).norm() < 1e-6 * exact.norm());
}

TEST_CASE("order-30 chebyshev stays within 1e-5 for random smooth kernels") {
  Laplacian lap(random_geometric_graph(120, 6, 13));
  SpectralBasis basis = eigendecompose(lap);
  const double lm = lap.lambda_max_bound();
  Eigen::MatrixXd X = gaussian_matrix(120, 3, 71);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd p = gaussian_vector(4, 500 + t);
    Kernel g = Kernel::custom(
        [=](double l) {
          double u = l / lm;
          return p(0) * std::exp(-2.0 * u) + p(1) * u +
                 0.5 * p(2) * std::cos(3.0 * u) + 0.1 * p(3) * u * u;
        },
        "smooth");
    Eigen::MatrixXd exact = filter_exact(basis, g, X);
    Eigen::MatrixXd cheb = filter_chebyshev(lap, g, X, 30);
    CHECK((cheb - exact).norm() < 1e-5 * exact.norm());
  }
}

TEST_CASE("order one with a constant kernel scales the input") {
  Laplacian lap(ring_graph(12));
  Eigen::MatrixXd X = gaussian_matrix(12, 2, 81);
  Eigen::MatrixXd out = filter_chebyshev(lap, Kernel::constant(2.5), X, 1);
  CHECK((out - 2.5 * X).norm() < 1e-12);
}

TEST_CASE("parallel filtering is bit-identical to sequential") {
  Laplacian lap(random_geometric_graph(60, 5, 14));
  Kernel g = Kernel::heat(0.5);
  Eigen::MatrixXd X = gaussian_matrix(60, 200, 91);
  set_max_threads(1);
  Eigen::MatrixXd seq = filter_chebyshev(lap, g, X, 12);
  set_max_threads(0);
  Eigen::MatrixXd par = filter_chebyshev(lap, g, X, 12);
  CHECK((seq - par).norm() == 0.0);
}

TEST_CASE("ring localization shifts with the vertex") {
  Laplacian lap(ring_graph(64));
  SpectralBasis basis = eigendecompose(lap);
  Kernel g = Kernel::heat(1.3);
  Eigen::VectorXd t0 = localize(basis, g, 0);
  Eigen::VectorXd t5 = localize(basis, g, 5);
  for (Eigen::Index v = 0; v < 64; ++v)
    CHECK(t5(v) == doctest::Approx(t0((v - 5 + 64) % 64)).epsilon(1e-10));
}

TEST_CASE("polynomial kernels localize inside the hop ball") {
  Graph g = grid_graph(7, 7);
  Laplacian lap(g);
  SpectralBasis basis = eigendecompose(lap);
  Kernel quad = Kernel::custom(
      [](double l) { return 1.0 - 0.3 * l + 0.05 * l * l; }, "quadratic");
  const Eigen::Index center = 24;  // (3,3)
  Eigen::VectorXd t = localize(basis, quad, center);
  for (Eigen::Index v = 0; v < 49; ++v) {
    Eigen::Index dr = std::abs(v / 7 - 3), dc = std::abs(v % 7 - 3);
    if (dr + dc > 2) CHECK(std::abs(t(v)) < 1e-12);
  }
}

TEST_CASE("identity kernel localizes to the delta") {
  Laplacian lap(ring_graph(10));
  SpectralBasis basis = eigendecompose(lap);
  Eigen::VectorXd t = localize(basis, kOne, 3);
  CHECK(t(3) == doctest::Approx(1.0).epsilon(1e-12));
  t(3) = 0.0;
  CHECK(t.norm() < 1e-12);
}

TEST_CASE("localization is symmetric across vertices") {
  Laplacian lap(random_geometric_graph(30, 4, 15));
  SpectralBasis basis = eigendecompose(lap);
  Kernel g = Kernel::heat(0.8);
  Eigen::VectorXd a = localize(basis, g, 4);
  Eigen::VectorXd b = localize(basis, g, 17);
  CHECK(a(17) == doctest::Approx(b(4)).epsilon(1e-10));
}

TEST_CASE("laplacian-only localization matches the exact path") {
  Laplacian lap(random_geometric_graph(50, 5, 16));
  SpectralBasis basis = eigendecompose(lap);
  Kernel g = Kernel::heat(10.0 / lap.lambda_max_bound());
  Eigen::VectorXd exact = localize(basis, g, 7);
  Eigen::VectorXd fast = localize(lap, g, 7, 30);
  CHECK((fast - exact).norm() < 1e-6 * exact.norm());
  CHECK_THROWS_AS(localize(basis, g, 50), Error);
}

TEST_CASE("kernel forms evaluate their formulas") {
  CHECK(Kernel::heat(0.5)(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(Kernel::gaussian(1.0, 4.0)(3.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(Kernel::inverse_lambda(0.5)(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(Kernel::bandlimit(2.0)(1.9) == 1.0);
  CHECK(Kernel::bandlimit(2.0)(2.1) == 0.0);
  CHECK(Kernel::constant(3.0)(100.0) == 3.0);
}

TEST_CASE("negative arguments clamp to the origin") {
  CHECK(Kernel::heat(1.0)(-2.0) == 1.0);
  Kernel s = Kernel::sampled({{0.0, 1.0}, {1.0, 3.0}});
  CHECK(s(-5.0) == 1.0);
  CHECK(s(0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s(9.0) == 3.0);
}

TEST_CASE("kernel validation rejects malformed parameters") {
  CHECK_THROWS_AS(Kernel::gaussian(0.0, 0.0), Error);
  CHECK_THROWS_AS(Kernel::inverse_lambda(0.0), Error);
  CHECK_THROWS_AS(Kernel::sampled({}), Error);
  CHECK_THROWS_AS(Kernel::sampled({{0.0, 1.0}, {0.0, 2.0}}), Error);
  CHECK_THROWS_AS(Kernel::heat(0.5).knots(), Error);
}
