#include "gsig/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace gsig {

Kernel Kernel::heat(double tau) {
  require(std::isfinite(tau), errc::bad_input, "heat kernel: tau must be finite");
  return Kernel(kernel_kind::heat, tau, 0.0, "heat");
}

Kernel Kernel::gaussian(double mu, double sigma2) {
  require(std::isfinite(mu), errc::bad_input, "gaussian kernel: mu must be finite");
  require(sigma2 > 0 && std::isfinite(sigma2), errc::bad_input,
          "gaussian kernel: sigma2 must be positive");
  return Kernel(kernel_kind::gaussian, mu, sigma2, "gaussian");
}

Kernel Kernel::inverse_lambda(double delta) {
  require(delta > 0 && std::isfinite(delta), errc::bad_input,
          "inverse_lambda kernel: delta must be positive");
  return Kernel(kernel_kind::inverse_lambda, delta, 0.0, "inverse_lambda");
}

Kernel Kernel::bandlimit(double lambda_c) {
  require(lambda_c >= 0 && std::isfinite(lambda_c), errc::bad_input,
          "bandlimit kernel: lambda_c must be nonnegative");
  return Kernel(kernel_kind::bandlimit, lambda_c, 0.0, "bandlimit");
}

Kernel Kernel::constant(double value) {
  require(std::isfinite(value), errc::bad_input,
          "constant kernel: value must be finite");
  return Kernel(kernel_kind::constant, value, 0.0, "constant");
}

Kernel Kernel::sampled(std::vector<std::array<double, 2>> knots,
                       bool clamp_nonnegative) {
  require(!knots.empty(), errc::bad_input,
          "sampled kernel: at least one knot required");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require(std::isfinite(knots[i][0]) && std::isfinite(knots[i][1]),
            errc::bad_input, "sampled kernel: knots must be finite");
    if (i > 0)
      require(knots[i][0] > knots[i - 1][0], errc::bad_input,
              "sampled kernel: knot abscissae must be strictly increasing");
  }
  Kernel k(kernel_kind::sampled, 0.0, 0.0, "sampled");
  k.knots_ = std::move(knots);
  k.clamp_nonnegative_ = clamp_nonnegative;
  return k;
}

Kernel Kernel::custom(std::function<double(double)> fn, std::string label) {
  require(static_cast<bool>(fn), errc::bad_input, "custom kernel: empty callable");
  Kernel k(kernel_kind::custom, 0.0, 0.0, std::move(label));
  k.fn_ = std::move(fn);
  return k;
}

const std::vector<std::array<double, 2>>& Kernel::knots() const {
  require(kind_ == kernel_kind::sampled, errc::bad_input,
          "knots() requires a sampled kernel");
  return knots_;
}

double Kernel::operator()(double lambda) const {
  if (lambda < 0) lambda = 0;
  double v = 0.0;
  switch (kind_) {
    case kernel_kind::heat:
      v = std::exp(-p0_ * lambda);
      break;
    case kernel_kind::gaussian: {
      double d = lambda - p0_;
      v = std::exp(-d * d / p1_);
      break;
    }
    case kernel_kind::inverse_lambda:
      v = 1.0 / (lambda + p0_);
      break;
    case kernel_kind::bandlimit:
      v = lambda <= p0_ ? 1.0 : 0.0;
      break;
    case kernel_kind::constant:
      v = p0_;
      break;
    case kernel_kind::sampled: {
      if (lambda <= knots_.front()[0]) {
        v = knots_.front()[1];
      } else if (lambda >= knots_.back()[0]) {
        v = knots_.back()[1];
      } else {
        auto it = std::upper_bound(
            knots_.begin(), knots_.end(), lambda,
            [](double l, const std::array<double, 2>& kn) { return l < kn[0]; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        double t = (lambda - lo[0]) / (hi[0] - lo[0]);
        v = lo[1] + t * (hi[1] - lo[1]);
      }
      break;
    }
    case kernel_kind::custom:
      v = fn_(lambda);
      break;
  }
  if (clamp_nonnegative_ && v < 0) v = 0;
  return v;
}

Eigen::ArrayXd Kernel::operator()(const Eigen::ArrayXd& lambdas) const {
  Eigen::ArrayXd out(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) out[i] = (*this)(lambdas[i]);
  return out;
}

Kernel kernel_product(const Kernel& a, const Kernel& b) {
  return Kernel::custom([a, b](double l) { return a(l) * b(l); },
                        a.label() + "*" + b.label());
}

Kernel kernel_squared(const Kernel& a) {
  return Kernel::custom(
      [a](double l) {
        double v = a(l);
        return v * v;
      },
      a.label() + "^2");
}

}  // namespace gsig
