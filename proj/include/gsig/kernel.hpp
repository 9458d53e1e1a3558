#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gsig/errors.hpp"

namespace gsig {

enum class kernel_kind {
  heat,            ///< exp(-tau*lambda)
  gaussian,        ///< exp(-(lambda-mu)^2/sigma2)
  inverse_lambda,  ///< 1/(lambda+delta)
  bandlimit,       ///< 1 for lambda <= lambda_c, else 0
  constant,        ///< c
  sampled,         ///< piecewise-linear through knots, clamped at the ends
  custom,          ///< arbitrary callable; not serializable
};

/// Scalar spectral kernel g(lambda). Immutable value type.
/// Arguments below 0 clamp to 0; sampled kernels clamp to their end knots,
/// named forms evaluate their formula for any lambda >= 0.
class Kernel {
public:
  Kernel() : Kernel(constant(1.0)) {}

  static Kernel heat(double tau);
  static Kernel gaussian(double mu, double sigma2);
  static Kernel inverse_lambda(double delta);
  static Kernel bandlimit(double lambda_c);
  static Kernel constant(double value);
  /// knots: (lambda, value) with strictly increasing lambda, at least one.
  /// clamp_nonnegative forces evaluations up to 0 (PSD role).
  static Kernel sampled(std::vector<std::array<double, 2>> knots,
                        bool clamp_nonnegative = false);
  static Kernel custom(std::function<double(double)> fn,
                       std::string label = "custom");

  double operator()(double lambda) const;
  Eigen::ArrayXd operator()(const Eigen::ArrayXd& lambdas) const;

  kernel_kind kind() const noexcept { return kind_; }
  bool serializable() const noexcept { return kind_ != kernel_kind::custom; }
  const std::string& label() const noexcept { return label_; }
  bool clamp_nonnegative() const noexcept { return clamp_nonnegative_; }

  /// First/second named parameter (tau, (mu,sigma2), delta, lambda_c, value).
  double param0() const noexcept { return p0_; }
  double param1() const noexcept { return p1_; }
  const std::vector<std::array<double, 2>>& knots() const;

private:
  Kernel(kernel_kind kind, double p0, double p1, std::string label)
      : kind_(kind), p0_(p0), p1_(p1), label_(std::move(label)) {}

  kernel_kind kind_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  bool clamp_nonnegative_ = false;
  std::vector<std::array<double, 2>> knots_;
  std::function<double(double)> fn_;
  std::string label_;
};

/// Pointwise product / square as (non-serializable) kernels.
Kernel kernel_product(const Kernel& a, const Kernel& b);
Kernel kernel_squared(const Kernel& a);

}  // namespace gsig
