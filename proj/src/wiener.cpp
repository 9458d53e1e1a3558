#include "gsig/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace gsig {

namespace {

double kernel_grid_max(const Kernel& k, double lambda_cap) {
  double cap = lambda_cap > 0 ? lambda_cap : 1.0;
  double mx = 0.0;
  for (int i = 0; i <= 1000; ++i)
    mx = std::max(mx, std::abs(k(cap * i / 1000.0)));
  return mx;
}

double kernel_grid_abs_min(const Kernel& k, double lambda_cap) {
  double cap = lambda_cap > 0 ? lambda_cap : 1.0;
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i)
    mn = std::min(mn, std::abs(k(cap * i / 1000.0)));
  return mn;
}

void check_mask_indices(const std::vector<Eigen::Index>& idx, Eigen::Index n) {
  require(!idx.empty(), errc::bad_input, "mask: at least one index required");
  for (auto i : idx)
    require(i >= 0 && i < n, errc::index_out_of_range,
            "mask: index " + std::to_string(i) + " out of range");
  std::vector<Eigen::Index> s(idx);
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), errc::bad_input,
          "mask: duplicate index");
}

}  // namespace

LinearOperator LinearOperator::identity(Eigen::Index n) {
  require(n >= 1, errc::bad_input, "identity operator: n must be positive");
  LinearOperator op;
  op.kind_ = op_kind::identity;
  op.rows_ = op.cols_ = n;
  op.norm_bound_ = 1.0;
  op.kernel_ = Kernel::constant(1.0);
  return op;
}

LinearOperator LinearOperator::mask(Eigen::Index n,
                                    std::vector<Eigen::Index> indices) {
  check_mask_indices(indices, n);
  LinearOperator op;
  op.kind_ = op_kind::mask;
  op.rows_ = static_cast<Eigen::Index>(indices.size());
  op.cols_ = n;
  op.norm_bound_ = 1.0;
  op.indices_ = std::move(indices);
  return op;
}

LinearOperator LinearOperator::graph_filter(
    std::shared_ptr<const SpectralBasis> basis, Kernel h) {
  require(static_cast<bool>(basis), errc::bad_input, "graph_filter: null basis");
  LinearOperator op;
  op.kind_ = op_kind::filter;
  op.rows_ = op.cols_ = basis->n();
  op.norm_bound_ = kernel_grid_max(h, basis->lambda_max());
  op.kernel_ = std::move(h);
  op.basis_ = std::move(basis);
  return op;
}

LinearOperator LinearOperator::graph_filter(std::shared_ptr<const Laplacian> lap,
                                            Kernel h, int order) {
  require(static_cast<bool>(lap), errc::bad_input, "graph_filter: null Laplacian");
  require(order >= 1, errc::bad_input, "graph_filter: order must be >= 1");
  LinearOperator op;
  op.kind_ = op_kind::filter;
  op.rows_ = op.cols_ = lap->n();
  op.norm_bound_ = kernel_grid_max(h, lap->lambda_max_bound());
  op.kernel_ = std::move(h);
  op.lap_ = std::move(lap);
  op.order_ = order;
  return op;
}

LinearOperator LinearOperator::masked_filter(LinearOperator filter_op,
                                             std::vector<Eigen::Index> indices) {
  require(filter_op.kind_ == op_kind::filter, errc::bad_input,
          "masked_filter: inner operator must be a graph filter");
  check_mask_indices(indices, filter_op.rows_);
  LinearOperator op = std::move(filter_op);
  op.kind_ = op_kind::masked_filter;
  op.rows_ = static_cast<Eigen::Index>(indices.size());
  op.indices_ = std::move(indices);
  return op;
}

Eigen::VectorXd LinearOperator::filter_apply(const Eigen::VectorXd& x) const {
  if (basis_) return filter_exact(*basis_, *kernel_, x);
  return filter_chebyshev(*lap_, *kernel_, x, order_);
}

Eigen::VectorXd LinearOperator::apply(const Eigen::VectorXd& x) const {
  require(x.size() == cols_, errc::dimension_mismatch,
          "operator: input length " + std::to_string(x.size()) +
              " does not match cols " + std::to_string(cols_));
  switch (kind_) {
    case op_kind::identity:
      return x;
    case op_kind::mask: {
      Eigen::VectorXd y(rows_);
      for (Eigen::Index r = 0; r < rows_; ++r)
        y[r] = x[indices_[static_cast<std::size_t>(r)]];
      return y;
    }
    case op_kind::filter:
      return filter_apply(x);
    case op_kind::masked_filter: {
      Eigen::VectorXd f = filter_apply(x);
      Eigen::VectorXd y(rows_);
      for (Eigen::Index r = 0; r < rows_; ++r)
        y[r] = f[indices_[static_cast<std::size_t>(r)]];
      return y;
    }
  }
  fail(errc::bad_input, "operator: unknown kind");
}

Eigen::VectorXd LinearOperator::adjoint(const Eigen::VectorXd& y) const {
  require(y.size() == rows_, errc::dimension_mismatch,
          "operator: input length " + std::to_string(y.size()) +
              " does not match rows " + std::to_string(rows_));
  switch (kind_) {
    case op_kind::identity:
      return y;
    case op_kind::mask: {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
      for (Eigen::Index r = 0; r < rows_; ++r)
        x[indices_[static_cast<std::size_t>(r)]] = y[r];
      return x;
    }
    case op_kind::filter:
      return filter_apply(y);  // h(L) is self-adjoint
    case op_kind::masked_filter: {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
      for (Eigen::Index r = 0; r < rows_; ++r)
        x[indices_[static_cast<std::size_t>(r)]] = y[r];
      return filter_apply(x);
    }
  }
  fail(errc::bad_input, "operator: unknown kind");
}

const Kernel& LinearOperator::filter_kernel() const {
  require(kernel_.has_value(), errc::operator_not_a_filter,
          "operator is not a graph filter");
  return *kernel_;
}

const std::vector<Eigen::Index>& LinearOperator::mask_indices() const {
  require(kind_ == op_kind::mask || kind_ == op_kind::masked_filter,
          errc::bad_input, "operator has no mask");
  return indices_;
}

Eigen::MatrixXd LinearOperator::to_dense() const {
  switch (kind_) {
    case op_kind::identity:
      return Eigen::MatrixXd::Identity(rows_, cols_);
    case op_kind::mask: {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows_, cols_);
      for (Eigen::Index r = 0; r < rows_; ++r)
        M(r, indices_[static_cast<std::size_t>(r)]) = 1.0;
      return M;
    }
    case op_kind::filter:
    case op_kind::masked_filter: {
      Eigen::MatrixXd F;
      if (basis_) {
        Eigen::VectorXd gl = (*kernel_)(basis_->lambdas().array()).matrix();
        F = basis_->U() * gl.asDiagonal() * basis_->U().transpose();
      } else {
        F = filter_chebyshev(*lap_, *kernel_,
                             Eigen::MatrixXd::Identity(cols_, cols_), order_);
      }
      if (kind_ == op_kind::filter) return F;
      Eigen::MatrixXd M(rows_, cols_);
      for (Eigen::Index r = 0; r < rows_; ++r)
        M.row(r) = F.row(indices_[static_cast<std::size_t>(r)]);
      return M;
    }
  }
  fail(errc::bad_input, "operator: unknown kind");
}

Kernel wiener_kernel(const Kernel& h, const Kernel& s2, const Kernel& n) {
  return Kernel::custom(
      [h, s2, n](double l) {
        double hv = h(l);
        double sv = std::max(s2(l), 0.0);
        double nv = std::max(n(l), 0.0);
        double den = hv * hv * sv + nv;
        return den > 0 ? hv * sv / den : 0.0;
      },
      "wiener");
}

namespace {

Eigen::VectorXd resolve_mean(const WienerProblem& p, Eigen::Index n) {
  if (p.mean.size() == 0) return Eigen::VectorXd::Zero(n);
  require(p.mean.size() == n, errc::dimension_mismatch,
          "problem: mean length does not match the graph");
  return p.mean;
}

template <typename FilterFn>
Eigen::VectorXd wiener_filter_impl(const WienerProblem& p, Eigen::Index n,
                                   FilterFn&& filt) {
  require(p.H.is_filter(), errc::operator_not_a_filter,
          "wiener_filter: measurement operator must be a graph filter");
  require(p.y.size() == n, errc::dimension_mismatch,
          "wiener_filter: y length does not match the graph");
  const Kernel& h = p.H.filter_kernel();
  Kernel g = wiener_kernel(h, p.s2, p.noise);
  Eigen::VectorXd m = resolve_mean(p, n);
  if (m.isZero(0.0)) return filt(g, p.y);
  Eigen::VectorXd r = p.y - filt(h, m);
  return m + filt(g, r);
}

}  // namespace

Eigen::VectorXd wiener_filter(const SpectralBasis& basis,
                              const WienerProblem& p) {
  return wiener_filter_impl(p, basis.n(), [&](const Kernel& k, const Eigen::VectorXd& v) {
    return filter_exact(basis, k, v);
  });
}

Eigen::VectorXd wiener_filter(const Laplacian& lap, const WienerProblem& p,
                              int order) {
  return wiener_filter_impl(p, lap.n(), [&](const Kernel& k, const Eigen::VectorXd& v) {
    return filter_chebyshev(lap, k, v, order);
  });
}

namespace {

struct FilterCtx {
  const SpectralBasis* basis = nullptr;
  const Laplacian* lap = nullptr;
  int order = 30;

  Eigen::VectorXd apply(const Kernel& g, const Eigen::VectorXd& v) const {
    if (basis) return filter_exact(*basis, g, v);
    return filter_chebyshev(*lap, g, v, order);
  }
  double lambda_cap() const {
    return basis ? basis->lambda_max() : lap->lambda_max_bound();
  }
};

SolveResult fista(const FilterCtx& ctx, const WienerProblem& p,
                  const SolveOptions& opts) {
  const Eigen::Index n = p.H.cols();
  require(p.y.size() == p.H.rows(), errc::dimension_mismatch,
          "wiener_optimize: y length does not match the operator");
  require(opts.max_iter >= 1, errc::bad_input,
          "wiener_optimize: need at least one iteration");
  require(opts.eps >= 0 && opts.delta > 0, errc::bad_input,
          "wiener_optimize: invalid tolerances");
  Eigen::VectorXd m = resolve_mean(p, n);

  double nb = p.H.norm_bound();
  double beta = opts.beta > 0 ? opts.beta : (nb > 0 ? 1.0 / (2.0 * nb * nb) : 1.0);

  Kernel prox = Kernel::custom(
      [s2 = p.s2, nk = p.noise, beta](double l) {
        double sv = std::max(s2(l), 0.0);
        double nv = std::max(nk(l), 0.0);
        double den = sv + beta * nv;
        return den > 0 ? sv / den : 0.0;
      },
      "prox");

  // Reported objective: the s2 = 0 directions carry a floored (huge but
  // finite) weight so the trace stays finite at infeasible iterates.
  double s2max = 0.0;
  const double cap = ctx.lambda_cap();
  for (int i = 0; i <= 1000; ++i)
    s2max = std::max(s2max, std::max(p.s2((cap > 0 ? cap : 1.0) * i / 1000.0), 0.0));
  const double s2_floor = s2max > 0 ? (ctx.basis ? 1e-15 : 1e-6) * s2max : 1e-300;

  Kernel penalty_w = Kernel::custom(
      [s2 = p.s2, nk = p.noise, s2_floor](double l) {
        double sv = std::max(s2(l), s2_floor);
        double nv = std::max(nk(l), 0.0);
        return std::sqrt(nv / sv);
      },
      "penalty");

  auto objective = [&](const Eigen::VectorXd& x) {
    double data = (p.H.apply(x) - p.y).squaredNorm();
    double pen;
    if (ctx.basis) {
      Eigen::VectorXd c = ctx.basis->U().transpose() * (x - m);
      const auto& lam = ctx.basis->lambdas();
      pen = 0.0;
      for (Eigen::Index l = 0; l < c.size(); ++l) {
        double sv = std::max(p.s2(lam[l]), s2_floor);
        double nv = std::max(p.noise(lam[l]), 0.0);
        pen += nv / sv * c[l] * c[l];
      }
    } else {
      pen = ctx.apply(penalty_w, x - m).squaredNorm();
    }
    return data + pen;
  };

  Eigen::VectorXd x0 = m + p.H.adjoint(p.y - p.H.apply(m));
  Eigen::VectorXd z = x0, u_prev = x0;
  double t = 1.0;

  SolveResult res;
  res.objective.reserve(static_cast<std::size_t>(std::min(opts.max_iter, 4096)));
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::VectorXd v = z + beta * p.H.adjoint(p.y - p.H.apply(z));
    Eigen::VectorXd u = m + ctx.apply(prox, v - m);
    res.objective.push_back(objective(u));
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    Eigen::VectorXd z_next = u + ((t - 1.0) / t_next) * (u - u_prev);
    double rel = (z_next - z).squaredNorm() / (z.squaredNorm() + opts.delta);
    u_prev = u;
    z = std::move(z_next);
    t = t_next;
    res.iterations = it;
    if (rel < opts.eps) {
      res.converged = true;
      break;
    }
  }
  res.x = u_prev;
  return res;
}

}  // namespace

SolveResult wiener_optimize(const SpectralBasis& basis, const WienerProblem& p,
                            const SolveOptions& opts) {
  FilterCtx ctx;
  ctx.basis = &basis;
  require(p.H.cols() == basis.n(), errc::dimension_mismatch,
          "wiener_optimize: operator does not match the basis");
  return fista(ctx, p, opts);
}

SolveResult wiener_optimize(const Laplacian& lap, const WienerProblem& p,
                            const SolveOptions& opts) {
  FilterCtx ctx;
  ctx.lap = &lap;
  ctx.order = opts.order;
  require(p.H.cols() == lap.n(), errc::dimension_mismatch,
          "wiener_optimize: operator does not match the graph");
  return fista(ctx, p, opts);
}

Eigen::VectorXd lmmse_from_covariance(const Eigen::MatrixXd& sigma_x,
                                      const LinearOperator& H, double sigma2,
                                      const Eigen::VectorXd& mean,
                                      const Eigen::VectorXd& y) {
  const Eigen::Index n = H.cols();
  require(sigma_x.rows() == n && sigma_x.cols() == n, errc::dimension_mismatch,
          "lmmse: covariance must be n x n");
  require(y.size() == H.rows(), errc::dimension_mismatch,
          "lmmse: y length does not match the operator");
  require(sigma2 >= 0, errc::bad_input, "lmmse: sigma2 must be >= 0");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  if (mean.size() > 0) {
    require(mean.size() == n, errc::dimension_mismatch,
            "lmmse: mean length does not match");
    m = mean;
  }
  Eigen::MatrixXd Hd = H.to_dense();
  Eigen::MatrixXd Sxy = sigma_x * Hd.transpose();
  Eigen::MatrixXd Sy = Hd * Sxy;
  Sy.diagonal().array() += sigma2;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Sy);
  require(lu.isInvertible(), errc::singular_system,
          "lmmse: measurement covariance is singular");
  return m + Sxy * lu.solve(y - Hd * m);
}

Eigen::VectorXd lmmse_closed_form(const SpectralBasis& basis,
                                  const WienerProblem& p) {
  require(p.noise.kind() == kernel_kind::constant, errc::bad_input,
          "lmmse_closed_form: noise kernel must be constant (i.i.d. noise)");
  double sigma2 = p.noise.param0();
  Eigen::VectorXd s2l =
      p.s2(basis.lambdas().array()).max(0.0).matrix();
  Eigen::MatrixXd sigma_x =
      basis.U() * s2l.asDiagonal() * basis.U().transpose();
  return lmmse_from_covariance(sigma_x, p.H, sigma2, p.mean, p.y);
}

Eigen::VectorXd wiener_interpolate_noiseless(const SpectralBasis& basis,
                                             const LinearOperator& H,
                                             const Eigen::VectorXd& y,
                                             const Kernel& s2,
                                             const Eigen::VectorXd& mean) {
  const Eigen::Index n = basis.n();
  require(H.cols() == n, errc::dimension_mismatch,
          "interpolate: operator does not match the basis");
  require(y.size() == H.rows(), errc::dimension_mismatch,
          "interpolate: y length does not match the operator");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  if (mean.size() > 0) {
    require(mean.size() == n, errc::dimension_mismatch,
            "interpolate: mean length does not match");
    m = mean;
  }
  Eigen::VectorXd s2l = s2(basis.lambdas().array()).max(0.0).matrix();
  Eigen::MatrixXd sigma_x =
      basis.U() * s2l.asDiagonal() * basis.U().transpose();
  Eigen::MatrixXd Hd = H.to_dense();
  Eigen::MatrixXd SHt = sigma_x * Hd.transpose();
  Eigen::MatrixXd A = Hd * SHt;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  require(lu.isInvertible(), errc::singular_system,
          "interpolate: H Sigma H' is singular (insufficient PSD support)");
  return m + SHt * lu.solve(y - Hd * m);
}

double epsilon_rule(double sigma, Eigen::Index m) {
  require(sigma >= 0, errc::bad_input, "epsilon_rule: sigma must be >= 0");
  require(m >= 0, errc::bad_input, "epsilon_rule: count must be >= 0");
  return sigma * std::sqrt(static_cast<double>(m));
}

// ---------------------------------------------------------------------------
// Constrained baselines: bisection over the penalty weight gamma in
//   min ||Hx - y||^2 + gamma * R(x),
// whose residual grows monotonically with gamma. The feasible-side iterate
// (residual <= eps) is retained and returned.
// ---------------------------------------------------------------------------

namespace {

int conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& A,
                       const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol,
                       int max_iter) {
  double nb = b.norm();
  if (nb == 0) {
    x.setZero();
    return 0;
  }
  Eigen::VectorXd r = b - A(x);
  Eigen::VectorXd p = r;
  double rs = r.squaredNorm();
  int it = 0;
  for (; it < max_iter && std::sqrt(rs) > tol * nb; ++it) {
    Eigen::VectorXd Ap = A(p);
    double pAp = p.dot(Ap);
    if (pAp <= 0) break;
    double alpha = rs / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  return it;
}

struct BisectDriver {
  // solve(gamma) must update an internal warm-started state and return the
  // achieved residual ||Hx - y||; x() exposes the current iterate.
  std::function<double(double)> solve;
  std::function<Eigen::VectorXd()> x;
};

struct BisectOutcome {
  Eigen::VectorXd x;
  double residual;
  bool converged;
};

BisectOutcome lagrangian_bisect(BisectDriver& drv, double eps,
                                const ConstrainedOptions& opts) {
  double gamma = 1.0;
  double r = drv.solve(gamma);
  double lo = 0.0, hi = 0.0;
  Eigen::VectorXd x_lo;
  double r_lo = 0.0;

  if (r <= eps) {
    lo = gamma;
    x_lo = drv.x();
    r_lo = r;
    for (int i = 0; i < 60 && r <= eps; ++i) {
      gamma *= 10.0;
      r = drv.solve(gamma);
      if (r <= eps) {
        lo = gamma;
        x_lo = drv.x();
        r_lo = r;
      }
    }
    if (r <= eps) return {x_lo, r_lo, true};  // residual plateaued below eps
    hi = gamma;
  } else {
    hi = gamma;
    for (int i = 0; i < 80 && r > eps; ++i) {
      gamma /= 10.0;
      r = drv.solve(gamma);
    }
    if (r > eps) {
      require(r <= eps * (1.0 + 1e-6), errc::infeasible,
              "constraint infeasible: attainable residual " +
                  std::to_string(r) + " exceeds eps " + std::to_string(eps));
      return {drv.x(), r, true};
    }
    lo = gamma;
    x_lo = drv.x();
    r_lo = r;
  }

  int it = 0;
  for (; it < opts.max_bisect && r_lo < eps * (1.0 - opts.bisect_tol) &&
         hi / lo > 1.0 + 1e-12;
       ++it) {
    double mid = std::sqrt(lo * hi);
    double rm = drv.solve(mid);
    if (rm <= eps) {
      lo = mid;
      x_lo = drv.x();
      r_lo = rm;
    } else {
      hi = mid;
    }
  }
  bool converged = r_lo >= eps * (1.0 - opts.bisect_tol) || hi / lo <= 1.0 + 1e-12;
  return {x_lo, r_lo, converged};
}

// Exact-fit path for eps = 0 with an invertible filter: x = h^{-1}(L) y.
std::optional<Eigen::VectorXd> inverse_filter_fit(const Laplacian& lap,
                                                  const LinearOperator& H,
                                                  const Eigen::VectorXd& y,
                                                  const SpectralBasis* basis) {
  if (H.kind() != op_kind::filter) return std::nullopt;
  const Kernel& h = H.filter_kernel();
  double cap = basis ? basis->lambda_max() : lap.lambda_max_bound();
  double mn = kernel_grid_abs_min(h, cap);
  double mx = kernel_grid_max(h, cap);
  if (mx <= 0 || mn <= 1e-9 * mx) return std::nullopt;
  Kernel hinv = Kernel::custom([h](double l) { return 1.0 / h(l); },
                               "inverse:" + h.label());
  if (basis) return filter_exact(*basis, hinv, y);
  return filter_chebyshev(lap, hinv, y, 30);
}

Eigen::VectorXd tikhonov_exact_mask(const Laplacian& lap,
                                    const std::vector<Eigen::Index>& idx,
                                    const Eigen::VectorXd& y, double warm_const,
                                    const ConstrainedOptions& opts) {
  const Eigen::Index n = lap.n();
  std::vector<bool> measured(static_cast<std::size_t>(n), false);
  for (auto i : idx) measured[static_cast<std::size_t>(i)] = true;
  std::vector<Eigen::Index> free;
  free.reserve(static_cast<std::size_t>(n) - idx.size());
  for (Eigen::Index v = 0; v < n; ++v)
    if (!measured[static_cast<std::size_t>(v)]) free.push_back(v);

  Eigen::VectorXd x(n);
  for (std::size_t r = 0; r < idx.size(); ++r) x[idx[r]] = y[static_cast<Eigen::Index>(r)];
  if (free.empty()) return x;
  for (auto v : free) x[v] = 0.0;

  const auto& L = lap.matrix();
  // b = -(L x_pinned) restricted to the free vertices
  Eigen::VectorXd Lx = L * x;
  Eigen::VectorXd b(static_cast<Eigen::Index>(free.size()));
  for (std::size_t t = 0; t < free.size(); ++t) b[static_cast<Eigen::Index>(t)] = -Lx[free[t]];

  auto A = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (std::size_t t = 0; t < free.size(); ++t) w[free[t]] = v[static_cast<Eigen::Index>(t)];
    Eigen::VectorXd u = L * w;
    Eigen::VectorXd out(static_cast<Eigen::Index>(free.size()));
    for (std::size_t t = 0; t < free.size(); ++t) out[static_cast<Eigen::Index>(t)] = u[free[t]];
    return out;
  };
  Eigen::VectorXd xf = Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(free.size()), warm_const);
  conjugate_gradient(A, b, xf, opts.cg_tol, opts.cg_max_iter);
  for (std::size_t t = 0; t < free.size(); ++t) x[free[t]] = xf[static_cast<Eigen::Index>(t)];
  return x;
}

Eigen::VectorXd exact_fit_kkt(const Laplacian& lap, const LinearOperator& H,
                              const Eigen::VectorXd& y) {
  const Eigen::Index n = lap.n();
  require(n <= 2000, errc::too_large,
          "tikhonov_solve: eps = 0 with a general operator needs a dense "
          "solve; n exceeds the desk-scale limit");
  Eigen::MatrixXd Hd = H.to_dense();
  const Eigen::Index m = Hd.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = 2.0 * Eigen::MatrixXd(lap.matrix());
  K.topRightCorner(n, m) = Hd.transpose();
  K.bottomLeftCorner(m, n) = Hd;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.tail(m) = y;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd x = sol.head(n);
  require((Hd * x - y).norm() <= 1e-8 * std::max(1.0, y.norm()),
          errc::infeasible, "tikhonov_solve: exact fit is not attainable");
  return x;
}

}  // namespace

ConstrainedResult tikhonov_solve(const Laplacian& lap, const LinearOperator& H,
                                 const Eigen::VectorXd& y, double eps,
                                 const ConstrainedOptions& opts,
                                 const SpectralBasis* basis) {
  const Eigen::Index n = lap.n();
  require(H.cols() == n, errc::dimension_mismatch,
          "tikhonov_solve: operator does not match the graph");
  require(y.size() == H.rows(), errc::dimension_mismatch,
          "tikhonov_solve: y length does not match the operator");
  require(eps >= 0 && std::isfinite(eps), errc::bad_input,
          "tikhonov_solve: eps must be a nonnegative number");
  const auto& L = lap.matrix();
  auto quad = [&](const Eigen::VectorXd& x) { return x.dot(L * x); };

  // A constant vector has zero objective: optimal whenever feasible.
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd h1 = H.apply(ones);
  double h1n2 = h1.squaredNorm();
  double cstar = h1n2 > 0 ? h1.dot(y) / h1n2 : 0.0;
  if ((cstar * h1 - y).norm() <= eps) {
    Eigen::VectorXd x = cstar * ones;
    return {x, (cstar * h1 - y).norm(), 0.0, true};
  }

  if (eps == 0) {
    Eigen::VectorXd x;
    if (H.kind() == op_kind::identity) {
      x = y;
    } else if (H.kind() == op_kind::mask) {
      x = tikhonov_exact_mask(lap, H.mask_indices(), y, cstar, opts);
    } else if (auto inv = inverse_filter_fit(lap, H, y, basis)) {
      x = *inv;
    } else {
      x = exact_fit_kkt(lap, H, y);
    }
    return {x, (H.apply(x) - y).norm(), quad(x), true};
  }

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, cstar);
  BisectDriver drv;
  drv.solve = [&](double gamma) {
    auto A = [&](const Eigen::VectorXd& v) {
      return (H.adjoint(H.apply(v)) + gamma * (L * v)).eval();
    };
    Eigen::VectorXd b = H.adjoint(y);
    conjugate_gradient(A, b, x, opts.cg_tol, opts.cg_max_iter);
    return (H.apply(x) - y).norm();
  };
  drv.x = [&]() { return x; };
  BisectOutcome out = lagrangian_bisect(drv, eps, opts);
  return {out.x, out.residual, quad(out.x), out.converged};
}

namespace {

struct TvInner {
  const Eigen::SparseMatrix<double>* G;
  const LinearOperator* H;
  const Eigen::VectorXd* y;
  double step;  // tau = sigma
  int max_iter;
  double tol;

  Eigen::VectorXd x, p, q, xbar;

  void init(Eigen::Index n, Eigen::Index ne, Eigen::Index m,
            const Eigen::VectorXd& x0) {
    x = x0;
    xbar = x0;
    p = Eigen::VectorXd::Zero(ne);
    q = Eigen::VectorXd::Zero(m);
  }

  // min ||Hx - y||^2 + gamma ||G x||_1
  double run(double gamma) {
    const double s = step;
    for (int it = 0; it < max_iter; ++it) {
      p += s * (*G * xbar);
      p = p.cwiseMax(-gamma).cwiseMin(gamma);
      q = (q + s * (H->apply(xbar) - *y)) / (1.0 + s / 2.0);
      Eigen::VectorXd x_new = x - s * (G->transpose() * p + H->adjoint(q));
      xbar = 2.0 * x_new - x;
      double rel = (x_new - x).norm() / (x.norm() + 1e-12);
      x = std::move(x_new);
      if (rel < tol && it > 50) break;
    }
    return (H->apply(x) - *y).norm();
  }
};

Eigen::VectorXd tv_exact_mask(const Laplacian& lap,
                              const Eigen::SparseMatrix<double>& G,
                              const std::vector<Eigen::Index>& idx,
                              const Eigen::VectorXd& y, double warm_const,
                              const ConstrainedOptions& opts) {
  const Eigen::Index n = lap.n();
  double knorm2 = std::max(lap.lambda_max_bound(), 1e-12);
  double s = 0.99 / std::sqrt(knorm2);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, warm_const);
  for (std::size_t r = 0; r < idx.size(); ++r) x[idx[r]] = y[static_cast<Eigen::Index>(r)];
  Eigen::VectorXd xbar = x;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(G.rows());
  for (int it = 0; it < opts.pd_max_iter; ++it) {
    p += s * (G * xbar);
    p = p.cwiseMax(-1.0).cwiseMin(1.0);
    Eigen::VectorXd x_new = x - s * (G.transpose() * p);
    for (std::size_t r = 0; r < idx.size(); ++r)
      x_new[idx[r]] = y[static_cast<Eigen::Index>(r)];
    xbar = 2.0 * x_new - x;
    double rel = (x_new - x).norm() / (x.norm() + 1e-12);
    x = std::move(x_new);
    if (rel < opts.pd_tol && it > 50) break;
  }
  return x;
}

}  // namespace

ConstrainedResult tv_solve(const Laplacian& lap,
                           const Eigen::SparseMatrix<double>& grad,
                           const LinearOperator& H, const Eigen::VectorXd& y,
                           double eps, const ConstrainedOptions& opts,
                           const SpectralBasis* basis) {
  const Eigen::Index n = lap.n();
  require(grad.cols() == n, errc::dimension_mismatch,
          "tv_solve: gradient operator does not match the graph");
  require(H.cols() == n, errc::dimension_mismatch,
          "tv_solve: operator does not match the graph");
  require(y.size() == H.rows(), errc::dimension_mismatch,
          "tv_solve: y length does not match the operator");
  require(eps >= 0 && std::isfinite(eps), errc::bad_input,
          "tv_solve: eps must be a nonnegative number");
  auto tv_of = [&](const Eigen::VectorXd& x) {
    return (grad * x).cwiseAbs().sum();
  };

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd h1 = H.apply(ones);
  double h1n2 = h1.squaredNorm();
  double cstar = h1n2 > 0 ? h1.dot(y) / h1n2 : 0.0;
  if ((cstar * h1 - y).norm() <= eps) {
    Eigen::VectorXd x = cstar * ones;
    return {x, (cstar * h1 - y).norm(), 0.0, true};
  }

  if (eps == 0) {
    Eigen::VectorXd x;
    if (H.kind() == op_kind::identity) {
      x = y;
    } else if (H.kind() == op_kind::mask) {
      x = tv_exact_mask(lap, grad, H.mask_indices(), y, cstar, opts);
    } else if (auto inv = inverse_filter_fit(lap, H, y, basis)) {
      x = *inv;
    } else {
      fail(errc::bad_input,
           "tv_solve: eps = 0 supported for identity, mask, or invertible "
           "filter operators only");
    }
    return {x, (H.apply(x) - y).norm(), tv_of(x), true};
  }

  TvInner inner;
  inner.G = &grad;
  inner.H = &H;
  inner.y = &y;
  double knorm2 = lap.lambda_max_bound() + H.norm_bound() * H.norm_bound();
  inner.step = 0.99 / std::sqrt(std::max(knorm2, 1e-12));
  inner.max_iter = opts.pd_max_iter;
  inner.tol = opts.pd_tol;
  inner.init(n, grad.rows(), y.size(), Eigen::VectorXd::Constant(n, cstar));

  BisectDriver drv;
  drv.solve = [&](double gamma) { return inner.run(gamma); };
  drv.x = [&]() { return inner.x; };
  BisectOutcome out = lagrangian_bisect(drv, eps, opts);
  return {out.x, out.residual, tv_of(out.x), out.converged};
}

}  // namespace gsig
