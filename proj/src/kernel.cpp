#include "wk/kernel.hpp"

#include "wk/error.hpp"
#include "wk/expression.hpp"
#include "wk/jet.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace wk {

namespace {

MultiIndex join(const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> c = a.components();
  c.insert(c.end(), b.components().begin(), b.components().end());
  return MultiIndex(std::move(c));
}

std::pair<MultiIndex, MultiIndex> split(const MultiIndex& mu, int k1) {
  const auto& c = mu.components();
  return {MultiIndex(std::vector<int>(c.begin(), c.begin() + k1)), MultiIndex(std::vector<int>(c.begin() + k1, c.end()))};
}

void require_finite(const Eigen::MatrixXd& v) {
  if (!v.allFinite()) fail(ErrorKind::Numerical, "two-variable function has non-finite values");
}

}  // namespace

TwoVariableFunction::TwoVariableFunction(Grid x_grid, Grid y_grid, Eigen::MatrixXd values)
    : x_grid_(std::move(x_grid)), y_grid_(std::move(y_grid)), values_(std::move(values)) {
  if (values_.rows() != x_grid_.size() || values_.cols() != y_grid_.size())
    fail(ErrorKind::InvalidArgument, "kernel matrix shape does not match the grids");
  require_finite(values_);
}

TwoVariableFunction::TwoVariableFunction(Grid x_grid, Grid y_grid, Evaluator exact)
    : x_grid_(std::move(x_grid)), y_grid_(std::move(y_grid)), exact_(std::move(exact)) {
  const MultiIndex zero = MultiIndex::zero(x_grid_.dim() + y_grid_.dim());
  values_.resize(x_grid_.size(), y_grid_.size());
  const Eigen::MatrixXd& xs = x_grid_.points();
  const Eigen::MatrixXd& ys = y_grid_.points();
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) values_(i, j) = exact_(zero, xs.col(i), ys.col(j));
  }
  require_finite(values_);
}

TwoVariableFunction TwoVariableFunction::separable(const RealFunction& f, const RealFunction& g) {
  if (f.has_exact() && g.has_exact()) {
    const int k1 = f.grid().dim();
    auto fe = f.exact();
    auto ge = g.exact();
    TwoVariableFunction h(f.grid(), g.grid(), [fe, ge, k1](const MultiIndex& mu, PointRef x, PointRef y) {
      const auto [mx, my] = split(mu, k1);
      return fe(mx, x) * ge(my, y);
    });
    // Keep the matrix bit-identical to the outer product of the sampled factors.
    h.values_ = f.values() * g.values().transpose();
    return h;
  }
  return TwoVariableFunction(f.grid(), g.grid(), Eigen::MatrixXd(f.values() * g.values().transpose()));
}

TwoVariableFunction TwoVariableFunction::from_expression(const Grid& x_grid, const Grid& y_grid,
                                                         const std::string& expr) {
  const int k1 = x_grid.dim(), k2 = y_grid.dim();
  auto names = coordinate_names("x", k1);
  const auto ynames = coordinate_names("y", k2);
  names.insert(names.end(), ynames.begin(), ynames.end());
  const Expression e = Expression::parse(expr, names);
  const int n = k1 + k2;
  return TwoVariableFunction(x_grid, y_grid, [e, k1, k2, n](const MultiIndex& mu, PointRef x, PointRef y) {
    if (mu.is_zero()) {
      double v[16];
      if (n > 16) fail(ErrorKind::InvalidArgument, "too many kernel variables");
      for (int i = 0; i < k1; ++i) v[i] = x[i];
      for (int i = 0; i < k2; ++i) v[k1 + i] = y[i];
      return e.evaluate<double>(std::span<const double>(v, static_cast<std::size_t>(n)));
    }
    const auto layout = JetLayout::get(n, mu.order());
    std::vector<Jet> v;
    for (int i = 0; i < k1; ++i) v.push_back(Jet::variable(layout, i, x[i]));
    for (int i = 0; i < k2; ++i) v.push_back(Jet::variable(layout, k1 + i, y[i]));
    return e.evaluate<Jet>(std::span<const Jet>(v)).derivative(mu);
  });
}

TwoVariableFunction TwoVariableFunction::resampled(const Grid& x_grid, const Grid& y_grid) const {
  if (!exact_) fail(ErrorKind::InvalidArgument, "resampling a kernel needs its evaluator");
  return TwoVariableFunction(x_grid, y_grid, exact_);
}

RealFunction slice(const TwoVariableFunction& h, PointRef x0) {
  const Eigen::Index i = h.x_grid().find_node(x0);
  if (i < 0) fail(ErrorKind::Domain, "slice point is not a node of the x-grid");
  const Point xi = h.x_grid().point(i);
  Eigen::VectorXd row = h.values().row(i).transpose();
  if (!h.has_exact()) return RealFunction(h.y_grid(), std::move(row));
  auto ev = h.exact();
  const int k1 = h.x_grid().dim();
  RealFunction out(h.y_grid(), [ev, xi, k1](const MultiIndex& nu, PointRef y) {
    return ev(join(MultiIndex::zero(k1), nu), xi, y);
  });
  return out;
}

namespace {

// Multilinear interpolation of column values at an off-node y.
Eigen::VectorXd interpolate_column(const TwoVariableFunction& h, PointRef y) {
  const Grid& g = h.y_grid();
  const int k = g.dim();
  std::vector<Eigen::Index> base(static_cast<std::size_t>(k));
  std::vector<double> frac(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    const Axis& ax = g.axis(a);
    const double t = (y[a] - ax.lo) / ax.spacing();
    Eigen::Index c = static_cast<Eigen::Index>(std::floor(t));
    c = std::clamp<Eigen::Index>(c, 0, ax.points - 2);
    base[static_cast<std::size_t>(a)] = c;
    frac[static_cast<std::size_t>(a)] = std::clamp(t - static_cast<double>(c), 0.0, 1.0);
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(h.values().rows());
  for (int corner = 0; corner < (1 << k); ++corner) {
    double w = 1.0;
    Eigen::Index flat = 0;
    for (int a = 0; a < k; ++a) {
      const bool up = (corner >> a) & 1;
      const double f = frac[static_cast<std::size_t>(a)];
      w *= up ? f : 1.0 - f;
      flat += (base[static_cast<std::size_t>(a)] + (up ? 1 : 0)) * g.stride(a);
    }
    if (w != 0.0) out += w * h.values().col(flat);
  }
  return out;
}

}  // namespace

AppliedFunctional apply_functional(const TwoVariableFunction& h, const DiscreteFunctional& v) {
  const Grid& yg = h.y_grid();
  for (const auto& t : v.terms()) {
    if (t.point.size() != yg.dim()) fail(ErrorKind::InvalidArgument, "functional point has the wrong dimension");
    if (!yg.contains(t.point, 1e-12 * std::max(1.0, t.point.cwiseAbs().maxCoeff())))
      fail(ErrorKind::Domain, "functional point lies outside the y-box");
  }
  AppliedFunctional out;
  if (h.has_exact()) {
    auto ev = h.exact();
    const int k2 = yg.dim();
    std::vector<DiscreteFunctional::Term> terms;
    for (const auto& t : v.terms()) {
      // Snap node points so the evaluator sees exactly the sampled y.
      const Eigen::Index node = yg.find_node(t.point);
      terms.push_back({node >= 0 ? yg.point(node) : t.point, t.coeff});
    }
    out.function = RealFunction(h.x_grid(), [ev, terms, k2](const MultiIndex& mu, PointRef x) {
      const MultiIndex full = join(mu, MultiIndex::zero(k2));
      double acc = 0.0;
      for (const auto& t : terms) acc += t.coeff * ev(full, x, t.point);
      return acc;
    });
    return out;
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(h.values().rows());
  for (const auto& t : v.terms()) {
    const Eigen::Index node = yg.find_node(t.point);
    if (node >= 0) {
      acc += t.coeff * h.values().col(node);
    } else {
      acc += t.coeff * interpolate_column(h, t.point);
      ++out.interpolated_terms;
    }
  }
  out.function = RealFunction(h.x_grid(), std::move(acc));
  return out;
}

DiffReport check_diff_identity(const TwoVariableFunction& h, const DiscreteFunctional& v, const MultiIndex& mu,
                               const std::vector<Eigen::Index>& x_levels) {
  const int k1 = h.x_grid().dim(), k2 = h.y_grid().dim();
  if (mu.dim() != k1) fail(ErrorKind::InvalidArgument, "multi-index must act on the x-variables");
  DiffReport rep{mu, {}, {}, {}, h.has_exact(), std::nullopt};
  if (h.has_exact()) {
    // Through the evaluator of h_v the identity holds term by term.
    auto ev = h.exact();
    const RealFunction hv = apply_functional(h, v).function;
    const Eigen::VectorXd lhs = partial_derivative(hv, mu).values();
    const MultiIndex full = join(mu, MultiIndex::zero(k2));
    double err = 0.0;
    for (Eigen::Index i = 0; i < h.x_grid().size(); ++i) {
      double rhs = 0.0;
      for (const auto& t : v.terms()) rhs += t.coeff * ev(full, h.x_grid().points().col(i), t.point);
      err = std::max(err, std::abs(lhs[i] - rhs));
    }
    rep.exact_error = err;
  }
  if (h.has_exact() && !x_levels.empty()) {
    auto ev = h.exact();
    const MultiIndex full = join(mu, MultiIndex::zero(k2));
    for (Eigen::Index n : x_levels) {
      std::vector<Axis> axes = h.x_grid().axes();
      for (Axis& a : axes) a.points = n;
      const Grid xg(axes);
      for (int a = 0; a < k1; ++a) {
        if (mu[a] > 0 && n < 2 * mu[a] + 1) fail(ErrorKind::Domain, "x-grid level too coarse for the derivative order");
      }
      // h_v on this level from point values, then finite differences.
      const MultiIndex zero = MultiIndex::zero(k1 + k2);
      Eigen::VectorXd hv_values(xg.size());
      for (Eigen::Index i = 0; i < xg.size(); ++i) {
        double acc = 0.0;
        for (const auto& t : v.terms()) acc += t.coeff * ev(zero, xg.points().col(i), t.point);
        hv_values[i] = acc;
      }
      const RealFunction hv(xg, std::move(hv_values));
      const Eigen::VectorXd lhs = partial_derivative(hv, mu).values();
      double err = 0.0;
      for (Eigen::Index i = 0; i < xg.size(); ++i) {
        double rhs = 0.0;
        for (const auto& t : v.terms()) rhs += t.coeff * ev(full, xg.points().col(i), t.point);
        err = std::max(err, std::abs(lhs[i] - rhs));
      }
      rep.levels.push_back({n, xg.axis(0).spacing(), err});
    }
  } else {
    const Grid& xg = h.x_grid();
    const RealFunction hv(xg, Eigen::VectorXd(apply_functional(h, v).function.values()));
    const Eigen::VectorXd lhs = partial_derivative(hv, mu).values();
    Eigen::MatrixXd dh(h.values().rows(), h.values().cols());
    for (Eigen::Index j = 0; j < dh.cols(); ++j)
      dh.col(j) = partial_derivative(RealFunction(xg, Eigen::VectorXd(h.values().col(j))), mu).values();
    const Eigen::VectorXd rhs =
        apply_functional(TwoVariableFunction(xg, h.y_grid(), std::move(dh)), v).function.values();
    rep.levels.push_back({xg.axis(0).points, xg.axis(0).spacing(), (lhs - rhs).cwiseAbs().maxCoeff()});
  }
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
    const double a = rep.levels[i].max_error, b = rep.levels[i + 1].max_error;
    const double ratio = b > 0.0 ? a / b : (a > 0.0 ? INFINITY : 1.0);
    rep.ratios.push_back(ratio);
    rep.orders.push_back(std::log2(ratio));
  }
  return rep;
}

Eigen::VectorXd weighted_scaling(const Grid& grid, const WeightFunction& weight) {
  const Eigen::VectorXd m = weight.sample(grid);
  const Eigen::VectorXd& q = grid.quadrature_weights();
  Eigen::VectorXd d(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(m[i] >= 0.0) || !std::isfinite(m[i]))
      fail(ErrorKind::InvalidArgument, "weight is negative or non-finite at grid point " + std::to_string(i));
    d[i] = m[i] * std::sqrt(q[i]);
  }
  return d;
}

namespace {

struct Scaled {
  Eigen::MatrixXd matrix;
  std::vector<Eigen::Index> rows, cols;  // retained
  std::vector<Eigen::Index> dropped_rows, dropped_cols;
  Eigen::VectorXd dx, dy;
};

Scaled scaled_matrix(const TwoVariableFunction& h, const WeightFunction& mx, const WeightFunction& ny) {
  Scaled s;
  s.dx = weighted_scaling(h.x_grid(), mx);
  s.dy = weighted_scaling(h.y_grid(), ny);
  for (Eigen::Index i = 0; i < s.dx.size(); ++i) (s.dx[i] > 0.0 ? s.rows : s.dropped_rows).push_back(i);
  for (Eigen::Index j = 0; j < s.dy.size(); ++j) (s.dy[j] > 0.0 ? s.cols : s.dropped_cols).push_back(j);
  if (s.rows.empty() || s.cols.empty()) fail(ErrorKind::InvalidArgument, "weights vanish on the whole grid");
  const auto nr = static_cast<Eigen::Index>(s.rows.size());
  const auto nc = static_cast<Eigen::Index>(s.cols.size());
  s.matrix.resize(nr, nc);
  for (Eigen::Index b = 0; b < nc; ++b) {
    const Eigen::Index j = s.cols[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < nr; ++a) {
      const Eigen::Index i = s.rows[static_cast<std::size_t>(a)];
      s.matrix(a, b) = s.dx[i] * h.values()(i, j) * s.dy[j];
    }
  }
  return s;
}

// sqrt(sum_{i >= r} s_i^2), accumulated from the small end.
Eigen::VectorXd tail_norms(const Eigen::VectorXd& s) {
  Eigen::VectorXd out(s.size() + 1);
  double acc = 0.0;
  out[s.size()] = 0.0;
  for (Eigen::Index i = s.size() - 1; i >= 0; --i) {
    acc += s[i] * s[i];
    out[i] = std::sqrt(acc);
  }
  return out;
}

}  // namespace

SeparableApproximation separable_approx(const TwoVariableFunction& h, const WeightFunction& mx,
                                        const WeightFunction& ny, int rank) {
  if (rank < 1) fail(ErrorKind::InvalidArgument, "rank must be >= 1");
  Scaled s = scaled_matrix(h, mx, ny);
  const Eigen::Index full = std::min(s.matrix.rows(), s.matrix.cols());
  if (rank > full)
    fail(ErrorKind::InvalidArgument, "rank " + std::to_string(rank) + " exceeds the grid rank " + std::to_string(full));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(s.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SeparableApproximation out;
  out.rank = rank;
  out.singular_values = svd.singularValues();
  out.residual = tail_norms(out.singular_values)[rank];
  out.left = Eigen::MatrixXd::Zero(h.values().rows(), rank);
  out.right = Eigen::MatrixXd::Zero(h.values().cols(), rank);
  for (int r = 0; r < rank; ++r) {
    const double sv = out.singular_values[r];
    for (std::size_t a = 0; a < s.rows.size(); ++a) {
      const Eigen::Index i = s.rows[a];
      out.left(i, r) = svd.matrixU()(static_cast<Eigen::Index>(a), r) * sv / s.dx[i];
    }
    for (std::size_t b = 0; b < s.cols.size(); ++b) {
      const Eigen::Index j = s.cols[b];
      out.right(j, r) = svd.matrixV()(static_cast<Eigen::Index>(b), r) / s.dy[j];
    }
  }
  out.dropped_rows = std::move(s.dropped_rows);
  out.dropped_cols = std::move(s.dropped_cols);
  return out;
}

double weighted_error(const TwoVariableFunction& h, const Eigen::MatrixXd& candidate, const WeightFunction& mx,
                      const WeightFunction& ny) {
  if (candidate.rows() != h.values().rows() || candidate.cols() != h.values().cols())
    fail(ErrorKind::InvalidArgument, "candidate shape does not match the kernel");
  const Eigen::VectorXd dx = weighted_scaling(h.x_grid(), mx);
  const Eigen::VectorXd dy = weighted_scaling(h.y_grid(), ny);
  return (dx.asDiagonal() * (h.values() - candidate) * dy.asDiagonal()).norm();
}

Eigen::VectorXd weighted_singular_values(const TwoVariableFunction& h, const WeightFunction& mx,
                                         const WeightFunction& ny) {
  const Scaled s = scaled_matrix(h, mx, ny);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(s.matrix);
  return svd.singularValues();
}

const char* to_string(DecayClass c) {
  switch (c) {
    case DecayClass::GeometricOrFaster: return "geometric-or-faster";
    case DecayClass::SuperPolynomial: return "super-polynomial";
    case DecayClass::Polynomial: return "polynomial";
    case DecayClass::Slow: return "slow";
  }
  return "?";
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

DecayReport classify_decay(const Eigen::VectorXd& s, int r_max, const DecayThresholds& t) {
  if (r_max < 1) fail(ErrorKind::InvalidArgument, "r_max must be >= 1");
  if (r_max > s.size())
    fail(ErrorKind::InvalidArgument, "r_max " + std::to_string(r_max) + " exceeds the grid rank " + std::to_string(s.size()));
  DecayReport rep;
  const Eigen::VectorXd tails = tail_norms(s);
  for (int r = 1; r <= r_max; ++r) {
    rep.table.push_back({r, s[r - 1], tails[r]});
    if (r > 1 && tails[r] > tails[r - 1]) rep.monotone = false;
    if (!rep.rank_at_target && tails[r] < t.residual_target) rep.rank_at_target = r;
  }
  const double s1 = s.size() ? s[0] : 0.0;
  int sig = 0;
  while (sig < r_max && s1 > 0.0 && s[sig] / s1 > t.noise_floor) ++sig;
  rep.significant = sig;

  std::vector<double> idx, logi, logs;
  for (int i = 1; i <= sig; ++i) {
    idx.push_back(i);
    logi.push_back(std::log(static_cast<double>(i)));
    logs.push_back(std::log(s[i - 1]));
  }
  if (sig < 4) {
    rep.classification = DecayClass::GeometricOrFaster;
    rep.fit_slope = ls_slope(idx, logs);
    return rep;
  }
  const int pairs = sig / 2;
  std::vector<double> g(static_cast<std::size_t>(pairs)), beta(static_cast<std::size_t>(pairs));
  for (int i = 1; i <= pairs; ++i) {
    const double d = std::log(s[i - 1] / s[2 * i - 1]);
    g[static_cast<std::size_t>(i - 1)] = d / i;
    beta[static_cast<std::size_t>(i - 1)] = d / std::log(2.0);
  }
  const double g_max = *std::max_element(g.begin(), g.end());
  const double g_last = g.back();
  const double beta_last = beta.back();
  const double beta_mid = beta[static_cast<std::size_t>(std::max(1, pairs / 2) - 1)];
  if (g_last >= t.geometric_ratio * g_max) {
    rep.classification = DecayClass::GeometricOrFaster;
    rep.fit_slope = ls_slope(idx, logs);
  } else {
    rep.fit_slope = ls_slope(logi, logs);
    if (beta_last >= t.superpoly_ratio * beta_mid)
      rep.classification = DecayClass::SuperPolynomial;
    else
      rep.classification = beta_last > 1.0 ? DecayClass::Polynomial : DecayClass::Slow;
  }
  return rep;
}

DecayReport density_decay_report(const TwoVariableFunction& h, const WeightFunction& mx, const WeightFunction& ny,
                                 int r_max, const DecayThresholds& t) {
  return classify_decay(weighted_singular_values(h, mx, ny), r_max, t);
}

}  // namespace wk
