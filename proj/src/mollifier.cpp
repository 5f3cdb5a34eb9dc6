#include "wk/mollifier.hpp"

#include "wk/error.hpp"

#include <numbers>
#include <vector>

namespace wk {

namespace {

std::vector<double> to_vector(PointRef x) { return std::vector<double>(x.data(), x.data() + x.size()); }

std::vector<Jet> to_jets(PointRef x, int order) {
  const auto layout = JetLayout::get(static_cast<int>(x.size()), order);
  std::vector<Jet> v;
  v.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) v.push_back(Jet::variable(layout, static_cast<int>(i), x[i]));
  return v;
}

}  // namespace

double mollifier_normalization(int dim, double radius) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "mollifier dimension must be >= 1");
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "mollifier radius must be positive");
  // The radial profile is flat at t = 1, so a fine composite Simpson rule is
  // accurate to roundoff.
  const Axis radial{0.0, 1.0, 200001};
  const Eigen::VectorXd w = simpson_weights(radial);
  double profile = 0.0;
  for (Eigen::Index i = 0; i < radial.points; ++i) {
    const double t = radial.node(i);
    if (t >= 1.0) continue;
    profile += w[i] * std::exp(-1.0 / (1.0 - t * t)) * std::pow(t, dim - 1);
  }
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
  return 1.0 / (std::pow(radius, dim) * sphere * profile);
}

Mollifier::Mollifier(int dim, double radius)
    : dim_(dim), radius_(radius), norm_(mollifier_normalization(dim, radius)) {}

double Mollifier::operator()(PointRef x) const {
  const auto v = to_vector(x);
  return eval<double>(v);
}

double Mollifier::derivative(const MultiIndex& mu, PointRef x) const {
  if (mu.is_zero()) return (*this)(x);
  const auto v = to_jets(x, mu.order());
  return eval<Jet>(v).derivative(mu);
}

RealFunction Mollifier::sample(const Grid& grid) const {
  if (grid.dim() != dim_) fail(ErrorKind::InvalidArgument, "mollifier sampled on a grid of the wrong dimension");
  const Mollifier self = *this;
  RealFunction f(grid, [self](const MultiIndex& mu, PointRef x) { return self.derivative(mu, x); });
  f.set_label("mollifier(r=" + std::to_string(radius_) + ")");
  return f;
}

BallQuadrature ball_quadrature(int dim, double radius, Eigen::Index points_per_axis) {
  if (points_per_axis % 2 == 0) ++points_per_axis;
  const Grid box = Grid::uniform(dim, -radius, radius, points_per_axis);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < box.size(); ++j) {
    if (box.points().col(j).norm() < radius) keep.push_back(j);
  }
  BallQuadrature q;
  q.nodes.resize(dim, static_cast<Eigen::Index>(keep.size()));
  q.weights.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    q.nodes.col(static_cast<Eigen::Index>(i)) = box.points().col(keep[i]);
    q.weights[static_cast<Eigen::Index>(i)] = box.quadrature_weights()[keep[i]];
  }
  return q;
}

double SmoothCutoff::operator()(PointRef x) const {
  const auto v = to_vector(x);
  return eval<double>(v);
}

double SmoothCutoff::derivative(const MultiIndex& mu, PointRef x) const {
  if (mu.is_zero()) return (*this)(x);
  const auto v = to_jets(x, mu.order());
  return eval<Jet>(v).derivative(mu);
}

double SmoothCutoff::leibniz_constant(int max_order, Eigen::Index points_per_axis) const {
  if (points_per_axis <= 0) points_per_axis = dim_ == 1 ? 801 : (dim_ == 2 ? 101 : 31);
  const Grid g = Grid::uniform(dim_, -2.0, 2.0, points_per_axis);
  const auto indices = enumerate_multiindices(dim_, max_order);
  double sup = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const Point x = g.point(j);
    if (max_order == 0) {
      sup = std::max(sup, std::abs((*this)(x)));
      continue;
    }
    const auto jets = to_jets(x, max_order);
    const Jet phi = eval<Jet>(jets);
    for (const MultiIndex& nu : indices) sup = std::max(sup, std::abs(phi.derivative(nu)));
  }
  return 1.0 + sup;
}

}  // namespace wk
