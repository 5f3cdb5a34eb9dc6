#pragma once

#include "wk/error.hpp"
#include "wk/grid.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace wk {

enum class DerivativePath { Exact, FiniteDifference };

const char* to_string(DerivativePath path);

template <typename Scalar>
inline bool is_finite(const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

/// Values of a scalar function on a grid, optionally paired with an exact
/// derivative evaluator (mu, x) -> d^mu f(x).
///
/// Complex-valued functions on C^k live on grids over R^2k with interleaved
/// (Re z_i, Im z_i) axes; `analytic()` records the caller's declaration that f
/// is entire.
template <typename Scalar>
class SampledFunction {
 public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Evaluator = std::function<Scalar(const MultiIndex&, PointRef)>;

  SampledFunction() = default;

  SampledFunction(Grid grid, Values values, bool analytic = false,
                  DerivativePath path = DerivativePath::FiniteDifference)
      : grid_(std::move(grid)), values_(std::move(values)), analytic_(analytic), path_(path) {
    if (values_.size() != grid_.size())
      fail(ErrorKind::InvalidArgument, "value count " + std::to_string(values_.size()) +
                                           " does not match grid size " + std::to_string(grid_.size()));
    check_finite();
  }

  /// Samples f = exact(0, .) on the grid; the evaluator is kept for derivatives.
  SampledFunction(Grid grid, Evaluator exact, bool analytic = false)
      : grid_(std::move(grid)), exact_(std::move(exact)), analytic_(analytic), path_(DerivativePath::Exact) {
    const MultiIndex zero = MultiIndex::zero(grid_.dim());
    values_.resize(grid_.size());
    const Eigen::MatrixXd& pts = grid_.points();
    for (Eigen::Index j = 0; j < grid_.size(); ++j) values_[j] = exact_(zero, pts.col(j));
    check_finite();
  }

  const Grid& grid() const { return grid_; }
  const Values& values() const { return values_; }
  bool has_exact() const { return static_cast<bool>(exact_); }
  const Evaluator& exact() const { return exact_; }
  bool analytic() const { return analytic_; }
  DerivativePath path() const { return path_; }
  const std::string& label() const { return label_; }
  SampledFunction& set_label(std::string label) {
    label_ = std::move(label);
    return *this;
  }

  /// Pointwise value off the grid; requires the exact evaluator.
  Scalar at(PointRef x) const {
    if (!exact_) fail(ErrorKind::InvalidArgument, "pointwise evaluation needs an exact evaluator");
    return exact_(MultiIndex::zero(grid_.dim()), x);
  }

  SampledFunction scaled(Scalar c) const {
    SampledFunction out = *this;
    out.values_ = values_ * c;
    if (exact_) {
      auto inner = exact_;
      out.exact_ = [inner, c](const MultiIndex& mu, PointRef x) { return c * inner(mu, x); };
    }
    return out;
  }

  /// The same function sampled on another grid; requires the exact evaluator.
  SampledFunction resampled(const Grid& grid) const {
    if (!exact_) fail(ErrorKind::InvalidArgument, "resampling needs an exact evaluator");
    SampledFunction out(grid, exact_, analytic_);
    out.label_ = label_;
    return out;
  }

  friend SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid_ == b.grid_)) fail(ErrorKind::InvalidArgument, "cannot add functions on different grids");
    SampledFunction out = a;
    out.values_ = a.values_ + b.values_;
    out.analytic_ = a.analytic_ && b.analytic_;
    if (a.exact_ && b.exact_) {
      auto fa = a.exact_, fb = b.exact_;
      out.exact_ = [fa, fb](const MultiIndex& mu, PointRef x) { return fa(mu, x) + fb(mu, x); };
      out.path_ = DerivativePath::Exact;
    } else {
      out.exact_ = nullptr;
      out.path_ = DerivativePath::FiniteDifference;
    }
    return out;
  }

 private:
  void check_finite() const {
    for (Eigen::Index j = 0; j < values_.size(); ++j) {
      if (!is_finite(values_[j]))
        fail(ErrorKind::Numerical, "non-finite function value at grid point " + std::to_string(j));
    }
  }

  Grid grid_;
  Values values_;
  Evaluator exact_;
  bool analytic_ = false;
  DerivativePath path_ = DerivativePath::FiniteDifference;
  std::string label_;
};

using RealFunction = SampledFunction<double>;
using ComplexFunction = SampledFunction<std::complex<double>>;

/// Finite-difference weights for the `order`-th derivative at offset 0 on the
/// given stencil offsets (units of the spacing), Fornberg's recursion.
std::vector<double> finite_difference_weights(int order, std::span<const double> offsets);

struct AxisStencil {
  Eigen::Index start;
  std::vector<double> weights;  // already divided by h^order
};

/// Second-order stencils for the order-d derivative along one axis: central
/// where they fit, one-sided (d+2 points) near the ends.
std::vector<AxisStencil> axis_stencils(const Axis& axis, int order);

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> differentiate_axis(const Grid& grid,
                                                            const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v,
                                                            int axis, int order) {
  if (order == 0) return v;
  const auto stencils = axis_stencils(grid.axis(axis), order);
  const Eigen::Index stride = grid.stride(axis);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const Eigen::Index pos = grid.axis_position(j, axis);
    const AxisStencil& st = stencils[static_cast<std::size_t>(pos)];
    const Eigen::Index base = j - pos * stride;
    Scalar acc(0.0);
    for (std::size_t i = 0; i < st.weights.size(); ++i)
      acc += st.weights[i] * v[base + (st.start + static_cast<Eigen::Index>(i)) * stride];
    out[j] = acc;
  }
  return out;
}

/// d^mu f on the grid. Uses the exact evaluator when present (the result keeps a
/// shifted evaluator, so derivatives compose exactly); otherwise applies
/// second-order finite differences axis by axis.
template <typename Scalar>
SampledFunction<Scalar> partial_derivative(const SampledFunction<Scalar>& f, const MultiIndex& mu) {
  const Grid& grid = f.grid();
  if (mu.dim() != grid.dim())
    fail(ErrorKind::InvalidArgument, "multi-index dimension " + std::to_string(mu.dim()) +
                                         " does not match grid dimension " + std::to_string(grid.dim()));
  if (mu.is_zero()) return f;
  if (f.has_exact()) {
    auto inner = f.exact();
    typename SampledFunction<Scalar>::Evaluator shifted = [inner, mu](const MultiIndex& nu, PointRef x) {
      return inner(mu + nu, x);
    };
    SampledFunction<Scalar> out(grid, std::move(shifted), f.analytic());
    out.set_label(f.label());
    return out;
  }
  for (int a = 0; a < grid.dim(); ++a) {
    if (mu[a] > 0 && grid.axis(a).points < 2 * mu[a] + 1)
      fail(ErrorKind::Domain, "grid too coarse for derivative order " + std::to_string(mu[a]) + " on axis " +
                                  std::to_string(a) + ": need " + std::to_string(2 * mu[a] + 1) + " points");
  }
  auto v = f.values();
  for (int a = 0; a < grid.dim(); ++a) v = differentiate_axis<Scalar>(grid, v, a, mu[a]);
  SampledFunction<Scalar> out(grid, std::move(v), f.analytic(), DerivativePath::FiniteDifference);
  out.set_label(f.label());
  return out;
}

template <typename Scalar>
struct QuadratureResult {
  Scalar value;
  double cell_volume;
};

/// Tensor-product composite Simpson integral over the grid box, summed in grid order.
template <typename Scalar>
QuadratureResult<Scalar> quadrature(const Grid& grid, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& values) {
  if (values.size() != grid.size()) fail(ErrorKind::InvalidArgument, "quadrature: value count mismatch");
  const Eigen::VectorXd& w = grid.quadrature_weights();
  Scalar sum(0.0);
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (!is_finite(values[j])) fail(ErrorKind::Numerical, "quadrature: non-finite integrand");
    sum += w[j] * values[j];
  }
  return {sum, grid.cell_volume()};
}

template <typename Scalar>
QuadratureResult<Scalar> quadrature(const SampledFunction<Scalar>& f) {
  return quadrature<Scalar>(f.grid(), f.values());
}

/// Build a real function from an expression in x1..xk; derivatives via jets.
RealFunction function_from_expression(const Grid& grid, const std::string& expr);

/// max |df/dx + i df/dy| over interior points, relative to max |df/dx|; a finite
/// difference spot check of the Cauchy-Riemann equations for each complex axis.
double cauchy_riemann_residual(const ComplexFunction& f);

/// Raw grid-values file: little-endian
///   uint32 k | k x uint64 counts | k x (float64 lo, float64 hi) | row-major float64 values.
void write_grid_values(const std::string& path, const Grid& grid, const Eigen::VectorXd& values);
RealFunction read_grid_values(const std::string& path);

enum class FunctionalKind { Delta, DeltaCombination, Quadrature };

const char* to_string(FunctionalKind kind);

/// Finite linear combination of point evaluations, v(g) = sum_j c_j g(y_j).
class DiscreteFunctional {
 public:
  struct Term {
    Point point;
    double coeff;
  };

  DiscreteFunctional() = default;
  DiscreteFunctional(FunctionalKind kind, std::vector<Term> terms);

  static DiscreteFunctional delta(Point y);
  static DiscreteFunctional combination(std::vector<Term> terms);
  /// Composite Simpson weights of the grid as point masses: v(g) ~ integral of g.
  static DiscreteFunctional integral(const Grid& grid);

  FunctionalKind kind() const { return kind_; }
  const std::vector<Term>& terms() const { return terms_; }
  int dim() const { return terms_.empty() ? 0 : static_cast<int>(terms_.front().point.size()); }

  /// a*v1 + b*v2, terms concatenated.
  static DiscreteFunctional linear_combination(double a, const DiscreteFunctional& v1, double b,
                                               const DiscreteFunctional& v2);

  /// Exact evaluation: uses g's evaluator, or grid values when every point is a node.
  template <typename Scalar>
  Scalar apply(const SampledFunction<Scalar>& g) const {
    Scalar acc(0.0);
    for (const Term& t : terms_) {
      Scalar gy;
      if (g.has_exact()) {
        gy = g.at(t.point);
      } else {
        const Eigen::Index node = g.grid().find_node(t.point);
        if (node < 0) fail(ErrorKind::Domain, "functional point is not a grid node and g has no evaluator");
        gy = g.values()[node];
      }
      acc += t.coeff * gy;
    }
    return acc;
  }

 private:
  FunctionalKind kind_ = FunctionalKind::DeltaCombination;
  std::vector<Term> terms_;
};

}  // namespace wk
