#pragma once

#include <Eigen/Core>

#include <compare>
#include <memory>
#include <cstddef>
#include <string>
#include <vector>

namespace wk {

using Point = Eigen::VectorXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

/// Multi-index mu = (mu_1, ..., mu_k) of nonnegative differentiation orders.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);
  static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }
  static MultiIndex unit(int dim, int axis);

  int dim() const { return static_cast<int>(c_.size()); }
  int order() const;
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& components() const { return c_; }
  bool is_zero() const { return order() == 0; }

  /// mu! = prod mu_i!
  double factorial() const;
  bool dominated_by(const MultiIndex& other) const;  // componentwise <=

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  auto operator<=>(const MultiIndex&) const = default;

  std::string to_string() const;

 private:
  std::vector<int> c_;
};

/// All multi-indices with |mu| <= max_order, graded, then lexicographic with the
/// first component largest: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...
std::vector<MultiIndex> enumerate_multiindices(int dim, int max_order);

/// Number of multi-indices in dimension k with |mu| <= m, binomial(m+k, k).
std::size_t multiindex_count(int dim, int max_order);

double binomial(int n, int k);

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  Eigen::Index points = 3;

  double spacing() const { return (hi - lo) / static_cast<double>(points - 1); }
  double node(Eigen::Index i) const;
};

/// Composite Simpson weights on a uniform axis. Odd point counts use the plain
/// composite rule; even counts close the last three intervals with Simpson 3/8.
/// Both are exact for cubics.
Eigen::VectorXd simpson_weights(const Axis& axis);

/// Uniform tensor-product grid, row-major (last axis fastest). Immutable; copies
/// share the node and weight tables.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes);
  static Grid uniform(int dim, double lo, double hi, Eigen::Index points);

  int dim() const { return static_cast<int>(axes().size()); }
  const std::vector<Axis>& axes() const;
  const Axis& axis(int i) const { return axes()[static_cast<std::size_t>(i)]; }
  Eigen::Index size() const { return data_ ? data_->size : 0; }
  Eigen::Index stride(int axis) const { return data_->strides[static_cast<std::size_t>(axis)]; }

  Eigen::Index axis_position(Eigen::Index flat, int axis) const;
  Point point(Eigen::Index flat) const;
  /// dim x size matrix of all grid points; column j is point(j).
  const Eigen::MatrixXd& points() const { return data_->points; }

  bool on_boundary(Eigen::Index flat) const;
  double cell_volume() const;
  /// Tensor-product Simpson weights, one per point.
  const Eigen::VectorXd& quadrature_weights() const { return data_->weights; }
  bool contains(PointRef x, double slack = 0.0) const;
  /// Flat index of the grid node equal to x within rel_tol * spacing, or -1.
  Eigen::Index find_node(PointRef x, double rel_tol = 1e-9) const;

  std::string describe() const;
  bool operator==(const Grid& o) const;

 private:
  struct Data {
    std::vector<Axis> axes;
    std::vector<Eigen::Index> strides;
    Eigen::Index size = 0;
    Eigen::MatrixXd points;
    Eigen::VectorXd weights;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace wk
