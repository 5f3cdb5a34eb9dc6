#include "wk/grid.hpp"

#include "wk/error.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace wk {

MultiIndex::MultiIndex(std::vector<int> components) : c_(std::move(components)) {
  for (int v : c_) {
    if (v < 0) fail(ErrorKind::InvalidArgument, "multi-index components must be nonnegative");
  }
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  std::vector<int> c(static_cast<std::size_t>(dim), 0);
  c[static_cast<std::size_t>(axis)] = 1;
  return MultiIndex(std::move(c));
}

int MultiIndex::order() const { return std::accumulate(c_.begin(), c_.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : c_) {
    for (int i = 2; i <= v; ++i) f *= i;
  }
  return f;
}

bool MultiIndex::dominated_by(const MultiIndex& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] > other.c_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.dim() != dim()) fail(ErrorKind::InvalidArgument, "multi-index dimension mismatch");
  std::vector<int> c(c_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  if (!o.dominated_by(*this)) fail(ErrorKind::InvalidArgument, "multi-index difference would be negative");
  std::vector<int> c(c_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
  return MultiIndex(std::move(c));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

namespace {

// Compositions of `total` into `dim` parts, first component largest first.
void compositions(int dim, int total, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == dim - 1) {
    prefix.push_back(total);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    prefix.push_back(v);
    compositions(dim, total - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int dim, int max_order) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "multi-index dimension must be >= 1");
  if (max_order < 0) fail(ErrorKind::InvalidArgument, "multi-index order cap must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  for (int total = 0; total <= max_order; ++total) compositions(dim, total, prefix, out);
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::size_t multiindex_count(int dim, int max_order) {
  return static_cast<std::size_t>(binomial(max_order + dim, dim));
}

double Axis::node(Eigen::Index i) const {
  if (i == points - 1) return hi;
  return lo + static_cast<double>(i) * spacing();
}

Eigen::VectorXd simpson_weights(const Axis& axis) {
  const Eigen::Index n = axis.points;
  if (n < 3) fail(ErrorKind::InvalidArgument, "Simpson quadrature needs at least 3 points per axis");
  const double h = axis.spacing();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  // Intervals covered by composite Simpson: all of them when n is odd, all but
  // the last three when n is even.
  const Eigen::Index simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
  for (Eigen::Index i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (n % 2 == 0) {
    const Eigen::Index s = n - 4;
    w[s] += 3.0 * h / 8.0;
    w[s + 1] += 9.0 * h / 8.0;
    w[s + 2] += 9.0 * h / 8.0;
    w[s + 3] += 3.0 * h / 8.0;
  }
  return w;
}

Grid::Grid(std::vector<Axis> axes) {
  if (axes.empty()) fail(ErrorKind::InvalidArgument, "grid needs at least one axis");
  auto d = std::make_shared<Data>();
  d->axes = std::move(axes);
  const int dim = static_cast<int>(d->axes.size());
  for (const Axis& a : d->axes) {
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi))
      fail(ErrorKind::InvalidArgument, "grid axis needs finite lo < hi");
    if (a.points < 3) fail(ErrorKind::InvalidArgument, "grid axis needs at least 3 points");
  }
  d->strides.assign(static_cast<std::size_t>(dim), 1);
  for (int i = dim - 2; i >= 0; --i) {
    d->strides[static_cast<std::size_t>(i)] =
        d->strides[static_cast<std::size_t>(i + 1)] * d->axes[static_cast<std::size_t>(i + 1)].points;
  }
  d->size = d->strides[0] * d->axes[0].points;

  std::vector<Eigen::VectorXd> nodes, w1;
  for (const Axis& a : d->axes) {
    Eigen::VectorXd n(a.points);
    for (Eigen::Index i = 0; i < a.points; ++i) n[i] = a.node(i);
    nodes.push_back(std::move(n));
    w1.push_back(simpson_weights(a));
  }
  d->points.resize(dim, d->size);
  d->weights.resize(d->size);
  for (Eigen::Index j = 0; j < d->size; ++j) {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      const Eigen::Index pos = (j / d->strides[static_cast<std::size_t>(a)]) % d->axes[static_cast<std::size_t>(a)].points;
      d->points(a, j) = nodes[static_cast<std::size_t>(a)][pos];
      w *= w1[static_cast<std::size_t>(a)][pos];
    }
    d->weights[j] = w;
  }
  data_ = std::move(d);
}

Grid Grid::uniform(int dim, double lo, double hi, Eigen::Index points) {
  return Grid(std::vector<Axis>(static_cast<std::size_t>(dim), Axis{lo, hi, points}));
}

const std::vector<Axis>& Grid::axes() const {
  static const std::vector<Axis> empty;
  return data_ ? data_->axes : empty;
}

Eigen::Index Grid::axis_position(Eigen::Index flat, int axis) const {
  return (flat / stride(axis)) % this->axis(axis).points;
}

Point Grid::point(Eigen::Index flat) const { return points().col(flat); }

bool Grid::on_boundary(Eigen::Index flat) const {
  for (int a = 0; a < dim(); ++a) {
    const Eigen::Index p = axis_position(flat, a);
    if (p == 0 || p == axis(a).points - 1) return true;
  }
  return false;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const Axis& a : axes()) v *= a.spacing();
  return v;
}

bool Grid::contains(PointRef x, double slack) const {
  if (x.size() != dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    if (x[a] < axis(a).lo - slack || x[a] > axis(a).hi + slack) return false;
  }
  return true;
}

Eigen::Index Grid::find_node(PointRef x, double rel_tol) const {
  if (x.size() != dim()) return -1;
  Eigen::Index flat = 0;
  for (int a = 0; a < dim(); ++a) {
    const Axis& ax = axis(a);
    const double t = (x[a] - ax.lo) / ax.spacing();
    const double r = std::round(t);
    if (std::abs(t - r) > rel_tol || r < 0 || r > static_cast<double>(ax.points - 1)) return -1;
    flat += static_cast<Eigen::Index>(r) * stride(a);
  }
  return flat;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os.precision(17);
  for (int a = 0; a < dim(); ++a) {
    os << (a ? " x " : "") << '[' << axis(a).lo << ',' << axis(a).hi << "]:" << axis(a).points;
  }
  return os.str();
}

bool Grid::operator==(const Grid& o) const {
  if (dim() != o.dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    if (axis(a).lo != o.axis(a).lo || axis(a).hi != o.axis(a).hi || axis(a).points != o.axis(a).points) return false;
  }
  return true;
}

}  // namespace wk
