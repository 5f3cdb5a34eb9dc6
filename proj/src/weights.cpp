#include "wk/weights.hpp"

#include "wk/error.hpp"
#include "wk/sampled_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace wk {

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::IndicatorBox: return "indicator-box";
    case WeightKind::Polynomial: return "polynomial";
    case WeightKind::GelfandShilov: return "gelfand-shilov-exp";
    case WeightKind::ExpTypeAnalytic: return "exp-type-analytic";
    case WeightKind::Custom: return "custom";
    case WeightKind::Tensor: return "tensor";
  }
  return "?";
}

WeightKind weight_kind_from_string(const std::string& name) {
  if (name == "indicator-box" || name == "indicator") return WeightKind::IndicatorBox;
  if (name == "polynomial") return WeightKind::Polynomial;
  if (name == "gelfand-shilov-exp" || name == "gelfand-shilov") return WeightKind::GelfandShilov;
  if (name == "exp-type-analytic" || name == "exp-type") return WeightKind::ExpTypeAnalytic;
  if (name == "custom") return WeightKind::Custom;
  fail(ErrorKind::InvalidArgument, "unknown family kind '" + name + "'");
}

Eigen::VectorXd WeightFunction::sample(const Grid& grid) const {
  if (grid.dim() != dim)
    fail(ErrorKind::InvalidArgument, "weight of dimension " + std::to_string(dim) + " sampled on a " +
                                         std::to_string(grid.dim()) + "-dimensional grid");
  Eigen::VectorXd out(grid.size());
  const Eigen::MatrixXd& pts = grid.points();
  for (Eigen::Index j = 0; j < grid.size(); ++j) out[j] = eval(pts.col(j));
  return out;
}

namespace {

std::string number_label(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

bool same_number(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

std::optional<std::size_t> find_value(const std::vector<double>& values, double v) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (same_number(values[i], v)) return i;
  }
  return std::nullopt;
}

// Largest listed value strictly below v.
std::optional<std::size_t> next_below(const std::vector<double>& values, double v) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < v && !same_number(values[i], v) && (!best || values[i] > values[*best])) best = i;
  }
  return best;
}

WeightFunction make_weight(int dim, WeightKind kind, std::vector<double> params, std::function<double(PointRef)> f) {
  return WeightFunction{dim, kind, std::move(params), std::move(f)};
}

double param(const FamilySpec& spec, const std::string& name, std::optional<double> fallback = std::nullopt) {
  auto it = spec.params.find(name);
  if (it != spec.params.end()) return it->second;
  if (fallback) return *fallback;
  fail(ErrorKind::InvalidArgument, std::string(to_string(spec.kind)) + " family needs parameter '" + name + "'");
}

DefiningFamily polynomial_family(const FamilySpec& spec) {
  const int k = spec.k;
  std::vector<DefiningFamily::Entry> entries;
  for (double l : spec.indices) {
    if (!(l >= 0.0) || !std::isfinite(l)) fail(ErrorKind::InvalidArgument, "polynomial index l must be >= 0");
    auto w = make_weight(k, WeightKind::Polynomial, {l}, [l](PointRef x) { return std::pow(1.0 + x.norm(), l); });
    DefiningFamily::Entry e{number_label(l), l, std::move(w), std::nullopt, std::nullopt};
    if (auto t = find_value(spec.indices, l + k + 1)) {
      const double decay = -(k + 1.0);
      e.cond_i = ConditionIWitness{*t, make_weight(k, WeightKind::Custom, {decay}, [decay](PointRef x) {
                                     return std::pow(1.0 + x.norm(), decay);
                                   })};
    }
    e.cond_ii = ConditionIIWitness{entries.size(), 1.0, std::pow(2.0, l)};
    entries.push_back(std::move(e));
  }
  return DefiningFamily(k, WeightKind::Polynomial, std::move(entries));
}

double box_indicator(PointRef x, double n) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > n) return 0.0;
  }
  return 1.0;
}

DefiningFamily indicator_family(const FamilySpec& spec) {
  const int k = spec.k;
  std::vector<DefiningFamily::Entry> entries;
  for (double n : spec.indices) {
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::InvalidArgument, "indicator box half-width must be > 0");
    auto w = make_weight(k, WeightKind::IndicatorBox, {n}, [n](PointRef x) { return box_indicator(x, n); });
    DefiningFamily::Entry e{number_label(n), n, std::move(w), std::nullopt, std::nullopt};
    if (auto t = find_value(spec.indices, n + 1.0)) {
      e.cond_i = ConditionIWitness{*t, make_weight(k, WeightKind::IndicatorBox, {n},
                                                   [n](PointRef x) { return box_indicator(x, n); })};
      e.cond_ii = ConditionIIWitness{*t, 1.0, 1.0};
    }
    entries.push_back(std::move(e));
  }
  return DefiningFamily(k, WeightKind::IndicatorBox, std::move(entries));
}

DefiningFamily gelfand_shilov_family(const FamilySpec& spec) {
  const int k = spec.k;
  const double alpha = param(spec, "alpha");
  const double a_min = param(spec, "A", 0.0);
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidArgument, "Gelfand-Shilov family needs alpha > 0");
  if (!(a_min >= 0.0)) fail(ErrorKind::InvalidArgument, "Gelfand-Shilov family needs A >= 0");
  const double beta = 1.0 / alpha;
  const double radius = 1.0;
  std::vector<DefiningFamily::Entry> entries;
  for (double a : spec.indices) {
    if (!(a > a_min) || !std::isfinite(a))
      fail(ErrorKind::InvalidArgument, "Gelfand-Shilov index A' must exceed A = " + number_label(a_min));
    auto w = make_weight(k, WeightKind::GelfandShilov, {alpha, a},
                         [a, beta](PointRef x) { return std::exp(std::pow(x.norm() / a, beta)); });
    DefiningFamily::Entry e{number_label(a), a, std::move(w), std::nullopt, std::nullopt};
    const auto below = next_below(spec.indices, a);
    if (below) {
      const double b = spec.indices[*below];
      e.cond_i = ConditionIWitness{*below, make_weight(k, WeightKind::Custom, {alpha, a, b}, [a, b, beta](PointRef x) {
                                     const double r = x.norm();
                                     return std::exp(std::pow(r / a, beta) - std::pow(r / b, beta));
                                   })};
    }
    if (alpha >= 1.0) {
      // |x|^beta is subadditive for beta <= 1.
      e.cond_ii = ConditionIIWitness{entries.size(), radius, std::exp(std::pow(radius / a, beta))};
    } else if (below) {
      // sup_t ((t + rho)/a)^beta - (t/b)^beta, attained at the unique critical point.
      const double b = spec.indices[*below];
      const double t = radius / (std::pow(a / b, beta / (beta - 1.0)) - 1.0);
      const double g = std::pow((t + radius) / a, beta) - std::pow(t / b, beta);
      e.cond_ii = ConditionIIWitness{*below, radius, std::exp(std::max(g, std::pow(radius / a, beta)))};
    }
    entries.push_back(std::move(e));
  }
  return DefiningFamily(k, WeightKind::GelfandShilov, std::move(entries));
}

DefiningFamily exp_type_family(const FamilySpec& spec) {
  const int real_dim = 2 * spec.k;
  std::vector<DefiningFamily::Entry> entries;
  for (double a : spec.indices) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::InvalidArgument, "exp-type index a must be > 0");
    auto w = make_weight(real_dim, WeightKind::ExpTypeAnalytic, {a}, [a](PointRef z) { return std::exp(-a * z.norm()); });
    DefiningFamily::Entry e{number_label(a), a, std::move(w), std::nullopt, std::nullopt};
    if (auto below = next_below(spec.indices, a)) {
      const double b = spec.indices[*below];
      e.cond_i = ConditionIWitness{*below, make_weight(real_dim, WeightKind::Custom, {a - b}, [a, b](PointRef z) {
                                     return std::exp(-(a - b) * z.norm());
                                   })};
      e.cond_ii = ConditionIIWitness{*below, 1.0, std::exp(b)};
    }
    entries.push_back(std::move(e));
  }
  return DefiningFamily(real_dim, WeightKind::ExpTypeAnalytic, std::move(entries), true);
}

}  // namespace

DefiningFamily::DefiningFamily(int dim, WeightKind kind, std::vector<Entry> entries, bool complex_domain)
    : dim_(dim), kind_(kind), entries_(std::move(entries)), complex_domain_(complex_domain) {
  if (dim_ < 1) fail(ErrorKind::InvalidArgument, "family dimension must be >= 1");
  if (entries_.empty()) fail(ErrorKind::InvalidArgument, "family index list is empty");
  for (const Entry& e : entries_) {
    if (!e.weight.eval || e.weight.dim != dim_)
      fail(ErrorKind::InvalidArgument, "family index '" + e.label + "' has a weight of the wrong dimension");
    if (e.cond_i && (e.cond_i->target >= entries_.size() || e.cond_i->summable.dim != dim_))
      fail(ErrorKind::InvalidArgument, "condition (I) witness of '" + e.label + "' points outside the family");
    if (e.cond_ii) {
      if (e.cond_ii->target >= entries_.size())
        fail(ErrorKind::InvalidArgument, "condition (II) witness of '" + e.label + "' points outside the family");
      if (!(e.cond_ii->radius > 0.0) || !(e.cond_ii->constant > 0.0))
        fail(ErrorKind::InvalidArgument, "condition (II) witness of '" + e.label + "' needs radius > 0 and C > 0");
    }
  }
}

std::size_t DefiningFamily::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].label == label) return i;
  }
  double v = 0.0;
  auto [end, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
  if (ec == std::errc() && end == label.data() + label.size()) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (same_number(entries_[i].value, v)) return i;
    }
  }
  fail(ErrorKind::NotFound, "family has no index '" + label + "'");
}

std::size_t DefiningFamily::index_of(double value) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (same_number(entries_[i].value, value)) return i;
  }
  fail(ErrorKind::NotFound, "family has no index '" + number_label(value) + "'");
}

const ConditionIWitness& DefiningFamily::cond_i(std::size_t i) const {
  const auto& w = entry(i).cond_i;
  if (!w) fail(ErrorKind::NotFound, "index '" + label(i) + "' carries no condition (I) witness");
  return *w;
}

const ConditionIIWitness& DefiningFamily::cond_ii(std::size_t i) const {
  const auto& w = entry(i).cond_ii;
  if (!w) fail(ErrorKind::NotFound, "index '" + label(i) + "' carries no condition (II) witness");
  return *w;
}

DefiningFamily DefiningFamily::with_witnesses(std::size_t i, std::optional<ConditionIWitness> w1,
                                              std::optional<ConditionIIWitness> w2) const {
  std::vector<Entry> entries = entries_;
  entries.at(i).cond_i = std::move(w1);
  entries.at(i).cond_ii = std::move(w2);
  return DefiningFamily(dim_, kind_, std::move(entries), complex_domain_);
}

DefiningFamily make_family(const FamilySpec& spec) {
  if (spec.k < 1) fail(ErrorKind::InvalidArgument, "family dimension k must be >= 1");
  if (spec.indices.empty()) fail(ErrorKind::InvalidArgument, "family index list is empty");
  DefiningFamily family = [&] {
    switch (spec.kind) {
      case WeightKind::Polynomial: return polynomial_family(spec);
      case WeightKind::IndicatorBox: return indicator_family(spec);
      case WeightKind::GelfandShilov: return gelfand_shilov_family(spec);
      case WeightKind::ExpTypeAnalytic: return exp_type_family(spec);
      default: fail(ErrorKind::InvalidArgument, std::string("make_family does not build '") + to_string(spec.kind) + "' families");
    }
  }();
  const bool any_cond_i = std::any_of(family.entries().begin(), family.entries().end(),
                                      [](const auto& e) { return e.cond_i.has_value(); });
  if (!any_cond_i)
    fail(ErrorKind::InvalidArgument, std::string("index list of the ") + to_string(spec.kind) +
                                         " family leaves no index with a condition (I) witness");
  return family;
}

DefiningFamily constant_one_family(int dim) {
  auto w = WeightFunction{dim, WeightKind::Custom, {}, [](PointRef) { return 1.0; }};
  return DefiningFamily(dim, WeightKind::Custom, {DefiningFamily::Entry{"one", 0.0, std::move(w), std::nullopt, std::nullopt}});
}

TensorFamily tensor_family(const DefiningFamily& left, const DefiningFamily& right) {
  const int k1 = left.dim(), k2 = right.dim();
  std::vector<DefiningFamily::Entry> entries;
  const auto split = [k1, k2](auto f, auto g) {
    return [f, g, k1, k2](PointRef xy) { return f(xy.head(k1)) * g(xy.tail(k2)); };
  };
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      const auto& a = left.entry(i);
      const auto& b = right.entry(j);
      WeightFunction w{k1 + k2, WeightKind::Tensor, {}, split(a.weight.eval, b.weight.eval)};
      DefiningFamily::Entry e{"(" + a.label + "," + b.label + ")", std::numeric_limits<double>::quiet_NaN(),
                              std::move(w), std::nullopt, std::nullopt};
      if (a.cond_i && b.cond_i) {
        e.cond_i = ConditionIWitness{a.cond_i->target * right.size() + b.cond_i->target,
                                     WeightFunction{k1 + k2, WeightKind::Tensor, {},
                                                    split(a.cond_i->summable.eval, b.cond_i->summable.eval)}};
      }
      if (a.cond_ii && b.cond_ii) {
        e.cond_ii = ConditionIIWitness{a.cond_ii->target * right.size() + b.cond_ii->target,
                                       std::min(a.cond_ii->radius, b.cond_ii->radius),
                                       a.cond_ii->constant * b.cond_ii->constant};
      }
      entries.push_back(std::move(e));
    }
  }
  DefiningFamily product(k1 + k2, WeightKind::Tensor, std::move(entries),
                         left.complex_domain() && right.complex_domain());
  return TensorFamily{left, right, std::move(product)};
}

namespace {

void record_failure(CheckReport& r, PointRef x, const CheckOptions& o) {
  ++r.violations;
  if (r.failing.size() < o.max_failing_points) r.failing.emplace_back(x);
}

void require_grid(const DefiningFamily& family, const Grid& grid) {
  if (grid.size() == 0) fail(ErrorKind::InvalidArgument, "empty grid");
  if (grid.dim() != family.dim())
    fail(ErrorKind::InvalidArgument, "grid dimension " + std::to_string(grid.dim()) +
                                         " does not match family dimension " + std::to_string(family.dim()));
}

void require_index(const DefiningFamily& family, std::size_t i) {
  if (i >= family.size()) fail(ErrorKind::NotFound, "family index position " + std::to_string(i) + " out of range");
}

// Ratio num/den with the 0/0 and x/0 conventions; returns nullopt when skipped.
std::optional<double> ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num > 0.0) return std::numeric_limits<double>::infinity();
  return std::nullopt;
}

double halton(std::size_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
  return r;
}

}  // namespace

CheckReport check_condition_a(const DefiningFamily& family, std::size_t gamma1, std::size_t gamma2,
                              std::size_t gamma, double constant, const Grid& grid, const CheckOptions& options) {
  require_grid(family, grid);
  require_index(family, gamma1);
  require_index(family, gamma2);
  require_index(family, gamma);
  if (!(constant > 0.0)) fail(ErrorKind::InvalidArgument, "condition (a) constant must be positive");
  CheckReport r;
  r.name = "condition-a";
  const Eigen::VectorXd m1 = family.weight(gamma1).sample(grid);
  const Eigen::VectorXd m2 = family.weight(gamma2).sample(grid);
  const Eigen::VectorXd m = family.weight(gamma).sample(grid);
  r.worst = 0.0;
  r.worst_at = grid.point(0);
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    ++r.points;
    const auto q = ratio(constant * (m1[j] + m2[j]), m[j]);
    if (!q) {
      ++r.skipped;
      continue;
    }
    if (*q > r.worst) {
      r.worst = *q;
      r.worst_at = grid.point(j);
    }
    if (*q > 1.0 + options.tol) record_failure(r, grid.points().col(j), options);
  }
  r.pass = r.violations == 0;
  r.message = r.pass ? "M_gamma >= C (M_gamma1 + M_gamma2) on the grid" : "domination fails";
  return r;
}

CheckReport check_condition_c(const DefiningFamily& family, const Grid& grid, const CheckOptions& options) {
  require_grid(family, grid);
  CheckReport r;
  r.name = "condition-c";
  std::vector<Eigen::VectorXd> samples;
  for (std::size_t i = 0; i < family.size(); ++i) samples.push_back(family.weight(i).sample(grid));
  r.worst_at = grid.point(0);
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    ++r.points;
    const bool covered = std::any_of(samples.begin(), samples.end(), [j](const auto& s) { return s[j] > 0.0; });
    if (!covered) {
      if (r.violations == 0) r.worst_at = grid.point(j);
      record_failure(r, grid.points().col(j), options);
    }
  }
  r.worst = static_cast<double>(r.violations);
  r.pass = r.violations == 0;
  r.message = r.pass ? "some weight is positive at every grid point"
                     : std::to_string(r.violations) + " grid points where every weight vanishes";
  return r;
}

CheckReport check_condition_I(const DefiningFamily& family, std::size_t gamma, const Grid& grid, double p,
                              const CheckOptions& options) {
  require_grid(family, grid);
  require_index(family, gamma);
  if (!(p >= 1.0)) fail(ErrorKind::InvalidArgument, "condition (I) exponent p must be >= 1");
  const ConditionIWitness& w = family.cond_i(gamma);
  CheckReport r;
  r.name = "condition-I";
  const Eigen::VectorXd m = family.weight(gamma).sample(grid);
  const Eigen::VectorXd mt = family.weight(w.target).sample(grid);
  const Eigen::VectorXd l = w.summable.sample(grid);
  r.worst_at = grid.point(0);
  double l_max = 0.0, shell = 0.0;
  Eigen::VectorXd lp(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    ++r.points;
    if (!(l[j] >= 0.0) || !std::isfinite(l[j])) {
      record_failure(r, grid.points().col(j), options);
      lp[j] = 0.0;
      continue;
    }
    lp[j] = std::pow(l[j], p);
    l_max = std::max(l_max, l[j]);
    if (grid.on_boundary(j)) shell = std::max(shell, l[j]);
    const auto q = ratio(m[j], l[j] * mt[j]);
    if (!q) {
      ++r.skipped;
      continue;
    }
    if (*q > r.worst) {
      r.worst = *q;
      r.worst_at = grid.point(j);
    }
    if (*q > 1.0 + options.tol) record_failure(r, grid.points().col(j), options);
  }
  const double integral = quadrature<double>(grid, lp).value;
  if (!std::isfinite(integral)) fail(ErrorKind::Numerical, "quadrature of L^p is not finite");
  r.integral = integral;
  r.shell_max = l_max > 0.0 ? shell / l_max : 0.0;
  const bool decays = *r.shell_max < options.decay_threshold;
  r.pass = r.violations == 0 && decays;
  if (r.violations) r.message = "M_gamma <= L M_gamma' fails";
  else if (!decays) r.message = "L does not decay toward the box boundary (summability not certified)";
  else r.message = "M_gamma <= L M_gamma', L summable and decaying";
  return r;
}

std::vector<Point> ball_sample(int dim, double radius, std::size_t count) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dim > static_cast<int>(std::size(primes))) fail(ErrorKind::InvalidArgument, "ball sampling supports dim <= 12");
  std::vector<Point> out;
  out.push_back(Point::Zero(dim));
  for (int a = 0; a < dim; ++a) {
    Point e = Point::Zero(dim);
    e[a] = radius;
    out.push_back(e);
    e[a] = -radius;
    out.push_back(e);
  }
  std::size_t accepted = 0;
  for (std::size_t i = 1; accepted < count; ++i) {
    Point y(dim);
    for (int a = 0; a < dim; ++a) y[a] = 2.0 * halton(i, primes[a]) - 1.0;
    if (y.squaredNorm() > 1.0) continue;
    out.push_back(radius * y);
    ++accepted;
  }
  return out;
}

CheckReport check_condition_II(const DefiningFamily& family, std::size_t gamma, const Grid& grid,
                               std::size_t ball_samples, const CheckOptions& options) {
  require_grid(family, grid);
  require_index(family, gamma);
  const ConditionIIWitness& w = family.cond_ii(gamma);
  CheckReport r;
  r.name = "condition-II";
  const auto shifts = ball_sample(family.dim(), w.radius, ball_samples);
  const Eigen::VectorXd m = family.weight(gamma).sample(grid);
  const WeightFunction& target = family.weight(w.target);
  r.worst_at = grid.point(0);
  Point xy(family.dim());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    ++r.points;
    const auto x = grid.points().col(j);
    bool failed = false;
    for (const Point& y : shifts) {
      xy = x + y;
      const auto q = ratio(m[j], w.constant * target(xy));
      if (!q) {
        ++r.skipped;
        continue;
      }
      if (*q > r.worst) {
        r.worst = *q;
        r.worst_at = x;
      }
      if (*q > 1.0 + options.tol) failed = true;
    }
    if (failed) record_failure(r, x, options);
  }
  r.pass = r.violations == 0;
  r.message = r.pass ? "M_gamma(x) <= C M_gamma'(x+y) on the sampled ball" : "shift stability fails";
  return r;
}

}  // namespace wk
