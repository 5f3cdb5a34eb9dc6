#include "wk/sampled_function.hpp"

#include "wk/expression.hpp"
#include "wk/jet.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace wk {

const char* to_string(DerivativePath path) {
  return path == DerivativePath::Exact ? "exact" : "finite-difference";
}

const char* to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::Delta: return "delta";
    case FunctionalKind::DeltaCombination: return "delta-combination";
    case FunctionalKind::Quadrature: return "quadrature";
  }
  return "?";
}

std::vector<double> finite_difference_weights(int order, std::span<const double> offsets) {
  const int n = static_cast<int>(offsets.size());
  if (n <= order) fail(ErrorKind::InvalidArgument, "stencil too short for derivative order");
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const double c3 = offsets[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = c[j][order];
  return w;
}

std::vector<AxisStencil> axis_stencils(const Axis& axis, int order) {
  const Eigen::Index n = axis.points;
  const Eigen::Index half = (order + 1) / 2;
  const Eigen::Index one_sided = order + 2;
  if (n < one_sided) fail(ErrorKind::Domain, "axis too short for finite-difference order");
  const double scale = std::pow(axis.spacing(), -order);
  std::vector<AxisStencil> out;
  out.reserve(static_cast<std::size_t>(n));
  std::vector<double> central;
  for (Eigen::Index pos = 0; pos < n; ++pos) {
    Eigen::Index start, width;
    if (pos - half >= 0 && pos + half <= n - 1) {
      start = pos - half;
      width = 2 * half + 1;
    } else {
      width = one_sided;
      start = pos < half ? 0 : n - width;
    }
    const bool is_central = width == 2 * half + 1 && start == pos - half;
    if (is_central && !central.empty()) {
      out.push_back({start, central});
      continue;
    }
    std::vector<double> offs(static_cast<std::size_t>(width));
    for (Eigen::Index i = 0; i < width; ++i) offs[static_cast<std::size_t>(i)] = static_cast<double>(start + i - pos);
    auto w = finite_difference_weights(order, offs);
    for (double& x : w) x *= scale;
    if (is_central) central = w;
    out.push_back({start, std::move(w)});
  }
  return out;
}

RealFunction function_from_expression(const Grid& grid, const std::string& expr) {
  const int dim = grid.dim();
  const Expression e = Expression::parse(expr, coordinate_names("x", dim));
  RealFunction::Evaluator eval = [e, dim](const MultiIndex& mu, PointRef x) {
    if (mu.is_zero()) {
      std::vector<double> v(x.data(), x.data() + x.size());
      return e.evaluate<double>(v);
    }
    const auto layout = JetLayout::get(dim, mu.order());
    std::vector<Jet> v;
    v.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) v.push_back(Jet::variable(layout, i, x[i]));
    return e.evaluate<Jet>(v).derivative(mu);
  };
  RealFunction f(grid, std::move(eval));
  f.set_label(expr);
  return f;
}

double cauchy_riemann_residual(const ComplexFunction& f) {
  const Grid& grid = f.grid();
  if (grid.dim() % 2 != 0) fail(ErrorKind::InvalidArgument, "complex functions need an even-dimensional grid");
  double worst = 0.0, scale = 0.0;
  for (int a = 0; a < grid.dim(); a += 2) {
    const auto fx = differentiate_axis<std::complex<double>>(grid, f.values(), a, 1);
    const auto fy = differentiate_axis<std::complex<double>>(grid, f.values(), a + 1, 1);
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      if (grid.on_boundary(j)) continue;
      worst = std::max(worst, std::abs(fx[j] + std::complex<double>(0.0, 1.0) * fy[j]));
      scale = std::max(scale, std::abs(fx[j]));
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

namespace {

static_assert(std::endian::native == std::endian::little, "grid-values IO assumes a little-endian host");

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is, const std::string& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) fail(ErrorKind::Io, "truncated grid-values file " + path);
  return v;
}

}  // namespace

void write_grid_values(const std::string& path, const Grid& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.size()) fail(ErrorKind::InvalidArgument, "value count does not match grid");
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.dim()));
  for (const Axis& a : grid.axes()) put<std::uint64_t>(os, static_cast<std::uint64_t>(a.points));
  for (const Axis& a : grid.axes()) {
    put<double>(os, a.lo);
    put<double>(os, a.hi);
  }
  os.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(sizeof(double) * values.size()));
  if (!os) fail(ErrorKind::Io, "failed writing " + path);
}

RealFunction read_grid_values(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::NotFound, "cannot open grid-values file " + path);
  const auto k = get<std::uint32_t>(is, path);
  if (k == 0 || k > 16) fail(ErrorKind::InvalidArgument, "implausible dimension in " + path);
  std::vector<Axis> axes(k);
  for (auto& a : axes) a.points = static_cast<Eigen::Index>(get<std::uint64_t>(is, path));
  for (auto& a : axes) {
    a.lo = get<double>(is, path);
    a.hi = get<double>(is, path);
  }
  Grid grid(std::move(axes));
  Eigen::VectorXd v(grid.size());
  if (!is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size())))
    fail(ErrorKind::Io, "truncated grid-values file " + path);
  RealFunction f(grid, std::move(v));
  f.set_label(path);
  return f;
}

DiscreteFunctional::DiscreteFunctional(FunctionalKind kind, std::vector<Term> terms)
    : kind_(kind), terms_(std::move(terms)) {
  if (terms_.empty()) fail(ErrorKind::InvalidArgument, "functional needs at least one term");
  for (const Term& t : terms_) {
    if (t.point.size() != terms_.front().point.size())
      fail(ErrorKind::InvalidArgument, "functional points have mixed dimensions");
    if (!std::isfinite(t.coeff)) fail(ErrorKind::InvalidArgument, "functional coefficient is not finite");
  }
}

DiscreteFunctional DiscreteFunctional::delta(Point y) {
  return DiscreteFunctional(FunctionalKind::Delta, {Term{std::move(y), 1.0}});
}

DiscreteFunctional DiscreteFunctional::combination(std::vector<Term> terms) {
  return DiscreteFunctional(FunctionalKind::DeltaCombination, std::move(terms));
}

DiscreteFunctional DiscreteFunctional::integral(const Grid& grid) {
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index j = 0; j < grid.size(); ++j) terms.push_back({grid.point(j), grid.quadrature_weights()[j]});
  return DiscreteFunctional(FunctionalKind::Quadrature, std::move(terms));
}

DiscreteFunctional DiscreteFunctional::linear_combination(double a, const DiscreteFunctional& v1, double b,
                                                          const DiscreteFunctional& v2) {
  std::vector<Term> terms;
  for (const Term& t : v1.terms_) terms.push_back({t.point, a * t.coeff});
  for (const Term& t : v2.terms_) terms.push_back({t.point, b * t.coeff});
  return DiscreteFunctional(FunctionalKind::DeltaCombination, std::move(terms));
}

}  // namespace wk
