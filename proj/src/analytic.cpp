#include "wk/equivalence.hpp"

#include "wk/error.hpp"

#include <cmath>
#include <numbers>

namespace wk {

namespace {

using cplx = std::complex<double>;

int complex_dim(const DefiningFamily& family) {
  if (!family.complex_domain() || family.dim() % 2 != 0)
    fail(ErrorKind::InvalidArgument, "family is not defined on C^k");
  return family.dim() / 2;
}

void require_polydisk(const ConditionIIWitness& w, double r, int k) {
  if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "polydisk radius must be positive");
  if (r * std::sqrt(static_cast<double>(k)) > w.radius * (1.0 + 1e-12))
    fail(ErrorKind::Domain, "polydisk of radius " + std::to_string(r) + " does not fit in the witness ball of radius " +
                                std::to_string(w.radius));
}

}  // namespace

BoundReport cauchy_derivative_bound(const ComplexFunction& f, const DefiningFamily& family, std::size_t gamma, int m,
                                    double r, double tol) {
  const int k = complex_dim(family);
  if (!f.analytic()) fail(ErrorKind::InvalidArgument, "Cauchy bound needs a function declared analytic");
  if (m < 0) fail(ErrorKind::InvalidArgument, "derivative order must be >= 0");
  const ConditionIIWitness& w = family.cond_ii(gamma);
  require_polydisk(w, r, k);
  BoundReport b;
  b.label = f.label();
  b.C = w.constant;
  b.gamma_prime = w.target;
  b.factor = 1.0;
  double fact = 1.0;
  for (int j = 1; j <= m; ++j) {
    fact *= j;
    b.factor = std::max(b.factor, fact * std::pow(r, -j));
  }
  b.lhs = sup_seminorm(f, family, gamma, m).value;
  b.rhs = b.C * b.factor * analytic_sup_seminorm(f, family, w.target).value;
  b.pass = b.lhs <= b.rhs * (1.0 + tol);
  return b;
}

MeanValueReport mean_value_check(const ComplexFunction& f, cplx z0, double r, Eigen::Index points, double tol) {
  const Grid& grid = f.grid();
  if (grid.dim() != 2) fail(ErrorKind::InvalidArgument, "mean-value check supports one complex variable");
  if (!f.has_exact()) fail(ErrorKind::InvalidArgument, "mean-value check needs an exact evaluator");
  if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "disk radius must be positive");
  if (points < 3) fail(ErrorKind::InvalidArgument, "disk sampling needs at least 3 points");
  if (z0.real() - r < grid.axis(0).lo || z0.real() + r > grid.axis(0).hi || z0.imag() - r < grid.axis(1).lo ||
      z0.imag() + r > grid.axis(1).hi)
    fail(ErrorKind::Domain, "disk leaves the grid box");
  const Axis radial{0.0, r, points};
  const Eigen::VectorXd wr = simpson_weights(radial);
  const Eigen::Index angles = points - 1;
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angles);
  cplx sum = 0.0;
  Point z(2);
  for (Eigen::Index i = 0; i < radial.points; ++i) {
    const double rho = radial.node(i);
    cplx ring = 0.0;
    for (Eigen::Index t = 0; t < angles; ++t) {
      const double theta = dtheta * static_cast<double>(t);
      z << z0.real() + rho * std::cos(theta), z0.imag() + rho * std::sin(theta);
      ring += f.at(z);
    }
    sum += wr[i] * rho * dtheta * ring;
  }
  MeanValueReport out;
  z << z0.real(), z0.imag();
  out.center = f.at(z);
  out.average = sum / (std::numbers::pi * r * r);
  out.residual = std::abs(out.center - out.average);
  out.pass = out.residual <= tol;
  return out;
}

AnalyticEquivalenceReport verify_analytic_lp_equivalence(const DefiningFamily& family, std::size_t gamma, double p,
                                                         const std::vector<ComplexFunction>& corpus, double r,
                                                         double tol) {
  const int k = complex_dim(family);
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidArgument, "exponent p must be a finite number >= 1");
  if (corpus.empty()) fail(ErrorKind::InvalidArgument, "corpus is empty");
  const ConditionIIWitness& w2 = family.cond_ii(gamma);
  const ConditionIWitness& w1 = family.cond_i(gamma);
  require_polydisk(w2, r, k);
  const Grid& grid = corpus.front().grid();
  if (grid.dim() != family.dim()) fail(ErrorKind::InvalidArgument, "corpus grid does not match the family");

  AnalyticEquivalenceReport rep;
  rep.gamma_ii = w2.target;
  rep.gamma_i = w1.target;
  rep.C = w2.constant;
  rep.r = r;
  rep.backward_constant = w2.constant * std::pow(std::numbers::pi * r * r, -static_cast<double>(k) / p);
  const Eigen::VectorXd L = w1.summable.sample(grid);
  rep.A = std::pow(quadrature<double>(grid, L.array().pow(p).matrix()).value, 1.0 / p);
  rep.pass = true;
  for (const ComplexFunction& f : corpus) {
    if (!(f.grid() == grid)) fail(ErrorKind::InvalidArgument, "corpus members must share one grid");
    AnalyticEquivalenceEntry e;
    e.label = f.label();
    e.sup = analytic_sup_seminorm(f, family, gamma).value;
    e.lp_prime = analytic_lp_seminorm(f, family, w2.target, p).value;
    e.backward_rhs = rep.backward_constant * e.lp_prime;
    e.lp = analytic_lp_seminorm(f, family, gamma, p).value;
    e.sup_prime = analytic_sup_seminorm(f, family, w1.target).value;
    e.forward_rhs = rep.A * e.sup_prime;
    e.pass = e.sup <= e.backward_rhs * (1.0 + tol) && e.lp <= e.forward_rhs * (1.0 + tol);
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace wk
