#include "wk/equivalence.hpp"

#include "wk/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wk {

namespace {

std::string point_string(PointRef x) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

// Accumulates num/den ratios into a report with the same conventions as the
// family checks: 0/0 skipped, x/0 a hard failure.
class RatioSweep {
 public:
  RatioSweep(std::string name, double tol) : tol_(tol) {
    r_.name = std::move(name);
    r_.worst = 0.0;
  }

  void add(double num, double den, PointRef x) {
    ++r_.points;
    if (r_.worst_at.size() == 0) r_.worst_at = x;
    double q;
    if (den > 0.0) {
      q = num / den;
    } else if (num > 0.0) {
      q = std::numeric_limits<double>::infinity();
    } else {
      ++r_.skipped;
      return;
    }
    if (q > r_.worst) {
      r_.worst = q;
      r_.worst_at = x;
    }
    if (q > 1.0 + tol_) {
      ++r_.violations;
      if (r_.failing.size() < 16) r_.failing.emplace_back(x);
    }
  }

  CheckReport finish(const std::string& ok, const std::string& bad) {
    r_.pass = r_.violations == 0;
    r_.message = r_.pass ? ok : bad + " (worst ratio " + std::to_string(r_.worst) + " at " + point_string(r_.worst_at) + ")";
    return r_;
  }

 private:
  CheckReport r_;
  double tol_;
};

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

std::vector<std::pair<MultiIndex, double>> sub_indices(const MultiIndex& mu) {
  // (nu, binomial(mu, nu)) for nu <= mu componentwise.
  std::vector<std::pair<MultiIndex, double>> out;
  for (const MultiIndex& nu : enumerate_multiindices(mu.dim(), mu.order())) {
    if (!nu.dominated_by(mu)) continue;
    double c = 1.0;
    for (int i = 0; i < mu.dim(); ++i) c *= binomial(mu[i], nu[i]);
    out.emplace_back(nu, c);
  }
  return out;
}

void require_corpus(const std::vector<RealFunction>& corpus, int dim) {
  if (corpus.empty()) fail(ErrorKind::InvalidArgument, "corpus is empty");
  for (const auto& f : corpus) {
    if (!(f.grid() == corpus.front().grid()))
      fail(ErrorKind::InvalidArgument, "corpus members must share one grid");
  }
  if (corpus.front().grid().dim() != dim)
    fail(ErrorKind::InvalidArgument, "corpus grid dimension does not match the family");
}

}  // namespace

// ---------------------------------------------------------------------------

CutoffReport cutoff_tail_norms(const RealFunction& f, const DefiningFamily& family, std::size_t gamma, int m, double p,
                               const std::vector<double>& n_list, double tol) {
  const Grid& grid = f.grid();
  const int k = grid.dim();
  if (k != family.dim()) fail(ErrorKind::InvalidArgument, "function grid does not match the family dimension");
  if (!(p >= 1.0)) fail(ErrorKind::InvalidArgument, "exponent p must be >= 1");
  if (n_list.empty()) fail(ErrorKind::InvalidArgument, "cutoff radius list is empty");
  for (double n : n_list) {
    if (!(n >= 1.0)) fail(ErrorKind::InvalidArgument, "cutoff radii must be >= 1");
    for (int a = 0; a < k; ++a) {
      if (grid.axis(a).lo > -n || grid.axis(a).hi < n)
        fail(ErrorKind::Domain, "grid box does not contain the ball of radius " + std::to_string(n));
    }
  }
  const SmoothCutoff phi(k);
  CutoffReport report;
  report.leibniz_constant = phi.leibniz_constant(m);

  // Weighted derivative mass of f itself, reused for every tail.
  const auto indices = enumerate_multiindices(k, m);
  const Eigen::VectorXd w = family.weight(gamma).sample(grid);
  Eigen::VectorXd density = Eigen::VectorXd::Zero(grid.size());
  for (const MultiIndex& mu : indices) {
    const auto d = partial_derivative(f, mu);
    for (Eigen::Index j = 0; j < grid.size(); ++j) density[j] += std::pow(w[j] * std::abs(d.values()[j]), p);
  }
  const double factor = report.leibniz_constant * std::pow(2.0, m) * static_cast<double>(indices.size());
  // Below roundoff of the untruncated norm a tail is indistinguishable from zero.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::pow(std::max(quadrature<double>(grid, density).value, 0.0), 1.0 / p);

  report.pass = true;
  for (double n : n_list) {
    RealFunction cut;
    if (f.has_exact()) {
      auto inner = f.exact();
      cut = RealFunction(grid, [inner, phi, n](const MultiIndex& mu, PointRef x) {
        const Point xs = x / n;
        double acc = 0.0;
        for (const auto& [nu, c] : sub_indices(mu)) {
          const double psi = nu.is_zero() ? 1.0 - phi(xs) : -phi.derivative(nu, xs) * std::pow(n, -nu.order());
          if (psi != 0.0) acc += c * psi * inner(mu - nu, x);
        }
        return acc;
      });
    } else {
      Eigen::VectorXd v(grid.size());
      for (Eigen::Index j = 0; j < grid.size(); ++j) v[j] = (1.0 - phi(grid.points().col(j) / n)) * f.values()[j];
      cut = RealFunction(grid, std::move(v));
    }
    cut.set_label(f.label());
    CutoffTail t{n, lp_seminorm(cut, family, gamma, m, p), 0.0, 0.0, false};
    Eigen::VectorXd tail = density;
    // Half weight on nodes sitting on the sphere, so a 1-d cut at a node is
    // the composite rule on the outer panels rather than an extra half panel.
    const double eps = 1e-9 * n;
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      const double r = grid.points().col(j).norm();
      if (r < n - eps) tail[j] = 0.0;
      else if (r <= n + eps) tail[j] *= 0.5;
    }
    t.tail = quadrature<double>(grid, tail).value;
    t.majorant = factor * std::pow(std::max(t.tail, 0.0), 1.0 / p);
    t.within = t.value.value <= t.majorant * (1.0 + tol) + floor;
    report.pass = report.pass && t.within;
    report.tails.push_back(std::move(t));
  }
  return report;
}

// ---------------------------------------------------------------------------

Eigen::Index default_ball_points(int dim) {
  switch (dim) {
    case 1: return 401;
    case 2: return 61;
    case 3: return 21;
    default: return 11;
  }
}

SmoothedWeight::SmoothedWeight(WeightFunction source, std::size_t source_index, Mollifier psi, int max_order,
                               Eigen::Index ball_points)
    : source_(std::move(source)), source_index_(source_index), psi_(std::move(psi)) {
  if (source_.dim != psi_.dim()) fail(ErrorKind::InvalidArgument, "mollifier and weight dimensions differ");
  ball_ = ball_quadrature(psi_.dim(), psi_.radius(), ball_points > 0 ? ball_points : default_ball_points(psi_.dim()));
  const Eigen::Index n = ball_.weights.size();
  Eigen::VectorXd values(n);
  for (Eigen::Index q = 0; q < n; ++q) values[q] = psi_(ball_.nodes.col(q));
  const double mass = ball_.weights.dot(values);
  if (!(mass > 0.0)) fail(ErrorKind::Numerical, "mollifier quadrature has no mass; increase the ball resolution");
  ball_.weights /= mass;
  for (const MultiIndex& mu : enumerate_multiindices(psi_.dim(), max_order)) {
    if (mu.is_zero()) {
      tables_.emplace(mu, values);
      continue;
    }
    Eigen::VectorXd d(n);
    for (Eigen::Index q = 0; q < n; ++q) d[q] = psi_.derivative(mu, ball_.nodes.col(q));
    tables_.emplace(mu, std::move(d));
  }
}

const Eigen::VectorXd& SmoothedWeight::psi_table(const MultiIndex& mu) const {
  auto it = tables_.find(mu);
  if (it == tables_.end())
    fail(ErrorKind::InvalidArgument, "smoothed weight was built without derivative " + mu.to_string());
  return it->second;
}

Eigen::VectorXd SmoothedWeight::derivatives(const std::vector<MultiIndex>& mus, PointRef x) const {
  std::vector<const Eigen::VectorXd*> tables;
  for (const MultiIndex& mu : mus) tables.push_back(&psi_table(mu));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mus.size()));
  Point y(x.size());
  for (Eigen::Index q = 0; q < ball_.weights.size(); ++q) {
    y = x + ball_.nodes.col(q);
    const double mw = ball_.weights[q] * source_(y);
    if (mw == 0.0) continue;
    for (std::size_t i = 0; i < tables.size(); ++i) acc[static_cast<Eigen::Index>(i)] += mw * (*tables[i])[q];
  }
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (mus[i].order() % 2 == 1) acc[static_cast<Eigen::Index>(i)] = -acc[static_cast<Eigen::Index>(i)];
  }
  return acc;
}

double SmoothedWeight::operator()(PointRef x) const {
  return derivatives({MultiIndex::zero(psi_.dim())}, x)[0];
}

double SmoothedWeight::derivative(const MultiIndex& mu, PointRef x) const { return derivatives({mu}, x)[0]; }

double SmoothedWeight::abs_moment(const MultiIndex& mu) const {
  return ball_.weights.dot(psi_table(mu).cwiseAbs());
}

SmoothingResult smooth_weight(const DefiningFamily& family, std::size_t gamma, const Grid& grid,
                              const SmoothingOptions& options) {
  if (grid.dim() != family.dim()) fail(ErrorKind::InvalidArgument, "grid does not match the family dimension");
  const ConditionIIWitness& w1 = family.cond_ii(gamma);
  const ConditionIIWitness& w2 = family.cond_ii(w1.target);
  const double C = std::max(w1.constant, w2.constant);
  const double rho = std::min(w1.radius, w2.radius);
  const double radius = options.mollifier_radius.value_or(rho);
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "mollifier radius must be positive");
  if (radius > rho * (1.0 + 1e-12))
    fail(ErrorKind::Domain, "mollifier radius " + std::to_string(radius) + " exceeds the witness radius " +
                                std::to_string(rho));
  const int k = family.dim();
  SmoothedWeight sw(family.weight(w1.target), w1.target, Mollifier(k, radius), k, options.ball_points);

  const auto mus = enumerate_multiindices(k, k);
  std::vector<std::pair<MultiIndex, double>> c_mu;
  for (const MultiIndex& mu : mus) c_mu.emplace_back(mu, C * sw.abs_moment(mu));

  const Eigen::VectorXd m_gamma = family.weight(gamma).sample(grid);
  const Eigen::VectorXd m_gamma2 = family.weight(w2.target).sample(grid);
  RatioSweep s4("smoothing-4s", options.tol), s5("smoothing-5s", options.tol);
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const auto x = grid.points().col(j);
    const Eigen::VectorXd d = sw.derivatives(mus, x);
    s4.add(m_gamma[j], C * d[0], x);
    for (std::size_t i = 0; i < mus.size(); ++i)
      s5.add(std::abs(d[static_cast<Eigen::Index>(i)]), c_mu[i].second * m_gamma2[j], x);
  }
  return SmoothingResult{std::move(sw),
                         gamma,
                         w1.target,
                         w2.target,
                         C,
                         radius,
                         std::move(c_mu),
                         s4.finish("M_gamma <= C M~ on the grid", "M_gamma <= C M~ fails"),
                         s5.finish("|d^mu M~| <= C_mu M_gamma'' on the grid", "|d^mu M~| <= C_mu M_gamma'' fails")};
}

// ---------------------------------------------------------------------------

EquivalenceCertificate derive_equivalence_constants(const DefiningFamily& family, std::size_t gamma, int m, double p,
                                                    const Grid& grid, const SmoothingOptions& options) {
  if (m < 0) fail(ErrorKind::InvalidArgument, "derivative order must be >= 0");
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidArgument, "exponent p must be a finite number >= 1");
  SmoothingResult s = smooth_weight(family, gamma, grid, options);
  if (!s.check_4s.pass) fail(ErrorKind::Numerical, s.check_4s.message);
  if (!s.check_5s.pass) fail(ErrorKind::Numerical, s.check_5s.message);

  const ConditionIWitness& wi = family.cond_i(s.gamma2);
  const int k = family.dim();
  EquivalenceCertificate c;
  c.gamma = gamma;
  c.m = m;
  c.p = p;
  c.gamma1 = s.gamma1;
  c.gamma2 = s.gamma2;
  c.gamma_tilde = wi.target;
  c.degenerate_chain = s.gamma1 == s.gamma2;
  c.m_tilde = m + k;
  c.mollifier_radius = s.radius;
  c.C = s.C;
  c.c_mu = s.c_mu;
  double sum = 0.0;
  for (const auto& [mu, v] : c.c_mu) sum += v;
  c.c_prime = c.C * sum;
  c.q_m_tilde = multiindex_count(k, c.m_tilde);
  const Eigen::VectorXd L = wi.summable.sample(grid);
  if (p > 1.0) {
    const double e = p / (p - 1.0);
    c.J = quadrature<double>(grid, L.array().pow(e).matrix()).value;
    c.A = c.c_prime * std::pow(static_cast<double>(c.q_m_tilde) * c.J, (p - 1.0) / p);
  } else {
    c.J = L.maxCoeff();
    c.A = c.c_prime * c.J;
  }
  if (!std::isfinite(c.J) || !std::isfinite(c.A) || !(c.A > 0.0))
    fail(ErrorKind::Numerical, "equivalence constant is not a positive finite number");
  c.check_4s = std::move(s.check_4s);
  c.check_5s = std::move(s.check_5s);
  c.grid = grid.describe();
  return c;
}

EquivalenceReport verify_norm_equivalence(const DefiningFamily& family, std::size_t gamma, int m, double p,
                                          const std::vector<RealFunction>& corpus, double tol,
                                          const SmoothingOptions& options) {
  require_corpus(corpus, family.dim());
  const Grid& grid = corpus.front().grid();
  EquivalenceReport r{derive_equivalence_constants(family, gamma, m, p, grid, options), 0, 0.0, {}, 0.0, 0.0, 0, false};
  const ConditionIWitness& wi = family.cond_i(gamma);
  r.reverse_gamma = wi.target;
  const Eigen::VectorXd L = wi.summable.sample(grid);
  const double lp_mass = quadrature<double>(grid, L.array().pow(p).matrix()).value;
  r.A2 = std::pow(static_cast<double>(multiindex_count(family.dim(), m)) * lp_mass, 1.0 / p);

  const auto& cert = r.certificate;
  for (const RealFunction& f : corpus) {
    EquivalenceEntry e;
    e.label = f.label();
    e.lhs = sup_seminorm(f, family, gamma, m).value;
    e.rhs = cert.A * lp_seminorm(f, family, cert.gamma_tilde, cert.m_tilde, p).value;
    e.ratio = safe_ratio(e.lhs, e.rhs);
    e.reverse_lhs = lp_seminorm(f, family, gamma, m, p).value;
    e.reverse_rhs = r.A2 * sup_seminorm(f, family, r.reverse_gamma, m).value;
    e.reverse_ratio = safe_ratio(e.reverse_lhs, e.reverse_rhs);
    e.pass = e.lhs <= e.rhs * (1.0 + tol) && e.reverse_lhs <= e.reverse_rhs * (1.0 + tol);
    r.max_ratio = std::max(r.max_ratio, e.ratio);
    r.max_reverse_ratio = std::max(r.max_reverse_ratio, e.reverse_ratio);
    if (!e.pass) ++r.violations;
    r.entries.push_back(std::move(e));
  }
  r.pass = r.violations == 0;
  return r;
}

// ---------------------------------------------------------------------------

PietschReport verify_pietsch_bound(const DefiningFamily& family, std::size_t gamma, int m,
                                   const std::vector<RealFunction>& corpus, double tol,
                                   const SmoothingOptions& options) {
  require_corpus(corpus, family.dim());
  const Grid& grid = corpus.front().grid();
  EquivalenceCertificate cert = derive_equivalence_constants(family, gamma, m, 1.0, grid, options);
  const ConditionIWitness& wi = family.cond_i(cert.gamma_tilde);
  SmoothingResult s = smooth_weight(family, wi.target, grid, options);

  PietschReport r{std::move(cert), wi.target, s.gamma2, s.C, s.check_4s, {}, {}, 0.0, false};
  // Only the value bound M~ <= C M_gamma~'' is needed here.
  RatioSweep upper("smoothing-upper", options.tol);
  const Eigen::VectorXd L = wi.summable.sample(grid);
  const Eigen::VectorXd upper_weight = family.weight(s.gamma2).sample(grid);
  Eigen::VectorXd mt(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    mt[j] = s.weight(grid.points().col(j));
    upper.add(mt[j], s.C * upper_weight[j], grid.points().col(j));
  }
  r.gamma_t2 = s.gamma2;
  r.check_upper = upper.finish("M~ <= C M_gamma~'' on the grid", "M~ <= C M_gamma~'' fails");

  const auto indices = enumerate_multiindices(family.dim(), r.certificate.m_tilde);
  const double scale = r.certificate.A * s.C * s.C;
  r.min_margin = std::numeric_limits<double>::infinity();
  for (const RealFunction& f : corpus) {
    Eigen::VectorXd density = Eigen::VectorXd::Zero(grid.size());
    for (const MultiIndex& mu : indices) {
      const auto d = partial_derivative(f, mu);
      for (Eigen::Index j = 0; j < grid.size(); ++j) density[j] += std::abs(mt[j] * d.values()[j] / s.C);
    }
    density = density.cwiseProduct(L);
    PietschEntry e;
    e.label = f.label();
    e.lhs = sup_seminorm(f, family, gamma, m).value;
    e.rhs = scale * quadrature<double>(grid, density).value;
    if (!std::isfinite(e.rhs)) fail(ErrorKind::Numerical, "Pietsch right-hand side is not finite");
    e.margin = e.lhs > 0.0 ? e.rhs / e.lhs : (e.rhs > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    e.pass = e.lhs <= e.rhs * (1.0 + tol);
    r.min_margin = std::min(r.min_margin, e.margin);
    r.entries.push_back(std::move(e));
  }
  r.pass = r.check_lower.pass && r.check_upper.pass &&
           std::all_of(r.entries.begin(), r.entries.end(), [](const PietschEntry& e) { return e.pass; });
  return r;
}

}  // namespace wk
