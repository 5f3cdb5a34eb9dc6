// Acceptance suite: one PASS/FAIL line per criterion.
//
//   wk_acceptance          run every criterion
//   wk_acceptance 5a 6     run the listed ones
//
// Exit status is 0 iff every selected criterion passes.

#include "wk/corpus.hpp"
#include "wk/equivalence.hpp"
#include "wk/kernel.hpp"
#include "wk/seminorms.hpp"
#include "wk/weights.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace wk;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

WeightFunction unit(int dim) {
  WeightFunction w;
  w.dim = dim;
  w.eval = [](PointRef) { return 1.0; };
  return w;
}

std::vector<double> range(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

// 1. Conditions (a), (c), (I), (II) for the example families, tol 1e-9.
Verdict family_conditions() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    std::string name;
    DefiningFamily family;
    std::size_t a1, a2, a;  // a triple for (a) with C = 1/2
  };
  std::vector<Case> cases;
  for (int k = 1; k <= 2; ++k) {
    const std::string ks = " k=" + std::to_string(k);
    // Boxes up to 11 so that (c) holds on the whole grid box.
    cases.push_back({"indicator" + ks, make_family({WeightKind::IndicatorBox, k, {}, range(1, 11)}), 0, 1, 1});
    cases.push_back({"polynomial" + ks, make_family({WeightKind::Polynomial, k, {}, range(0, 4)}), 1, 2, 2});
    // Larger A' means a smaller weight; index 0 (A' = 1.5) dominates.
    cases.push_back({"gelfand-shilov" + ks,
                     make_family({WeightKind::GelfandShilov, k, {{"alpha", 1.0}, {"A", 1.0}}, {1.5, 2, 3}}), 1, 2, 0});
  }
  // e^{-a|z|} on C: smaller a is the larger weight.
  cases.push_back({"exp-type k=1", make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.25, 0.5, 1.0}}), 1, 2, 0});

  CheckOptions o;
  o.tol = 1e-9;
  int checks = 0;
  std::string failed;
  for (const Case& c : cases) {
    // Box witnesses reach |x| = 10; a half-unit margin keeps their support off the boundary shell.
    const double half = c.family.kind() == WeightKind::IndicatorBox ? 10.5 : 10.0;
    const Eigen::Index n = static_cast<Eigen::Index>(std::lround(2.0 * half * (c.family.dim() == 1 ? 100 : 10))) + 1;
    const Grid g = Grid::uniform(c.family.dim(), -half, half, n);
    std::vector<CheckReport> rs{check_condition_a(c.family, c.a1, c.a2, c.a, 0.5, g, o),
                                check_condition_c(c.family, g, o)};
    for (std::size_t i = 0; i < c.family.size(); ++i) {
      if (c.family.has_cond_i(i)) rs.push_back(check_condition_I(c.family, i, g, 1.0, o));
      if (c.family.has_cond_ii(i)) rs.push_back(check_condition_II(c.family, i, g, 32, o));
    }
    for (const CheckReport& r : rs) {
      ++checks;
      if (!r.pass) failed += " " + c.name + ":" + r.name;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = failed.empty() && secs < 60.0;
  return {pass, std::to_string(checks) + " checks, " + fmt(secs) + " s" + (failed.empty() ? "" : ", failed:" + failed)};
}

const Grid& hermite_grid() {
  static const Grid g = Grid::uniform(1, -12.0, 12.0, 2401);
  return g;
}
const DefiningFamily& schwartz() {
  static const DefiningFamily F = make_family({WeightKind::Polynomial, 1, {}, range(0, 8)});
  return F;
}

// 2. Sup <= A L^p and L^p <= A2 sup over the Hermite corpus.
Verdict norm_equivalence() {
  const auto corpus = make_corpus(CorpusKind::Hermite, 20, hermite_grid());
  std::size_t violations = 0;
  double worst = 0.0, worst_rev = 0.0;
  for (std::size_t l : {0u, 1u, 2u}) {
    for (int m : {0, 1, 2}) {
      for (double p : {2.0, 3.0}) {
        const EquivalenceReport r = verify_norm_equivalence(schwartz(), l, m, p, corpus, 1e-6);
        violations += r.violations + (r.pass ? 0 : 1);
        worst = std::max(worst, r.max_ratio);
        worst_rev = std::max(worst_rev, r.max_reverse_ratio);
      }
    }
  }
  return {violations == 0, "18 certificates, max ratio " + fmt(worst) + ", max reverse ratio " + fmt(worst_rev)};
}

// 3. Pietsch bound, rhs/lhs >= 1 - 1e-6.
Verdict pietsch() {
  const auto corpus = make_corpus(CorpusKind::Hermite, 20, hermite_grid());
  double margin = std::numeric_limits<double>::infinity();
  bool pass = true;
  for (std::size_t l : {0u, 1u}) {
    for (int m : {0, 1}) {
      const PietschReport r = verify_pietsch_bound(schwartz(), l, m, corpus, 1e-6);
      pass = pass && r.pass;
      margin = std::min(margin, r.min_margin);
    }
  }
  return {pass && margin >= 1.0 - 1e-6, "min rhs/lhs " + fmt(margin)};
}

// 4. Second-order convergence of the differentiation identity.
Verdict diff_identity() {
  const Grid g = Grid::uniform(1, -3.0, 3.0, 101);
  const auto h = TwoVariableFunction::from_expression(g, g, "exp(-(x - y)^2)");
  const DiffReport r =
      check_diff_identity(h, DiscreteFunctional::delta(Point::Zero(1)), MultiIndex({1}), {101, 201, 401, 801});
  bool pass = r.ratios.size() == 3;
  std::string ratios;
  for (double q : r.ratios) {
    pass = pass && q >= 3.5 && q <= 4.5;
    ratios += " " + fmt(q);
  }
  return {pass, "error ratios" + ratios};
}

// 5a. Gaussian kernel reaches weighted residual < 1e-8 by rank 25.
Verdict gaussian_kernel() {
  const Grid g = Grid::uniform(1, -5.0, 5.0, 201);
  const auto h = TwoVariableFunction::from_expression(g, g, "exp(-(x - y)^2)");
  const SeparableApproximation a = separable_approx(h, unit(1), unit(1), 25);
  const DecayReport d = classify_decay(a.singular_values, 64);
  const std::string at = d.rank_at_target ? std::to_string(*d.rank_at_target) : "none";
  return {a.residual < 1e-8, "residual at rank 25 " + fmt(a.residual) + ", first rank below 1e-8: " + at};
}

// 5b. Rank-one inputs are recovered at rank 1.
Verdict rank_one() {
  const Grid xg = Grid::uniform(1, -5.0, 5.0, 201);
  const Grid yg = Grid::uniform(2, -3.0, 3.0, 31);
  const auto h = TwoVariableFunction::from_expression(xg, yg, "exp(-x^2) * cos(y1) * (1 + y2^2) * exp(-y2^2)");
  const double r1 = separable_approx(h, unit(1), unit(2), 1).residual;
  const auto f = function_from_expression(xg, "(1 + x^2)^(-1)");
  const auto g = function_from_expression(yg, "exp(-x1^2 - x2^2 / 2)");
  const double r2 = separable_approx(TwoVariableFunction::separable(f, g), unit(1), unit(2), 1).residual;
  return {r1 < 1e-12 && r2 < 1e-12, "residuals " + fmt(r1) + ", " + fmt(r2)};
}

// 6. Brownian covariance spectrum and its polynomial classification.
Verdict brownian() {
  const Grid g = Grid::uniform(1, 0.0, 1.0, 2001);
  const auto h = TwoVariableFunction::from_expression(g, g, "(x + y - abs(x - y)) / 2");
  const Eigen::VectorXd s = weighted_singular_values(h, unit(1), unit(1));
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double ref = 1.0 / ((i - 0.5) * (i - 0.5) * std::numbers::pi * std::numbers::pi);
    worst = std::max(worst, std::abs(s[i - 1] / ref - 1.0));
  }
  const DecayReport d = classify_decay(s, 64);
  return {worst <= 0.01 && d.classification == DecayClass::Polynomial,
          "max relative error " + fmt(worst) + ", classified " + to_string(d.classification)};
}

// 7. Mean-value property and Cauchy derivative bounds.
Verdict analytic_identities() {
  const Grid disk = Grid::uniform(2, -2.0, 2.0, 41);
  double worst = 0.0;
  for (int deg = 0; deg <= 6; ++deg) {
    std::vector<std::complex<double>> c(static_cast<std::size_t>(deg + 1), 0.0);
    c.back() = 1.0;
    worst = std::max(worst, mean_value_check(entire_polynomial(c, disk), {0.0, 0.0}, 1.0).residual);
    worst = std::max(worst, mean_value_check(entire_polynomial(c, disk), {0.3, -0.4}, 1.0).residual);
  }
  worst = std::max(worst, mean_value_check(entire_exponential(1.0, disk), {0.0, 0.0}, 1.0).residual);

  const DefiningFamily F = make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.25, 0.5, 1.0}});
  const auto corpus = make_entire_corpus(8, Grid::uniform(2, -10.0, 10.0, 201));
  int bounds = 0;
  bool cauchy = true;
  for (std::size_t a = 0; a < F.size(); ++a) {
    if (!F.has_cond_ii(a)) continue;
    for (int m = 0; m <= 2; ++m) {
      for (const ComplexFunction& f : corpus) {
        cauchy = cauchy && cauchy_derivative_bound(f, F, a, m, 0.5).pass;
        ++bounds;
      }
    }
  }
  return {worst <= 1e-8 && cauchy,
          "max mean-value residual " + fmt(worst) + ", " + std::to_string(bounds) + " Cauchy bounds " +
              (cauchy ? "hold" : "violated")};
}

// 8. Seminorm oracles.
Verdict seminorm_oracles() {
  const Grid line = Grid::uniform(1, -10.0, 10.0, 2001);
  const RealFunction gauss = function_from_expression(line, "exp(-x^2)");
  const DefiningFamily P = make_family({WeightKind::Polynomial, 1, {}, {0, 1, 2}});
  const double sup = sup_seminorm(gauss, P, 0, 0).value;
  const double l2 = lp_seminorm(gauss, P, 0, 0, 2.0).value;
  const DefiningFamily E = make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.5, 1.0}});
  const ComplexFunction z = entire_polynomial({0.0, 1.0}, Grid::uniform(2, -10.0, 10.0, 201));
  const double asup = analytic_sup_seminorm(z, E, E.index_of(1.0)).value;
  const double e1 = std::abs(sup - 1.0), e2 = std::abs(l2 - std::pow(std::numbers::pi / 2, 0.25)),
               e3 = std::abs(asup - std::exp(-1.0));
  return {e1 <= 1e-10 && e2 <= 1e-8 && e3 <= 1e-8, "errors " + fmt(e1) + ", " + fmt(e2) + ", " + fmt(e3)};
}

// 9. Invariant suites, run as the property-test binary.
Verdict invariants() {
  const char* bin = std::getenv("WK_PROPERTY_TESTS");
  if (!bin || !*bin) return {false, "WK_PROPERTY_TESTS is not set"};
  const std::string cmd = std::string("\"") + bin + "\" --gtest_brief=1 > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return {rc == 0, rc == 0 ? "property suites pass" : "property suites failed (status " + std::to_string(rc) + ")"};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"1", "family conditions", family_conditions},
      {"2", "norm equivalence certificates", norm_equivalence},
      {"3", "Pietsch bound", pietsch},
      {"4", "differentiation identity convergence", diff_identity},
      {"5a", "Gaussian kernel rank-25 residual", gaussian_kernel},
      {"5b", "rank-one recovery", rank_one},
      {"6", "Brownian covariance spectrum", brownian},
      {"7", "analytic identities", analytic_identities},
      {"8", "seminorm oracles", seminorm_oracles},
      {"9", "invariant suites", invariants},
  };
  std::vector<const Criterion*> selected;
  for (int i = 1; i < argc; ++i) {
    bool found = false;
    for (const Criterion& c : all) {
      if (argv[i] == std::string(c.id)) {
        selected.push_back(&c);
        found = true;
      }
    }
    if (!found) {
      std::cerr << "unknown criterion " << argv[i] << '\n';
      return 2;
    }
  }
  if (selected.empty())
    for (const Criterion& c : all) selected.push_back(&c);

  bool ok = true;
  for (const Criterion* c : selected) {
    Verdict v;
    try {
      v = c->run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    ok = ok && v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << c->id << " " << c->title << ": " << v.detail << std::endl;
  }
  return ok ? 0 : 1;
}
