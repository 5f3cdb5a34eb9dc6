#include "property.hpp"

#include "wk/corpus.hpp"
#include "wk/seminorms.hpp"

#include <cmath>

using namespace wk;
using wk::test::for_all;
using wk::test::Gen;

namespace {

const DefiningFamily& schwartz() {
  static const DefiningFamily F = make_family({WeightKind::Polynomial, 1, {}, {0, 1, 2, 3, 4}});
  return F;
}
const DefiningFamily& exp_type() {
  static const DefiningFamily F = make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.25, 0.5, 1.0}});
  return F;
}
const Grid& line() {
  static const Grid g = Grid::uniform(1, -10.0, 10.0, 801);
  return g;
}
const Grid& plane() {
  static const Grid g = Grid::uniform(2, -8.0, 8.0, 81);
  return g;
}
const std::vector<RealFunction>& real_corpus() {
  static const auto c = [] {
    auto v = make_corpus(CorpusKind::Hermite, 12, line());
    auto w = make_corpus(CorpusKind::PolynomialGaussian, 6, line());
    v.insert(v.end(), w.begin(), w.end());
    return v;
  }();
  return c;
}
const std::vector<ComplexFunction>& complex_corpus() {
  static const auto c = make_entire_corpus(10, plane());
  return c;
}

double real_form(int form, const RealFunction& f, std::size_t gamma, int m, double p) {
  return form == 0 ? sup_seminorm(f, schwartz(), gamma, m).value : lp_seminorm(f, schwartz(), gamma, m, p).value;
}

double analytic_form(int form, const ComplexFunction& f, std::size_t gamma, double p) {
  return form == 0 ? analytic_sup_seminorm(f, exp_type(), gamma).value
                   : analytic_lp_seminorm(f, exp_type(), gamma, p).value;
}

template <typename T>
const T& pick(Gen& gen, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(gen.integer(0, static_cast<int>(v.size()) - 1))];
}

}  // namespace

TEST(SeminormProperties, AbsoluteHomogeneity) {
  for_all("homogeneity", 31, [](Gen& gen) {
    const double c = gen.scale(-3.0, 3.0);
    const int form = gen.integer(0, 3);
    const double p = gen.uniform(1.0, 4.0);
    if (form < 2) {
      const RealFunction& f = pick(gen, real_corpus());
      const auto gamma = static_cast<std::size_t>(gen.integer(0, 4));
      const int m = gen.integer(0, 2);
      const double a = real_form(form, f.scaled(c), gamma, m, p);
      const double b = std::abs(c) * real_form(form, f, gamma, m, p);
      EXPECT_NEAR(a, b, 1e-12 * b);
    } else {
      const ComplexFunction& f = pick(gen, complex_corpus());
      const auto gamma = static_cast<std::size_t>(gen.integer(0, 2));
      const std::complex<double> cz = std::polar(std::abs(c), gen.uniform(0.0, 6.28));
      const double a = analytic_form(form - 2, f.scaled(cz), gamma, p);
      const double b = std::abs(cz) * analytic_form(form - 2, f, gamma, p);
      EXPECT_NEAR(a, b, 1e-12 * b);
    }
  });
}

TEST(SeminormProperties, TriangleInequality) {
  for_all("triangle", 32, [](Gen& gen) {
    const int form = gen.integer(0, 3);
    const double p = gen.uniform(1.0, 4.0);
    if (form < 2) {
      const RealFunction f = pick(gen, real_corpus()).scaled(gen.scale(-2.0, 2.0));
      const RealFunction g = pick(gen, real_corpus()).scaled(gen.scale(-2.0, 2.0));
      const auto gamma = static_cast<std::size_t>(gen.integer(0, 4));
      const int m = gen.integer(0, 2);
      EXPECT_LE(real_form(form, f + g, gamma, m, p),
                real_form(form, f, gamma, m, p) + real_form(form, g, gamma, m, p) + 1e-12);
    } else {
      const ComplexFunction f = pick(gen, complex_corpus());
      const ComplexFunction g = pick(gen, complex_corpus()).scaled({gen.uniform(-2, 2), gen.uniform(-2, 2)});
      const auto gamma = static_cast<std::size_t>(gen.integer(0, 2));
      EXPECT_LE(analytic_form(form - 2, f + g, gamma, p),
                analytic_form(form - 2, f, gamma, p) + analytic_form(form - 2, g, gamma, p) + 1e-12);
    }
  });
}

TEST(SeminormProperties, MonotoneInOrder) {
  for_all("order monotonicity", 33, [](Gen& gen) {
    const RealFunction& f = pick(gen, real_corpus());
    const int form = gen.integer(0, 1);
    const auto gamma = static_cast<std::size_t>(gen.integer(0, 4));
    const int m = gen.integer(0, 2), m2 = m + gen.integer(0, 2);
    const double p = gen.uniform(1.0, 3.0);
    EXPECT_LE(real_form(form, f, gamma, m, p), real_form(form, f, gamma, m2, p));
  });
}

TEST(SeminormProperties, MonotoneInWeight) {
  for_all("weight monotonicity", 34, [](Gen& gen) {
    const int form = gen.integer(0, 3);
    const double p = gen.uniform(1.0, 3.0);
    if (form < 2) {
      const RealFunction& f = pick(gen, real_corpus());
      auto a = static_cast<std::size_t>(gen.integer(0, 4)), b = static_cast<std::size_t>(gen.integer(0, 4));
      if (a > b) std::swap(a, b);  // (1+|x|)^a <= (1+|x|)^b
      const int m = gen.integer(0, 2);
      EXPECT_LE(real_form(form, f, a, m, p), real_form(form, f, b, m, p));
    } else {
      const ComplexFunction& f = pick(gen, complex_corpus());
      auto a = static_cast<std::size_t>(gen.integer(0, 2)), b = static_cast<std::size_t>(gen.integer(0, 2));
      if (a < b) std::swap(a, b);  // e^{-a|z|} <= e^{-b|z|} for a >= b
      EXPECT_LE(analytic_form(form - 2, f, a, p), analytic_form(form - 2, f, b, p));
    }
  });
}

TEST(SeminormProperties, GridRefinementStability) {
  // Smooth, well-resolved members: doubling the resolution moves sup seminorms
  // by less than 1e-3 relative.
  const Grid coarse = Grid::uniform(1, -10.0, 10.0, 2001);
  const Grid fine = Grid::uniform(1, -10.0, 10.0, 4001);
  const auto cc = make_corpus(CorpusKind::Hermite, 20, coarse);
  const auto cf = make_corpus(CorpusKind::Hermite, 20, fine);
  for_all("grid refinement", 35, [&](Gen& gen) {
    const auto i = static_cast<std::size_t>(gen.integer(0, 19));
    const auto gamma = static_cast<std::size_t>(gen.integer(0, 4));
    const int m = gen.integer(0, 2);
    const double a = sup_seminorm(cc[i], schwartz(), gamma, m).value;
    const double b = sup_seminorm(cf[i], schwartz(), gamma, m).value;
    EXPECT_NEAR(a, b, 1e-3 * b);
  });
}
