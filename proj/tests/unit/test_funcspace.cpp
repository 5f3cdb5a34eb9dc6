#include "wk/corpus.hpp"
#include "wk/error.hpp"
#include "wk/expression.hpp"
#include "wk/mollifier.hpp"
#include "wk/sampled_function.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace wk;

TEST(MultiIndex, EnumeratesGradedOrder) {
  const auto mus = enumerate_multiindices(2, 2);
  const std::vector<std::vector<int>> want{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  ASSERT_EQ(mus.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(mus[i].components(), want[i]);
}

TEST(Grid, SimpsonOddAndEvenCounts) {
  const Eigen::VectorXd w5 = simpson_weights(Axis{0.0, 4.0, 5});
  EXPECT_DOUBLE_EQ(w5[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(w5[1], 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(w5[2], 2.0 / 3.0);
  const Eigen::VectorXd w4 = simpson_weights(Axis{0.0, 3.0, 4});
  EXPECT_NEAR(w4.sum(), 3.0, 1e-15);
}

TEST(Grid, RejectsDegenerateAxes) {
  EXPECT_THROW(Grid::uniform(1, 0.0, 1.0, 2), Error);
  EXPECT_THROW(Grid::uniform(1, 1.0, 1.0, 5), Error);
}

TEST(Quadrature, GaussianIntegral) {
  const Grid g = Grid::uniform(1, -8.0, 8.0, 1601);
  const RealFunction f = function_from_expression(g, "exp(-x^2)");
  EXPECT_NEAR(quadrature(f).value, 1.7724538509055160273, 1e-10);
}

TEST(PartialDerivative, FiniteDifferenceSecondOrder) {
  // sin'' = -sin on [-pi, pi]; halving the spacing cuts the error about 4x.
  std::vector<double> errs;
  for (Eigen::Index n : {321, 641, 1281}) {
    const Grid g = Grid::uniform(1, -std::numbers::pi, std::numbers::pi, n);
    Eigen::VectorXd v(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) v[j] = std::sin(g.points()(0, j));
    const RealFunction f(g, v);
    const RealFunction d2 = partial_derivative(f, MultiIndex({2}));
    EXPECT_EQ(d2.path(), DerivativePath::FiniteDifference);
    double err = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d2.values()[j] + v[j]));
    errs.push_back(err);
  }
  EXPECT_LT(errs[1], 1e-4);
  EXPECT_NEAR(errs[1] / errs[2], 4.0, 0.5);
}

TEST(PartialDerivative, ExpressionsUseJets) {
  const Grid g = Grid::uniform(1, -2.0, 2.0, 41);
  const RealFunction f = function_from_expression(g, "x^3 - 2*x");
  const RealFunction d = partial_derivative(f, MultiIndex({1}));
  EXPECT_EQ(d.path(), DerivativePath::Exact);
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.points()(0, j);
    EXPECT_NEAR(d.values()[j], 3 * x * x - 2, 1e-13);
  }
}

TEST(Expression, ParsesAndRejects) {
  const Expression e = Expression::parse("pow(x1, 2) + sqrt(x2) * pi", coordinate_names("x", 2));
  const double v[] = {3.0, 4.0};
  EXPECT_NEAR(e(v), 9.0 + 2.0 * std::numbers::pi, 1e-14);
  EXPECT_THROW(Expression::parse("x1 +", coordinate_names("x", 1)), Error);
  EXPECT_THROW(Expression::parse("z", coordinate_names("x", 1)), Error);
}

TEST(Mollifier, NormalizationMatchesQuadratureOracle) {
  // int_{-1}^{1} exp(-1/(1-x^2)) dx = 0.443993816168079...
  EXPECT_NEAR(mollifier_normalization(1, 1.0), 1.0 / 0.44399381616807943782, 1e-10);
  // 2 pi int_0^1 r exp(-1/(1-r^2)) dr = 0.466512393178330...
  EXPECT_NEAR(mollifier_normalization(2, 1.0), 1.0 / 0.46651239317833006888, 1e-10);
  const Mollifier psi(1, 0.5);
  const RealFunction s = psi.sample(Grid::uniform(1, -1.0, 1.0, 4001));
  EXPECT_NEAR(quadrature(s).value, 1.0, 1e-10);
}

TEST(Corpus, HermiteMatchesClosedForms) {
  const Grid g = Grid::uniform(1, -6.0, 6.0, 121);
  const auto c = make_corpus(CorpusKind::Hermite, 3, g);
  ASSERT_EQ(c.size(), 3u);
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.points()(0, j);
    const double e = std::exp(-x * x / 2);
    EXPECT_NEAR(c[0].values()[j], e, 1e-15);
    EXPECT_NEAR(c[1].values()[j], 2 * x * e / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(c[2].values()[j], (4 * x * x - 2) * e / std::sqrt(8.0), 1e-13);
  }
}

TEST(Corpus, EntireFunctionsSatisfyCauchyRiemann) {
  const Grid g = Grid::uniform(2, -2.0, 2.0, 81);
  for (const ComplexFunction& f : make_entire_corpus(6, g)) {
    EXPECT_TRUE(f.analytic());
    EXPECT_LT(cauchy_riemann_residual(f), 1e-3) << f.label();
  }
}

TEST(GridValuesFile, RoundTrips) {
  const Grid g(std::vector<Axis>{{-1.0, 1.0, 5}, {0.0, 2.0, 3}});
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(g.size(), -1.0, 1.0);
  const auto path = std::filesystem::temp_directory_path() / "wk_grid_values.bin";
  write_grid_values(path.string(), g, v);
  const RealFunction f = read_grid_values(path.string());
  EXPECT_TRUE(f.grid() == g);
  EXPECT_EQ(f.values(), v);
  std::filesystem::remove(path);
  EXPECT_THROW(read_grid_values(path.string()), Error);
}

TEST(DiscreteFunctional, DeltaNeedsNodeOrEvaluator) {
  const Grid g = Grid::uniform(1, -1.0, 1.0, 5);
  const RealFunction f(g, Eigen::VectorXd::LinSpaced(5, -1.0, 1.0));
  EXPECT_DOUBLE_EQ(DiscreteFunctional::delta(Point::Constant(1, 0.5)).apply(f), 0.5);
  EXPECT_THROW(DiscreteFunctional::delta(Point::Constant(1, 0.3)).apply(f), Error);
}
