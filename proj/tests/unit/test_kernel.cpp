#include "wk/error.hpp"
#include "wk/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace wk;

namespace {

WeightFunction unit(int dim) {
  WeightFunction w;
  w.dim = dim;
  w.eval = [](PointRef) { return 1.0; };
  return w;
}

Eigen::VectorXd sequence(int n, double (*f)(double)) {
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = f(i + 1.0);
  return s;
}

}  // namespace

TEST(ApplyFunctional, QuadratureOfGaussianProduct) {
  const Grid xg = Grid::uniform(1, -4.0, 4.0, 81);
  const Grid yg = Grid::uniform(1, -8.0, 8.0, 1601);
  const auto h = TwoVariableFunction::from_expression(xg, yg, "exp(-x^2 - y^2)");
  const AppliedFunctional a = apply_functional(h, DiscreteFunctional::integral(yg));
  EXPECT_EQ(a.interpolated_terms, 0u);
  for (Eigen::Index j = 0; j < xg.size(); ++j) {
    const double x = xg.points()(0, j);
    EXPECT_NEAR(a.function.values()[j], std::sqrt(std::numbers::pi) * std::exp(-x * x), 1e-8);
  }
}

TEST(ApplyFunctional, InterpolatesWithoutEvaluator) {
  const Grid g = Grid::uniform(1, 0.0, 1.0, 11);
  Eigen::MatrixXd m(11, 11);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) m(i, j) = i + 10.0 * j;  // linear in y
  const TwoVariableFunction h(g, g, m);
  const AppliedFunctional a = apply_functional(h, DiscreteFunctional::delta(Point::Constant(1, 0.25)));
  EXPECT_EQ(a.interpolated_terms, 1u);
  EXPECT_NEAR(a.function.values()[3], 3.0 + 25.0, 1e-12);
  EXPECT_THROW(apply_functional(h, DiscreteFunctional::delta(Point::Constant(1, 1.5))), Error);
}

TEST(Slice, RequiresNode) {
  const Grid g = Grid::uniform(1, -1.0, 1.0, 21);
  const auto h = TwoVariableFunction::from_expression(g, g, "x * y");
  const RealFunction s = slice(h, Point::Constant(1, 0.5));
  EXPECT_NEAR(s.values()[20], 0.5, 1e-15);
  EXPECT_THROW(slice(h, Point::Constant(1, 0.55)), Error);
}

TEST(DiffIdentity, SecondOrderConvergence) {
  const Grid g = Grid::uniform(1, -3.0, 3.0, 101);
  const auto h = TwoVariableFunction::from_expression(g, g, "exp(-(x - y)^2)");
  const DiffReport r = check_diff_identity(h, DiscreteFunctional::delta(Point::Zero(1)), MultiIndex({1}),
                                           {101, 201, 401, 801});
  ASSERT_EQ(r.ratios.size(), 3u);
  for (double q : r.ratios) EXPECT_NEAR(q, 4.0, 0.5);
  for (double o : r.orders) EXPECT_NEAR(o, 2.0, 0.2);
  ASSERT_TRUE(r.exact_error);
  EXPECT_LT(*r.exact_error, 1e-13);
}

TEST(SeparableApprox, RankOneIsExact) {
  const Grid xg = Grid::uniform(1, -5.0, 5.0, 101);
  const Grid yg = Grid::uniform(1, -4.0, 4.0, 81);
  const auto h = TwoVariableFunction::from_expression(xg, yg, "exp(-x^2) * (1 + y^2) * exp(-y^2 / 2)");
  const SeparableApproximation a = separable_approx(h, unit(1), unit(1), 1);
  EXPECT_LT(a.residual, 1e-12);
  EXPECT_LT((a.reconstruct() - h.values()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(weighted_error(h, a.reconstruct(), unit(1), unit(1)), a.residual, 1e-12);
}

TEST(SeparableApprox, GaussianKernelMatchesDenseSvd) {
  // numpy SVD of the Simpson-weighted matrix on [-5,5]^2 x 201^2
  const Grid g = Grid::uniform(1, -5.0, 5.0, 201);
  const auto h = TwoVariableFunction::from_expression(g, g, "exp(-(x - y)^2)");
  const SeparableApproximation a = separable_approx(h, unit(1), unit(1), 25);
  const double s_ref[] = {1.735520799425357, 1.6293381419843198, 1.4667956316892634, 1.266455231344575,
                          1.0490402528942178};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(a.singular_values[i] / s_ref[i], 1.0, 1e-12);
  EXPECT_NEAR(a.residual / 4.681159967894522e-06, 1.0, 1e-6);
  const DecayReport d = classify_decay(a.singular_values, 40);
  ASSERT_TRUE(d.rank_at_target);
  EXPECT_EQ(*d.rank_at_target, 32);
  EXPECT_EQ(d.classification, DecayClass::GeometricOrFaster);
}

TEST(SeparableApprox, ZeroWeightRowsAreDropped) {
  const Grid g = Grid::uniform(1, -3.0, 3.0, 61);
  const auto h = TwoVariableFunction::from_expression(g, g, "exp(-(x - y)^2)");
  const auto F = make_family({WeightKind::IndicatorBox, 1, {}, {1, 2}});
  const SeparableApproximation a = separable_approx(h, F.weight(0), unit(1), 3);
  EXPECT_EQ(a.dropped_rows.size(), 40u);  // |x| > 1
  EXPECT_TRUE(a.dropped_cols.empty());
  EXPECT_THROW(separable_approx(h, unit(1), unit(1), 100), Error);
}

TEST(Decay, BrownianSpectrum) {
  const Grid g = Grid::uniform(1, 0.0, 1.0, 401);
  const auto h = TwoVariableFunction::from_expression(g, g, "(x + y - abs(x - y)) / 2");
  const Eigen::VectorXd s = weighted_singular_values(h, unit(1), unit(1));
  for (int i = 1; i <= 10; ++i) {
    const double ref = 1.0 / ((i - 0.5) * (i - 0.5) * std::numbers::pi * std::numbers::pi);
    EXPECT_NEAR(s[i - 1] / ref, 1.0, 0.01) << i;
  }
  const DecayReport d = classify_decay(s, 64);
  EXPECT_EQ(d.classification, DecayClass::Polynomial);
  EXPECT_NEAR(d.fit_slope, -2.0, 0.25);
  EXPECT_TRUE(d.monotone);
}

TEST(Decay, SyntheticLadders) {
  EXPECT_EQ(classify_decay(sequence(60, [](double i) { return std::pow(2.0, -i / 3); }), 60).classification,
            DecayClass::GeometricOrFaster);
  EXPECT_EQ(classify_decay(sequence(64, [](double i) { return std::exp(-3 * std::sqrt(i)); }), 64).classification,
            DecayClass::SuperPolynomial);
  EXPECT_EQ(classify_decay(sequence(64, [](double i) { return std::pow(i, -2.0); }), 64).classification,
            DecayClass::Polynomial);
  EXPECT_EQ(classify_decay(sequence(64, [](double i) { return std::pow(i, -0.5); }), 64).classification,
            DecayClass::Slow);
  EXPECT_THROW(classify_decay(sequence(5, [](double i) { return 1 / i; }), 6), Error);
}
