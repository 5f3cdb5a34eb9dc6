#include "property.hpp"

#include "wk/weights.hpp"

#include <cmath>
#include <cstring>

using namespace wk;
using wk::test::for_all;
using wk::test::Gen;

namespace {

struct Named {
  const char* name;
  DefiningFamily family;
};

std::vector<Named> builtins(int k) {
  return {
      {"indicator", make_family({WeightKind::IndicatorBox, k, {}, {1, 2, 3, 4, 5}})},
      {"polynomial", make_family({WeightKind::Polynomial, k, {}, {0, 1, 2, 3, 4}})},
      {"gelfand-shilov", make_family({WeightKind::GelfandShilov, k, {{"alpha", 1.0}, {"A", 1.0}}, {1.5, 2, 3}})},
      {"gelfand-shilov-0.5", make_family({WeightKind::GelfandShilov, k, {{"alpha", 0.5}, {"A", 1.0}}, {1.5, 2, 3}})},
  };
}

}  // namespace

TEST(WeightProperties, BuiltinWitnessesHoldOnTheBox) {
  for (int k = 1; k <= 2; ++k) {
    const Grid g = Grid::uniform(k, -10.0, 10.0, k == 1 ? 2001 : 201);
    for (const Named& n : builtins(k)) {
      for (std::size_t i = 0; i < n.family.size(); ++i) {
        if (n.family.has_cond_i(i)) EXPECT_TRUE(check_condition_I(n.family, i, g, 1.0).pass) << n.name << " " << i;
        if (n.family.has_cond_ii(i))
          EXPECT_TRUE(check_condition_II(n.family, i, g, 16).pass) << n.name << " " << i;
      }
    }
  }
  const DefiningFamily e = make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.25, 0.5, 1.0}});
  const Grid plane = Grid::uniform(2, -10.0, 10.0, 201);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.has_cond_i(i)) EXPECT_TRUE(check_condition_I(e, i, plane, 1.0).pass);
    if (e.has_cond_ii(i)) EXPECT_TRUE(check_condition_II(e, i, plane, 16).pass);
  }
}

TEST(WeightProperties, TensorWitnessesComposeOnAllPairs) {
  const auto fams = builtins(1);
  const Grid g = Grid::uniform(2, -10.0, 10.0, 81);
  for (const Named& a : fams) {
    for (const Named& b : fams) {
      const TensorFamily t = tensor_family(a.family, b.family);
      for (std::size_t i = 0; i < a.family.size(); ++i) {
        for (std::size_t j = 0; j < b.family.size(); ++j) {
          const std::size_t ij = t.index_of(i, j);
          if (t.product.has_cond_i(ij)) EXPECT_TRUE(check_condition_I(t.product, ij, g, 1.0).pass);
          if (t.product.has_cond_ii(ij)) EXPECT_TRUE(check_condition_II(t.product, ij, g, 8).pass);
        }
      }
    }
  }
  // exp-type (R^2) against a one-dimensional polynomial family, on R^3
  const TensorFamily t = tensor_family(make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.5, 1.0}}),
                                       make_family({WeightKind::Polynomial, 1, {}, {0, 1, 2}}));
  const Grid g3 = Grid::uniform(3, -6.0, 6.0, 25);
  for (std::size_t ij = 0; ij < t.product.size(); ++ij) {
    if (t.product.has_cond_i(ij)) EXPECT_TRUE(check_condition_I(t.product, ij, g3, 1.0).pass);
    if (t.product.has_cond_ii(ij)) EXPECT_TRUE(check_condition_II(t.product, ij, g3, 8).pass);
  }
}

TEST(WeightProperties, EvaluationIsBitIdentical) {
  const auto fams = builtins(2);
  for_all("weight determinism", 11, [&](Gen& gen) {
    const Named& n = fams[static_cast<std::size_t>(gen.integer(0, static_cast<int>(fams.size()) - 1))];
    const auto i = static_cast<std::size_t>(gen.integer(0, static_cast<int>(n.family.size()) - 1));
    const Point x = gen.vector(2, -12.0, 12.0);
    const double a = n.family.weight(i)(x);
    const double b = n.family.weight(i)(x);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
  });
}

TEST(WeightProperties, PolynomialMonotoneInIndex) {
  const DefiningFamily F = make_family({WeightKind::Polynomial, 2, {}, {0, 0.5, 1, 2, 3.5, 4}});
  for_all("polynomial monotonicity", 12, [&](Gen& gen) {
    auto i = static_cast<std::size_t>(gen.integer(0, 5));
    auto j = static_cast<std::size_t>(gen.integer(0, 5));
    if (F.entry(i).value > F.entry(j).value) std::swap(i, j);
    const Point x = gen.vector(2, -20.0, 20.0);
    EXPECT_LE(F.weight(i)(x), F.weight(j)(x));
  });
}

TEST(WeightProperties, ShiftWitnessOnRandomPoints) {
  // Off-grid spot checks of (II) for the polynomial and exp-type witnesses.
  const DefiningFamily P = make_family({WeightKind::Polynomial, 1, {}, {0, 1, 2, 3}});
  const DefiningFamily E = make_family({WeightKind::ExpTypeAnalytic, 1, {}, {0.5, 1.0, 2.0}});
  for_all("shift witness", 13, [&](Gen& gen) {
    const bool poly = gen.coin();
    const DefiningFamily& F = poly ? P : E;
    const auto i = static_cast<std::size_t>(gen.integer(poly ? 0 : 1, static_cast<int>(F.size()) - 1));
    const ConditionIIWitness& w = F.cond_ii(i);
    const Point x = gen.vector(F.dim(), -50.0, 50.0);
    Point y = gen.vector(F.dim(), -1.0, 1.0);
    if (y.norm() > w.radius) y *= w.radius / y.norm();
    EXPECT_LE(F.weight(i)(x), w.constant * F.weight(w.target)(x + y) * (1 + 1e-12));
  });
}
