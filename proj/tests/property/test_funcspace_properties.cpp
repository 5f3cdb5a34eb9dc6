#include "property.hpp"

#include "wk/corpus.hpp"
#include "wk/mollifier.hpp"
#include "wk/sampled_function.hpp"

#include <cmath>

using namespace wk;
using wk::test::for_all;
using wk::test::Gen;

TEST(FuncspaceProperties, MultiindexCountIsBinomial) {
  for_all("multiindex count", 21, [](Gen& gen) {
    const int k = gen.integer(1, 4), m = gen.integer(0, 6);
    const auto mus = enumerate_multiindices(k, m);
    EXPECT_EQ(mus.size(), static_cast<std::size_t>(binomial(m + k, k)));
    EXPECT_EQ(mus.size(), multiindex_count(k, m));
    for (std::size_t i = 1; i < mus.size(); ++i) EXPECT_LE(mus[i - 1].order(), mus[i].order());
  });
}

TEST(FuncspaceProperties, QuadratureExactOnCubics) {
  for_all("cubic quadrature", 22, [](Gen& gen) {
    const int k = gen.integer(1, 2);
    std::vector<Axis> axes;
    std::vector<Eigen::Vector4d> coeffs;
    for (int a = 0; a < k; ++a) {
      const double lo = gen.uniform(-3.0, 1.0);
      axes.push_back({lo, lo + gen.uniform(0.5, 4.0), gen.integer(3, 40)});
      coeffs.push_back(gen.vector(4, -2.0, 2.0));
    }
    const Grid g(axes);
    Eigen::VectorXd v(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      double p = 1.0;
      for (int a = 0; a < k; ++a) {
        const double x = g.points()(a, j);
        const auto& c = coeffs[static_cast<std::size_t>(a)];
        p *= c[0] + x * (c[1] + x * (c[2] + x * c[3]));
      }
      v[j] = p;
    }
    double exact = 1.0;
    for (int a = 0; a < k; ++a) {
      const auto& c = coeffs[static_cast<std::size_t>(a)];
      auto prim = [&](double x) { return x * (c[0] + x * (c[1] / 2 + x * (c[2] / 3 + x * c[3] / 4))); };
      exact *= prim(axes[static_cast<std::size_t>(a)].hi) - prim(axes[static_cast<std::size_t>(a)].lo);
    }
    const double got = quadrature<double>(g, v).value;
    EXPECT_NEAR(got, exact, 1e-13 * std::max(1.0, std::abs(exact)) + 1e-13);
  });
}

TEST(FuncspaceProperties, ExactDerivativesCompose) {
  const Grid g = Grid::uniform(2, -2.0, 2.0, 9);
  const auto corpus = make_corpus(CorpusKind::Hermite, 10, g);
  for_all("derivative composition", 23, [&](Gen& gen) {
    const RealFunction& f = corpus[static_cast<std::size_t>(gen.integer(0, 9))];
    const MultiIndex mu({gen.integer(0, 2), gen.integer(0, 2)});
    const MultiIndex nu({gen.integer(0, 2), gen.integer(0, 2)});
    const RealFunction a = partial_derivative(partial_derivative(f, mu), nu);
    const RealFunction b = partial_derivative(f, mu + nu);
    EXPECT_EQ(a.values(), b.values());
  });
}

TEST(FuncspaceProperties, MollifierMassAndSupport) {
  for_all("mollifier", 24, [](Gen& gen) {
    const double rho = gen.uniform(0.1, 3.0);
    const Mollifier psi(1, rho);
    const RealFunction s = psi.sample(Grid::uniform(1, -rho, rho, 4001));
    EXPECT_NEAR(quadrature(s).value, 1.0, 1e-10);
    Point x(1);
    x[0] = (gen.coin() ? 1.0 : -1.0) * rho * gen.uniform(1.0, 3.0);
    EXPECT_EQ(psi(x), 0.0);
    EXPECT_EQ(psi.derivative(MultiIndex({gen.integer(1, 3)}), x), 0.0);
  });
  const Mollifier psi2(2, 0.7);
  EXPECT_NEAR(quadrature(psi2.sample(Grid::uniform(2, -0.7, 0.7, 401))).value, 1.0, 1e-10);
}
