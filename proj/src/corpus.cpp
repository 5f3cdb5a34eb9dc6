#include "wk/corpus.hpp"

#include "wk/error.hpp"
#include "wk/mollifier.hpp"

#include <sstream>

namespace wk {

CorpusKind corpus_kind_from_string(const std::string& name) {
  if (name == "hermite") return CorpusKind::Hermite;
  if (name == "bump") return CorpusKind::Bump;
  if (name == "polynomial-gaussian" || name == "polynomial-times-gaussian") return CorpusKind::PolynomialGaussian;
  if (name == "entire") return CorpusKind::Entire;
  fail(ErrorKind::InvalidArgument, "unknown corpus kind '" + name + "'");
}

const char* to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::Hermite: return "hermite";
    case CorpusKind::Bump: return "bump";
    case CorpusKind::PolynomialGaussian: return "polynomial-gaussian";
    case CorpusKind::Entire: return "entire";
  }
  return "?";
}

namespace {

std::vector<Jet> jets_at(PointRef x, int order) {
  const auto layout = JetLayout::get(static_cast<int>(x.size()), order);
  std::vector<Jet> v;
  for (Eigen::Index i = 0; i < x.size(); ++i) v.push_back(Jet::variable(layout, static_cast<int>(i), x[i]));
  return v;
}

template <typename T>
T hermite_product(const MultiIndex& degrees, std::span<const T> x) {
  T out(1.0);
  for (std::size_t i = 0; i < x.size(); ++i) out = out * hermite_function<T>(degrees[static_cast<int>(i)], x[i]);
  return out;
}

template <typename T>
T monomial_gaussian(const MultiIndex& alpha, std::span<const T> x) {
  using std::exp;
  T out(1.0), s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int p = 0; p < alpha[static_cast<int>(i)]; ++p) out = out * x[i];
    s = s + x[i] * x[i];
  }
  return out * exp(-s);
}

// Wraps a scalar-generic formula as an exact evaluator: doubles for values,
// jets of the requested order for derivatives.
template <typename Formula>
RealFunction::Evaluator jet_evaluator(Formula formula) {
  return [formula](const MultiIndex& mu, PointRef x) {
    if (mu.is_zero()) {
      std::vector<double> v(x.data(), x.data() + x.size());
      return formula(std::span<const double>(v));
    }
    const auto v = jets_at(x, mu.order());
    return formula(std::span<const Jet>(v)).derivative(mu);
  };
}

std::string degree_label(const char* stem, const MultiIndex& mu) {
  std::ostringstream os;
  os << stem << (mu.dim() == 1 ? std::to_string(mu[0]) : mu.to_string());
  return os.str();
}

}  // namespace

std::vector<RealFunction> make_corpus(CorpusKind kind, int n, const Grid& grid) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "corpus size must be >= 1");
  const int dim = grid.dim();
  std::vector<RealFunction> out;
  switch (kind) {
    case CorpusKind::Hermite:
    case CorpusKind::PolynomialGaussian: {
      // Enough graded multi-indices to cover n members.
      int order = 0;
      while (static_cast<int>(multiindex_count(dim, order)) < n) ++order;
      const auto degrees = enumerate_multiindices(dim, order);
      for (int i = 0; i < n; ++i) {
        const MultiIndex mu = degrees[static_cast<std::size_t>(i)];
        if (kind == CorpusKind::Hermite) {
          auto formula = [mu](auto x) {
            using T = typename decltype(x)::value_type;
            return hermite_product<T>(mu, x);
          };
          out.emplace_back(grid, jet_evaluator(formula));
          out.back().set_label(degree_label("hermite", mu));
        } else {
          auto formula = [mu](auto x) {
            using T = typename decltype(x)::value_type;
            return monomial_gaussian<T>(mu, x);
          };
          out.emplace_back(grid, jet_evaluator(formula));
          out.back().set_label(degree_label("polygauss", mu));
        }
      }
      break;
    }
    case CorpusKind::Bump:
      for (int i = 0; i < n; ++i) {
        const Mollifier psi(dim, 1.0 + 0.5 * i);
        out.push_back(psi.sample(grid));
        out.back().set_label("bump" + std::to_string(i));
      }
      break;
    case CorpusKind::Entire:
      fail(ErrorKind::InvalidArgument, "the entire corpus is complex-valued; use make_entire_corpus");
  }
  return out;
}

namespace {

using cplx = std::complex<double>;

cplx z_of(PointRef x) { return {x[0], x[1]}; }

void require_complex_line(const Grid& grid) {
  if (grid.dim() != 2)
    fail(ErrorKind::InvalidArgument, "entire corpus supports one complex variable (a grid over R^2) only");
}

// d_x^a d_y^b f = i^b f^(a+b) for entire f.
cplx real_partial_factor(const MultiIndex& mu) {
  static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return powers[mu[1] % 4];
}

}  // namespace

ComplexFunction entire_polynomial(std::vector<cplx> coeffs, const Grid& grid) {
  require_complex_line(grid);
  if (coeffs.empty()) coeffs.push_back(0.0);
  ComplexFunction::Evaluator eval = [coeffs](const MultiIndex& mu, PointRef x) {
    const int d = mu.order();
    const cplx z = z_of(x);
    // d-th derivative of sum c_j z^j by Horner on the shifted coefficients.
    cplx acc = 0.0;
    for (int j = static_cast<int>(coeffs.size()) - 1; j >= d; --j) {
      double falling = 1.0;
      for (int t = 0; t < d; ++t) falling *= (j - t);
      acc = acc * z + coeffs[static_cast<std::size_t>(j)] * falling;
    }
    return real_partial_factor(mu) * acc;
  };
  ComplexFunction f(grid, std::move(eval), true);
  std::ostringstream os;
  os << "poly(deg=" << coeffs.size() - 1 << ")";
  f.set_label(os.str());
  return f;
}

ComplexFunction entire_exponential(cplx c, const Grid& grid) {
  require_complex_line(grid);
  ComplexFunction::Evaluator eval = [c](const MultiIndex& mu, PointRef x) {
    return real_partial_factor(mu) * std::pow(c, mu.order()) * std::exp(c * z_of(x));
  };
  ComplexFunction f(grid, std::move(eval), true);
  std::ostringstream os;
  os << "exp(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i z)";
  f.set_label(os.str());
  return f;
}

std::vector<ComplexFunction> make_entire_corpus(int n, const Grid& grid) {
  require_complex_line(grid);
  if (n < 1) fail(ErrorKind::InvalidArgument, "corpus size must be >= 1");
  std::vector<ComplexFunction> out;
  for (int i = 0; i < n; ++i) {
    if (i < 4) {
      std::vector<cplx> coeffs(static_cast<std::size_t>(i + 1), 0.0);
      coeffs.back() = 1.0;
      out.push_back(entire_polynomial(std::move(coeffs), grid));
      out.back().set_label(i == 0 ? "1" : (i == 1 ? "z" : "z^" + std::to_string(i)));
    } else {
      const int j = i - 4;
      const double magnitude = 0.25 + 0.05 * (j / 4);
      static const cplx directions[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      out.push_back(entire_exponential(magnitude * directions[j % 4], grid));
    }
  }
  return out;
}

}  // namespace wk
