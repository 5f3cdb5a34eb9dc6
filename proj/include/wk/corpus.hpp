#pragma once

#include "wk/grid.hpp"
#include "wk/jet.hpp"
#include "wk/sampled_function.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace wk {

enum class CorpusKind { Hermite, Bump, PolynomialGaussian, Entire };

CorpusKind corpus_kind_from_string(const std::string& name);
const char* to_string(CorpusKind kind);

/// Hermite function H_n(x) e^{-x^2/2} / sqrt(2^n n!), via the stable scaled
/// recurrence. n = 0 gives exactly e^{-x^2/2}.
template <typename T>
T hermite_function(int n, const T& x) {
  using std::exp;
  const T gauss = exp(T(-0.5) * x * x);
  T prev(0.0), cur(1.0);
  for (int j = 0; j < n; ++j) {
    const T next = T(std::sqrt(2.0 / (j + 1))) * x * cur - T(std::sqrt(static_cast<double>(j) / (j + 1))) * prev;
    prev = cur;
    cur = next;
  }
  return cur * gauss;
}

/// n real test functions on `grid`, each with exact derivative evaluators:
///  - hermite: products of 1-d Hermite functions, member i uses the i-th
///    multi-index in graded order as the per-axis degrees;
///  - bump: unit-mass mollifiers of radius 1, 1.5, 2, ...;
///  - polynomial-gaussian: x^alpha e^{-|x|^2}, alpha in graded order.
/// The entire kind is complex-valued; use make_entire_corpus.
std::vector<RealFunction> make_corpus(CorpusKind kind, int n, const Grid& grid);

/// Entire functions of one complex variable on a grid over R^2 (Re z, Im z):
/// members 0..3 are 1, z, z^2, z^3; later members are e^{cz} with |c| <= 0.4
/// rotating through the four axis directions. All carry exact real partials
/// d_x^a d_y^b f = i^b f^(a+b).
std::vector<ComplexFunction> make_entire_corpus(int n, const Grid& grid);

/// sum_j coeffs[j] z^j as an analytic sampled function (k = 1).
ComplexFunction entire_polynomial(std::vector<std::complex<double>> coeffs, const Grid& grid);
/// e^{cz} as an analytic sampled function (k = 1).
ComplexFunction entire_exponential(std::complex<double> c, const Grid& grid);

}  // namespace wk
