#pragma once

#include "wk/error.hpp"
#include "wk/sampled_function.hpp"
#include "wk/weights.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>

namespace wk {

enum class SeminormForm { Sup, Lp, AnalyticSup, AnalyticLp };

inline const char* to_string(SeminormForm form) {
  switch (form) {
    case SeminormForm::Sup: return "sup";
    case SeminormForm::Lp: return "lp";
    case SeminormForm::AnalyticSup: return "analytic-sup";
    case SeminormForm::AnalyticLp: return "analytic-lp";
  }
  return "?";
}

struct SeminormValue {
  double value = 0.0;
  SeminormForm form = SeminormForm::Sup;
  std::string gamma;      // index label
  std::size_t gamma_pos = 0;
  int m = 0;
  std::optional<double> p;
  std::string grid;
  DerivativePath path = DerivativePath::Exact;
  /// Largest weighted term on the outermost grid shell. A sup attained there
  /// is truncation-suspect.
  double boundary_max = 0.0;
  Point argmax;  // sup forms only
};

namespace detail {

inline void require_compatible(const Grid& grid, const DefiningFamily& family, std::size_t gamma) {
  if (grid.dim() != family.dim())
    fail(ErrorKind::InvalidArgument, "function grid dimension " + std::to_string(grid.dim()) +
                                         " does not match family dimension " + std::to_string(family.dim()));
  if (gamma >= family.size()) fail(ErrorKind::NotFound, "family index position out of range");
}

template <typename Scalar>
void require_analytic(const SampledFunction<Scalar>& f) {
  if (!f.analytic()) fail(ErrorKind::InvalidArgument, "analytic seminorm of a function without the analytic flag");
}

// |d^mu f| for every |mu| <= m, one column per multi-index.
template <typename Scalar>
Eigen::MatrixXd derivative_moduli(const SampledFunction<Scalar>& f, int m, DerivativePath& path) {
  const auto indices = enumerate_multiindices(f.grid().dim(), m);
  Eigen::MatrixXd out(f.grid().size(), static_cast<Eigen::Index>(indices.size()));
  path = DerivativePath::Exact;
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const auto d = partial_derivative(f, indices[c]);
    if (!indices[c].is_zero() && d.path() == DerivativePath::FiniteDifference) path = DerivativePath::FiniteDifference;
    for (Eigen::Index j = 0; j < d.values().size(); ++j) {
      const double a = std::abs(d.values()[j]);
      if (!std::isfinite(a)) fail(ErrorKind::Numerical, "non-finite derivative of order " + indices[c].to_string());
      out(j, static_cast<Eigen::Index>(c)) = a;
    }
  }
  if (m == 0) path = f.path();
  return out;
}

template <typename Scalar>
SeminormValue sup_form(const SampledFunction<Scalar>& f, const DefiningFamily& family, std::size_t gamma, int m,
                       SeminormForm form) {
  require_compatible(f.grid(), family, gamma);
  if (m < 0) fail(ErrorKind::InvalidArgument, "derivative order must be >= 0");
  SeminormValue out;
  out.form = form;
  out.gamma = family.label(gamma);
  out.gamma_pos = gamma;
  out.m = m;
  out.grid = f.grid().describe();
  const Eigen::VectorXd w = family.weight(gamma).sample(f.grid());
  const Eigen::MatrixXd d = derivative_moduli(f, m, out.path);
  Eigen::Index best = 0;
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    const double v = w[j] == 0.0 ? 0.0 : w[j] * d.row(j).maxCoeff();
    if (!std::isfinite(v)) fail(ErrorKind::Numerical, "non-finite weighted value in sup seminorm");
    if (v > out.value) {
      out.value = v;
      best = j;
    }
    if (f.grid().on_boundary(j)) out.boundary_max = std::max(out.boundary_max, v);
  }
  out.argmax = f.grid().point(best);
  return out;
}

template <typename Scalar>
SeminormValue lp_form(const SampledFunction<Scalar>& f, const DefiningFamily& family, std::size_t gamma, int m,
                      double p, SeminormForm form) {
  require_compatible(f.grid(), family, gamma);
  if (m < 0) fail(ErrorKind::InvalidArgument, "derivative order must be >= 0");
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidArgument, "exponent p must be a finite number >= 1");
  SeminormValue out;
  out.form = form;
  out.gamma = family.label(gamma);
  out.gamma_pos = gamma;
  out.m = m;
  out.p = p;
  out.grid = f.grid().describe();
  const Eigen::VectorXd w = family.weight(gamma).sample(f.grid());
  const Eigen::MatrixXd d = derivative_moduli(f, m, out.path);
  Eigen::VectorXd integrand(d.rows());
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    double s = 0.0;
    if (w[j] != 0.0) {
      const double wp = std::pow(w[j], p);
      for (Eigen::Index c = 0; c < d.cols(); ++c) s += wp * std::pow(d(j, c), p);
    }
    integrand[j] = s;
    if (f.grid().on_boundary(j)) out.boundary_max = std::max(out.boundary_max, std::pow(s, 1.0 / p));
  }
  const double total = quadrature<double>(f.grid(), integrand).value;
  if (!std::isfinite(total)) fail(ErrorKind::Numerical, "non-finite L^p integral");
  out.value = std::pow(std::max(total, 0.0), 1.0 / p);
  return out;
}

}  // namespace detail

/// max over the grid and |mu| <= m of M_gamma(x) |d^mu f(x)|.
template <typename Scalar>
SeminormValue sup_seminorm(const SampledFunction<Scalar>& f, const DefiningFamily& family, std::size_t gamma, int m) {
  return detail::sup_form(f, family, gamma, m, SeminormForm::Sup);
}

/// (integral of M_gamma^p sum_{|mu| <= m} |d^mu f|^p)^(1/p), composite Simpson.
template <typename Scalar>
SeminormValue lp_seminorm(const SampledFunction<Scalar>& f, const DefiningFamily& family, std::size_t gamma, int m,
                          double p) {
  return detail::lp_form(f, family, gamma, m, p, SeminormForm::Lp);
}

/// max over the complex box of M_gamma(z) |f(z)|.
template <typename Scalar>
SeminormValue analytic_sup_seminorm(const SampledFunction<Scalar>& f, const DefiningFamily& family,
                                    std::size_t gamma) {
  detail::require_analytic(f);
  return detail::sup_form(f, family, gamma, 0, SeminormForm::AnalyticSup);
}

/// (integral over the complex box of M_gamma^p |f|^p d lambda)^(1/p).
template <typename Scalar>
SeminormValue analytic_lp_seminorm(const SampledFunction<Scalar>& f, const DefiningFamily& family,
                                   std::size_t gamma, double p) {
  detail::require_analytic(f);
  return detail::lp_form(f, family, gamma, 0, p, SeminormForm::AnalyticLp);
}

}  // namespace wk
