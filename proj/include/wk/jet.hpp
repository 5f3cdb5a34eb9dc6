#pragma once

#include "wk/grid.hpp"

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace wk {

/// Monomial bookkeeping for truncated Taylor series in `vars` variables up to
/// total degree `order`. Layouts are interned, so equal (vars, order) pairs
/// share one instance.
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  Eigen::Index terms() const { return static_cast<Eigen::Index>(monomials_.size()); }
  const MultiIndex& monomial(Eigen::Index i) const { return monomials_[static_cast<std::size_t>(i)]; }
  /// Position of a monomial, or -1 when its degree exceeds the order.
  Eigen::Index find(const MultiIndex& mu) const;

  struct Product {
    Eigen::Index lhs, rhs, out;
  };
  const std::vector<Product>& products() const { return products_; }

  JetLayout(int vars, int order);

 private:
  int vars_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<Product> products_;
};

/// Truncated multivariate Taylor expansion: coefficient i holds
/// d^mu f / mu! for the i-th monomial mu of the layout. A jet without a layout
/// is a constant and broadcasts against any other jet.
class Jet {
 public:
  Jet(double constant = 0.0);  // NOLINT(google-explicit-constructor)
  Jet(std::shared_ptr<const JetLayout> layout, Eigen::VectorXd coeffs);

  /// The coordinate function x_var expanded around `value`.
  static Jet variable(const std::shared_ptr<const JetLayout>& layout, int var, double value);

  double value() const { return c_[0]; }
  /// Partial derivative d^mu at the expansion point (0 beyond the order).
  double derivative(const MultiIndex& mu) const;
  bool is_constant() const;
  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }
  const Eigen::VectorXd& coeffs() const { return c_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  /// f(a0 + u) = sum_n f^(n)(a0)/n! u^n with `derivs` = f^(n)(a0), n = 0..order.
  Jet compose(const std::vector<double>& derivs) const;

 private:
  void adopt_layout(const Jet& o);

  std::shared_ptr<const JetLayout> layout_;
  Eigen::VectorXd c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, const Jet& b);
Jet operator/(Jet a, const Jet& b);
Jet operator-(const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet abs(const Jet& a);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, const Jet& p);

/// Scalar-generic helpers so that templated formulas work for double and Jet.
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace wk
