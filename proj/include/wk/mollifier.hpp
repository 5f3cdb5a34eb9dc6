#pragma once

#include "wk/grid.hpp"
#include "wk/jet.hpp"
#include "wk/sampled_function.hpp"

#include <cmath>
#include <span>

namespace wk {

/// psi(x) = c exp(-1/(1 - |x/rho|^2)) on the open rho-ball, 0 outside, with c
/// fixed so that psi has unit mass.
class Mollifier {
 public:
  Mollifier(int dim, double radius);

  int dim() const { return dim_; }
  double radius() const { return radius_; }
  double normalization() const { return norm_; }

  double operator()(PointRef x) const;
  /// Exact partial derivative d^mu psi(x), any order (Taylor jets).
  double derivative(const MultiIndex& mu, PointRef x) const;

  /// Scalar-generic formula, T = double or Jet.
  template <typename T>
  T eval(std::span<const T> x) const;

  /// psi as a sampled function carrying its exact derivatives.
  RealFunction sample(const Grid& grid) const;

 private:
  int dim_;
  double radius_;
  double norm_;
};

/// Unit-mass normalization constant for the radius-rho bump in dimension k:
/// 1 / (rho^k |S^{k-1}| int_0^1 exp(-1/(1-t^2)) t^{k-1} dt).
double mollifier_normalization(int dim, double radius);

/// Nodes and weights of a Simpson rule on [-rho, rho]^k restricted to the open ball.
struct BallQuadrature {
  Eigen::MatrixXd nodes;  // dim x n
  Eigen::VectorXd weights;
};
BallQuadrature ball_quadrature(int dim, double radius, Eigen::Index points_per_axis);

/// exp(-1/t) for t > 0, 0 otherwise; smooth with all derivatives vanishing at 0.
template <typename T>
T flat_exp(const T& t) {
  using std::exp;
  if (value_of(t) <= 0.0) return T(0.0) * t;
  return exp(T(-1.0) / t);
}

/// phi(x) = 1 for |x| <= 1, 0 for |x| >= 2, smooth in between, built from the
/// same flat exponential as the mollifier.
class SmoothCutoff {
 public:
  explicit SmoothCutoff(int dim) : dim_(dim) {}
  int dim() const { return dim_; }

  template <typename T>
  T eval(std::span<const T> x) const {
    T s(0.0);
    for (const T& v : x) s = s + v * v;
    const T t = (T(4.0) - s) / T(3.0);
    const T a = flat_exp(t);
    const T b = flat_exp(T(1.0) - t);
    return a / (a + b);
  }

  double operator()(PointRef x) const;
  double derivative(const MultiIndex& mu, PointRef x) const;
  /// 1 + sup over the support shell and |nu| <= m of |d^nu phi|, estimated on a
  /// dense grid of [-2, 2]^k.
  double leibniz_constant(int max_order, Eigen::Index points_per_axis = 0) const;

 private:
  int dim_;
};

template <typename T>
T Mollifier::eval(std::span<const T> x) const {
  using std::exp;
  T s(0.0);
  for (const T& v : x) s = s + v * v;
  const T u = s / T(radius_ * radius_);
  if (value_of(u) >= 1.0) return T(0.0) * u;
  return T(norm_) * exp(T(-1.0) / (T(1.0) - u));
}

}  // namespace wk
