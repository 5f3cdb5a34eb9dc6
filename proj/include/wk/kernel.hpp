#pragma once

#include "wk/grid.hpp"
#include "wk/sampled_function.hpp"
#include "wk/weights.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wk {

/// h(x, y) sampled on an x-grid times a y-grid: row i is x_i, column j is y_j.
/// The optional evaluator returns mixed partials d^mu h(x, y) for mu over the
/// k1 + k2 joint variables (x first).
class TwoVariableFunction {
 public:
  using Evaluator = std::function<double(const MultiIndex&, PointRef, PointRef)>;

  TwoVariableFunction(Grid x_grid, Grid y_grid, Eigen::MatrixXd values);
  TwoVariableFunction(Grid x_grid, Grid y_grid, Evaluator exact);

  /// h = f (x) g, exact when both factors are.
  static TwoVariableFunction separable(const RealFunction& f, const RealFunction& g);
  /// Expression in x1..xk1, y1..yk2 (x, y also accepted in one dimension).
  static TwoVariableFunction from_expression(const Grid& x_grid, const Grid& y_grid, const std::string& expr);

  const Grid& x_grid() const { return x_grid_; }
  const Grid& y_grid() const { return y_grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  bool has_exact() const { return static_cast<bool>(exact_); }
  const Evaluator& exact() const { return exact_; }

  /// Same evaluator on new grids.
  TwoVariableFunction resampled(const Grid& x_grid, const Grid& y_grid) const;

 private:
  Grid x_grid_, y_grid_;
  Eigen::MatrixXd values_;
  Evaluator exact_;
};

/// y -> h(x0, y); x0 must be a node of the x-grid.
RealFunction slice(const TwoVariableFunction& h, PointRef x0);

struct AppliedFunctional {
  RealFunction function;  // h_v on the x-grid
  std::size_t interpolated_terms = 0;  // off-node terms resolved by multilinear interpolation
};

/// h_v(x_i) = sum_j c_j h(x_i, y_j). Node points read the matrix; off-node
/// points use the evaluator when there is one, else multilinear interpolation.
AppliedFunctional apply_functional(const TwoVariableFunction& h, const DiscreteFunctional& v);

struct DiffLevel {
  Eigen::Index points;
  double spacing;
  double max_error;
};

struct DiffReport {
  MultiIndex mu;
  std::vector<DiffLevel> levels;
  std::vector<double> ratios;  // error(level i) / error(level i+1)
  std::vector<double> orders;  // log2 of the ratios
  bool exact_rhs;              // rhs from the evaluator
  /// With an evaluator: max |d^mu h_v - v(d^mu_x h)| using exact derivatives of
  /// h_v on h's own x-grid.
  std::optional<double> exact_error;
};

/// Compares finite-difference d^mu (h_v) against v(d^mu_x h) on x-grids with the
/// given point counts (same box as h's x-grid). Resampling requires the
/// evaluator; without one a single level at h's own grid is reported.
DiffReport check_diff_identity(const TwoVariableFunction& h, const DiscreteFunctional& v, const MultiIndex& mu,
                               const std::vector<Eigen::Index>& x_levels);

/// Weight values times square-root Simpson weights; the row scaling D of D H D'.
Eigen::VectorXd weighted_scaling(const Grid& grid, const WeightFunction& weight);

struct SeparableApproximation {
  int rank;
  Eigen::MatrixXd left;   // nx x r, unweighted, singular values absorbed
  Eigen::MatrixXd right;  // ny x r, unweighted
  Eigen::VectorXd singular_values;  // all of them, nonincreasing
  double residual;        // (sum_{i>r} s_i^2)^(1/2)
  std::vector<Eigen::Index> dropped_rows, dropped_cols;  // zero-weight grid points

  Eigen::MatrixXd reconstruct() const { return left * right.transpose(); }
};

SeparableApproximation separable_approx(const TwoVariableFunction& h, const WeightFunction& mx,
                                        const WeightFunction& ny, int rank);

/// ||D_x (H - A) D_y||_F for a candidate A on the same grids.
double weighted_error(const TwoVariableFunction& h, const Eigen::MatrixXd& candidate, const WeightFunction& mx,
                      const WeightFunction& ny);

/// Singular values of D_x H D_y only (no factors), nonincreasing.
Eigen::VectorXd weighted_singular_values(const TwoVariableFunction& h, const WeightFunction& mx,
                                         const WeightFunction& ny);

enum class DecayClass { GeometricOrFaster, SuperPolynomial, Polynomial, Slow };

const char* to_string(DecayClass c);

struct DecayThresholds {
  double noise_floor = 1e-12;      // s_i / s_1 below this is not significant
  double geometric_ratio = 0.8;    // last doubling rate / best doubling rate
  double superpoly_ratio = 1.25;   // growth of the doubling exponent
  double residual_target = 1e-8;
};

struct DecayRow {
  int rank;
  double singular_value;
  double residual;  // residual after keeping `rank` terms
};

struct DecayReport {
  std::vector<DecayRow> table;
  bool monotone = true;
  DecayClass classification = DecayClass::GeometricOrFaster;
  double fit_slope = 0.0;  // slope of log s_i vs i (geometric) or vs log i (otherwise)
  std::optional<int> rank_at_target;
  int significant = 0;
  std::string norm = "weighted-hilbert-schmidt";
};

/// Classifies s_1..s_rmax by doubling ratios log(s_i / s_2i): a geometric
/// ladder keeps log(s_i/s_2i)/i from collapsing; a polynomial one keeps
/// log2(s_i/s_2i) constant; in between is super-polynomial.
DecayReport classify_decay(const Eigen::VectorXd& singular_values, int r_max, const DecayThresholds& t = {});

DecayReport density_decay_report(const TwoVariableFunction& h, const WeightFunction& mx, const WeightFunction& ny,
                                 int r_max, const DecayThresholds& t = {});

}  // namespace wk
