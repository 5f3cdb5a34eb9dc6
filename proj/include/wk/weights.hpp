#pragma once

#include "wk/grid.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wk {

enum class WeightKind { IndicatorBox, Polynomial, GelfandShilov, ExpTypeAnalytic, Custom, Tensor };

const char* to_string(WeightKind kind);
WeightKind weight_kind_from_string(const std::string& name);

/// A nonnegative weight on R^k.
struct WeightFunction {
  int dim = 0;
  WeightKind kind = WeightKind::Custom;
  std::vector<double> params;
  std::function<double(PointRef)> eval;

  double operator()(PointRef x) const { return eval(x); }
  /// Values at every grid point, in grid order.
  Eigen::VectorXd sample(const Grid& grid) const;
};

/// Condition (I): M_gamma <= L * M_target with L summable and decaying.
struct ConditionIWitness {
  std::size_t target;
  WeightFunction summable;
};

/// Condition (II): M_gamma(x) <= constant * M_target(x + y) for |y| <= radius.
struct ConditionIIWitness {
  std::size_t target;
  double radius;
  double constant;
};

/// A finite, ordered list of weights standing in for a defining family, each
/// index optionally carrying explicit witnesses for conditions (I) and (II).
/// Families on C^k are stored as families on R^2k with complex_domain() set.
class DefiningFamily {
 public:
  struct Entry {
    std::string label;
    double value;  // numeric index value (NaN for composite indices)
    WeightFunction weight;
    std::optional<ConditionIWitness> cond_i;
    std::optional<ConditionIIWitness> cond_ii;
  };

  DefiningFamily(int dim, WeightKind kind, std::vector<Entry> entries, bool complex_domain = false);

  int dim() const { return dim_; }
  WeightKind kind() const { return kind_; }
  bool complex_domain() const { return complex_domain_; }
  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_.at(i); }
  const std::vector<Entry>& entries() const { return entries_; }
  const WeightFunction& weight(std::size_t i) const { return entry(i).weight; }
  const std::string& label(std::size_t i) const { return entry(i).label; }

  /// Position of the index with the given label; throws NotFound naming it.
  std::size_t index_of(const std::string& label) const;
  /// Position of the numeric index equal to `value` (relative 1e-12).
  std::size_t index_of(double value) const;

  const ConditionIWitness& cond_i(std::size_t i) const;
  const ConditionIIWitness& cond_ii(std::size_t i) const;
  bool has_cond_i(std::size_t i) const { return entry(i).cond_i.has_value(); }
  bool has_cond_ii(std::size_t i) const { return entry(i).cond_ii.has_value(); }

  /// Replace the witnesses of one index (used to probe deliberately wrong ones).
  DefiningFamily with_witnesses(std::size_t i, std::optional<ConditionIWitness> w1,
                                std::optional<ConditionIIWitness> w2) const;

 private:
  int dim_;
  WeightKind kind_;
  std::vector<Entry> entries_;
  bool complex_domain_;
};

/// Parameters of a built-in family.
///  - indicator-box: indices n, weights 1 on [-n, n]^k
///  - polynomial: indices l, weights (1 + |x|)^l
///  - gelfand-shilov-exp: params alpha > 0, A >= 0; indices A' > A, weights exp(|x/A'|^(1/alpha))
///  - exp-type-analytic: indices a > 0, weights e^{-a|z|} on C^k (grid dimension 2k)
struct FamilySpec {
  WeightKind kind = WeightKind::Polynomial;
  int k = 1;
  std::map<std::string, double> params;
  std::vector<double> indices;
};

DefiningFamily make_family(const FamilySpec& spec);

/// Family whose single index is the constant weight 1, without witnesses.
DefiningFamily constant_one_family(int dim);

struct TensorFamily {
  DefiningFamily left;
  DefiningFamily right;
  /// Product family on R^{k1+k2}; entry i * right.size() + j is the pair (i, j).
  DefiningFamily product;

  std::size_t index_of(std::size_t left_index, std::size_t right_index) const {
    return left_index * right.size() + right_index;
  }
};

TensorFamily tensor_family(const DefiningFamily& left, const DefiningFamily& right);

/// Outcome of a grid sweep.
struct CheckReport {
  std::string name;
  bool pass = false;
  double worst = 0.0;          // worst ratio (or residual) seen
  Point worst_at;              // where it was seen
  Eigen::Index points = 0;     // grid points examined
  Eigen::Index skipped = 0;    // 0/0 points skipped
  Eigen::Index violations = 0;
  std::vector<Point> failing;  // first few failing points
  std::optional<double> integral;   // quadrature of L^p (condition I)
  std::optional<double> shell_max;  // max of L over the outer shell relative to its global max
  std::string message;
};

struct CheckOptions {
  double tol = 1e-9;
  /// Condition (I) decay test: max of L over the boundary shell divided by max of
  /// L over the grid must be below this.
  double decay_threshold = 0.5;
  std::size_t max_failing_points = 16;
};

/// max over the grid of C (M_g1 + M_g2) / M_g; passes iff <= 1 + tol.
CheckReport check_condition_a(const DefiningFamily& family, std::size_t gamma1, std::size_t gamma2,
                              std::size_t gamma, double constant, const Grid& grid,
                              const CheckOptions& options = {});

/// Every grid point has some index with M_gamma(x) > 0.
CheckReport check_condition_c(const DefiningFamily& family, const Grid& grid, const CheckOptions& options = {});

/// Pointwise domination by the (I) witness plus summability and decay of L^p.
CheckReport check_condition_I(const DefiningFamily& family, std::size_t gamma, const Grid& grid, double p,
                              const CheckOptions& options = {});

/// Shift stability of the (II) witness over a deterministic sample of the ball.
CheckReport check_condition_II(const DefiningFamily& family, std::size_t gamma, const Grid& grid,
                               std::size_t ball_samples, const CheckOptions& options = {});

/// Deterministic ball sample: the origin, the 2k axis extremes, then `count`
/// Halton points (bases 2, 3, 5, ...) mapped into the ball by rejection.
std::vector<Point> ball_sample(int dim, double radius, std::size_t count);

}  // namespace wk
