#pragma once

#include "wk/mollifier.hpp"
#include "wk/sampled_function.hpp"
#include "wk/seminorms.hpp"
#include "wk/weights.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wk {

// ---------------------------------------------------------------------------
// Density by cutoffs

struct CutoffTail {
  double n;
  SeminormValue value;  // ||psi_n f||^p_{gamma,m}, psi_n = 1 - phi(x/n)
  double tail;          // integral over |x| >= n of M^p sum |d^mu f|^p
  double majorant;      // A 2^m q(m) tail^(1/p)
  bool within = false;  // value <= majorant (1 + tol)
};

struct CutoffReport {
  double leibniz_constant;  // A = 1 + sup |d^nu phi|, |nu| <= m
  std::vector<CutoffTail> tails;
  bool pass = false;
};

CutoffReport cutoff_tail_norms(const RealFunction& f, const DefiningFamily& family, std::size_t gamma, int m,
                               double p, const std::vector<double>& n_list, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Smoothed weights

/// M~(x) = int M_source(x + x') psi(x') dx' by a fixed quadrature of the
/// mollifier ball. Quadrature weights are rescaled so that the discrete mass of
/// psi is exactly 1; the discrete M~ then obeys (4s) exactly whenever the
/// shift condition holds at the nodes.
class SmoothedWeight {
 public:
  SmoothedWeight(WeightFunction source, std::size_t source_index, Mollifier psi, int max_order,
                 Eigen::Index ball_points = 0);

  std::size_t source_index() const { return source_index_; }
  const Mollifier& mollifier() const { return psi_; }
  Eigen::Index nodes() const { return ball_.weights.size(); }

  double operator()(PointRef x) const;
  /// d^mu M~(x) = (-1)^|mu| int M_source(x + x') d^mu psi(x') dx'.
  double derivative(const MultiIndex& mu, PointRef x) const;
  /// d^mu M~(x) for each listed mu, sharing the weight evaluations.
  Eigen::VectorXd derivatives(const std::vector<MultiIndex>& mus, PointRef x) const;
  /// Discrete int |d^mu psi|.
  double abs_moment(const MultiIndex& mu) const;

 private:
  const Eigen::VectorXd& psi_table(const MultiIndex& mu) const;

  WeightFunction source_;
  std::size_t source_index_;
  Mollifier psi_;
  BallQuadrature ball_;
  std::map<MultiIndex, Eigen::VectorXd> tables_;  // d^mu psi at the nodes, |mu| <= max_order
};

/// Default ball resolution per axis: 401 in one dimension, fewer above.
Eigen::Index default_ball_points(int dim);

struct SmoothingResult {
  SmoothedWeight weight;
  std::size_t gamma, gamma1, gamma2;  // gamma -> gamma' -> gamma'' along (II)
  double C;                           // max of the two shift constants
  double radius;                      // min of the two witness radii
  std::vector<std::pair<MultiIndex, double>> c_mu;  // C int |d^mu psi|, |mu| <= k
  CheckReport check_4s;  // M_gamma <= C M~
  CheckReport check_5s;  // |d^mu M~| <= C_mu M_gamma''
};

struct SmoothingOptions {
  std::optional<double> mollifier_radius;  // defaults to the witness radius
  Eigen::Index ball_points = 0;
  double tol = 1e-9;
};

/// Apply (II) twice from gamma, smooth M_gamma' and grid-verify (4s) and (5s).
/// Throws when psi would leave the witness ball; failed inequalities are
/// reported, not thrown.
SmoothingResult smooth_weight(const DefiningFamily& family, std::size_t gamma, const Grid& grid,
                              const SmoothingOptions& options = {});

// ---------------------------------------------------------------------------
// Norm equivalence

struct EquivalenceCertificate {
  std::size_t gamma;
  int m;
  double p;
  std::size_t gamma1, gamma2, gamma_tilde;
  bool degenerate_chain;  // gamma' == gamma''
  int m_tilde;
  double mollifier_radius;
  double C;
  std::vector<std::pair<MultiIndex, double>> c_mu;
  double c_prime;
  std::size_t q_m_tilde;
  /// int L^{p/(p-1)} for p > 1; sup of L over the grid for p = 1.
  double J;
  double A;
  CheckReport check_4s, check_5s;
  std::string grid;
};

/// Constants (gamma~, m~, A) of ||f||_{gamma,m} <= A ||f||^p_{gamma~,m~}.
/// Throws when the witness chain is broken or J is not finite; a failed (4s)
/// or (5s) grid check throws as well, naming the worst point.
EquivalenceCertificate derive_equivalence_constants(const DefiningFamily& family, std::size_t gamma, int m, double p,
                                                    const Grid& grid, const SmoothingOptions& options = {});

struct EquivalenceEntry {
  std::string label;
  double lhs, rhs, ratio;                  // sup vs A * L^p
  double reverse_lhs, reverse_rhs, reverse_ratio;  // L^p vs A2 * sup
  bool pass;
};

struct EquivalenceReport {
  EquivalenceCertificate certificate;
  std::size_t reverse_gamma;  // (I) target of gamma
  double A2;
  std::vector<EquivalenceEntry> entries;
  double max_ratio = 0.0;
  double max_reverse_ratio = 0.0;
  std::size_t violations = 0;
  bool pass = false;
};

EquivalenceReport verify_norm_equivalence(const DefiningFamily& family, std::size_t gamma, int m, double p,
                                          const std::vector<RealFunction>& corpus, double tol = 1e-6,
                                          const SmoothingOptions& options = {});

// ---------------------------------------------------------------------------
// Pietsch bound

struct PietschEntry {
  std::string label;
  double lhs, rhs;
  double margin;  // rhs / lhs (infinite when lhs = 0 < rhs, 1 when both vanish)
  bool pass;
};

struct PietschReport {
  EquivalenceCertificate certificate;  // p = 1
  std::size_t gamma_t1, gamma_t2;      // gamma~' from (I), gamma~'' from the second smoothing
  double C2;                           // constant of M_gamma~' <= C2 M~ <= C2^2 M_gamma~''
  CheckReport check_lower, check_upper;
  std::vector<PietschEntry> entries;
  double min_margin = 0.0;
  bool pass = false;
};

PietschReport verify_pietsch_bound(const DefiningFamily& family, std::size_t gamma, int m,
                                   const std::vector<RealFunction>& corpus, double tol = 1e-6,
                                   const SmoothingOptions& options = {});

// ---------------------------------------------------------------------------
// Entire functions

struct BoundReport {
  std::string label;
  double lhs, rhs;
  double C;
  std::size_t gamma_prime;
  double factor;  // max_{j <= m} j! r^-j
  bool pass;
};

/// ||f||_{gamma,m} over real partials <= C max_{j<=m} j! r^-j ||f||_{gamma'}.
BoundReport cauchy_derivative_bound(const ComplexFunction& f, const DefiningFamily& family, std::size_t gamma, int m,
                                    double r, double tol = 1e-9);

struct MeanValueReport {
  std::complex<double> center;
  std::complex<double> average;
  double residual;
  bool pass;
};

/// |f(z0) - (pi r^2)^-1 int_{D_r(z0)} f| with Simpson in the radius and the
/// periodic trapezoid rule in the angle. One complex variable.
MeanValueReport mean_value_check(const ComplexFunction& f, std::complex<double> z0, double r,
                                 Eigen::Index points = 401, double tol = 1e-8);

struct AnalyticEquivalenceEntry {
  std::string label;
  double sup, lp_prime, backward_rhs;  // ||f||_gamma <= C (pi r^2)^{-k/p} ||f||^p_{gamma'}
  double lp, sup_prime, forward_rhs;   // ||f||^p_gamma <= A ||f||_{gamma'_I}
  bool pass;
};

struct AnalyticEquivalenceReport {
  std::size_t gamma_ii, gamma_i;
  double C, r, backward_constant, A;
  std::vector<AnalyticEquivalenceEntry> entries;
  bool pass = false;
};

AnalyticEquivalenceReport verify_analytic_lp_equivalence(const DefiningFamily& family, std::size_t gamma, double p,
                                                         const std::vector<ComplexFunction>& corpus, double r,
                                                         double tol = 1e-9);

}  // namespace wk
