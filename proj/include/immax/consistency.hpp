#pragma once

#include "immax/losses.hpp"

#include <optional>

namespace immax {

// Finite-support distributions paired with complete pointwise hypothesis
// sets: one free score (or score vector) per support point, ranging over all
// reals. Risks, best-in-class risks, and conditional risks all have closed
// forms here, which is what makes the consistency bounds checkable
// numerically.

struct BinaryDistribution {
  Vector weights;  // marginal p(x), sums to 1
  Vector eta;      // P(Y = +1 | x)

  void validate() const;
};

struct MultiDistribution {
  Vector weights;
  Matrix conditionals;  // one row p(. | x) per support point

  void validate() const;
  Index num_classes() const { return conditionals.cols(); }
};

/// Scores of one hypothesis from the complete pointwise class.
struct BinaryHypothesis {
  Vector scores;
};

struct MultiHypothesis {
  Matrix scores;  // support x classes
};

struct ConditionalRisks {
  Real zero_one = 0.0;
  Real margin_loss = 0.0;
};

/// Closed-form conditional risks at one point: the zero-one form
/// eta 1_{h<0} + (1-eta) 1_{h>=0} and the four-branch margin-loss form in
/// h against (rho_+, -rho_-).
ConditionalRisks conditional_risks_binary(Real eta, Real h, const MarginPair& rho);

/// Closed-form multi-class conditionals: zero-one 1 - p(pred|x) and margin
/// loss 1 - p(pred|x) min(1, margin(pred)/rho_pred), argmax prediction with
/// highest-index tie-breaking.
ConditionalRisks conditional_risks_multi(const Vector& conditional, const Vector& scores,
                                         const Vector& rho);

struct ConsistencyCheck {
  Real lhs = 0.0;  // excess zero-one risk (+ gap)
  Real rhs = 0.0;  // excess margin-loss risk (+ gap)
  bool holds = false;
};

/// Checks R_01(h) - R*_01 + M_01 <= R_L(h) - R*_L + M_L on the given finite
/// distribution; holds allows -1e-9 of floating-point slack.
ConsistencyCheck verify_h_consistency_binary(const BinaryDistribution& dist,
                                             const BinaryHypothesis& hypothesis,
                                             const MarginPair& rho);

ConsistencyCheck verify_h_consistency_multi(const MultiDistribution& dist,
                                            const MultiHypothesis& hypothesis,
                                            const Vector& rho);

/// R*(H) - E_x[inf_h E_y[loss | x]]. Zero for the complete pointwise class on
/// finite support; rho empty selects the zero-one loss.
Real minimizability_gap_binary(const BinaryDistribution& dist,
                               const std::optional<MarginPair>& rho);
Real minimizability_gap_multi(const MultiDistribution& dist, const std::optional<Vector>& rho);

/// Singleton construction showing the cost-sensitive loss is not
/// Bayes-consistent: for eta on the minority side of 1/2 by epsilon, the
/// zero-one and cost-sensitive minimizers take opposite signs exactly when
/// epsilon < epsilon_star = |c_+ - c_-| / (2 (c_+ + c_-)).
struct InconsistencyDemo {
  Real epsilon_star = 0.0;
  Real eta = 0.0;
  int zero_one_minimizer_sign = 0;
  int cost_minimizer_sign = 0;
  bool inconsistent = false;
  Real zero_one_risk_negative = 0.0;
  Real zero_one_risk_positive = 0.0;
  Real cost_risk_negative = 0.0;
  Real cost_risk_positive = 0.0;
};

InconsistencyDemo bayes_inconsistency_demo(Real c_plus, Real c_minus, Real epsilon);

}  // namespace immax
