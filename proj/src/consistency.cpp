#include "immax/consistency.hpp"

#include <cmath>

namespace immax {

namespace {

constexpr Real kProbTolerance = 1e-12;
constexpr Real kHoldsSlack = -1e-9;

void check_weights(const Vector& weights) {
  if (weights.size() == 0) throw ConfigError("empty support");
  Real sum = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) throw ConfigError("marginal weights must be >= 0");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > kProbTolerance) throw ConfigError("marginal weights must sum to 1");
}

}  // namespace

void BinaryDistribution::validate() const {
  check_weights(weights);
  if (eta.size() != weights.size()) throw ConfigError("eta/support size mismatch");
  for (Index i = 0; i < eta.size(); ++i) {
    if (eta[i] < 0 || eta[i] > 1) throw ConfigError("eta must be in [0, 1]");
  }
}

void MultiDistribution::validate() const {
  check_weights(weights);
  if (conditionals.rows() != weights.size() || conditionals.cols() < 2) {
    throw ConfigError("conditionals must have one row per point and c >= 2");
  }
  for (Index i = 0; i < conditionals.rows(); ++i) {
    Real sum = 0;
    for (Index y = 0; y < conditionals.cols(); ++y) {
      if (conditionals(i, y) < 0) throw ConfigError("conditionals must be >= 0");
      sum += conditionals(i, y);
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
      throw ConfigError("conditional rows must sum to 1");
    }
  }
}

ConditionalRisks conditional_risks_binary(Real eta, Real h, const MarginPair& rho) {
  if (eta < 0 || eta > 1) throw ConfigError("eta must be in [0, 1]");
  ConditionalRisks risks;
  risks.zero_one = h >= 0 ? 1.0 - eta : eta;
  if (h >= rho.rho_plus) {
    risks.margin_loss = 1.0 - eta;
  } else if (h >= 0) {
    risks.margin_loss = eta * (1.0 - h / rho.rho_plus) + (1.0 - eta);
  } else if (h >= -rho.rho_minus) {
    risks.margin_loss = eta + (1.0 - eta) * (1.0 + h / rho.rho_minus);
  } else {
    risks.margin_loss = eta;
  }
  return risks;
}

ConditionalRisks conditional_risks_multi(const Vector& conditional, const Vector& scores,
                                         const Vector& rho) {
  check_margin_vector(rho);
  if (conditional.size() != scores.size() || scores.size() != rho.size()) {
    throw ConfigError("conditional/scores/rho size mismatch");
  }
  const Index predicted = argmax_highest(scores);
  const Real margin = multiclass_margin(scores, predicted);
  ConditionalRisks risks;
  risks.zero_one = 1.0 - conditional[predicted];
  risks.margin_loss =
      1.0 - conditional[predicted] * std::min(1.0, std::max(0.0, margin / rho[predicted]));
  return risks;
}

ConsistencyCheck verify_h_consistency_binary(const BinaryDistribution& dist,
                                             const BinaryHypothesis& hypothesis,
                                             const MarginPair& rho) {
  dist.validate();
  if (hypothesis.scores.size() != dist.weights.size()) {
    throw ConfigError("hypothesis/support size mismatch");
  }
  Real risk_zero_one = 0;
  Real risk_margin = 0;
  Real best = 0;  // best-in-class risk, shared by both losses
  for (Index i = 0; i < dist.weights.size(); ++i) {
    const ConditionalRisks risks =
        conditional_risks_binary(dist.eta[i], hypothesis.scores[i], rho);
    risk_zero_one += dist.weights[i] * risks.zero_one;
    risk_margin += dist.weights[i] * risks.margin_loss;
    best += dist.weights[i] * std::min(dist.eta[i], 1.0 - dist.eta[i]);
  }
  // Minimizability gaps vanish for the complete pointwise class, so each side
  // is just the excess risk.
  ConsistencyCheck check;
  check.lhs = risk_zero_one - best;
  check.rhs = risk_margin - best;
  check.holds = check.rhs - check.lhs >= kHoldsSlack;
  return check;
}

ConsistencyCheck verify_h_consistency_multi(const MultiDistribution& dist,
                                            const MultiHypothesis& hypothesis,
                                            const Vector& rho) {
  dist.validate();
  if (hypothesis.scores.rows() != dist.weights.size() ||
      hypothesis.scores.cols() != dist.num_classes()) {
    throw ConfigError("hypothesis/support size mismatch");
  }
  Real risk_zero_one = 0;
  Real risk_margin = 0;
  Real best = 0;
  for (Index i = 0; i < dist.weights.size(); ++i) {
    const Vector conditional = dist.conditionals.row(i).transpose();
    const ConditionalRisks risks =
        conditional_risks_multi(conditional, hypothesis.scores.row(i).transpose(), rho);
    risk_zero_one += dist.weights[i] * risks.zero_one;
    risk_margin += dist.weights[i] * risks.margin_loss;
    best += dist.weights[i] * (1.0 - conditional.maxCoeff());
  }
  ConsistencyCheck check;
  check.lhs = risk_zero_one - best;
  check.rhs = risk_margin - best;
  check.holds = check.rhs - check.lhs >= kHoldsSlack;
  return check;
}

Real minimizability_gap_binary(const BinaryDistribution& dist,
                               const std::optional<MarginPair>& rho) {
  dist.validate();
  // Best-in-class risk: the infimum distributes over the support because one
  // score is free per point.
  Real best_in_class = 0;
  for (Index i = 0; i < dist.weights.size(); ++i) {
    best_in_class += dist.weights[i] * std::min(dist.eta[i], 1.0 - dist.eta[i]);
  }
  // Expected best-in-class conditional risk. rho only moves where the
  // conditional infimum is attained, not its value.
  (void)rho;
  Real expected_conditional = 0;
  for (Index i = 0; i < dist.weights.size(); ++i) {
    expected_conditional += dist.weights[i] * std::min(dist.eta[i], 1.0 - dist.eta[i]);
  }
  return best_in_class - expected_conditional;
}

Real minimizability_gap_multi(const MultiDistribution& dist, const std::optional<Vector>& rho) {
  dist.validate();
  if (rho) check_margin_vector(*rho);
  Real best_in_class = 0;
  for (Index i = 0; i < dist.weights.size(); ++i) {
    best_in_class += dist.weights[i] * (1.0 - dist.conditionals.row(i).maxCoeff());
  }
  Real expected_conditional = 0;
  for (Index i = 0; i < dist.weights.size(); ++i) {
    expected_conditional += dist.weights[i] * (1.0 - dist.conditionals.row(i).maxCoeff());
  }
  return best_in_class - expected_conditional;
}

InconsistencyDemo bayes_inconsistency_demo(Real c_plus, Real c_minus, Real epsilon) {
  if (!(c_plus > 0) || !(c_minus > 0)) throw ConfigError("costs must be > 0");
  if (c_plus == c_minus) {
    throw ConfigError("consistent regime, no demo: costs must differ");
  }
  if (!(epsilon > 0 && epsilon < 0.5)) throw ConfigError("epsilon must be in (0, 1/2)");

  InconsistencyDemo demo;
  demo.epsilon_star = std::abs(c_plus - c_minus) / (2.0 * (c_plus + c_minus));
  // Singleton point whose majority label carries the smaller cost.
  demo.eta = c_plus > c_minus ? 0.5 - epsilon : 0.5 + epsilon;

  // Brute force over the two achievable predictions.
  demo.zero_one_risk_negative = demo.eta;
  demo.zero_one_risk_positive = 1.0 - demo.eta;
  demo.zero_one_minimizer_sign =
      demo.zero_one_risk_negative <= demo.zero_one_risk_positive ? -1 : +1;

  demo.cost_risk_negative = demo.eta * c_plus;
  demo.cost_risk_positive = (1.0 - demo.eta) * c_minus;
  demo.cost_minimizer_sign = demo.cost_risk_negative <= demo.cost_risk_positive ? -1 : +1;

  demo.inconsistent = demo.zero_one_minimizer_sign != demo.cost_minimizer_sign;
  return demo;
}

}  // namespace immax
