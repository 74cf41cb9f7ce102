#include "immax/losses.hpp"

#include <cmath>

namespace immax {

namespace {

constexpr Real kLn2 = 0.6931471805599453;

Real softplus(Real t) {
  // log(1 + e^t), stable for large |t|.
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

Real sigmoid(Real t) { return 1.0 / (1.0 + std::exp(-t)); }

void check_label(Index y, Index c) {
  if (y < 0 || y >= c) throw ConfigError("class label out of range");
}

void check_binary_label(int y) {
  if (y != +1 && y != -1) throw ConfigError("binary label must be +1 or -1");
}

const std::vector<Index>& require_counts(const LossContext& ctx) {
  if (ctx.counts == nullptr || ctx.total <= 0) {
    throw ConfigError("loss requires class counts");
  }
  return *ctx.counts;
}

}  // namespace

Real phi_margin(Real u, Real rho) {
  if (!(rho > 0)) throw ConfigError("phi_margin: rho must be > 0");
  return std::min(1.0, std::max(0.0, 1.0 - u / rho));
}

Real phi_margin_derivative(Real u, Real rho) {
  if (!(rho > 0)) throw ConfigError("phi_margin: rho must be > 0");
  return (u >= 0 && u < rho) ? -1.0 / rho : 0.0;
}

MarginPair::MarginPair(Real plus, Real minus) : rho_plus(plus), rho_minus(minus) {
  if (!(rho_plus > 0) || !(rho_minus > 0)) {
    throw ConfigError("margin pair components must be > 0");
  }
}

void check_margin_vector(const Vector& rho) {
  if (rho.size() == 0) throw ConfigError("empty margin vector");
  for (Index k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0)) throw ConfigError("margin vector components must be > 0");
  }
}

Real imbalanced_margin_binary(Real h, int y, const MarginPair& rho) {
  check_binary_label(y);
  return phi_margin(y * h, rho.rho_for(y));
}

Real imbalanced_margin_binary_by_prediction(Real h, int y, const MarginPair& rho) {
  check_binary_label(y);
  return phi_margin(y * h, h >= 0 ? rho.rho_plus : rho.rho_minus);
}

Real multiclass_margin(const Vector& scores, Index y) {
  check_label(y, scores.size());
  if (scores.size() < 2) throw ConfigError("multiclass margin needs c >= 2");
  Real best_other = -std::numeric_limits<Real>::infinity();
  for (Index j = 0; j < scores.size(); ++j) {
    if (j != y) best_other = std::max(best_other, scores[j]);
  }
  return scores[y] - best_other;
}

Real imbalanced_margin_multi(const Vector& scores, Index y, const Vector& rho) {
  check_margin_vector(rho);
  if (rho.size() != scores.size()) throw ConfigError("margin vector dimension mismatch");
  return phi_margin(multiclass_margin(scores, y), rho[y]);
}

Real imbalanced_margin_multi_by_prediction(const Vector& scores, Index y, const Vector& rho) {
  check_margin_vector(rho);
  if (rho.size() != scores.size()) throw ConfigError("margin vector dimension mismatch");
  const Index predicted = argmax_highest(scores);
  return phi_margin(multiclass_margin(scores, y), rho[predicted]);
}

Vector imbalanced_margin_multi_gradient(const Vector& scores, Index y, const Vector& rho) {
  check_margin_vector(rho);
  if (rho.size() != scores.size()) throw ConfigError("margin vector dimension mismatch");
  check_label(y, scores.size());
  Vector grad = Vector::Zero(scores.size());
  Index competitor = y == 0 ? 1 : 0;
  for (Index j = 0; j < scores.size(); ++j) {
    if (j != y && scores[j] >= scores[competitor]) competitor = j;
  }
  const Real margin = scores[y] - scores[competitor];
  const Real slope = phi_margin_derivative(margin, rho[y]);
  grad[y] = slope;
  grad[competitor] = -slope;
  return grad;
}

Real surrogate_psi(PsiKind kind, Real u) {
  switch (kind) {
    case PsiKind::Hinge:
      return std::max(0.0, 1.0 - u);
    case PsiKind::Logistic:
      return softplus(-u) / kLn2;
    case PsiKind::Exponential:
      return std::exp(-u);
  }
  throw ConfigError("unknown surrogate");
}

Real surrogate_psi_derivative(PsiKind kind, Real u) {
  switch (kind) {
    case PsiKind::Hinge:
      return u < 1.0 ? -1.0 : 0.0;
    case PsiKind::Logistic:
      return -sigmoid(-u) / kLn2;
    case PsiKind::Exponential:
      return -std::exp(-u);
  }
  throw ConfigError("unknown surrogate");
}

Real immax_binary_loss(PsiKind psi, Real h, int y, Real alpha) {
  check_binary_label(y);
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("immax alpha must be in (0, 1)");
  return y == +1 ? surrogate_psi(psi, h / alpha) : surrogate_psi(psi, -h / (1.0 - alpha));
}

Real immax_binary_loss_derivative(PsiKind psi, Real h, int y, Real alpha) {
  check_binary_label(y);
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("immax alpha must be in (0, 1)");
  if (y == +1) return surrogate_psi_derivative(psi, h / alpha) / alpha;
  return -surrogate_psi_derivative(psi, -h / (1.0 - alpha)) / (1.0 - alpha);
}

Real immax_multi_loss(const Vector& scores, Index y, Real rho_y) {
  check_label(y, scores.size());
  if (!(rho_y > 0)) throw ConfigError("immax rho must be > 0");
  return log_sum_exp((scores.array() - scores[y]).matrix() / rho_y);
}

Vector immax_multi_gradient(const Vector& scores, Index y, Real rho_y) {
  check_label(y, scores.size());
  if (!(rho_y > 0)) throw ConfigError("immax rho must be > 0");
  Vector grad = softmax(scores / rho_y);
  grad[y] -= 1.0;
  return grad / rho_y;
}

Real cost_sensitive_loss(Real h, int y, Real c_plus, Real c_minus) {
  check_binary_label(y);
  if (!(c_plus > 0) || !(c_minus > 0)) throw ConfigError("costs must be > 0");
  if (sign_pm(h) == y) return 0.0;
  return y == +1 ? c_plus : c_minus;
}

void LossSpec::validate(int num_classes) const {
  switch (kind) {
    case LossKind::PhiMargin:
      if (rho.size() != 1 || !(rho[0] > 0)) throw ConfigError("phi-margin needs rho > 0");
      break;
    case LossKind::ImbalancedMarginBinary:
      if (rho.size() != 2) throw ConfigError("binary margin loss needs rho=(rho+,rho-)");
      check_margin_vector(rho);
      break;
    case LossKind::ImbalancedMarginMulti:
    case LossKind::ImmaxMulti:
      if (rho.size() != num_classes) throw ConfigError("rho must have one entry per class");
      check_margin_vector(rho);
      break;
    case LossKind::ImmaxBinary:
      if (!(alpha > 0 && alpha < 1)) throw ConfigError("immax alpha must be in (0, 1)");
      break;
    case LossKind::Equal:
      if (!(equal_p > 0 && equal_p < 1)) throw ConfigError("equal p must be in (0, 1)");
      if (!(equal_lambda > 0 && equal_lambda < 1)) {
        throw ConfigError("equal lambda must be in (0, 1)");
      }
      break;
    case LossKind::LA:
      if (!(tau > 0)) throw ConfigError("la tau must be > 0");
      break;
    case LossKind::CB:
      if (!(gamma_cb > 0 && gamma_cb < 1)) throw ConfigError("cb gamma must be in (0, 1)");
      break;
    case LossKind::Focal:
      if (!(gamma_focal >= 0)) throw ConfigError("focal gamma must be >= 0");
      break;
    case LossKind::Ldam:
      if (!(ldam_C > 0)) throw ConfigError("ldam C must be > 0");
      break;
    case LossKind::CostSensitive:
      if (!(c_plus > 0) || !(c_minus > 0)) throw ConfigError("costs must be > 0");
      break;
    default:
      break;
  }
}

bool LossSpec::is_binary_score() const {
  switch (kind) {
    case LossKind::PhiMargin:
    case LossKind::ImbalancedMarginBinary:
    case LossKind::ImmaxBinary:
    case LossKind::CostSensitive:
    case LossKind::Hinge:
    case LossKind::Logistic:
    case LossKind::Exponential:
      return true;
    default:
      return false;
  }
}

namespace {

Real cross_entropy(const Vector& scores, Index y) { return log_sum_exp(scores) - scores[y]; }

Vector cross_entropy_gradient(const Vector& scores, Index y) {
  Vector grad = softmax(scores);
  grad[y] -= 1.0;
  return grad;
}

/// EQUAL's per-class weights: w_j = 1 - beta 1_{m_j/m < lambda} 1_{j != y}.
Vector equal_weights(const LossSpec& spec, Index y, const LossContext& ctx) {
  const auto& counts = require_counts(ctx);
  Vector weights = Vector::Ones(static_cast<Index>(counts.size()));
  if (ctx.equal_beta != 0.0) {
    for (size_t j = 0; j < counts.size(); ++j) {
      const bool rare =
          static_cast<Real>(counts[j]) / static_cast<Real>(ctx.total) < spec.equal_lambda;
      if (rare && static_cast<Index>(j) != y) weights[static_cast<Index>(j)] -= ctx.equal_beta;
    }
  }
  return weights;
}

/// log sum_j w_j e^{v_j} with non-negative weights, max-shifted over the
/// supported terms.
Real weighted_log_sum_exp(const Vector& v, const Vector& w) {
  Real shift = -std::numeric_limits<Real>::infinity();
  for (Index j = 0; j < v.size(); ++j) {
    if (w[j] > 0) shift = std::max(shift, v[j]);
  }
  Real sum = 0;
  for (Index j = 0; j < v.size(); ++j) {
    if (w[j] > 0) sum += w[j] * std::exp(v[j] - shift);
  }
  return shift + std::log(sum);
}

Real cb_weight(const LossSpec& spec, Index y, const LossContext& ctx) {
  const auto& counts = require_counts(ctx);
  const Real frequency = static_cast<Real>(counts[static_cast<size_t>(y)]) /
                         static_cast<Real>(ctx.total);
  return (1.0 - spec.gamma_cb) / (1.0 - std::pow(spec.gamma_cb, frequency));
}

Vector log_counts(const std::vector<Index>& counts) {
  Vector logs(static_cast<Index>(counts.size()));
  for (size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] <= 0) throw ConfigError("loss requires every class count >= 1");
    logs[static_cast<Index>(j)] = std::log(static_cast<Real>(counts[j]));
  }
  return logs;
}

Real ldam_delta(const LossSpec& spec, Index y, const LossContext& ctx) {
  const auto& counts = require_counts(ctx);
  return spec.ldam_C / std::pow(static_cast<Real>(counts[static_cast<size_t>(y)]), 0.25);
}

}  // namespace

Real multiclass_loss(const LossSpec& spec, const Vector& scores, Index y,
                     const LossContext& ctx) {
  const auto c = static_cast<int>(scores.size());
  spec.validate(c);
  check_label(y, scores.size());
  switch (spec.kind) {
    case LossKind::CE:
      return cross_entropy(scores, y);
    case LossKind::RW: {
      const auto& counts = require_counts(ctx);
      return static_cast<Real>(ctx.total) / static_cast<Real>(counts[static_cast<size_t>(y)]) *
             cross_entropy(scores, y);
    }
    case LossKind::BS: {
      const Vector shifted = scores + log_counts(require_counts(ctx));
      return cross_entropy(shifted, y);
    }
    case LossKind::Equal: {
      const Vector w = equal_weights(spec, y, ctx);
      return weighted_log_sum_exp(scores, w) - scores[y];
    }
    case LossKind::LA: {
      const Vector shifted = scores + spec.tau * log_counts(require_counts(ctx));
      return cross_entropy(shifted, y);
    }
    case LossKind::CB:
      return cb_weight(spec, y, ctx) * cross_entropy(scores, y);
    case LossKind::Focal: {
      const Real log_p = scores[y] - log_sum_exp(scores);
      const Real p = std::exp(log_p);
      return -std::pow(1.0 - p, spec.gamma_focal) * log_p;
    }
    case LossKind::Ldam: {
      Vector shifted = scores;
      shifted[y] -= ldam_delta(spec, y, ctx);
      return cross_entropy(shifted, y);
    }
    case LossKind::ImmaxMulti:
      return immax_multi_loss(scores, y, spec.rho[y]);
    case LossKind::ImbalancedMarginMulti:
      return imbalanced_margin_multi(scores, y, spec.rho);
    default:
      throw ConfigError("loss kind takes a single real score");
  }
}

Vector multiclass_loss_gradient(const LossSpec& spec, const Vector& scores, Index y,
                                const LossContext& ctx) {
  const auto c = static_cast<int>(scores.size());
  spec.validate(c);
  check_label(y, scores.size());
  switch (spec.kind) {
    case LossKind::CE:
      return cross_entropy_gradient(scores, y);
    case LossKind::RW: {
      const auto& counts = require_counts(ctx);
      return static_cast<Real>(ctx.total) / static_cast<Real>(counts[static_cast<size_t>(y)]) *
             cross_entropy_gradient(scores, y);
    }
    case LossKind::BS: {
      const Vector shifted = scores + log_counts(require_counts(ctx));
      return cross_entropy_gradient(shifted, y);
    }
    case LossKind::Equal: {
      const Vector w = equal_weights(spec, y, ctx);
      const Real lse = weighted_log_sum_exp(scores, w);
      Vector grad(scores.size());
      for (Index j = 0; j < scores.size(); ++j) {
        grad[j] = w[j] > 0 ? w[j] * std::exp(scores[j] - lse) : 0.0;
      }
      grad[y] -= 1.0;
      return grad;
    }
    case LossKind::LA: {
      const Vector shifted = scores + spec.tau * log_counts(require_counts(ctx));
      return cross_entropy_gradient(shifted, y);
    }
    case LossKind::CB:
      return cb_weight(spec, y, ctx) * cross_entropy_gradient(scores, y);
    case LossKind::Focal: {
      const Real gamma = spec.gamma_focal;
      const Real log_p = scores[y] - log_sum_exp(scores);
      const Real p = std::exp(log_p);
      const Real q = 1.0 - p;
      Real dl_dp = -std::pow(q, gamma) / p;
      if (gamma > 0 && q > 0) dl_dp += gamma * std::pow(q, gamma - 1.0) * log_p;
      Vector grad = softmax(scores) * (-p * dl_dp);
      grad[y] += p * dl_dp;
      return grad;
    }
    case LossKind::Ldam: {
      Vector shifted = scores;
      shifted[y] -= ldam_delta(spec, y, ctx);
      return cross_entropy_gradient(shifted, y);
    }
    case LossKind::ImmaxMulti:
      return immax_multi_gradient(scores, y, spec.rho[y]);
    case LossKind::ImbalancedMarginMulti:
      return imbalanced_margin_multi_gradient(scores, y, spec.rho);
    default:
      throw ConfigError("loss kind takes a single real score");
  }
}

Real binary_loss(const LossSpec& spec, Real h, int y) {
  spec.validate(2);
  check_binary_label(y);
  switch (spec.kind) {
    case LossKind::PhiMargin:
      return phi_margin(y * h, spec.rho[0]);
    case LossKind::ImbalancedMarginBinary:
      return imbalanced_margin_binary(h, y, MarginPair(spec.rho[0], spec.rho[1]));
    case LossKind::ImmaxBinary:
      return immax_binary_loss(spec.psi, h, y, spec.alpha);
    case LossKind::CostSensitive:
      return cost_sensitive_loss(h, y, spec.c_plus, spec.c_minus);
    case LossKind::Hinge:
      return surrogate_psi(PsiKind::Hinge, y * h);
    case LossKind::Logistic:
      return surrogate_psi(PsiKind::Logistic, y * h);
    case LossKind::Exponential:
      return surrogate_psi(PsiKind::Exponential, y * h);
    default:
      throw ConfigError("loss kind takes per-class scores");
  }
}

Real binary_loss_derivative(const LossSpec& spec, Real h, int y) {
  spec.validate(2);
  check_binary_label(y);
  switch (spec.kind) {
    case LossKind::PhiMargin:
      return y * phi_margin_derivative(y * h, spec.rho[0]);
    case LossKind::ImbalancedMarginBinary:
      return y * phi_margin_derivative(y * h, y == +1 ? spec.rho[0] : spec.rho[1]);
    case LossKind::ImmaxBinary:
      return immax_binary_loss_derivative(spec.psi, h, y, spec.alpha);
    case LossKind::CostSensitive:
      return 0.0;  // piecewise constant
    case LossKind::Hinge:
      return y * surrogate_psi_derivative(PsiKind::Hinge, y * h);
    case LossKind::Logistic:
      return y * surrogate_psi_derivative(PsiKind::Logistic, y * h);
    case LossKind::Exponential:
      return y * surrogate_psi_derivative(PsiKind::Exponential, y * h);
    default:
      throw ConfigError("loss kind takes per-class scores");
  }
}

Real log_sum_exp(const Vector& v) {
  if (v.size() == 0) throw ConfigError("log_sum_exp of empty vector");
  if (!v.allFinite()) throw NumericError("non-finite scores");
  const Real shift = v.maxCoeff();
  return shift + std::log((v.array() - shift).exp().sum());
}

Vector softmax(const Vector& v) {
  if (v.size() == 0) throw ConfigError("softmax of empty vector");
  if (!v.allFinite()) throw NumericError("non-finite scores");
  const Real shift = v.maxCoeff();
  Vector e = (v.array() - shift).exp();
  return e / e.sum();
}

}  // namespace immax
