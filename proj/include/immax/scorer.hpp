#pragma once

#include "immax/types.hpp"

#include <variant>

namespace immax {

/// h(x) = w . x + b, predicting sign(h) with sign(0) = +1.
/// The bias is excluded from the norm and from any penalty.
struct BinaryLinearScorer {
  Vector w;
  Real bias = 0.0;
  bool use_bias = true;

  Real score(const Vector& x) const { return w.dot(x) + bias; }
  Vector score_batch(const Matrix& X) const {
    return (X * w).array() + bias;
  }
  Real weight_norm() const { return w.norm(); }
  int predict(const Vector& x) const { return sign_pm(score(x)); }
};

/// h(x, y) = W.row(y) . x + b_y, i.e. a single weight vector over the
/// feature map (x, y) -> e_y (x) x. Predicts argmax with highest-index
/// tie-breaking.
struct MultiLinearScorer {
  Matrix W;  // c x d
  Vector bias;
  bool use_bias = true;

  Vector score(const Vector& x) const { return W * x + bias; }
  Matrix score_batch(const Matrix& X) const {
    return (X * W.transpose()).rowwise() + bias.transpose();
  }
  Real weight_norm() const { return W.norm(); }
  Index predict(const Vector& x) const { return argmax_highest(score(x)); }
};

/// One hidden layer with tanh activation; smooth everywhere so analytic
/// gradients match finite differences at every point.
struct MlpScorer {
  Matrix W1;  // hidden x d
  Vector b1;
  Matrix W2;  // c x hidden
  Vector b2;

  Vector score(const Vector& x) const { return W2 * (W1 * x + b1).array().tanh().matrix() + b2; }
  Matrix score_batch(const Matrix& X) const {
    Matrix hidden = ((X * W1.transpose()).rowwise() + b1.transpose()).array().tanh();
    return (hidden * W2.transpose()).rowwise() + b2.transpose();
  }
  Real weight_norm() const { return std::sqrt(W1.squaredNorm() + W2.squaredNorm()); }
  Index predict(const Vector& x) const { return argmax_highest(score(x)); }
};

using Scorer = std::variant<BinaryLinearScorer, MultiLinearScorer, MlpScorer>;

inline Real scorer_weight_norm(const Scorer& scorer) {
  return std::visit([](const auto& s) { return s.weight_norm(); }, scorer);
}

enum class ScorerKind { BinaryLinear, MultiLinear, Mlp };

inline ScorerKind scorer_kind(const Scorer& scorer) {
  if (std::holds_alternative<BinaryLinearScorer>(scorer)) return ScorerKind::BinaryLinear;
  if (std::holds_alternative<MultiLinearScorer>(scorer)) return ScorerKind::MultiLinear;
  return ScorerKind::Mlp;
}

}  // namespace immax
