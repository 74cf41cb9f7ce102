#pragma once

#include "immax/types.hpp"

#include <vector>

namespace immax {

// ---------------------------------------------------------------------------
// Margin primitives
// ---------------------------------------------------------------------------

/// rho-margin loss: min(1, max(0, 1 - u/rho)). Non-increasing, 1/rho-Lipschitz,
/// values in [0, 1].
Real phi_margin(Real u, Real rho);

/// Right-derivative convention at the kinks u = 0 and u = rho.
Real phi_margin_derivative(Real u, Real rho);

/// Positive per-class confidence margins for the binary case.
/// alpha() = rho_plus / (rho_plus + rho_minus) in (0, 1).
struct MarginPair {
  Real rho_plus = 1.0;
  Real rho_minus = 1.0;

  MarginPair() = default;
  MarginPair(Real plus, Real minus);
  Real alpha() const { return rho_plus / (rho_plus + rho_minus); }
  Real rho_for(int y) const { return y == +1 ? rho_plus : rho_minus; }
};

/// Validates a multi-class margin vector: every component strictly positive.
void check_margin_vector(const Vector& rho);

// ---------------------------------------------------------------------------
// Class-imbalanced margin losses (binary and multi-class)
// ---------------------------------------------------------------------------

/// Label-indexed form: Phi_{rho_+}(y h) 1_{y=+1} + Phi_{rho_-}(y h) 1_{y=-1}.
Real imbalanced_margin_binary(Real h, int y, const MarginPair& rho);

/// Prediction-indexed form: Phi_{rho_+}(y h) 1_{h>=0} + Phi_{rho_-}(y h) 1_{h<0}.
/// Equals the label-indexed form for all inputs.
Real imbalanced_margin_binary_by_prediction(Real h, int y, const MarginPair& rho);

/// Confidence margin h(x, y) - max_{y' != y} h(x, y').
Real multiclass_margin(const Vector& scores, Index y);

/// Label-indexed multi-class form: Phi_{rho_y}(margin).
Real imbalanced_margin_multi(const Vector& scores, Index y, const Vector& rho);

/// Prediction-indexed form: Phi_{rho_{h(x)}}(margin) with argmax prediction
/// under highest-index tie-breaking. Equals the label-indexed form.
Real imbalanced_margin_multi_by_prediction(const Vector& scores, Index y, const Vector& rho);

/// d/dscores of the multi-class margin loss (right-derivative at kinks;
/// competitor ties broken toward the highest index).
Vector imbalanced_margin_multi_gradient(const Vector& scores, Index y, const Vector& rho);

// ---------------------------------------------------------------------------
// Margin-based surrogates Psi with Phi_rho(u) <= Psi(u/rho)
// ---------------------------------------------------------------------------

enum class PsiKind { Hinge, Logistic, Exponential };

/// Hinge max(0, 1-u), logistic log2(1 + e^-u), exponential e^-u.
Real surrogate_psi(PsiKind kind, Real u);
Real surrogate_psi_derivative(PsiKind kind, Real u);

// ---------------------------------------------------------------------------
// IMMAX per-example losses
// ---------------------------------------------------------------------------

/// Binary per-example term of the IMMAX objective with alpha in (0, 1):
/// Psi(h/alpha) for y=+1, Psi(-h/(1-alpha)) for y=-1.
Real immax_binary_loss(PsiKind psi, Real h, int y, Real alpha);
Real immax_binary_loss_derivative(PsiKind psi, Real h, int y, Real alpha);

/// Multi-class IMMAX loss log sum_j exp((h_j - h_y)/rho_y), computed with a
/// max shift. rho_y = 1 reduces to softmax cross-entropy.
Real immax_multi_loss(const Vector& scores, Index y, Real rho_y);
Vector immax_multi_gradient(const Vector& scores, Index y, Real rho_y);

// ---------------------------------------------------------------------------
// Baseline losses and the cost-sensitive target
// ---------------------------------------------------------------------------

enum class LossKind {
  PhiMargin,
  ImbalancedMarginBinary,
  ImbalancedMarginMulti,
  ImmaxBinary,
  ImmaxMulti,
  CE,
  RW,
  BS,
  Equal,
  LA,
  CB,
  Focal,
  Ldam,
  CostSensitive,
  Hinge,
  Logistic,
  Exponential,
};

/// Loss family plus hyperparameters. Which fields are read depends on kind;
/// validate() rejects missing or out-of-range values for the chosen kind.
struct LossSpec {
  LossKind kind = LossKind::CE;
  Vector rho;               // margin vector (margin losses, ImmaxMulti; size 1 for PhiMargin)
  Real alpha = 0.5;         // ImmaxBinary
  PsiKind psi = PsiKind::Hinge;  // ImmaxBinary
  Real c_plus = 1.0;        // CostSensitive
  Real c_minus = 1.0;       // CostSensitive
  Real tau = 1.0;           // LA
  Real gamma_cb = 0.5;      // CB, in (0, 1)
  Real gamma_focal = 0.0;   // Focal, >= 0
  Real ldam_C = 1.0;        // Ldam, > 0
  Real equal_p = 0.5;       // Equal, in (0, 1)
  Real equal_lambda = 0.1;  // Equal's rare-class frequency threshold, in (0, 1)

  void validate(int num_classes) const;
  bool is_binary_score() const;  // single real score vs per-class scores
};

/// Side inputs for losses whose formulas use the class counts, plus EQUAL's
/// per-call Bernoulli draw beta.
struct LossContext {
  const std::vector<Index>* counts = nullptr;  // m_k
  Index total = 0;                             // m
  Real equal_beta = 0.0;
};

/// Value of a per-class-score loss (all kinds with is_binary_score()==false).
Real multiclass_loss(const LossSpec& spec, const Vector& scores, Index y,
                     const LossContext& ctx = {});
Vector multiclass_loss_gradient(const LossSpec& spec, const Vector& scores, Index y,
                                const LossContext& ctx = {});

/// Value of a single-score loss (all kinds with is_binary_score()==true),
/// y in {+1, -1}.
Real binary_loss(const LossSpec& spec, Real h, int y);
Real binary_loss_derivative(const LossSpec& spec, Real h, int y);

/// Cost-sensitive zero-one target: c_+ 1_{sign(h) != y, y=+1} +
/// c_- 1_{sign(h) != y, y=-1} with sign(0) = +1.
Real cost_sensitive_loss(Real h, int y, Real c_plus, Real c_minus);

// ---------------------------------------------------------------------------
// Numeric helpers
// ---------------------------------------------------------------------------

/// Max-shifted log sum exp. Rejects non-finite inputs.
Real log_sum_exp(const Vector& v);

/// Max-shifted softmax.
Vector softmax(const Vector& v);

}  // namespace immax
