#pragma once

#include "immax/dataset.hpp"
#include "immax/losses.hpp"
#include "immax/scorer.hpp"

#include <optional>
#include <vector>

namespace immax {

// ---------------------------------------------------------------------------
// IMMAX objectives
// ---------------------------------------------------------------------------

/// lambda ||w||^2 + (1/m) [ sum_{I+} Psi(h(x_i)/alpha)
///                        + sum_{I-} Psi(-h(x_i)/(1-alpha)) ].
Real immax_binary_objective(const BinaryLinearScorer& scorer, const Dataset& dataset,
                            Real lambda, Real alpha, PsiKind psi);

/// lambda ||h||^2 + (1/m) sum_k sum_{i in I_k}
///   log sum_j exp((h(x_i, j) - h(x_i, k)) / rho_k).
Real immax_multi_objective(const MultiLinearScorer& scorer, const Dataset& dataset,
                           Real lambda, const Vector& rho);
Real immax_multi_objective(const MlpScorer& scorer, const Dataset& dataset, Real lambda,
                           const Vector& rho);

/// lambda ||weights||^2 + mean per-example loss, for any LossSpec.
/// EQUAL's Bernoulli draws are taken from equal_seed at epoch 0.
Real regularized_objective(const Scorer& scorer, const Dataset& dataset, const LossSpec& loss,
                           Real lambda, std::uint64_t equal_seed = 0);

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

enum class OptimizerKind { GradientDescent, Sgd };
enum class LrSchedule { Constant, Cosine };

struct TrainConfig {
  LossSpec loss;
  Real lambda = 0.0;
  ScorerKind scorer = ScorerKind::BinaryLinear;
  Index hidden_width = 16;  // Mlp only
  bool use_bias = true;
  OptimizerKind optimizer = OptimizerKind::GradientDescent;
  Index batch_size = 0;  // Sgd only; 0 = full batch
  LrSchedule schedule = LrSchedule::Constant;
  Real learning_rate = 1.0;
  int epochs = 500;
  Real tolerance = 1e-10;  // relative objective change
  std::uint64_t seed = 0;
  std::optional<Real> weight_cap;  // projection onto ||weights|| <= cap
};

struct TrainTrace {
  std::vector<Real> objective;    // per epoch, after the epoch's updates
  std::vector<Real> train_error;  // zero-one on the training set
};

struct TrainResult {
  Scorer scorer;
  TrainTrace trace;
  bool converged = false;
  int epochs_run = 0;
};

/// Thrown when the objective becomes non-finite; carries the last finite
/// state so callers can inspect how far training got.
struct DivergenceError : NumericError {
  DivergenceError(Scorer last, TrainTrace partial)
      : NumericError("objective diverged to a non-finite value"),
        last_scorer(std::move(last)),
        trace(std::move(partial)) {}
  Scorer last_scorer;
  TrainTrace trace;
};

/// Deterministic given config.seed. Full-batch gradient descent uses
/// backtracking (objective never increases); SGD follows the configured
/// learning-rate schedule.
TrainResult train(const Dataset& dataset, const TrainConfig& config);

/// The trainer's flattened-parameter view of the objective: weights first,
/// biases last, penalty on weights only. Exposed so the analytic gradient can
/// be checked against finite differences for every scorer kind.
Index parameter_count(const Dataset& dataset, const TrainConfig& config);
Vector initial_parameters(const Dataset& dataset, const TrainConfig& config);
Real objective_value(const Dataset& dataset, const TrainConfig& config, const Vector& theta,
                     Vector* gradient = nullptr);
Scorer scorer_from_parameters(const Dataset& dataset, const TrainConfig& config,
                              const Vector& theta);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EvalReport {
  Real zero_one = 0.0;
  std::vector<Real> per_class_error;
  Matrix confusion;  // counts, row = true class, column = predicted class
};

EvalReport evaluate(const Scorer& scorer, const Dataset& dataset);

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

struct CvCandidate {
  LossSpec loss;
  Real lambda = 0.0;
};

struct CvCell {
  CvCandidate candidate;
  Real mean_error = 0.0;
  Real std_error = 0.0;
};

struct CvResult {
  CvCandidate best;
  std::vector<CvCell> table;
};

/// Stratified folds preserving per-class proportions (round-robin within each
/// shuffled class). Throws if some fold would lack a represented class.
std::vector<std::vector<Index>> stratified_folds(const Dataset& dataset, int folds,
                                                 std::uint64_t seed);

/// Mean +/- std validation error per candidate; best = lowest mean, ties
/// resolved toward the earlier grid entry.
CvResult cross_validate(const Dataset& dataset, const std::vector<CvCandidate>& grid, int folds,
                        std::uint64_t seed, const TrainConfig& base);

// ---------------------------------------------------------------------------
// Grid helpers
// ---------------------------------------------------------------------------

/// alpha* = m_+^{1/3} / (m_+^{1/3} + m_-^{1/3}).
Real optimal_alpha_from_counts(Index m_plus, Index m_minus);

/// n values spanning center*(1 -/+ window), clipped to (lo, hi).
std::vector<Real> symmetric_grid(Real center, Real window, int n, Real lo, Real hi);

/// Global rescalings s*rho_star for s in the symmetric window grid.
std::vector<Vector> rho_scale_grid(const Vector& rho_star, Real window, int n);

}  // namespace immax
