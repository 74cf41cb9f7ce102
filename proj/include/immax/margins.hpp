#pragma once

#include "immax/dataset.hpp"
#include "immax/losses.hpp"
#include "immax/scorer.hpp"

#include <vector>

namespace immax {

// ---------------------------------------------------------------------------
// Separable-case optimal margins
// ---------------------------------------------------------------------------

/// Confidence margins splitting 2*rho_geom between the classes.
struct SeparableMargins {
  Real rho_plus = 0.0;
  Real rho_minus = 0.0;
  Real rho_geom = 0.0;
};

/// rho_+- = 2 m_+-^{1/3} r_+-^{2/3} / (m_+^{1/3} r_+^{2/3} + m_-^{1/3} r_-^{2/3})
///          * rho_geom.
/// The larger class gets the larger margin when r_+ = r_-.
SeparableMargins optimal_separable_margins(Index m_plus, Index m_minus, Real r_plus,
                                           Real r_minus, Real rho_geom);

/// The competing prescription with 1/4 exponents and swapped counts:
/// rho_+ = 2 m_-^{1/4} / (m_+^{1/4} + m_-^{1/4}) * rho_geom. Orders the
/// margins opposite to optimal_separable_margins whenever m_+ != m_-.
SeparableMargins ldam_margins(Index m_plus, Index m_minus, Real rho_geom);

/// min_i y_i (w . x_i + b) / ||w||_2. Requires every training point strictly
/// on its own side.
Real geometric_margin(const BinaryLinearScorer& scorer, const Dataset& dataset);

// ---------------------------------------------------------------------------
// Multi-class margin-direction heuristic and the Renyi identity
// ---------------------------------------------------------------------------

struct RhoHeuristic {
  Vector direction;  // sums to 1; the argmin direction of sum m_k r_k^2 / rho_k^2
  Real r_bar = 0.0;  // [sum_k m_k^{1/3} r_k^{2/3}]^{3/2}
};

/// direction_k = m_k^{1/3} r_k^{2/3} / r_bar^{2/3}.
RhoHeuristic rho_heuristic(const std::vector<Index>& counts, const std::vector<Real>& radii);

/// Renyi divergence of order 3: (1/2) log sum_k p_k^3 / q_k^2, with 0/0 = 0.
/// Returns +infinity when some q_k = 0 with p_k > 0.
Real renyi_d3(const Vector& p, const Vector& q);

struct IdentityCheck {
  Real lhs = 0.0;
  Real rhs = 0.0;
  Real abs_diff = 0.0;
};

/// Both sides of sum_k m_k r_k^2 / rho_k^2
///   = (r_bar^2 / rho^2) exp(2 D3(direction || rho/rho_total)).
IdentityCheck complexity_renyi_identity(const std::vector<Index>& counts,
                                        const std::vector<Real>& radii, const Vector& rho);

// ---------------------------------------------------------------------------
// Generalization-bound calculators
// ---------------------------------------------------------------------------

struct BinaryBoundInputs {
  Real empirical_margin_loss = 0.0;
  Real complexity = 0.0;  // class-sensitive Rademacher complexity term
  Index m = 1;
  Real delta = 0.05;
  bool uniform = false;     // hold for all rho in (0, r]; adds log-log terms
  bool empirical = false;   // complexity measured on the sample (3 sqrt(log(2/delta)/2m))
  Real r_plus = 1.0;        // uniform variant only
  Real r_minus = 1.0;
  Real rho_plus = 1.0;
  Real rho_minus = 1.0;
};

/// R <= R_hat + 2 C + sqrt(log(1/delta)/2m), with the uniform variant
/// 4 C + log-log terms and delta -> 4/delta (8/delta for the empirical form).
Real margin_bound_binary(const BinaryBoundInputs& inputs);

struct MultiBoundInputs {
  Real empirical_margin_loss = 0.0;
  Real complexity = 0.0;
  int num_classes = 2;
  Index m = 1;
  Real delta = 0.05;
  bool uniform = false;
  bool empirical = false;
  std::vector<Real> class_radii;    // uniform variant only
  std::vector<Real> class_margins;  // uniform variant only
};

/// R <= R_hat + 4 sqrt(2c) C + sqrt(log(1/delta)/2m); the uniform variant
/// uses 4c sqrt(2c), per-class log-log terms, and delta -> 2^c/delta
/// (2^{c+1}/delta for the empirical form).
Real margin_bound_multi(const MultiBoundInputs& inputs);

}  // namespace immax
