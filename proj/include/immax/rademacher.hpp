#pragma once

#include "immax/dataset.hpp"
#include "immax/losses.hpp"

#include <vector>

namespace immax {

struct ComplexityEstimate {
  enum class Method { Exact, MonteCarlo };
  Real value = 0.0;
  Real std_error = 0.0;  // 0 for exact enumeration
  long trials = 0;       // 2^(sign variables) for exact
  Method method = Method::MonteCarlo;
};

struct EstimationMode {
  bool exact = false;
  long trials = 1000;
  std::uint64_t seed = 0;
};

/// Empirical class-sensitive Rademacher complexity of the l2-ball linear
/// class {x -> w.x : ||w|| <= Lambda}: the inner supremum equals
/// Lambda ||sum_i sigma_i x_i / rho(i)||_2, so the estimate averages that
/// norm over sign draws (exhaustively for exact mode, m <= 20).
ComplexityEstimate empirical_binary_complexity(const Dataset& dataset, const MarginPair& rho,
                                               Real lambda_cap, const EstimationMode& mode);

/// Multi-class counterpart over the feature map (x, y) -> e_y (x) x with one
/// sign variable per (example, class); exact mode requires m*c <= 20.
ComplexityEstimate empirical_multi_complexity(const Dataset& dataset, const Vector& rho,
                                              Real lambda_cap, const EstimationMode& mode);

/// Closed-form upper bounds for the binary linear class:
/// tight = (Lambda/m) sqrt(m_+ r_+^2/rho_+^2 + m_- r_-^2/rho_-^2),
/// loose = (Lambda r/m) sqrt(m_+/rho_+^2 + m_-/rho_-^2).
struct LinearBoundPair {
  Real tight = 0.0;
  Real loose = 0.0;
};

LinearBoundPair bound_linear_binary(Index m_plus, Index m_minus, Real r_plus, Real r_minus,
                                    const MarginPair& rho, Real lambda_cap);

/// l1-ball kernel bound:
/// (Lambda_1 sqrt(2c)/m) sqrt(sum_k m_k r_{k,inf}^2 / rho_k^2 * log(2d)).
Real bound_kernel_l1(const std::vector<Index>& counts, const std::vector<Real>& radii_inf,
                     const Vector& rho, Real lambda_1, Index dim);

/// l2-ball kernel bound: (Lambda_2 sqrt(c)/m) sqrt(sum_k m_k r_{k,2}^2 / rho_k^2).
Real bound_kernel_l2(const std::vector<Index>& counts, const std::vector<Real>& radii_2,
                     const Vector& rho, Real lambda_2);

/// Same bound computed through the order-3 Renyi divergence identity:
/// (Lambda_2 sqrt(c) r_bar / (m rho)) exp(D3(r || rho/rho_total)).
Real bound_kernel_l2_via_renyi(const std::vector<Index>& counts,
                               const std::vector<Real>& radii_2, const Vector& rho,
                               Real lambda_2);

}  // namespace immax
