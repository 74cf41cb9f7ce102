#include "immax/margins.hpp"

#include <cmath>
#include <limits>

namespace immax {

namespace {

Real third_root_weight(Index m, Real r) {
  return std::cbrt(static_cast<Real>(m)) * std::pow(r, 2.0 / 3.0);
}

void check_positive(Real value, const char* name) {
  if (!(value > 0)) throw ConfigError(std::string(name) + " must be > 0");
}

}  // namespace

SeparableMargins optimal_separable_margins(Index m_plus, Index m_minus, Real r_plus,
                                           Real r_minus, Real rho_geom) {
  if (m_plus < 1 || m_minus < 1) throw ConfigError("class counts must be >= 1");
  check_positive(r_plus, "r_plus");
  check_positive(r_minus, "r_minus");
  check_positive(rho_geom, "rho_geom");
  const Real weight_plus = third_root_weight(m_plus, r_plus);
  const Real weight_minus = third_root_weight(m_minus, r_minus);
  const Real denom = weight_plus + weight_minus;
  return SeparableMargins{2.0 * weight_plus / denom * rho_geom,
                          2.0 * weight_minus / denom * rho_geom, rho_geom};
}

SeparableMargins ldam_margins(Index m_plus, Index m_minus, Real rho_geom) {
  if (m_plus < 1 || m_minus < 1) throw ConfigError("class counts must be >= 1");
  check_positive(rho_geom, "rho_geom");
  const Real fourth_plus = std::pow(static_cast<Real>(m_plus), 0.25);
  const Real fourth_minus = std::pow(static_cast<Real>(m_minus), 0.25);
  const Real denom = fourth_plus + fourth_minus;
  return SeparableMargins{2.0 * fourth_minus / denom * rho_geom,
                          2.0 * fourth_plus / denom * rho_geom, rho_geom};
}

Real geometric_margin(const BinaryLinearScorer& scorer, const Dataset& dataset) {
  if (dataset.num_classes() != 2) throw ConfigError("geometric margin needs binary data");
  if (scorer.w.size() != dataset.dim()) throw ConfigError("dimension mismatch");
  const Real norm = scorer.w.norm();
  if (!(norm > 0)) throw ConfigError("geometric margin needs a nonzero weight vector");
  Real smallest = std::numeric_limits<Real>::infinity();
  for (Index i = 0; i < dataset.size(); ++i) {
    const Real margin = dataset.binary_label(i) *
                        scorer.score(dataset.features().row(i).transpose());
    if (!(margin > 0)) throw ConfigError("not separable: a training point is misclassified");
    smallest = std::min(smallest, margin / norm);
  }
  return smallest;
}

RhoHeuristic rho_heuristic(const std::vector<Index>& counts, const std::vector<Real>& radii) {
  if (counts.size() != radii.size() || counts.empty()) {
    throw ConfigError("rho heuristic needs matching counts/radii");
  }
  Vector weights(static_cast<Index>(counts.size()));
  for (size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 1) throw ConfigError("class counts must be >= 1");
    check_positive(radii[k], "class radius");
    weights[static_cast<Index>(k)] = third_root_weight(counts[k], radii[k]);
  }
  const Real total = weights.sum();
  return RhoHeuristic{weights / total, std::pow(total, 1.5)};
}

Real renyi_d3(const Vector& p, const Vector& q) {
  if (p.size() != q.size() || p.size() == 0) throw ConfigError("distribution size mismatch");
  constexpr Real tolerance = 1e-12;
  Real p_sum = 0;
  Real q_sum = 0;
  Real sum = 0;
  for (Index k = 0; k < p.size(); ++k) {
    if (p[k] < 0 || q[k] < 0) throw ConfigError("distributions must be non-negative");
    p_sum += p[k];
    q_sum += q[k];
    if (p[k] == 0) continue;  // 0/0 = 0
    if (q[k] == 0) return std::numeric_limits<Real>::infinity();
    sum += p[k] * p[k] * p[k] / (q[k] * q[k]);
  }
  if (std::abs(p_sum - 1.0) > tolerance || std::abs(q_sum - 1.0) > tolerance) {
    throw ConfigError("inputs must sum to 1");
  }
  return 0.5 * std::log(sum);
}

IdentityCheck complexity_renyi_identity(const std::vector<Index>& counts,
                                        const std::vector<Real>& radii, const Vector& rho) {
  if (counts.size() != radii.size() ||
      static_cast<Index>(counts.size()) != rho.size()) {
    throw ConfigError("counts/radii/rho size mismatch");
  }
  check_margin_vector(rho);
  Real lhs = 0;
  for (size_t k = 0; k < counts.size(); ++k) {
    lhs += static_cast<Real>(counts[k]) * radii[k] * radii[k] /
           (rho[static_cast<Index>(k)] * rho[static_cast<Index>(k)]);
  }
  const RhoHeuristic heuristic = rho_heuristic(counts, radii);
  const Real rho_total = rho.sum();
  const Real divergence = renyi_d3(heuristic.direction, rho / rho_total);
  const Real rhs = heuristic.r_bar * heuristic.r_bar / (rho_total * rho_total) *
                   std::exp(2.0 * divergence);
  return IdentityCheck{lhs, rhs, std::abs(lhs - rhs)};
}

namespace {

Real confidence_term(Real log_arg, Index m) { return std::sqrt(std::log(log_arg) / (2.0 * m)); }

Real log_log_term(Real r, Real rho, Index m) {
  if (!(rho > 0) || rho > r) {
    throw ConfigError("uniform bound needs rho in (0, r]");
  }
  return std::sqrt(std::log(std::log2(2.0 * r / rho)) / static_cast<Real>(m));
}

}  // namespace

Real margin_bound_binary(const BinaryBoundInputs& inputs) {
  if (!(inputs.delta > 0 && inputs.delta < 1)) throw ConfigError("delta must be in (0, 1)");
  if (inputs.m < 1) throw ConfigError("m must be >= 1");
  if (inputs.complexity < 0 || inputs.empirical_margin_loss < 0) {
    throw ConfigError("bound inputs must be non-negative");
  }
  Real bound = inputs.empirical_margin_loss;
  if (!inputs.uniform) {
    bound += 2.0 * inputs.complexity;
    bound += inputs.empirical ? 3.0 * confidence_term(2.0 / inputs.delta, inputs.m)
                              : confidence_term(1.0 / inputs.delta, inputs.m);
    return bound;
  }
  bound += 4.0 * inputs.complexity;
  bound += log_log_term(inputs.r_plus, inputs.rho_plus, inputs.m);
  bound += log_log_term(inputs.r_minus, inputs.rho_minus, inputs.m);
  bound += inputs.empirical ? 3.0 * confidence_term(8.0 / inputs.delta, inputs.m)
                            : confidence_term(4.0 / inputs.delta, inputs.m);
  return bound;
}

Real margin_bound_multi(const MultiBoundInputs& inputs) {
  if (!(inputs.delta > 0 && inputs.delta < 1)) throw ConfigError("delta must be in (0, 1)");
  if (inputs.m < 1) throw ConfigError("m must be >= 1");
  if (inputs.num_classes < 2) throw ConfigError("num_classes must be >= 2");
  if (inputs.complexity < 0 || inputs.empirical_margin_loss < 0) {
    throw ConfigError("bound inputs must be non-negative");
  }
  const auto c = static_cast<Real>(inputs.num_classes);
  Real bound = inputs.empirical_margin_loss;
  if (!inputs.uniform) {
    bound += 4.0 * std::sqrt(2.0 * c) * inputs.complexity;
    bound += inputs.empirical ? 3.0 * confidence_term(2.0 / inputs.delta, inputs.m)
                              : confidence_term(1.0 / inputs.delta, inputs.m);
    return bound;
  }
  if (inputs.class_radii.size() != static_cast<size_t>(inputs.num_classes) ||
      inputs.class_margins.size() != static_cast<size_t>(inputs.num_classes)) {
    throw ConfigError("uniform multi bound needs per-class radii and margins");
  }
  bound += 4.0 * c * std::sqrt(2.0 * c) * inputs.complexity;
  for (size_t k = 0; k < inputs.class_radii.size(); ++k) {
    bound += log_log_term(inputs.class_radii[k], inputs.class_margins[k], inputs.m);
  }
  // log(2^c / delta) = c log 2 + log(1/delta), kept in log form.
  const Real log2_groups = inputs.empirical ? c + 1.0 : c;
  const Real log_arg = log2_groups * std::log(2.0) + std::log(1.0 / inputs.delta);
  const Real tail = std::sqrt(log_arg / (2.0 * static_cast<Real>(inputs.m)));
  bound += inputs.empirical ? 3.0 * tail : tail;
  return bound;
}

}  // namespace immax
