#include "immax/rademacher.hpp"

#include "immax/margins.hpp"
#include "immax/rng.hpp"

#include <bit>
#include <cmath>

namespace immax {

namespace {

constexpr int kExactLimit = 20;

/// Mean (and optionally spread) of ||sum_i s_i v_i|| over sign assignments.
/// Exact mode walks all 2^n assignments with a Gray code, flipping one term
/// at a time; the variance is zero by definition of exact enumeration.
ComplexityEstimate enumerate_exact(const std::vector<Vector>& terms) {
  const size_t n = terms.size();
  const Index d = terms.front().size();
  Vector sum = Vector::Zero(d);
  for (const Vector& v : terms) sum -= v;  // start from all signs -1
  const std::uint64_t total = 1ULL << n;
  Real accum = sum.norm();
  for (std::uint64_t it = 1; it < total; ++it) {
    const int flip = std::countr_zero(it);
    // Gray code: bit `flip` toggles; sign flips contribute +/- 2 v_flip.
    const std::uint64_t gray = it ^ (it >> 1);
    const bool now_positive = (gray >> flip) & 1ULL;
    sum += (now_positive ? 2.0 : -2.0) * terms[static_cast<size_t>(flip)];
    accum += sum.norm();
  }
  ComplexityEstimate estimate;
  estimate.value = accum / static_cast<Real>(total);
  estimate.std_error = 0.0;
  estimate.trials = static_cast<long>(total);
  estimate.method = ComplexityEstimate::Method::Exact;
  return estimate;
}

ComplexityEstimate sample_monte_carlo(const std::vector<Vector>& terms, long trials,
                                      std::uint64_t seed) {
  if (trials < 2) throw ConfigError("monte carlo needs at least 2 trials");
  const Index d = terms.front().size();
  Real sum = 0;
  Real sum_sq = 0;
  Vector signed_sum(d);
  for (long t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    signed_sum.setZero();
    for (const Vector& v : terms) {
      signed_sum += static_cast<Real>(rng.sign()) * v;
    }
    const Real norm = signed_sum.norm();
    sum += norm;
    sum_sq += norm * norm;
  }
  const auto n = static_cast<Real>(trials);
  const Real mean = sum / n;
  const Real variance = std::max(Real{0}, (sum_sq - n * mean * mean) / (n - 1.0));
  ComplexityEstimate estimate;
  estimate.value = mean;
  estimate.std_error = std::sqrt(variance / n);
  estimate.trials = trials;
  estimate.method = ComplexityEstimate::Method::MonteCarlo;
  return estimate;
}

ComplexityEstimate estimate_from_terms(const std::vector<Vector>& terms, Real lambda_cap,
                                       Index m, const EstimationMode& mode) {
  if (!(lambda_cap > 0)) throw ConfigError("Lambda must be > 0");
  ComplexityEstimate estimate;
  if (mode.exact) {
    if (terms.size() > kExactLimit) {
      throw ConfigError("exact enumeration refused: more than " +
                        std::to_string(kExactLimit) + " sign variables");
    }
    estimate = enumerate_exact(terms);
  } else {
    estimate = sample_monte_carlo(terms, mode.trials, mode.seed);
  }
  const Real factor = lambda_cap / static_cast<Real>(m);
  estimate.value *= factor;
  estimate.std_error *= factor;
  return estimate;
}

}  // namespace

ComplexityEstimate empirical_binary_complexity(const Dataset& dataset, const MarginPair& rho,
                                               Real lambda_cap, const EstimationMode& mode) {
  if (dataset.num_classes() != 2) throw ConfigError("binary complexity needs binary data");
  std::vector<Vector> terms;
  terms.reserve(static_cast<size_t>(dataset.size()));
  for (Index i = 0; i < dataset.size(); ++i) {
    terms.push_back(dataset.features().row(i).transpose() /
                    rho.rho_for(dataset.binary_label(i)));
  }
  return estimate_from_terms(terms, lambda_cap, dataset.size(), mode);
}

ComplexityEstimate empirical_multi_complexity(const Dataset& dataset, const Vector& rho,
                                              Real lambda_cap, const EstimationMode& mode) {
  check_margin_vector(rho);
  const Index c = dataset.num_classes();
  if (rho.size() != c) throw ConfigError("rho must have one entry per class");
  // One sign variable per (example, class); the feature map e_y (x) x makes
  // the stacked term a c*d vector with a single nonzero block.
  std::vector<Vector> terms;
  terms.reserve(static_cast<size_t>(dataset.size() * c));
  const Index d = dataset.dim();
  for (Index i = 0; i < dataset.size(); ++i) {
    const Real scale = 1.0 / rho[dataset.label(i)];
    for (Index y = 0; y < c; ++y) {
      Vector stacked = Vector::Zero(c * d);
      stacked.segment(y * d, d) = scale * dataset.features().row(i).transpose();
      terms.push_back(std::move(stacked));
    }
  }
  return estimate_from_terms(terms, lambda_cap, dataset.size(), mode);
}

LinearBoundPair bound_linear_binary(Index m_plus, Index m_minus, Real r_plus, Real r_minus,
                                    const MarginPair& rho, Real lambda_cap) {
  if (m_plus < 0 || m_minus < 0 || m_plus + m_minus < 1) {
    throw ConfigError("need at least one example");
  }
  if (r_plus < 0 || r_minus < 0) throw ConfigError("radii must be >= 0");
  if (!(lambda_cap > 0)) throw ConfigError("Lambda must be > 0");
  const auto m = static_cast<Real>(m_plus + m_minus);
  const Real plus_term = static_cast<Real>(m_plus) / (rho.rho_plus * rho.rho_plus);
  const Real minus_term = static_cast<Real>(m_minus) / (rho.rho_minus * rho.rho_minus);
  const Real r = std::max(r_plus, r_minus);
  LinearBoundPair pair;
  pair.tight = lambda_cap / m * std::sqrt(plus_term * r_plus * r_plus +
                                          minus_term * r_minus * r_minus);
  pair.loose = lambda_cap * r / m * std::sqrt(plus_term + minus_term);
  return pair;
}

namespace {

Real class_weighted_sum(const std::vector<Index>& counts, const std::vector<Real>& radii,
                        const Vector& rho) {
  if (counts.size() != radii.size() ||
      static_cast<Index>(counts.size()) != rho.size()) {
    throw ConfigError("counts/radii/rho size mismatch");
  }
  check_margin_vector(rho);
  Real sum = 0;
  for (size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 0) throw ConfigError("class counts must be >= 0");
    if (radii[k] < 0) throw ConfigError("radii must be >= 0");
    sum += static_cast<Real>(counts[k]) * radii[k] * radii[k] /
           (rho[static_cast<Index>(k)] * rho[static_cast<Index>(k)]);
  }
  return sum;
}

Real total_count(const std::vector<Index>& counts) {
  Index m = 0;
  for (Index m_k : counts) m += m_k;
  if (m < 1) throw ConfigError("need at least one example");
  return static_cast<Real>(m);
}

}  // namespace

Real bound_kernel_l1(const std::vector<Index>& counts, const std::vector<Real>& radii_inf,
                     const Vector& rho, Real lambda_1, Index dim) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (!(lambda_1 > 0)) throw ConfigError("Lambda must be > 0");
  const auto c = static_cast<Real>(counts.size());
  const Real m = total_count(counts);
  return lambda_1 * std::sqrt(2.0 * c) / m *
         std::sqrt(class_weighted_sum(counts, radii_inf, rho) *
                   std::log(2.0 * static_cast<Real>(dim)));
}

Real bound_kernel_l2(const std::vector<Index>& counts, const std::vector<Real>& radii_2,
                     const Vector& rho, Real lambda_2) {
  if (!(lambda_2 > 0)) throw ConfigError("Lambda must be > 0");
  const auto c = static_cast<Real>(counts.size());
  const Real m = total_count(counts);
  return lambda_2 * std::sqrt(c) / m * std::sqrt(class_weighted_sum(counts, radii_2, rho));
}

Real bound_kernel_l2_via_renyi(const std::vector<Index>& counts,
                               const std::vector<Real>& radii_2, const Vector& rho,
                               Real lambda_2) {
  if (!(lambda_2 > 0)) throw ConfigError("Lambda must be > 0");
  const auto c = static_cast<Real>(counts.size());
  const Real m = total_count(counts);
  const RhoHeuristic heuristic = rho_heuristic(counts, radii_2);
  const Real rho_total = rho.sum();
  const Real divergence = renyi_d3(heuristic.direction, rho / rho_total);
  return lambda_2 * std::sqrt(c) / m * heuristic.r_bar / rho_total * std::exp(divergence);
}

}  // namespace immax
