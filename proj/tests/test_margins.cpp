#include "immax/margins.hpp"

#include "immax/experiments.hpp"
#include "immax/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace immax;
using immax::testing::random_vector;

namespace {

/// Grid-search oracle: minimizes m_+ r_+^2/rho_+^2 + m_- r_-^2/rho_-^2 over
/// rho_+ + rho_- = 2 rho_geom with a dense scan plus one local refinement.
std::pair<Real, Real> separable_margins_oracle(Index m_plus, Index m_minus, Real r_plus,
                                               Real r_minus, Real rho_geom) {
  const Real total = 2.0 * rho_geom;
  const auto objective = [&](Real rho_plus) {
    const Real rho_minus = total - rho_plus;
    return static_cast<Real>(m_plus) * r_plus * r_plus / (rho_plus * rho_plus) +
           static_cast<Real>(m_minus) * r_minus * r_minus / (rho_minus * rho_minus);
  };
  Real lo = total * 1e-4;
  Real hi = total * (1 - 1e-4);
  Real best = lo;
  for (int refinement = 0; refinement < 2; ++refinement) {
    Real best_value = std::numeric_limits<Real>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      const Real rho_plus = lo + (hi - lo) * static_cast<Real>(i) / 10000.0;
      const Real value = objective(rho_plus);
      if (value < best_value) {
        best_value = value;
        best = rho_plus;
      }
    }
    const Real width = (hi - lo) / 10000.0;
    lo = std::max(total * 1e-6, best - 2 * width);
    hi = std::min(total * (1 - 1e-6), best + 2 * width);
  }
  return {best, total - best};
}

/// Projected-gradient oracle for the argmin of sum_k m_k r_k^2 / rho_k^2 over
/// the simplex {rho >= 0, sum rho_k = 1}.
Vector simplex_minimizer_oracle(const std::vector<Index>& counts,
                                const std::vector<Real>& radii) {
  const auto c = static_cast<Index>(counts.size());
  Vector rho = Vector::Constant(c, 1.0 / static_cast<Real>(c));
  Real step = 1e-3;
  const auto objective = [&](const Vector& v) {
    Real sum = 0;
    for (Index k = 0; k < c; ++k) {
      sum += static_cast<Real>(counts[static_cast<size_t>(k)]) *
             radii[static_cast<size_t>(k)] * radii[static_cast<size_t>(k)] / (v[k] * v[k]);
    }
    return sum;
  };
  const auto project = [&](Vector v) {
    // Euclidean projection onto the simplex (sorted threshold method),
    // with a small floor to keep the objective finite.
    std::vector<Real> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<Real>());
    Real cumulative = 0;
    Real threshold = 0;
    for (Index k = 0; k < v.size(); ++k) {
      cumulative += sorted[static_cast<size_t>(k)];
      const Real candidate = (cumulative - 1.0) / static_cast<Real>(k + 1);
      if (k + 1 == v.size() || sorted[static_cast<size_t>(k + 1)] <= candidate) {
        threshold = candidate;
        break;
      }
    }
    for (Index k = 0; k < v.size(); ++k) v[k] = std::max(1e-9, v[k] - threshold);
    return Vector(v / v.sum());
  };
  Real value = objective(rho);
  for (int it = 0; it < 200000; ++it) {
    Vector gradient(c);
    for (Index k = 0; k < c; ++k) {
      gradient[k] = -2.0 * static_cast<Real>(counts[static_cast<size_t>(k)]) *
                    radii[static_cast<size_t>(k)] * radii[static_cast<size_t>(k)] /
                    (rho[k] * rho[k] * rho[k]);
    }
    const Vector candidate = project(rho - step * gradient);
    const Real candidate_value = objective(candidate);
    if (candidate_value < value) {
      if ((candidate - rho).lpNorm<Eigen::Infinity>() < 1e-10) break;
      rho = candidate;
      value = candidate_value;
      step *= 1.2;
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
  }
  return rho;
}

}  // namespace

TEST_CASE("optimal separable margins") {
  SUBCASE("symmetry") {
    const SeparableMargins m = optimal_separable_margins(10, 10, 1.0, 1.0, 0.7);
    CHECK(m.rho_plus == doctest::Approx(0.7));
    CHECK(m.rho_minus == doctest::Approx(0.7));
  }
  SUBCASE("8:1 split") {
    const SeparableMargins m = optimal_separable_margins(8, 1, 1.0, 1.0, 1.0);
    CHECK(m.rho_plus == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(m.rho_minus == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    const auto [oracle_plus, oracle_minus] = separable_margins_oracle(8, 1, 1.0, 1.0, 1.0);
    CHECK(std::abs(m.rho_plus - oracle_plus) <= 1e-3);
    CHECK(std::abs(m.rho_minus - oracle_minus) <= 1e-3);
  }
  SUBCASE("label swap mirrors the split") {
    const SeparableMargins m = optimal_separable_margins(1, 8, 1.0, 1.0, 1.0);
    CHECK(m.rho_plus == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.rho_minus == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("closed form matches the oracle on random instances") {
    SplitMix64 rng(311);
    for (int t = 0; t < 100; ++t) {
      const Index m_plus = 1 + static_cast<Index>(rng.below(1000));
      const Index m_minus = 1 + static_cast<Index>(rng.below(1000));
      const Real r_plus = rng.uniform(0.1, 5.0);
      const Real r_minus = rng.uniform(0.1, 5.0);
      const Real rho_geom = rng.uniform(0.1, 3.0);
      const SeparableMargins m =
          optimal_separable_margins(m_plus, m_minus, r_plus, r_minus, rho_geom);
      CHECK(m.rho_plus + m.rho_minus == doctest::Approx(2 * rho_geom).epsilon(1e-12));
      const auto [oracle_plus, oracle_minus] =
          separable_margins_oracle(m_plus, m_minus, r_plus, r_minus, rho_geom);
      CHECK(std::abs(m.rho_plus - oracle_plus) <= 1e-3 * rho_geom);
      CHECK(std::abs(m.rho_minus - oracle_minus) <= 1e-3 * rho_geom);
      if (r_plus == r_minus) continue;
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(optimal_separable_margins(0, 1, 1, 1, 1), ConfigError);
    CHECK_THROWS_AS(optimal_separable_margins(1, 1, -1, 1, 1), ConfigError);
  }
}

TEST_CASE("the quarter-exponent margins order the opposite way") {
  SUBCASE("16:1 example") {
    const SeparableMargins m = ldam_margins(16, 1, 1.0);
    CHECK(m.rho_plus == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.rho_minus == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("balanced counts coincide") {
    const SeparableMargins m = ldam_margins(9, 9, 0.8);
    CHECK(m.rho_plus == doctest::Approx(0.8));
    CHECK(m.rho_minus == doctest::Approx(0.8));
  }
  SUBCASE("ordering law on random instances") {
    SplitMix64 rng(313);
    for (int t = 0; t < 500; ++t) {
      const Index m_plus = 1 + static_cast<Index>(rng.below(5000));
      const Index m_minus = 1 + static_cast<Index>(rng.below(5000));
      if (m_plus == m_minus) continue;
      const SeparableMargins ours = optimal_separable_margins(m_plus, m_minus, 1.0, 1.0, 1.0);
      const SeparableMargins theirs = ldam_margins(m_plus, m_minus, 1.0);
      const int ours_sign = ours.rho_plus > ours.rho_minus ? 1 : -1;
      const int count_sign = m_plus > m_minus ? 1 : -1;
      const int theirs_sign = theirs.rho_plus > theirs.rho_minus ? 1 : -1;
      CHECK(ours_sign == count_sign);
      CHECK(theirs_sign == -count_sign);
    }
  }
}

TEST_CASE("geometric margin") {
  Matrix x(2, 2);
  x << 1, 0, -2, 0;
  const Dataset data(x, {0, 1}, 2);
  BinaryLinearScorer scorer;
  scorer.w = Vector::Zero(2);
  scorer.w[0] = 1;

  CHECK(geometric_margin(scorer, data) == doctest::Approx(1.0));

  SUBCASE("scale invariance") {
    scorer.w *= 10;
    CHECK(geometric_margin(scorer, data) == doctest::Approx(1.0));
  }
  SUBCASE("misclassified point") {
    scorer.w[0] = -1;
    CHECK_THROWS_AS(geometric_margin(scorer, data), ConfigError);
  }
  SUBCASE("zero weights") {
    scorer.w.setZero();
    CHECK_THROWS_AS(geometric_margin(scorer, data), ConfigError);
  }
}

TEST_CASE("rho heuristic") {
  SUBCASE("uniform inputs give the uniform direction") {
    const RhoHeuristic h = rho_heuristic({1, 1}, {1.0, 1.0});
    CHECK(h.direction[0] == doctest::Approx(0.5));
    CHECK(h.direction[1] == doctest::Approx(0.5));
  }
  SUBCASE("8:1 counts with equal radii") {
    const RhoHeuristic h = rho_heuristic({8, 1}, {1.0, 1.0});
    CHECK(h.direction[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(h.direction[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("equal radii reduce to the cube-root count rule") {
    SplitMix64 rng(317);
    for (int t = 0; t < 50; ++t) {
      const Index c = 2 + static_cast<Index>(rng.below(6));
      std::vector<Index> counts;
      Real total = 0;
      for (Index k = 0; k < c; ++k) {
        counts.push_back(1 + static_cast<Index>(rng.below(500)));
        total += std::cbrt(static_cast<Real>(counts.back()));
      }
      const RhoHeuristic h = rho_heuristic(counts, std::vector<Real>(counts.size(), 2.5));
      CHECK(h.direction.sum() == doctest::Approx(1.0).epsilon(1e-12));
      for (Index k = 0; k < c; ++k) {
        CHECK(h.direction[k] ==
              doctest::Approx(std::cbrt(static_cast<Real>(counts[static_cast<size_t>(k)])) /
                              total)
                  .epsilon(1e-12));
      }
    }
  }
  SUBCASE("matches the projected-gradient oracle") {
    SplitMix64 rng(331);
    for (int t = 0; t < 20; ++t) {
      const Index c = 2 + static_cast<Index>(rng.below(5));
      std::vector<Index> counts;
      std::vector<Real> radii;
      for (Index k = 0; k < c; ++k) {
        counts.push_back(1 + static_cast<Index>(rng.below(200)));
        radii.push_back(rng.uniform(0.2, 4.0));
      }
      const RhoHeuristic h = rho_heuristic(counts, radii);
      const Vector oracle = simplex_minimizer_oracle(counts, radii);
      CHECK((h.direction - oracle).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(rho_heuristic({1, 2}, {1.0}), ConfigError);
  }
}

TEST_CASE("renyi divergence of order 3") {
  Vector p(2), q(2);
  p << 0.3, 0.7;
  CHECK(renyi_d3(p, p) == doctest::Approx(0.0));

  p << 0.5, 0.5;
  q << 0.25, 0.75;
  CHECK(renyi_d3(p, q) == doctest::Approx(0.5 * std::log(20.0 / 9.0)).epsilon(1e-15));

  p << 1, 0;
  q << 0.5, 0.5;
  CHECK(renyi_d3(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  SUBCASE("zero q with positive p returns the infinity sentinel") {
    q << 1, 0;
    p << 0.5, 0.5;
    CHECK(std::isinf(renyi_d3(p, q)));
  }
  SUBCASE("invalid distributions") {
    q << 0.5, 0.6;
    CHECK_THROWS_AS(renyi_d3(p, q), ConfigError);
  }
}

TEST_CASE("complexity-renyi identity") {
  SUBCASE("single class collapses to the plain ratio") {
    Vector rho(1);
    rho << 0.7;
    const IdentityCheck check = complexity_renyi_identity({5}, {2.0}, rho);
    CHECK(check.lhs == doctest::Approx(5.0 * 4.0 / 0.49).epsilon(1e-12));
    CHECK(check.abs_diff <= 1e-10 * check.lhs);
  }
  SUBCASE("random instances up to 20 classes") {
    SplitMix64 rng(337);
    for (int t = 0; t < 100; ++t) {
      const Index c = 1 + static_cast<Index>(rng.below(20));
      std::vector<Index> counts;
      std::vector<Real> radii;
      for (Index k = 0; k < c; ++k) {
        counts.push_back(1 + static_cast<Index>(rng.below(1000)));
        radii.push_back(rng.uniform(0.1, 5.0));
      }
      const Vector rho = random_vector(rng, c, 0.1, 10.0);
      const IdentityCheck check = complexity_renyi_identity(counts, radii, rho);
      CHECK(check.abs_diff <= 1e-10 * check.lhs);
    }
  }
  SUBCASE("rho proportional to the heuristic direction kills the divergence") {
    const std::vector<Index> counts{10, 40, 90};
    const std::vector<Real> radii{1.0, 2.0, 0.5};
    const RhoHeuristic h = rho_heuristic(counts, radii);
    const Vector rho = 3.7 * h.direction;
    const IdentityCheck check = complexity_renyi_identity(counts, radii, rho);
    const Real expected = h.r_bar * h.r_bar / (rho.sum() * rho.sum());
    CHECK(check.rhs == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("binary margin bound") {
  BinaryBoundInputs inputs;
  inputs.m = 200;
  inputs.delta = 0.05;
  CHECK(margin_bound_binary(inputs) ==
        doctest::Approx(std::sqrt(std::log(20.0) / 400.0)).epsilon(1e-15));

  inputs.empirical_margin_loss = 0.2;
  inputs.complexity = 0.1;
  inputs.m = 100;
  inputs.delta = 0.1;
  CHECK(margin_bound_binary(inputs) ==
        doctest::Approx(0.4 + std::sqrt(std::log(10.0) / 200.0)).epsilon(1e-15));

  SUBCASE("confidence term vanishes as delta approaches 1") {
    BinaryBoundInputs limit;
    limit.m = 50;
    limit.delta = 1.0 - 1e-12;
    CHECK(margin_bound_binary(limit) == doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("uniform dominates non-uniform on identical inputs") {
    SplitMix64 rng(347);
    for (int t = 0; t < 200; ++t) {
      BinaryBoundInputs base;
      base.empirical_margin_loss = rng.uniform(0, 1);
      base.complexity = rng.uniform(0, 0.5);
      base.m = 10 + static_cast<Index>(rng.below(1000));
      base.delta = rng.uniform(0.01, 0.5);
      base.r_plus = rng.uniform(0.5, 4.0);
      base.r_minus = rng.uniform(0.5, 4.0);
      base.rho_plus = rng.uniform(0.01, 1.0) * base.r_plus;
      base.rho_minus = rng.uniform(0.01, 1.0) * base.r_minus;
      BinaryBoundInputs uniform = base;
      uniform.uniform = true;
      CHECK(margin_bound_binary(uniform) >= margin_bound_binary(base));
    }
  }
  SUBCASE("monotonicity in m, complexity, and delta") {
    BinaryBoundInputs base;
    base.empirical_margin_loss = 0.1;
    base.complexity = 0.05;
    base.m = 100;
    base.delta = 0.05;
    BinaryBoundInputs more_data = base;
    more_data.m = 400;
    CHECK(margin_bound_binary(more_data) <= margin_bound_binary(base));
    BinaryBoundInputs more_complex = base;
    more_complex.complexity = 0.2;
    CHECK(margin_bound_binary(more_complex) >= margin_bound_binary(base));
    BinaryBoundInputs less_confident = base;
    less_confident.delta = 0.01;
    CHECK(margin_bound_binary(less_confident) >= margin_bound_binary(base));
  }
  SUBCASE("uniform variant rejects rho above r") {
    BinaryBoundInputs bad;
    bad.uniform = true;
    bad.rho_plus = 2.0;
    bad.r_plus = 1.0;
    CHECK_THROWS_AS(margin_bound_binary(bad), ConfigError);
  }
}

TEST_CASE("multi-class margin bound") {
  MultiBoundInputs inputs;
  inputs.num_classes = 2;
  inputs.complexity = 0.05;
  inputs.m = 100000000;
  inputs.delta = 0.5;
  // 4 sqrt(2c) C = 4 * 2 * 0.05 = 0.4 once the confidence term is negligible.
  CHECK(margin_bound_multi(inputs) == doctest::Approx(0.4).epsilon(1e-3));

  SUBCASE("complexity term is linear") {
    MultiBoundInputs doubled = inputs;
    doubled.complexity = 0.1;
    const Real tail = std::sqrt(std::log(1 / inputs.delta) / (2.0 * inputs.m));
    CHECK(margin_bound_multi(doubled) - tail ==
          doctest::Approx(2 * (margin_bound_multi(inputs) - tail)).epsilon(1e-9));
  }
  SUBCASE("uniform multiplier is 4c sqrt(2c)") {
    MultiBoundInputs uniform = inputs;
    uniform.uniform = true;
    uniform.num_classes = 3;
    uniform.class_radii = {1.0, 1.0, 1.0};
    uniform.class_margins = {1.0, 1.0, 1.0};  // log-log terms vanish at rho = r...
    inputs.num_classes = 3;
    const Real c = 3;
    const Real log_arg = c * std::log(2.0) + std::log(1.0 / uniform.delta);
    const Real expected = 4.0 * c * std::sqrt(2.0 * c) * uniform.complexity +
                          std::sqrt(log_arg / (2.0 * uniform.m));
    CHECK(margin_bound_multi(uniform) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("balanced data collapses the three figure boundaries") {
  // Balanced counts give alpha* = alpha_ldam = 1/2, so all three trained
  // models share one configuration and coincide exactly.
  SplitMix64 rng(349);
  Matrix x(80, 2);
  std::vector<int> labels(80);
  for (Index i = 0; i < 80; ++i) {
    const int label = i < 40 ? 0 : 1;
    x(i, 0) = (label == 0 ? 2.0 : -2.0) + 0.5 * rng.normal();
    x(i, 1) = 0.5 * rng.normal();
    labels[static_cast<size_t>(i)] = label;
  }
  const Dataset train_set(x, labels, 2);
  const Figure1Result result = run_figure1(train_set, train_set, 1e-3, PsiKind::Hinge, 400, 1);
  REQUIRE(result.boundaries.size() == 3);
  CHECK(result.boundaries[0].alpha == doctest::Approx(0.5));
  CHECK(result.boundaries[1].alpha == doctest::Approx(0.5));
  CHECK(result.boundaries[2].alpha == doctest::Approx(0.5));
  CHECK(result.boundaries[0].offset ==
        doctest::Approx(result.boundaries[1].offset).epsilon(1e-9));
  CHECK(result.boundaries[0].offset ==
        doctest::Approx(result.boundaries[2].offset).epsilon(1e-9));
}

TEST_CASE("empirical-complexity bound variants") {
  BinaryBoundInputs inputs;
  inputs.empirical_margin_loss = 0.1;
  inputs.complexity = 0.05;
  inputs.m = 400;
  inputs.delta = 0.05;
  inputs.empirical = true;
  CHECK(margin_bound_binary(inputs) ==
        doctest::Approx(0.1 + 0.1 + 3 * std::sqrt(std::log(40.0) / 800.0)).epsilon(1e-15));

  BinaryBoundInputs uniform = inputs;
  uniform.uniform = true;
  uniform.r_plus = 2.0;
  uniform.r_minus = 1.0;
  uniform.rho_plus = 1.0;
  uniform.rho_minus = 0.5;
  const Real log_log = std::sqrt(std::log(std::log2(4.0)) / 400.0) +
                       std::sqrt(std::log(std::log2(4.0)) / 400.0);
  CHECK(margin_bound_binary(uniform) ==
        doctest::Approx(0.1 + 0.2 + log_log + 3 * std::sqrt(std::log(160.0) / 800.0))
            .epsilon(1e-12));

  MultiBoundInputs multi;
  multi.empirical_margin_loss = 0.0;
  multi.complexity = 0.01;
  multi.num_classes = 3;
  multi.m = 900;
  multi.delta = 0.1;
  multi.empirical = true;
  CHECK(margin_bound_multi(multi) ==
        doctest::Approx(4 * std::sqrt(6.0) * 0.01 + 3 * std::sqrt(std::log(20.0) / 1800.0))
            .epsilon(1e-15));
}
