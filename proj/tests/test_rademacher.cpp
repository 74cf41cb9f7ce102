#include "immax/rademacher.hpp"

#include "immax/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace immax;
using immax::testing::random_vector;

namespace {

Dataset dataset_from_rows(std::initializer_list<std::initializer_list<Real>> rows,
                          std::initializer_list<int> labels, int c = 2) {
  Matrix x(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (Real v : row) x(i, j++) = v;
    ++i;
  }
  return Dataset(std::move(x), std::vector<int>(labels), c);
}

Dataset random_binary_dataset(SplitMix64& rng, Index m, Index d) {
  Matrix x(m, d);
  std::vector<int> labels(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = rng.uniform(-3, 3);
    labels[static_cast<size_t>(i)] = static_cast<int>(rng.below(2));
  }
  labels[0] = 0;
  labels[static_cast<size_t>(m - 1)] = 1;
  return Dataset(std::move(x), std::move(labels), 2);
}

}  // namespace

TEST_CASE("two-point fixture enumerates to sqrt(2)/2") {
  const Dataset data = dataset_from_rows({{1, 0}, {0, 1}}, {0, 1});
  EstimationMode mode;
  mode.exact = true;
  const ComplexityEstimate estimate =
      empirical_binary_complexity(data, MarginPair(1, 1), 1.0, mode);
  CHECK(estimate.value == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  CHECK(estimate.std_error == 0.0);
  CHECK(estimate.trials == 4);
  CHECK(estimate.method == ComplexityEstimate::Method::Exact);

  // The closed-form bound is attained here.
  const LinearBoundPair bound = bound_linear_binary(1, 1, 1.0, 1.0, MarginPair(1, 1), 1.0);
  CHECK(estimate.value == doctest::Approx(bound.tight).epsilon(1e-15));
}

TEST_CASE("degenerate datasets") {
  const Dataset zeros = dataset_from_rows({{0, 0}, {0, 0}}, {0, 1});
  EstimationMode mode;
  mode.exact = true;
  CHECK(empirical_binary_complexity(zeros, MarginPair(1, 2), 1.0, mode).value == 0.0);
}

TEST_CASE("homogeneity in Lambda and rho") {
  SplitMix64 rng(401);
  const Dataset data = random_binary_dataset(rng, 8, 3);
  EstimationMode exact;
  exact.exact = true;
  EstimationMode mc;
  mc.trials = 500;
  mc.seed = 7;

  for (const EstimationMode& mode : {exact, mc}) {
    const Real base = empirical_binary_complexity(data, MarginPair(0.5, 2.0), 1.0, mode).value;
    const Real doubled_cap =
        empirical_binary_complexity(data, MarginPair(0.5, 2.0), 2.0, mode).value;
    CHECK(doubled_cap == doctest::Approx(2 * base).epsilon(1e-12));
    const Real scaled_rho =
        empirical_binary_complexity(data, MarginPair(1.5, 6.0), 1.0, mode).value;
    CHECK(scaled_rho == doctest::Approx(base / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("monte carlo agrees with exact enumeration within three standard errors") {
  SplitMix64 rng(409);
  int failures = 0;
  for (int t = 0; t < 25; ++t) {
    const Index m = 2 + static_cast<Index>(rng.below(11));
    const Dataset data = random_binary_dataset(rng, m, 1 + static_cast<Index>(rng.below(3)));
    const MarginPair rho(rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0));
    EstimationMode exact;
    exact.exact = true;
    EstimationMode mc;
    mc.trials = 2000;
    mc.seed = rng.next_u64();
    const Real truth = empirical_binary_complexity(data, rho, 1.0, exact).value;
    const ComplexityEstimate sampled = empirical_binary_complexity(data, rho, 1.0, mc);
    if (std::abs(sampled.value - truth) > 3.0 * sampled.std_error) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("exact enumeration refuses oversized inputs") {
  SplitMix64 rng(419);
  const Dataset data = random_binary_dataset(rng, 21, 2);
  EstimationMode mode;
  mode.exact = true;
  CHECK_THROWS_AS(empirical_binary_complexity(data, MarginPair(1, 1), 1.0, mode), ConfigError);
}

TEST_CASE("exact value never exceeds the closed-form bound") {
  SplitMix64 rng(421);
  EstimationMode mode;
  mode.exact = true;
  for (int t = 0; t < 40; ++t) {
    const Index m = 2 + static_cast<Index>(rng.below(9));
    const Dataset data = random_binary_dataset(rng, m, 1 + static_cast<Index>(rng.below(3)));
    const MarginPair rho(rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0));
    const Real lambda_cap = rng.uniform(0.5, 2.0);
    const Real exact = empirical_binary_complexity(data, rho, lambda_cap, mode).value;
    const LinearBoundPair bound =
        bound_linear_binary(data.class_counts()[0], data.class_counts()[1],
                            data.class_radii()[0], data.class_radii()[1], rho, lambda_cap);
    CHECK(exact <= bound.tight * (1 + 1e-12) + 1e-15);
    CHECK(bound.tight <= bound.loose * (1 + 1e-12));
  }
}

TEST_CASE("multi-class complexity") {
  SUBCASE("single example fixture") {
    Matrix x(1, 1);
    x << 1;
    const Dataset data(x, {0}, 2);
    EstimationMode mode;
    mode.exact = true;
    const ComplexityEstimate estimate =
        empirical_multi_complexity(data, Vector::Ones(2), 1.0, mode);
    // Every sign pair gives norm sqrt(2); m = 1.
    CHECK(estimate.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(estimate.trials == 4);
  }
  SUBCASE("zero features") {
    Matrix x(2, 2);
    x.setZero();
    const Dataset data(x, {0, 1}, 2);
    EstimationMode mode;
    mode.exact = true;
    CHECK(empirical_multi_complexity(data, Vector::Ones(2), 1.0, mode).value == 0.0);
  }
  SUBCASE("rho scaling") {
    SplitMix64 rng(431);
    const Dataset data = random_binary_dataset(rng, 4, 2);
    EstimationMode mode;
    mode.exact = true;
    const Real base = empirical_multi_complexity(data, Vector::Ones(2), 1.0, mode).value;
    const Real scaled = empirical_multi_complexity(data, 2.0 * Vector::Ones(2), 1.0, mode).value;
    CHECK(scaled == doctest::Approx(base / 2.0).epsilon(1e-12));
  }
  SUBCASE("exact refusal above 20 sign variables") {
    SplitMix64 rng(433);
    const Dataset data = random_binary_dataset(rng, 11, 2);  // 11 * 2 = 22 variables
    EstimationMode mode;
    mode.exact = true;
    CHECK_THROWS_AS(empirical_multi_complexity(data, Vector::Ones(2), 1.0, mode), ConfigError);
  }
  SUBCASE("exact value respects the l2 kernel bound") {
    SplitMix64 rng(439);
    EstimationMode mode;
    mode.exact = true;
    for (int t = 0; t < 20; ++t) {
      const Index m = 2 + static_cast<Index>(rng.below(4));
      const Dataset data = random_binary_dataset(rng, m, 2);
      const Vector rho = random_vector(rng, 2, 0.3, 2.0);
      const Real exact = empirical_multi_complexity(data, rho, 1.0, mode).value;
      const Real bound = bound_kernel_l2(data.class_counts(), data.class_radii(), rho, 1.0);
      CHECK(exact <= bound * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("kernel bound values") {
  SUBCASE("l1 uniform case") {
    const Vector rho = Vector::Ones(2);
    const Real bound = bound_kernel_l1({10, 10}, {1.0, 1.0}, rho, 1.0, 8);
    const Real expected = std::sqrt(4.0) / 20.0 * std::sqrt(20.0 * std::log(16.0));
    CHECK(bound == doctest::Approx(expected).epsilon(1e-15));
  }
  SUBCASE("l1 dimension factor") {
    const Vector rho = Vector::Ones(2);
    const Real at_d = bound_kernel_l1({5, 7}, {1.0, 2.0}, rho, 1.0, 16);
    const Real at_4d = bound_kernel_l1({5, 7}, {1.0, 2.0}, rho, 1.0, 64);
    CHECK(at_4d / at_d ==
          doctest::Approx(std::sqrt(std::log(128.0) / std::log(32.0))).epsilon(1e-12));
  }
  SUBCASE("l2 arithmetic example") {
    const Vector rho = Vector::Ones(2);
    CHECK(bound_kernel_l2({90, 10}, {1.0, 1.0}, rho, 1.0) ==
          doctest::Approx(std::sqrt(2.0) / 10.0).epsilon(1e-15));
  }
  SUBCASE("the direct and renyi paths agree") {
    SplitMix64 rng(443);
    for (int t = 0; t < 100; ++t) {
      const Index c = 1 + static_cast<Index>(rng.below(10));
      std::vector<Index> counts;
      std::vector<Real> radii;
      for (Index k = 0; k < c; ++k) {
        counts.push_back(1 + static_cast<Index>(rng.below(300)));
        radii.push_back(rng.uniform(0.1, 4.0));
      }
      const Vector rho = random_vector(rng, c, 0.1, 5.0);
      const Real lambda_cap = rng.uniform(0.5, 2.0);
      const Real direct = bound_kernel_l2(counts, radii, rho, lambda_cap);
      const Real via_renyi = bound_kernel_l2_via_renyi(counts, radii, rho, lambda_cap);
      CHECK(std::abs(direct - via_renyi) <= 1e-10 * direct);
    }
  }
  SUBCASE("empty negative class drops its term") {
    const LinearBoundPair bound = bound_linear_binary(4, 0, 2.0, 0.0, MarginPair(0.5, 1), 1.0);
    CHECK(bound.tight == doctest::Approx(std::sqrt(4.0 * 4.0 / 0.25) / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("multi-class monte carlo agrees with exact enumeration") {
  SplitMix64 rng(449);
  int failures = 0;
  for (int t = 0; t < 10; ++t) {
    const Index m = 2 + static_cast<Index>(rng.below(4));
    const Dataset data = random_binary_dataset(rng, m, 2);
    const Vector rho = random_vector(rng, 2, 0.3, 2.0);
    EstimationMode exact_mode;
    exact_mode.exact = true;
    const Real exact = empirical_multi_complexity(data, rho, 1.0, exact_mode).value;
    EstimationMode mc;
    mc.trials = 1500;
    mc.seed = rng.next_u64();
    const ComplexityEstimate sampled = empirical_multi_complexity(data, rho, 1.0, mc);
    if (std::abs(sampled.value - exact) > 3.0 * sampled.std_error) ++failures;
  }
  CHECK(failures == 0);
}
