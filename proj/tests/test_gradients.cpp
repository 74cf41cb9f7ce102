#include "immax/dataset.hpp"
#include "immax/losses.hpp"
#include "immax/rng.hpp"
#include "immax/train.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace immax;
using namespace immax::testing;

namespace {

constexpr Real kFdStep = 1e-6;
constexpr Real kFdTol = 1e-5;
constexpr Real kKinkTol = 1e-3;

LossSpec multi_spec(LossKind kind, Index c, SplitMix64& rng) {
  LossSpec spec;
  spec.kind = kind;
  switch (kind) {
    case LossKind::ImmaxMulti:
    case LossKind::ImbalancedMarginMulti:
      spec.rho = random_vector(rng, c, 0.3, 3.0);
      break;
    case LossKind::LA:
      spec.tau = rng.uniform(0.1, 1.0);
      break;
    case LossKind::CB:
      spec.gamma_cb = rng.uniform(0.05, 0.95);
      break;
    case LossKind::Focal:
      spec.gamma_focal = rng.uniform(0.0, 4.0);
      break;
    case LossKind::Ldam:
      spec.ldam_C = rng.uniform(0.1, 2.0);
      break;
    default:
      break;
  }
  return spec;
}

}  // namespace

TEST_CASE("multi-class loss gradients match central differences") {
  const LossKind kinds[] = {LossKind::CE,    LossKind::RW,    LossKind::BS,
                            LossKind::Equal, LossKind::LA,    LossKind::CB,
                            LossKind::Focal, LossKind::Ldam,  LossKind::ImmaxMulti,
                            LossKind::ImbalancedMarginMulti};
  SplitMix64 rng(101);
  for (LossKind kind : kinds) {
    CAPTURE(static_cast<int>(kind));
    int checked = 0;
    Real worst = 0;
    while (checked < 1000) {
      const Index c = 2 + static_cast<Index>(rng.below(4));
      std::vector<Index> counts;
      Index total = 0;
      for (Index k = 0; k < c; ++k) {
        counts.push_back(1 + static_cast<Index>(rng.below(99)));
        total += counts.back();
      }
      LossContext ctx;
      ctx.counts = &counts;
      ctx.total = total;
      ctx.equal_beta = rng.bernoulli(0.5) ? 1.0 : 0.0;
      const LossSpec spec = multi_spec(kind, c, rng);
      const Vector scores = random_vector(rng, c, -4, 4);
      const auto y = static_cast<Index>(rng.below(static_cast<std::uint64_t>(c)));
      if (near_kink_multi(spec, scores, y, kKinkTol)) continue;

      const Vector analytic = multiclass_loss_gradient(spec, scores, y, ctx);
      const Vector numeric = central_grad(
          [&](const Vector& s) { return multiclass_loss(spec, s, y, ctx); }, scores, kFdStep);
      worst = std::max(worst, max_rel_gap(analytic, numeric));
      ++checked;
    }
    CHECK(worst <= kFdTol);
  }
}

TEST_CASE("binary loss derivatives match central differences") {
  const LossKind kinds[] = {LossKind::PhiMargin, LossKind::ImbalancedMarginBinary,
                            LossKind::ImmaxBinary, LossKind::Hinge, LossKind::Logistic,
                            LossKind::Exponential, LossKind::CostSensitive};
  SplitMix64 rng(103);
  for (LossKind kind : kinds) {
    CAPTURE(static_cast<int>(kind));
    int checked = 0;
    Real worst = 0;
    while (checked < 1000) {
      LossSpec spec;
      spec.kind = kind;
      spec.rho = random_vector(rng, kind == LossKind::PhiMargin ? 1 : 2, 0.3, 3.0);
      spec.alpha = rng.uniform(0.1, 0.9);
      spec.psi = static_cast<PsiKind>(rng.below(3));
      spec.c_plus = rng.uniform(0.5, 3.0);
      spec.c_minus = rng.uniform(0.5, 3.0);
      const Real h = rng.uniform(-4, 4);
      const int y = rng.sign();
      if (near_kink_binary(spec, h, y, kKinkTol)) continue;

      const Real analytic = binary_loss_derivative(spec, h, y);
      const Real numeric =
          central_diff([&](Real v) { return binary_loss(spec, v, y); }, h, kFdStep);
      worst = std::max(worst, rel_gap(analytic, numeric));
      ++checked;
    }
    CHECK(worst <= kFdTol);
  }
}

TEST_CASE("documented gradient examples") {
  LossSpec ce;
  ce.kind = LossKind::CE;
  Vector scores(2);
  scores << 0, 0;
  const Vector grad = multiclass_loss_gradient(ce, scores, 0);
  CHECK(grad[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(grad[1] == doctest::Approx(0.5).epsilon(1e-15));

  // Hinge kink convention: right-derivative 0 at u = 1.
  CHECK(surrogate_psi_derivative(PsiKind::Hinge, 1.0) == 0.0);
  CHECK(surrogate_psi_derivative(PsiKind::Hinge, 1.0 - 1e-9) == -1.0);

  // ImmaxMulti with unit margins has the cross-entropy gradient.
  SplitMix64 rng(107);
  for (int t = 0; t < 200; ++t) {
    const Index c = 2 + static_cast<Index>(rng.below(5));
    const Vector s = random_vector(rng, c, -5, 5);
    const auto y = static_cast<Index>(rng.below(static_cast<std::uint64_t>(c)));
    CHECK(max_rel_gap(immax_multi_gradient(s, y, 1.0), multiclass_loss_gradient(ce, s, y)) <=
          1e-12);
  }
}

namespace {

/// Random small dataset for objective-level checks.
Dataset random_binary_dataset(SplitMix64& rng, Index m, Index d) {
  Matrix features(m, d);
  std::vector<int> labels(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) features(i, j) = rng.uniform(-2, 2);
    labels[static_cast<size_t>(i)] = static_cast<int>(rng.below(2));
  }
  // Ensure both classes are present.
  labels[0] = 0;
  labels[static_cast<size_t>(m - 1)] = 1;
  return Dataset(std::move(features), std::move(labels), 2);
}

Dataset random_multi_dataset(SplitMix64& rng, Index m, Index d, int c) {
  Matrix features(m, d);
  std::vector<int> labels(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) features(i, j) = rng.uniform(-2, 2);
    labels[static_cast<size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(c)));
  }
  for (int k = 0; k < c; ++k) labels[static_cast<size_t>(k)] = k;
  return Dataset(std::move(features), std::move(labels), c);
}

}  // namespace

TEST_CASE("immax binary objective matches directional finite differences") {
  SplitMix64 rng(109);
  for (PsiKind psi : {PsiKind::Hinge, PsiKind::Logistic, PsiKind::Exponential}) {
    int checked = 0;
    Real worst = 0;
    while (checked < 30) {
      const Dataset data = random_binary_dataset(rng, 12, 3);
      const Real alpha = rng.uniform(0.2, 0.8);
      const Real lambda = rng.uniform(0.0, 0.1);
      BinaryLinearScorer scorer;
      scorer.w = random_vector(rng, 3, -1, 1);
      scorer.bias = rng.uniform(-0.5, 0.5);

      // Step away from hinge kinks so the finite difference is clean.
      if (psi == PsiKind::Hinge) {
        bool clean = true;
        for (Index i = 0; i < data.size(); ++i) {
          const Real h = scorer.score(data.features().row(i).transpose());
          const Real arg = data.binary_label(i) == +1 ? h / alpha : -h / (1 - alpha);
          if (std::abs(arg - 1.0) < kKinkTol) clean = false;
        }
        if (!clean) continue;
      }

      const auto objective_at = [&](const Vector& theta) {
        BinaryLinearScorer probe = scorer;
        probe.w = theta.head(3);
        probe.bias = theta[3];
        return immax_binary_objective(probe, data, lambda, alpha, psi);
      };
      Vector theta(4);
      theta << scorer.w, scorer.bias;
      const Vector numeric = central_grad(objective_at, theta, kFdStep);

      // Analytic gradient assembled from the per-example derivatives.
      Vector analytic = Vector::Zero(4);
      for (Index i = 0; i < data.size(); ++i) {
        const Vector x = data.features().row(i).transpose();
        const Real h = scorer.score(x);
        const Real slope =
            immax_binary_loss_derivative(psi, h, data.binary_label(i), alpha);
        analytic.head(3) += slope * x;
        analytic[3] += slope;
      }
      analytic /= static_cast<Real>(data.size());
      analytic.head(3) += 2 * lambda * scorer.w;

      worst = std::max(worst, max_rel_gap(analytic, numeric));
      ++checked;
    }
    CHECK(worst <= kFdTol);
  }
}

TEST_CASE("immax multi objective matches directional finite differences") {
  SplitMix64 rng(113);
  Real worst = 0;
  for (int t = 0; t < 30; ++t) {
    const int c = 3;
    const Index d = 2;
    const Dataset data = random_multi_dataset(rng, 10, d, c);
    const Vector rho = random_vector(rng, c, 0.3, 2.0);
    const Real lambda = rng.uniform(0.0, 0.1);

    MultiLinearScorer scorer;
    scorer.W = Matrix::Zero(c, d);
    for (Index i = 0; i < c; ++i) scorer.W.row(i) = random_vector(rng, d, -1, 1).transpose();
    scorer.bias = random_vector(rng, c, -0.5, 0.5);

    const auto objective_at = [&](const Vector& theta) {
      MultiLinearScorer probe = scorer;
      probe.W = Eigen::Map<const Matrix>(theta.data(), c, d);
      probe.bias = theta.tail(c);
      return immax_multi_objective(probe, data, lambda, rho);
    };
    Vector theta(c * d + c);
    theta.head(c * d) = Eigen::Map<const Vector>(scorer.W.data(), c * d);
    theta.tail(c) = scorer.bias;

    const Vector numeric = central_grad(objective_at, theta, kFdStep);

    Vector analytic = Vector::Zero(theta.size());
    Eigen::Map<Matrix> gw(analytic.data(), c, d);
    for (Index i = 0; i < data.size(); ++i) {
      const Vector x = data.features().row(i).transpose();
      const Vector scores = scorer.score(x);
      const int y = data.label(i);
      const Vector g = immax_multi_gradient(scores, y, rho[y]);
      gw.noalias() += g * x.transpose();
      analytic.tail(c) += g;
    }
    analytic /= static_cast<Real>(data.size());
    gw += 2 * lambda * scorer.W;

    worst = std::max(worst, max_rel_gap(analytic, numeric));
  }
  CHECK(worst <= kFdTol);
}

TEST_CASE("mlp backpropagation matches finite differences") {
  SplitMix64 rng(127);
  Real worst = 0;
  for (int t = 0; t < 10; ++t) {
    const Dataset data = random_multi_dataset(rng, 8, 3, 3);
    TrainConfig config;
    config.loss.kind = LossKind::CE;
    config.lambda = rng.uniform(0.0, 0.1);
    config.scorer = ScorerKind::Mlp;
    config.hidden_width = 4;
    config.seed = rng.next_u64();

    Vector theta = initial_parameters(data, config);
    for (Index j = 0; j < theta.size(); ++j) theta[j] += rng.uniform(-0.3, 0.3);
    Vector analytic(theta.size());
    objective_value(data, config, theta, &analytic);
    const Vector numeric = central_grad(
        [&](const Vector& params) { return objective_value(data, config, params); }, theta,
        kFdStep);
    worst = std::max(worst, max_rel_gap(analytic, numeric));
  }
  CHECK(worst <= kFdTol);
}
