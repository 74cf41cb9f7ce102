#include "immax/train.hpp"

#include "immax/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace immax {

Real immax_binary_objective(const BinaryLinearScorer& scorer, const Dataset& dataset,
                            Real lambda, Real alpha, PsiKind psi) {
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("immax alpha must be in (0, 1)");
  if (lambda < 0) throw ConfigError("lambda must be >= 0");
  if (scorer.w.size() != dataset.dim()) throw ConfigError("scorer/dataset dimension mismatch");
  if (dataset.num_classes() != 2) throw ConfigError("binary objective needs a binary dataset");
  const Vector h = scorer.score_batch(dataset.features());
  Real total = 0;
  for (Index i = 0; i < dataset.size(); ++i) {
    total += immax_binary_loss(psi, h[i], dataset.binary_label(i), alpha);
  }
  return lambda * scorer.w.squaredNorm() + total / static_cast<Real>(dataset.size());
}

namespace {

template <typename MultiScorer>
Real immax_multi_objective_impl(const MultiScorer& scorer, const Dataset& dataset, Real lambda,
                                const Vector& rho) {
  check_margin_vector(rho);
  if (rho.size() != dataset.num_classes()) throw ConfigError("rho must have one entry per class");
  if (lambda < 0) throw ConfigError("lambda must be >= 0");
  const Matrix scores = scorer.score_batch(dataset.features());
  Real total = 0;
  for (Index i = 0; i < dataset.size(); ++i) {
    const int y = dataset.label(i);
    total += immax_multi_loss(scores.row(i).transpose(), y, rho[y]);
  }
  const Real norm = scorer.weight_norm();
  return lambda * norm * norm + total / static_cast<Real>(dataset.size());
}

}  // namespace

Real immax_multi_objective(const MultiLinearScorer& scorer, const Dataset& dataset, Real lambda,
                           const Vector& rho) {
  return immax_multi_objective_impl(scorer, dataset, lambda, rho);
}

Real immax_multi_objective(const MlpScorer& scorer, const Dataset& dataset, Real lambda,
                           const Vector& rho) {
  return immax_multi_objective_impl(scorer, dataset, lambda, rho);
}

// ---------------------------------------------------------------------------
// Flattened-parameter objective used by the trainer
// ---------------------------------------------------------------------------

namespace {

struct Problem {
  virtual ~Problem() = default;
  virtual Index dim() const = 0;
  virtual Vector initial(std::uint64_t seed) const = 0;
  /// Objective over the batch; fills *grad when non-null.
  virtual Real eval(const Vector& theta, const std::vector<Index>& batch, int epoch,
                    Vector* grad) const = 0;
  virtual Scorer make_scorer(const Vector& theta) const = 0;
  /// Squared norm of the penalized weight block (biases excluded).
  virtual Real weight_squared_norm(const Vector& theta) const = 0;
  virtual void project(Vector& theta, Real cap) const = 0;
  /// Exact minimization over the unpenalized bias where available. The bias
  /// direction of the hinge objective is flat near the optimum, where plain
  /// (sub)gradient steps stall; this coordinate step never increases the
  /// objective.
  virtual void polish_bias(Vector&) const {}
};

struct CommonConfig {
  LossSpec loss;
  Real lambda;
  bool use_bias;
  std::uint64_t equal_seed;
};

Real equal_beta_for(const LossSpec& loss, std::uint64_t equal_seed, int epoch, Index example) {
  if (loss.kind != LossKind::Equal) return 0.0;
  SplitMix64 rng(derive_seed(equal_seed, static_cast<std::uint64_t>(epoch) * 0x10001ULL +
                                             static_cast<std::uint64_t>(example)));
  return rng.bernoulli(loss.equal_p) ? 1.0 : 0.0;
}

class BinaryLinearProblem final : public Problem {
 public:
  BinaryLinearProblem(const Dataset& dataset, CommonConfig config)
      : data_(dataset), cfg_(std::move(config)) {
    if (dataset.num_classes() != 2) throw ConfigError("binary scorer needs a binary dataset");
    if (!cfg_.loss.is_binary_score()) {
      throw ConfigError("loss kind takes per-class scores; use a multi-class scorer");
    }
    cfg_.loss.validate(2);
  }

  Index dim() const override { return data_.dim() + (cfg_.use_bias ? 1 : 0); }

  Vector initial(std::uint64_t) const override { return Vector::Zero(dim()); }

  Real eval(const Vector& theta, const std::vector<Index>& batch, int,
            Vector* grad) const override {
    const Index d = data_.dim();
    const auto w = theta.head(d);
    const Real bias = cfg_.use_bias ? theta[d] : 0.0;
    const auto n = static_cast<Real>(batch.size());
    Real total = 0;
    // Full-batch fast path: one matvec for the scores, one for the gradient.
    if (batch.size() == static_cast<size_t>(data_.size())) {
      const Vector h = (data_.features() * w).array() + bias;
      Vector slopes;
      if (grad) slopes.resize(data_.size());
      for (Index i = 0; i < data_.size(); ++i) {
        const int y = data_.binary_label(i);
        total += binary_loss(cfg_.loss, h[i], y);
        if (grad) slopes[i] = binary_loss_derivative(cfg_.loss, h[i], y);
      }
      if (grad) {
        grad->setZero(dim());
        grad->head(d) = data_.features().transpose() * slopes / n + 2.0 * cfg_.lambda * w;
        if (cfg_.use_bias) (*grad)[d] = slopes.sum() / n;
      }
      return cfg_.lambda * w.squaredNorm() + total / n;
    }
    if (grad) grad->setZero(dim());
    for (Index i : batch) {
      const auto x = data_.features().row(i);
      const Real h = x.dot(w) + bias;
      const int y = data_.binary_label(i);
      total += binary_loss(cfg_.loss, h, y);
      if (grad) {
        const Real slope = binary_loss_derivative(cfg_.loss, h, y);
        grad->head(d) += slope * x.transpose();
        if (cfg_.use_bias) (*grad)[d] += slope;
      }
    }
    if (grad) {
      *grad /= n;
      grad->head(d) += 2.0 * cfg_.lambda * w;
    }
    return cfg_.lambda * w.squaredNorm() + total / n;
  }

  Scorer make_scorer(const Vector& theta) const override {
    const Index d = data_.dim();
    BinaryLinearScorer scorer;
    scorer.w = theta.head(d);
    scorer.use_bias = cfg_.use_bias;
    scorer.bias = cfg_.use_bias ? theta[d] : 0.0;
    return scorer;
  }

  Real weight_squared_norm(const Vector& theta) const override {
    return theta.head(data_.dim()).squaredNorm();
  }

  void project(Vector& theta, Real cap) const override {
    const Real norm = std::sqrt(weight_squared_norm(theta));
    if (norm > cap) theta.head(data_.dim()) *= cap / norm;
  }

  void polish_bias(Vector& theta) const override {
    if (!cfg_.use_bias) return;
    // Only for losses convex in the score; the derivative in b is then
    // non-decreasing and the coordinate minimum is exact.
    const bool piecewise_linear =
        cfg_.loss.kind == LossKind::Hinge ||
        (cfg_.loss.kind == LossKind::ImmaxBinary && cfg_.loss.psi == PsiKind::Hinge);
    const bool smooth_convex =
        cfg_.loss.kind == LossKind::Logistic || cfg_.loss.kind == LossKind::Exponential ||
        (cfg_.loss.kind == LossKind::ImmaxBinary && cfg_.loss.psi != PsiKind::Hinge);
    if (!piecewise_linear && !smooth_convex) return;

    const Index d = data_.dim();
    const Vector scores = data_.features() * theta.head(d);

    if (piecewise_linear) {
      // The derivative in b is a step function: each example contributes a
      // constant slope until (positives) or after (negatives) its hinge
      // breakpoint. The minimum sits at the first breakpoint where the
      // running slope turns non-negative.
      const Real alpha = cfg_.loss.kind == LossKind::Hinge ? 0.5 : cfg_.loss.alpha;
      const Real slope_plus = 1.0 / (cfg_.loss.kind == LossKind::Hinge ? 1.0 : alpha);
      const Real slope_minus = 1.0 / (cfg_.loss.kind == LossKind::Hinge ? 1.0 : 1.0 - alpha);
      std::vector<std::pair<Real, Real>> events;  // (breakpoint, slope jump)
      events.reserve(static_cast<size_t>(data_.size()));
      Real slope = 0;
      for (Index i = 0; i < data_.size(); ++i) {
        if (data_.binary_label(i) == +1) {
          const Real threshold = cfg_.loss.kind == LossKind::Hinge ? 1.0 : alpha;
          slope -= slope_plus;  // active for b below the breakpoint
          events.emplace_back(threshold - scores[i], slope_plus);
        } else {
          const Real threshold = cfg_.loss.kind == LossKind::Hinge ? -1.0 : -(1.0 - alpha);
          events.emplace_back(threshold - scores[i], slope_minus);
        }
      }
      std::sort(events.begin(), events.end());
      // First breakpoint where the slope turns non-negative; when it sits
      // exactly at zero the minimizers form an interval (the hinge-free
      // stretch) and we take its midpoint, the centered placement.
      const Real flat_tol = 1e-9 * (slope_plus + slope_minus);
      Real best = theta[d];
      for (size_t k = 0; k < events.size(); ++k) {
        slope += events[k].second;
        if (slope < -flat_tol) continue;
        best = events[k].first;
        if (slope <= flat_tol) {
          size_t end = k;
          Real ahead = slope;
          while (end + 1 < events.size() && ahead <= flat_tol) {
            ahead += events[end + 1].second;
            if (ahead <= flat_tol) ++end;
          }
          if (end + 1 < events.size()) {
            best = 0.5 * (events[k].first + events[end + 1].first);
          }
        }
        break;
      }
      theta[d] = best;
      return;
    }

    const auto slope_sum = [&](Real bias) {
      Real sum = 0;
      for (Index i = 0; i < data_.size(); ++i) {
        sum += binary_loss_derivative(cfg_.loss, scores[i] + bias, data_.binary_label(i));
      }
      return sum;
    };
    Real lo = theta[d] - 1.0;
    Real hi = theta[d] + 1.0;
    for (int expand = 0; expand < 60 && slope_sum(lo) > 0; ++expand) lo -= hi - lo;
    for (int expand = 0; expand < 60 && slope_sum(hi) < 0; ++expand) hi += hi - lo;
    if (slope_sum(lo) > 0 || slope_sum(hi) < 0) return;  // unbracketable, keep bias
    for (int it = 0; it < 60; ++it) {
      const Real mid = 0.5 * (lo + hi);
      (slope_sum(mid) < 0 ? lo : hi) = mid;
    }
    theta[d] = 0.5 * (lo + hi);
  }

 private:
  const Dataset& data_;
  CommonConfig cfg_;
};

class MultiLinearProblem final : public Problem {
 public:
  MultiLinearProblem(const Dataset& dataset, CommonConfig config)
      : data_(dataset), cfg_(std::move(config)), c_(dataset.num_classes()) {
    if (cfg_.loss.is_binary_score()) {
      throw ConfigError("loss kind takes a single score; use the binary linear scorer");
    }
    cfg_.loss.validate(c_);
    ctx_.counts = &data_.class_counts();
    ctx_.total = data_.size();
  }

  Index dim() const override { return c_ * data_.dim() + (cfg_.use_bias ? c_ : 0); }

  Vector initial(std::uint64_t) const override { return Vector::Zero(dim()); }

  Real eval(const Vector& theta, const std::vector<Index>& batch, int epoch,
            Vector* grad) const override {
    const Index d = data_.dim();
    const Eigen::Map<const Matrix> W(theta.data(), c_, d);
    if (grad) grad->setZero(dim());
    Real total = 0;
    LossContext ctx = ctx_;
    for (Index i : batch) {
      const Vector x = data_.features().row(i).transpose();
      Vector scores = W * x;
      if (cfg_.use_bias) scores += theta.segment(c_ * d, c_);
      const int y = data_.label(i);
      ctx.equal_beta = equal_beta_for(cfg_.loss, cfg_.equal_seed, epoch, i);
      total += multiclass_loss(cfg_.loss, scores, y, ctx);
      if (grad) {
        const Vector g = multiclass_loss_gradient(cfg_.loss, scores, y, ctx);
        Eigen::Map<Matrix> gw(grad->data(), c_, d);
        gw.noalias() += g * x.transpose();
        if (cfg_.use_bias) grad->segment(c_ * d, c_) += g;
      }
    }
    const auto n = static_cast<Real>(batch.size());
    if (grad) {
      *grad /= n;
      Eigen::Map<Matrix> gw(grad->data(), c_, d);
      gw += 2.0 * cfg_.lambda * W;
    }
    return cfg_.lambda * W.squaredNorm() + total / n;
  }

  Scorer make_scorer(const Vector& theta) const override {
    const Index d = data_.dim();
    MultiLinearScorer scorer;
    scorer.W = Eigen::Map<const Matrix>(theta.data(), c_, d);
    scorer.use_bias = cfg_.use_bias;
    scorer.bias = cfg_.use_bias ? Vector(theta.segment(c_ * d, c_)) : Vector(Vector::Zero(c_));
    return scorer;
  }

  Real weight_squared_norm(const Vector& theta) const override {
    return theta.head(c_ * data_.dim()).squaredNorm();
  }

  void project(Vector& theta, Real cap) const override {
    const Real norm = std::sqrt(weight_squared_norm(theta));
    if (norm > cap) theta.head(c_ * data_.dim()) *= cap / norm;
  }

 private:
  const Dataset& data_;
  CommonConfig cfg_;
  Index c_;
  LossContext ctx_;
};

class MlpProblem final : public Problem {
 public:
  MlpProblem(const Dataset& dataset, CommonConfig config, Index hidden)
      : data_(dataset), cfg_(std::move(config)), c_(dataset.num_classes()), hidden_(hidden) {
    if (hidden_ < 1) throw ConfigError("mlp hidden width must be >= 1");
    if (cfg_.loss.is_binary_score()) {
      throw ConfigError("loss kind takes a single score; use the binary linear scorer");
    }
    cfg_.loss.validate(c_);
    ctx_.counts = &data_.class_counts();
    ctx_.total = data_.size();
  }

  // theta = [vec(W1); b1; vec(W2); b2]
  Index dim() const override { return hidden_ * data_.dim() + hidden_ + c_ * hidden_ + c_; }

  Vector initial(std::uint64_t seed) const override {
    SplitMix64 rng(derive_seed(seed, 0x6d6c70u));
    Vector theta(dim());
    const Real scale = 1.0 / std::sqrt(static_cast<Real>(data_.dim()));
    for (Index j = 0; j < theta.size(); ++j) theta[j] = scale * rng.normal();
    // Biases start at zero.
    theta.segment(hidden_ * data_.dim(), hidden_).setZero();
    theta.tail(c_).setZero();
    return theta;
  }

  Real eval(const Vector& theta, const std::vector<Index>& batch, int epoch,
            Vector* grad) const override {
    const Index d = data_.dim();
    const Eigen::Map<const Matrix> W1(theta.data(), hidden_, d);
    const auto b1 = theta.segment(hidden_ * d, hidden_);
    const Eigen::Map<const Matrix> W2(theta.data() + hidden_ * d + hidden_, c_, hidden_);
    const auto b2 = theta.tail(c_);
    if (grad) grad->setZero(dim());
    Real total = 0;
    LossContext ctx = ctx_;
    for (Index i : batch) {
      const Vector x = data_.features().row(i).transpose();
      const Vector hidden_act = (W1 * x + b1).array().tanh();
      const Vector scores = W2 * hidden_act + b2;
      const int y = data_.label(i);
      ctx.equal_beta = equal_beta_for(cfg_.loss, cfg_.equal_seed, epoch, i);
      total += multiclass_loss(cfg_.loss, scores, y, ctx);
      if (grad) {
        const Vector g = multiclass_loss_gradient(cfg_.loss, scores, y, ctx);
        Eigen::Map<Matrix> g1(grad->data(), hidden_, d);
        auto gb1 = grad->segment(hidden_ * d, hidden_);
        Eigen::Map<Matrix> g2(grad->data() + hidden_ * d + hidden_, c_, hidden_);
        auto gb2 = grad->tail(c_);
        g2.noalias() += g * hidden_act.transpose();
        gb2 += g;
        const Vector dz = (W2.transpose() * g).array() *
                          (1.0 - hidden_act.array().square());
        g1.noalias() += dz * x.transpose();
        gb1 += dz;
      }
    }
    const auto n = static_cast<Real>(batch.size());
    const Real penalty = W1.squaredNorm() + W2.squaredNorm();
    if (grad) {
      *grad /= n;
      Eigen::Map<Matrix> g1(grad->data(), hidden_, d);
      Eigen::Map<Matrix> g2(grad->data() + hidden_ * d + hidden_, c_, hidden_);
      g1 += 2.0 * cfg_.lambda * W1;
      g2 += 2.0 * cfg_.lambda * W2;
    }
    return cfg_.lambda * penalty + total / n;
  }

  Scorer make_scorer(const Vector& theta) const override {
    const Index d = data_.dim();
    MlpScorer scorer;
    scorer.W1 = Eigen::Map<const Matrix>(theta.data(), hidden_, d);
    scorer.b1 = theta.segment(hidden_ * d, hidden_);
    scorer.W2 = Eigen::Map<const Matrix>(theta.data() + hidden_ * d + hidden_, c_, hidden_);
    scorer.b2 = theta.tail(c_);
    return scorer;
  }

  Real weight_squared_norm(const Vector& theta) const override {
    const Index d = data_.dim();
    return theta.head(hidden_ * d).squaredNorm() +
           theta.segment(hidden_ * d + hidden_, c_ * hidden_).squaredNorm();
  }

  void project(Vector& theta, Real cap) const override {
    const Real norm = std::sqrt(weight_squared_norm(theta));
    if (norm <= cap) return;
    const Index d = data_.dim();
    const Real factor = cap / norm;
    theta.head(hidden_ * d) *= factor;
    theta.segment(hidden_ * d + hidden_, c_ * hidden_) *= factor;
  }

 private:
  const Dataset& data_;
  CommonConfig cfg_;
  Index c_;
  Index hidden_;
  LossContext ctx_;
};

std::unique_ptr<Problem> make_problem(const Dataset& dataset, const TrainConfig& config) {
  CommonConfig common{config.loss, config.lambda, config.use_bias,
                      derive_seed(config.seed, 0x6571u)};
  if (config.lambda < 0) throw ConfigError("lambda must be >= 0");
  switch (config.scorer) {
    case ScorerKind::BinaryLinear:
      return std::make_unique<BinaryLinearProblem>(dataset, std::move(common));
    case ScorerKind::MultiLinear:
      return std::make_unique<MultiLinearProblem>(dataset, std::move(common));
    case ScorerKind::Mlp:
      return std::make_unique<MlpProblem>(dataset, std::move(common), config.hidden_width);
  }
  throw ConfigError("unknown scorer kind");
}

std::vector<Index> all_indices(Index n) {
  std::vector<Index> indices(static_cast<size_t>(n));
  std::iota(indices.begin(), indices.end(), Index{0});
  return indices;
}

}  // namespace

Real regularized_objective(const Scorer& scorer, const Dataset& dataset, const LossSpec& loss,
                           Real lambda, std::uint64_t equal_seed) {
  if (lambda < 0) throw ConfigError("lambda must be >= 0");
  Real total = 0;
  LossContext ctx;
  ctx.counts = &dataset.class_counts();
  ctx.total = dataset.size();
  for (Index i = 0; i < dataset.size(); ++i) {
    ctx.equal_beta = equal_beta_for(loss, equal_seed, 0, i);
    if (loss.is_binary_score()) {
      const auto* binary = std::get_if<BinaryLinearScorer>(&scorer);
      if (binary == nullptr) throw ConfigError("loss kind needs a binary linear scorer");
      const Real h = binary->score(dataset.features().row(i).transpose());
      total += binary_loss(loss, h, dataset.binary_label(i));
    } else {
      const Vector scores = std::visit(
          [&](const auto& s) -> Vector {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BinaryLinearScorer>) {
              throw ConfigError("loss kind takes per-class scores");
            } else {
              return s.score(dataset.features().row(i).transpose());
            }
          },
          scorer);
      total += multiclass_loss(loss, scores, dataset.label(i), ctx);
    }
  }
  const Real norm = scorer_weight_norm(scorer);
  return lambda * norm * norm + total / static_cast<Real>(dataset.size());
}

Index parameter_count(const Dataset& dataset, const TrainConfig& config) {
  return make_problem(dataset, config)->dim();
}

Vector initial_parameters(const Dataset& dataset, const TrainConfig& config) {
  return make_problem(dataset, config)->initial(config.seed);
}

Real objective_value(const Dataset& dataset, const TrainConfig& config, const Vector& theta,
                     Vector* gradient) {
  const std::unique_ptr<Problem> problem = make_problem(dataset, config);
  if (theta.size() != problem->dim()) throw ConfigError("parameter size mismatch");
  return problem->eval(theta, all_indices(dataset.size()), 0, gradient);
}

Scorer scorer_from_parameters(const Dataset& dataset, const TrainConfig& config,
                              const Vector& theta) {
  const std::unique_ptr<Problem> problem = make_problem(dataset, config);
  if (theta.size() != problem->dim()) throw ConfigError("parameter size mismatch");
  return problem->make_scorer(theta);
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (config.batch_size < 0 || config.batch_size > dataset.size()) {
    throw ConfigError("batch size must be in [0, m]");
  }
  const std::unique_ptr<Problem> problem = make_problem(dataset, config);
  const std::vector<Index> everything = all_indices(dataset.size());

  Vector theta = problem->initial(config.seed);
  if (config.weight_cap) problem->project(theta, *config.weight_cap);

  TrainTrace trace;
  auto record = [&](Real objective) {
    trace.objective.push_back(objective);
    trace.train_error.push_back(evaluate(problem->make_scorer(theta), dataset).zero_one);
  };

  Real objective = problem->eval(theta, everything, 0, nullptr);
  if (!std::isfinite(objective)) {
    throw DivergenceError(problem->make_scorer(theta), std::move(trace));
  }
  record(objective);
  // Last parameters whose full objective was verified finite; divergence
  // errors carry this state.
  Vector last_good = theta;

  bool converged = false;
  int epoch = 1;
  Vector gradient(problem->dim());
  Vector candidate(problem->dim());
  SplitMix64 shuffle_rng(derive_seed(config.seed, 0x73686675u));

  for (; epoch <= config.epochs && !converged; ++epoch) {
    const Real previous = objective;

    if (config.optimizer == OptimizerKind::GradientDescent) {
      const auto try_polish = [&] {
        candidate = theta;
        problem->polish_bias(candidate);
        const Real value = problem->eval(candidate, everything, epoch, nullptr);
        if (std::isfinite(value) && value < objective) {
          theta = candidate;
          objective = value;
          return true;
        }
        return false;
      };

      problem->eval(theta, everything, epoch, &gradient);
      const Real gradient_norm2 = gradient.squaredNorm();
      Real step = config.learning_rate;
      bool accepted = false;
      for (int halving = 0; gradient_norm2 > 0 && halving < 60; ++halving) {
        candidate = theta - step * gradient;
        if (config.weight_cap) problem->project(candidate, *config.weight_cap);
        const Real value = problem->eval(candidate, everything, epoch, nullptr);
        if (std::isfinite(value) && value <= objective - 1e-4 * step * gradient_norm2) {
          theta = candidate;
          objective = value;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted) {
        try_polish();
      } else {
        // No descent along the gradient: pin the flat bias coordinate before
        // declaring convergence.
        const Real before = objective;
        const bool improved = try_polish();
        if (!improved ||
            before - objective <= config.tolerance * std::max(Real{1}, std::abs(before))) {
          converged = true;
          record(objective);
          break;
        }
      }
    } else {
      const Index batch_size = config.batch_size == 0 ? dataset.size() : config.batch_size;
      std::vector<Index> order = everything;
      for (size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[shuffle_rng.below(i)]);
      }
      Real lr = config.learning_rate;
      if (config.schedule == LrSchedule::Cosine) {
        lr *= 0.5 * (1.0 + std::cos(M_PI * static_cast<Real>(epoch - 1) /
                                    static_cast<Real>(config.epochs)));
      }
      std::vector<Index> batch;
      for (Index start = 0; start < dataset.size(); start += batch_size) {
        batch.assign(order.begin() + start,
                     order.begin() + std::min<Index>(start + batch_size, dataset.size()));
        problem->eval(theta, batch, epoch, &gradient);
        candidate = theta - lr * gradient;
        if (config.weight_cap) problem->project(candidate, *config.weight_cap);
        if (!candidate.allFinite()) {
          throw DivergenceError(problem->make_scorer(last_good), std::move(trace));
        }
        theta = candidate;
      }
      objective = problem->eval(theta, everything, epoch, nullptr);
      if (!std::isfinite(objective)) {
        throw DivergenceError(problem->make_scorer(last_good), std::move(trace));
      }
    }

    record(objective);
    last_good = theta;
    const Real change = std::abs(previous - objective);
    if (change <= config.tolerance * std::max(Real{1}, std::abs(previous))) {
      converged = true;
    }
  }

  TrainResult result{problem->make_scorer(theta), std::move(trace), converged,
                     std::min(epoch, config.epochs)};
  return result;
}

EvalReport evaluate(const Scorer& scorer, const Dataset& dataset) {
  const int c = dataset.num_classes();
  EvalReport report;
  report.confusion = Matrix::Zero(c, c);
  report.per_class_error.assign(static_cast<size_t>(c), 0.0);
  Index mistakes = 0;
  for (Index i = 0; i < dataset.size(); ++i) {
    const Vector x = dataset.features().row(i).transpose();
    int predicted;
    if (const auto* binary = std::get_if<BinaryLinearScorer>(&scorer)) {
      if (c != 2) throw ConfigError("binary scorer needs a binary dataset");
      if (binary->w.size() != dataset.dim()) throw ConfigError("dimension mismatch");
      predicted = binary->predict(x) == +1 ? 0 : 1;
    } else {
      predicted = static_cast<int>(std::visit(
          [&](const auto& s) -> Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BinaryLinearScorer>) {
              return 0;  // unreachable
            } else {
              const Vector scores = s.score(x);
              if (scores.size() != c) throw ConfigError("scorer/dataset class mismatch");
              return argmax_highest(scores);
            }
          },
          scorer));
    }
    const int truth = dataset.label(i);
    report.confusion(truth, predicted) += 1.0;
    if (predicted != truth) {
      ++mistakes;
      report.per_class_error[static_cast<size_t>(truth)] += 1.0;
    }
  }
  for (int k = 0; k < c; ++k) {
    const Index m_k = dataset.class_counts()[static_cast<size_t>(k)];
    if (m_k > 0) report.per_class_error[static_cast<size_t>(k)] /= static_cast<Real>(m_k);
  }
  report.zero_one = static_cast<Real>(mistakes) / static_cast<Real>(dataset.size());
  return report;
}

std::vector<std::vector<Index>> stratified_folds(const Dataset& dataset, int folds,
                                                 std::uint64_t seed) {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  std::vector<std::vector<Index>> assignment(static_cast<size_t>(folds));
  for (int k = 0; k < dataset.num_classes(); ++k) {
    auto members = dataset.index_sets()[static_cast<size_t>(k)];
    if (members.empty()) continue;
    if (static_cast<int>(members.size()) < folds) {
      throw ConfigError("stratification error: class " + std::to_string(k + 1) +
                        " has fewer examples than folds");
    }
    SplitMix64 rng(derive_seed(seed, 0xf01d0000u + static_cast<std::uint64_t>(k)));
    for (size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.below(i)]);
    }
    for (size_t i = 0; i < members.size(); ++i) {
      assignment[i % static_cast<size_t>(folds)].push_back(members[i]);
    }
  }
  for (auto& fold : assignment) std::sort(fold.begin(), fold.end());
  return assignment;
}

namespace {

Dataset subset(const Dataset& dataset, const std::vector<Index>& rows) {
  Matrix features(static_cast<Index>(rows.size()), dataset.dim());
  std::vector<int> labels(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    features.row(static_cast<Index>(i)) = dataset.features().row(rows[i]);
    labels[i] = dataset.label(rows[i]);
  }
  return Dataset(std::move(features), std::move(labels), dataset.num_classes());
}

}  // namespace

CvResult cross_validate(const Dataset& dataset, const std::vector<CvCandidate>& grid, int folds,
                        std::uint64_t seed, const TrainConfig& base) {
  if (grid.empty()) throw ConfigError("cross-validation grid is empty");
  const auto fold_indices = stratified_folds(dataset, folds, seed);

  std::vector<Dataset> val_sets;
  std::vector<Dataset> train_sets;
  val_sets.reserve(fold_indices.size());
  train_sets.reserve(fold_indices.size());
  for (size_t f = 0; f < fold_indices.size(); ++f) {
    val_sets.push_back(subset(dataset, fold_indices[f]));
    std::vector<Index> rest;
    for (size_t g = 0; g < fold_indices.size(); ++g) {
      if (g == f) continue;
      rest.insert(rest.end(), fold_indices[g].begin(), fold_indices[g].end());
    }
    std::sort(rest.begin(), rest.end());
    train_sets.push_back(subset(dataset, rest));
  }

  CvResult result;
  result.table.reserve(grid.size());
  size_t best = 0;
  for (size_t g = 0; g < grid.size(); ++g) {
    Real sum = 0;
    Real sum_sq = 0;
    for (size_t f = 0; f < fold_indices.size(); ++f) {
      TrainConfig config = base;
      config.loss = grid[g].loss;
      config.lambda = grid[g].lambda;
      config.seed = derive_seed(seed, g * 1000 + f);
      const TrainResult fit = train(train_sets[f], config);
      const Real error = evaluate(fit.scorer, val_sets[f]).zero_one;
      sum += error;
      sum_sq += error * error;
    }
    const auto n = static_cast<Real>(fold_indices.size());
    const Real mean = sum / n;
    const Real variance = std::max(Real{0}, sum_sq / n - mean * mean);
    result.table.push_back({grid[g], mean, std::sqrt(variance / n)});
    if (result.table[g].mean_error < result.table[best].mean_error) best = g;
  }
  result.best = grid[best];
  return result;
}

Real optimal_alpha_from_counts(Index m_plus, Index m_minus) {
  if (m_plus < 1 || m_minus < 1) throw ConfigError("class counts must be >= 1");
  const Real plus = std::cbrt(static_cast<Real>(m_plus));
  const Real minus = std::cbrt(static_cast<Real>(m_minus));
  return plus / (plus + minus);
}

std::vector<Real> symmetric_grid(Real center, Real window, int n, Real lo, Real hi) {
  if (n < 1) throw ConfigError("grid size must be >= 1");
  std::vector<Real> grid;
  grid.reserve(static_cast<size_t>(n));
  if (n == 1) {
    grid.push_back(std::clamp(center, lo, hi));
    return grid;
  }
  const Real start = center * (1.0 - window);
  const Real stop = center * (1.0 + window);
  for (int i = 0; i < n; ++i) {
    const Real value = start + (stop - start) * static_cast<Real>(i) / static_cast<Real>(n - 1);
    grid.push_back(std::clamp(value, lo, hi));
  }
  return grid;
}

std::vector<Vector> rho_scale_grid(const Vector& rho_star, Real window, int n) {
  check_margin_vector(rho_star);
  std::vector<Vector> grid;
  for (Real scale : symmetric_grid(1.0, window, n, 1e-6, std::numeric_limits<Real>::max())) {
    grid.push_back(scale * rho_star);
  }
  return grid;
}

}  // namespace immax
