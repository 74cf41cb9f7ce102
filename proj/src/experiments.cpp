#include "immax/experiments.hpp"

#include "immax/margins.hpp"
#include "immax/rng.hpp"
#include "immax/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace immax {

namespace {

Real alpha_of(const SeparableMargins& margins) {
  return margins.rho_plus / (margins.rho_plus + margins.rho_minus);
}

TrainConfig immax_config(Real alpha, PsiKind psi, Real lambda, int epochs,
                         std::uint64_t seed) {
  TrainConfig config;
  config.loss.kind = LossKind::ImmaxBinary;
  config.loss.alpha = alpha;
  config.loss.psi = psi;
  config.lambda = lambda;
  config.scorer = ScorerKind::BinaryLinear;
  config.epochs = epochs;
  // Rely on the exact-stall exit; relative-change tests fire too early on
  // the slow hinge descent path.
  config.tolerance = 0;
  config.seed = seed;
  return config;
}

Real boundary_offset(const BinaryLinearScorer& scorer) {
  // Crossing of the boundary with the inter-mean axis (the first coordinate);
  // the class means sit at +/- separation * e1.
  if (scorer.w[0] == 0) return 0.0;
  return -scorer.bias / scorer.w[0];
}

ImbalanceProfile desk_profile(const DeskScaleConfig& config) {
  ImbalanceProfile profile;
  profile.kind = ImbalanceKind::LongTailed;
  profile.ratio = config.ratio;
  profile.num_classes = 2;
  profile.max_class_size = static_cast<Index>(std::llround(
      static_cast<Real>(config.train_size) * config.ratio / (config.ratio + 1.0)));
  return profile;
}

}  // namespace

std::vector<ClassGenerator> desk_scale_generators(const DeskScaleConfig& config) {
  std::vector<ClassGenerator> generators = default_generators(2, 2, config.separation,
                                                              config.noise_scale);
  generators[1].scale = config.minority_scale;
  return generators;
}

DeskScaleResult run_desk_scale(const DeskScaleConfig& config) {
  const ImbalanceProfile profile = desk_profile(config);
  const std::vector<ClassGenerator> generators = desk_scale_generators(config);

  DeskScaleResult result;
  result.per_seed.reserve(static_cast<size_t>(config.seeds));
  for (int s = 0; s < config.seeds; ++s) {
    const std::uint64_t seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(s));
    const auto [train_set, test_set] =
        generate_train_test(profile, generators, seed, config.test_scale);

    const Index m_plus = train_set.class_counts()[0];
    const Index m_minus = train_set.class_counts()[1];
    const Real alpha_star = alpha_of(optimal_separable_margins(m_plus, m_minus, 1.0, 1.0, 1.0));
    const Real alpha_ldam = alpha_of(ldam_margins(m_plus, m_minus, 1.0));

    SeedOutcome outcome;
    outcome.seed = seed;

    // Cross-validated alpha over the window around the separable-case value.
    // Candidates are ordered by distance from alpha*, so validation ties
    // resolve toward the theoretical optimum.
    std::vector<Real> alphas = symmetric_grid(alpha_star, config.alpha_window,
                                              config.alpha_grid_size, config.alpha_lo,
                                              config.alpha_hi);
    std::stable_sort(alphas.begin(), alphas.end(), [&](Real a, Real b) {
      return std::abs(a - alpha_star) < std::abs(b - alpha_star);
    });
    std::vector<CvCandidate> grid;
    for (Real alpha : alphas) {
      CvCandidate candidate;
      candidate.loss.kind = LossKind::ImmaxBinary;
      candidate.loss.alpha = alpha;
      candidate.loss.psi = config.psi;
      candidate.lambda = config.lambda;
      grid.push_back(candidate);
    }
    const TrainConfig base = immax_config(alpha_star, config.psi, config.lambda,
                                          config.cv_epochs, seed);
    const CvResult cv = cross_validate(train_set, grid, config.cv_folds, seed, base);
    outcome.alpha_selected = cv.best.loss.alpha;

    auto fit_and_eval = [&](Real alpha, Real* offset) {
      const TrainResult fit =
          train(train_set, immax_config(alpha, config.psi, config.lambda, config.epochs, seed));
      if (offset) *offset = boundary_offset(std::get<BinaryLinearScorer>(fit.scorer));
      return evaluate(fit.scorer, test_set).zero_one;
    };

    outcome.error_immax_cv = fit_and_eval(outcome.alpha_selected, nullptr);
    outcome.error_svm = fit_and_eval(0.5, &outcome.offset_svm);
    outcome.error_immax_opt = fit_and_eval(alpha_star, &outcome.offset_immax_opt);
    outcome.error_ldam = fit_and_eval(alpha_ldam, &outcome.offset_ldam);
    result.per_seed.push_back(outcome);
  }

  const auto n = static_cast<Real>(result.per_seed.size());
  for (const SeedOutcome& outcome : result.per_seed) {
    result.mean_error_immax_cv += outcome.error_immax_cv / n;
    result.mean_error_svm += outcome.error_svm / n;
    result.mean_error_immax_opt += outcome.error_immax_opt / n;
    result.mean_error_ldam += outcome.error_ldam / n;
    result.mean_offset_svm += outcome.offset_svm / n;
    result.mean_offset_immax_opt += outcome.offset_immax_opt / n;
    result.mean_offset_ldam += outcome.offset_ldam / n;
  }
  return result;
}

Figure1Result run_figure1(const Dataset& train_set, const Dataset& dense_eval, Real lambda,
                          PsiKind psi, int epochs, std::uint64_t seed) {
  if (train_set.num_classes() != 2) throw ConfigError("figure1 needs binary data");
  const Index m_plus = train_set.class_counts()[0];
  const Index m_minus = train_set.class_counts()[1];

  Figure1Result result;
  const Real alpha_star = alpha_of(optimal_separable_margins(m_plus, m_minus, 1.0, 1.0, 1.0));
  const Real alpha_ldam = alpha_of(ldam_margins(m_plus, m_minus, 1.0));
  const std::vector<std::pair<std::string, Real>> models = {
      {"svm", 0.5}, {"immax", alpha_star}, {"ldam", alpha_ldam}};

  for (const auto& [name, alpha] : models) {
    const TrainResult fit = train(train_set, immax_config(alpha, psi, lambda, epochs, seed));
    Figure1Boundary boundary;
    boundary.name = name;
    boundary.alpha = alpha;
    boundary.scorer = std::get<BinaryLinearScorer>(fit.scorer);
    boundary.train_error = evaluate(fit.scorer, train_set).zero_one;
    boundary.eval_error = evaluate(fit.scorer, dense_eval).zero_one;
    boundary.offset = boundary_offset(boundary.scorer);
    result.boundaries.push_back(std::move(boundary));
  }
  result.separable = false;
  for (const Figure1Boundary& boundary : result.boundaries) {
    if (boundary.train_error == 0.0) result.separable = true;
  }
  return result;
}

void write_figure1_csv(const Dataset& train_set, const Figure1Result& result,
                       const std::string& path, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  if (!comment.empty()) out << "# " << comment << "\n";
  for (Index i = 0; i < train_set.size(); ++i) {
    out << "point," << train_set.binary_label(i);
    for (Index j = 0; j < train_set.dim(); ++j) {
      out << ',' << format_real(train_set.features()(i, j));
    }
    out << "\n";
  }
  for (const Figure1Boundary& boundary : result.boundaries) {
    out << "boundary," << boundary.name;
    for (Index j = 0; j < boundary.scorer.w.size(); ++j) {
      out << ',' << format_real(boundary.scorer.w[j]);
    }
    out << ',' << format_real(boundary.scorer.bias) << "\n";
  }
}

}  // namespace immax
