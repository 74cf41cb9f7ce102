#pragma once

#include "immax/dataset.hpp"
#include "immax/scorer.hpp"
#include "immax/train.hpp"

#include <string>
#include <vector>

namespace immax {

// Synthetic 2-d Gaussian binary benchmark: the positive class is the
// majority, means sit at +/- separation on the first axis. Used by the
// `bench` and `figure1` commands.

struct DeskScaleConfig {
  Index train_size = 2000;  // total m, split per the long-tailed profile
  Real ratio = 100.0;
  Real separation = 3.1;
  Real noise_scale = 1.0;
  Real minority_scale = 0.2;  // the rare class is compact
  int seeds = 20;
  std::uint64_t base_seed = 1;
  Real lambda = 1e-3;
  int cv_folds = 5;
  int alpha_grid_size = 10;
  Real alpha_window = 0.8;
  Real test_scale = 25.0;  // test set size relative to train
  int epochs = 8000;     // final fits stop early at the exact-stall exit
  int cv_epochs = 500;   // fold fits only need to rank the alpha grid
  Real alpha_lo = 0.10;  // grid clamp
  Real alpha_hi = 0.90;
  PsiKind psi = PsiKind::Hinge;
};

/// Majority (positive) class at +separation*e1 with noise_scale, minority
/// (negative) class at -separation*e1 with minority_scale.
std::vector<ClassGenerator> desk_scale_generators(const DeskScaleConfig& config);

struct SeedOutcome {
  std::uint64_t seed = 0;
  Real alpha_selected = 0.5;
  Real error_immax_cv = 0.0;
  Real error_svm = 0.0;        // alpha = 0.5 baseline
  Real error_immax_opt = 0.0;  // alpha from the separable-case formula
  Real error_ldam = 0.0;       // alpha from the 1/4-exponent formula
  Real offset_svm = 0.0;       // boundary crossing along the inter-mean axis
  Real offset_immax_opt = 0.0;
  Real offset_ldam = 0.0;
};

struct DeskScaleResult {
  std::vector<SeedOutcome> per_seed;
  Real mean_error_immax_cv = 0.0;
  Real mean_error_svm = 0.0;
  Real mean_error_immax_opt = 0.0;
  Real mean_error_ldam = 0.0;
  Real mean_offset_svm = 0.0;
  Real mean_offset_immax_opt = 0.0;
  Real mean_offset_ldam = 0.0;
};

DeskScaleResult run_desk_scale(const DeskScaleConfig& config);

// Figure-1 style comparison: three hinge boundaries (alpha = 1/2, the
// separable-case alpha, and the 1/4-exponent alpha) on one binary dataset,
// evaluated on a dense sample from the generating distribution.

struct Figure1Boundary {
  std::string name;
  Real alpha = 0.5;
  BinaryLinearScorer scorer;
  Real train_error = 0.0;
  Real eval_error = 0.0;
  Real offset = 0.0;  // -b / w_1: boundary crossing along the first axis
};

struct Figure1Result {
  std::vector<Figure1Boundary> boundaries;  // svm, immax, ldam
  bool separable = false;
};

Figure1Result run_figure1(const Dataset& train, const Dataset& dense_eval, Real lambda,
                          PsiKind psi, int epochs, std::uint64_t seed);

/// Plot-data CSV: `point,<label>,<x1>,<x2>,...` rows for the training data
/// followed by `boundary,<name>,<w...>,<b>` rows.
void write_figure1_csv(const Dataset& train, const Figure1Result& result,
                       const std::string& path, const std::string& comment = "");

}  // namespace immax
