// Command-line front end: dataset generation, training, evaluation, margin
// and bound analysis, Rademacher estimation, consistency verification, the
// figure-1 comparison, and the benchmark sweep. Reports are JSON (insertion
// order preserved, no timestamps, so identical configs produce identical
// bytes); plottable series are CSV.

#include "immax/consistency.hpp"
#include "immax/dataset.hpp"
#include "immax/experiments.hpp"
#include "immax/margins.hpp"
#include "immax/rademacher.hpp"
#include "immax/rng.hpp"
#include "immax/serialize.hpp"
#include "immax/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

namespace {

using immax::Index;
using immax::Real;
using immax::Vector;
using Json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr const char* kArtifactVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

struct Manifest {
  std::string command;
  Json config = Json::object();
  std::vector<std::string> outputs;

  /// Hash of the command and config only, so reruns with identical settings
  /// produce identical report bytes.
  std::string hash() const { return hex64(fnv1a(command + config.dump())); }

  void write(const std::string& path) const {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["manifest_hash"] = hash();
    j["artifact_version"] = kArtifactVersion;
    j["outputs"] = outputs;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    std::ofstream out(path);
    if (!out) throw immax::ParseError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
  }
};

void write_report(const Json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw immax::ParseError("cannot open '" + path + "' for writing");
  out << report.dump(2) << "\n";
}

void emit(const Json& report, const std::string& out_path, Manifest& manifest) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  write_report(report, out_path);
  manifest.outputs.push_back(out_path);
  manifest.write(out_path + ".manifest.json");
}

Json vector_to_json(const Vector& v) {
  Json array = Json::array();
  for (Index i = 0; i < v.size(); ++i) array.push_back(v[i]);
  return array;
}

Json counts_to_json(const std::vector<Index>& counts) {
  Json array = Json::array();
  for (Index c : counts) array.push_back(c);
  return array;
}

Vector parse_reals(const std::string& text) {
  std::vector<Real> values;
  std::string field;
  std::istringstream stream(text);
  while (std::getline(stream, field, ',')) values.push_back(std::stod(field));
  Vector v(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
  return v;
}

// ---------------------------------------------------------------------------
// Option plumbing: config-file defaults overridden by CLI flags
// ---------------------------------------------------------------------------

struct CommonState {
  std::string config_path;
  std::map<std::string, std::string> file_config;

  void load() {
    if (!config_path.empty()) file_config = immax::load_config_file(config_path);
  }
  /// CLI flag wins when set on the command line; otherwise the config file
  /// entry; otherwise the built-in default already in `value`.
  template <typename T>
  void resolve(const CLI::App* cmd, const std::string& flag, const std::string& key, T& value) {
    if (cmd->count(flag) > 0) return;
    const auto it = file_config.find(key);
    if (it == file_config.end()) return;
    if constexpr (std::is_same_v<T, std::string>) {
      value = it->second;
    } else if constexpr (std::is_floating_point_v<T>) {
      value = std::stod(it->second);
    } else {
      value = static_cast<T>(std::stoll(it->second));
    }
  }
};

immax::LossSpec build_loss_spec(const std::string& loss_name, const std::string& rho_text,
                                Real alpha, const std::string& psi_name, Real tau, Real gamma,
                                Real ldam_C, Real equal_p, Real equal_lambda, Real c_plus,
                                Real c_minus) {
  immax::LossSpec spec;
  spec.kind = immax::loss_kind_from_name(loss_name);
  switch (spec.kind) {
    case immax::LossKind::PhiMargin:
    case immax::LossKind::ImbalancedMarginBinary:
    case immax::LossKind::ImbalancedMarginMulti:
    case immax::LossKind::ImmaxMulti:
      if (rho_text.empty()) throw immax::ConfigError("--rho is required for this loss");
      spec.rho = parse_reals(rho_text);
      break;
    default:
      break;
  }
  spec.alpha = alpha;
  spec.psi = immax::psi_kind_from_name(psi_name);
  spec.tau = tau;
  spec.gamma_cb = gamma;
  spec.gamma_focal = gamma;
  spec.ldam_C = ldam_C;
  spec.equal_p = equal_p;
  spec.equal_lambda = equal_lambda;
  spec.c_plus = c_plus;
  spec.c_minus = c_minus;
  return spec;
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int run_generate(const std::string& kind_name, Real ratio, int classes, Index max_size,
                 Real step_fraction, Index dim, Real separation, Real noise,
                 const std::string& scales_text, std::uint64_t seed, Real test_scale,
                 const std::string& out_path, const std::string& test_out,
                 const std::string& report_path, Manifest manifest) {
  immax::ImbalanceProfile profile;
  if (kind_name == "long-tailed") {
    profile.kind = immax::ImbalanceKind::LongTailed;
  } else if (kind_name == "step") {
    profile.kind = immax::ImbalanceKind::Step;
  } else {
    throw immax::ConfigError("--kind must be long-tailed or step");
  }
  if (ratio < 1.0) throw immax::ConfigError("ratio must be >= 1");
  profile.ratio = ratio;
  profile.num_classes = classes;
  profile.max_class_size = max_size;
  profile.step_fraction = step_fraction;

  auto generators = immax::default_generators(classes, dim, separation, noise);
  if (!scales_text.empty()) {
    const Vector scales = parse_reals(scales_text);
    if (scales.size() != static_cast<Index>(generators.size())) {
      throw immax::ConfigError("--scales needs one entry per class");
    }
    for (size_t k = 0; k < generators.size(); ++k) generators[k].scale = scales[static_cast<Index>(k)];
  }
  const auto [train_set, test_set] =
      immax::generate_train_test(profile, generators, seed, test_scale);

  immax::save_csv(train_set, out_path, {}, "manifest=" + manifest.hash());
  manifest.outputs.push_back(out_path);
  if (!test_out.empty()) {
    immax::save_csv(test_set, test_out, {}, "manifest=" + manifest.hash());
    manifest.outputs.push_back(test_out);
  }

  Json report;
  report["manifest_hash"] = manifest.hash();
  report["train_counts"] = counts_to_json(train_set.class_counts());
  report["train_size"] = train_set.size();
  report["imbalance_ratio"] = train_set.imbalance_ratio();
  report["class_radii"] = Json::array();
  for (Real r : train_set.class_radii()) report["class_radii"].push_back(r);
  if (profile.kind == immax::ImbalanceKind::Step) {
    // Odd class counts floor the minority group size.
    report["step_minority_classes"] =
        std::max(1, static_cast<int>(std::floor(classes * step_fraction)));
  }
  if (!test_out.empty()) {
    report["test_counts"] = counts_to_json(test_set.class_counts());
  }
  emit(report, report_path, manifest);
  if (report_path.empty()) manifest.write(out_path + ".manifest.json");
  return 0;
}

struct TrainCliConfig {
  std::string data_path;
  std::string test_path;
  std::string loss_name = "ce";
  std::string rho_text;
  Real alpha = 0.5;
  std::string psi_name = "hinge";
  Real tau = 1.0;
  Real gamma = 0.5;
  Real ldam_C = 1.0;
  Real equal_p = 0.5;
  Real equal_lambda = 0.1;
  Real c_plus = 1.0;
  Real c_minus = 1.0;
  Real lambda = 1e-3;
  Real weight_cap = 0.0;  // 0 = unconstrained
  std::string scorer_name = "auto";
  Index hidden = 16;
  std::string optimizer_name = "gd";
  Index batch = 0;
  std::string schedule_name = "constant";
  Real learning_rate = 1.0;
  int epochs = 500;
  std::uint64_t seed = 0;
  int cv_folds = 0;  // 0 = no cross-validation
  std::string lambda_grid_text;
  Real grid_window = 0.8;
  int grid_size = 10;
};

immax::TrainConfig to_train_config(const TrainCliConfig& cli, const immax::Dataset& data) {
  immax::TrainConfig config;
  config.loss = build_loss_spec(cli.loss_name, cli.rho_text, cli.alpha, cli.psi_name, cli.tau,
                                cli.gamma, cli.ldam_C, cli.equal_p, cli.equal_lambda, cli.c_plus,
                                cli.c_minus);
  config.lambda = cli.lambda;
  if (cli.scorer_name == "auto") {
    config.scorer = config.loss.is_binary_score() ? immax::ScorerKind::BinaryLinear
                                                  : immax::ScorerKind::MultiLinear;
  } else if (cli.scorer_name == "binary-linear") {
    config.scorer = immax::ScorerKind::BinaryLinear;
  } else if (cli.scorer_name == "multi-linear") {
    config.scorer = immax::ScorerKind::MultiLinear;
  } else if (cli.scorer_name == "mlp") {
    config.scorer = immax::ScorerKind::Mlp;
  } else {
    throw immax::ConfigError("unknown scorer '" + cli.scorer_name + "'");
  }
  config.hidden_width = cli.hidden;
  if (cli.optimizer_name == "gd") {
    config.optimizer = immax::OptimizerKind::GradientDescent;
  } else if (cli.optimizer_name == "sgd") {
    config.optimizer = immax::OptimizerKind::Sgd;
  } else {
    throw immax::ConfigError("unknown optimizer '" + cli.optimizer_name + "'");
  }
  if (cli.weight_cap > 0) config.weight_cap = cli.weight_cap;
  config.batch_size = std::min<Index>(cli.batch, data.size());
  config.schedule =
      cli.schedule_name == "cosine" ? immax::LrSchedule::Cosine : immax::LrSchedule::Constant;
  config.learning_rate = cli.learning_rate;
  config.epochs = cli.epochs;
  config.seed = cli.seed;
  return config;
}

Json eval_to_json(const immax::EvalReport& report) {
  Json j;
  j["zero_one_error"] = report.zero_one;
  j["per_class_errors"] = report.per_class_error;
  Json confusion = Json::array();
  for (Index r = 0; r < report.confusion.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < report.confusion.cols(); ++c) row.push_back(report.confusion(r, c));
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  return j;
}

int run_train(const TrainCliConfig& cli, const std::string& scorer_out,
              const std::string& trace_out, const std::string& report_path, Manifest manifest) {
  const immax::Dataset data = immax::load_csv(cli.data_path);
  immax::TrainConfig config = to_train_config(cli, data);

  Json report;
  report["manifest_hash"] = manifest.hash();

  if (cli.cv_folds >= 2) {
    std::vector<Real> lambda_grid;
    if (cli.lambda_grid_text.empty()) {
      lambda_grid.push_back(cli.lambda);
    } else {
      const Vector parsed = parse_reals(cli.lambda_grid_text);
      lambda_grid.assign(parsed.data(), parsed.data() + parsed.size());
    }

    std::vector<immax::LossSpec> loss_grid;
    if (config.loss.kind == immax::LossKind::ImmaxBinary) {
      const Real alpha_star =
          immax::optimal_alpha_from_counts(data.class_counts()[0], data.class_counts()[1]);
      for (Real alpha :
           immax::symmetric_grid(alpha_star, cli.grid_window, cli.grid_size, 0.02, 0.98)) {
        immax::LossSpec spec = config.loss;
        spec.alpha = alpha;
        loss_grid.push_back(spec);
      }
    } else if (config.loss.kind == immax::LossKind::ImmaxMulti) {
      const immax::RhoHeuristic heuristic =
          immax::rho_heuristic(data.class_counts(), data.class_radii());
      for (const Vector& rho :
           immax::rho_scale_grid(heuristic.direction, cli.grid_window, cli.grid_size)) {
        immax::LossSpec spec = config.loss;
        spec.rho = rho;
        loss_grid.push_back(spec);
      }
    } else {
      loss_grid.push_back(config.loss);
    }

    std::vector<immax::CvCandidate> grid;
    for (const auto& spec : loss_grid) {
      for (Real lambda : lambda_grid) grid.push_back({spec, lambda});
    }
    const immax::CvResult cv = immax::cross_validate(data, grid, cli.cv_folds, cli.seed, config);
    config.loss = cv.best.loss;
    config.lambda = cv.best.lambda;

    Json table = Json::array();
    for (const auto& cell : cv.table) {
      Json row;
      row["loss"] = immax::loss_spec_to_config(cell.candidate.loss);
      row["lambda"] = cell.candidate.lambda;
      row["mean_error"] = cell.mean_error;
      row["std_error"] = cell.std_error;
      table.push_back(row);
    }
    report["cross_validation"] = table;
    report["chosen"] = {{"loss", immax::loss_spec_to_config(config.loss)},
                        {"lambda", config.lambda}};
  }

  const immax::TrainResult result = immax::train(data, config);
  report["converged"] = result.converged;
  report["epochs_run"] = result.epochs_run;
  report["final_objective"] = result.trace.objective.back();
  report["train"] = eval_to_json(immax::evaluate(result.scorer, data));
  if (!cli.test_path.empty()) {
    const immax::Dataset test_set = immax::load_csv(cli.test_path);
    report["test"] = eval_to_json(immax::evaluate(result.scorer, test_set));
  }

  if (!scorer_out.empty()) {
    immax::save_scorer(result.scorer, scorer_out);
    manifest.outputs.push_back(scorer_out);
  }
  if (!trace_out.empty()) {
    immax::save_trace(result.trace, trace_out, "manifest=" + manifest.hash());
    manifest.outputs.push_back(trace_out);
  }
  emit(report, report_path, manifest);
  return 0;
}

int run_eval(const std::string& data_path, const std::string& scorer_path,
             const std::string& report_path, Manifest manifest) {
  const immax::Dataset data = immax::load_csv(data_path);
  const immax::Scorer scorer = immax::load_scorer(scorer_path);
  Json report;
  report["manifest_hash"] = manifest.hash();
  report["eval"] = eval_to_json(immax::evaluate(scorer, data));
  emit(report, report_path, manifest);
  return 0;
}

int run_analyze_margins(Index m_plus, Index m_minus, Real r_plus, Real r_minus, Real rho_geom,
                        const std::string& report_path, Manifest manifest) {
  const immax::SeparableMargins ours =
      immax::optimal_separable_margins(m_plus, m_minus, r_plus, r_minus, rho_geom);
  const immax::SeparableMargins theirs = immax::ldam_margins(m_plus, m_minus, rho_geom);

  Json report;
  report["manifest_hash"] = manifest.hash();
  report["inputs"] = {{"m_plus", m_plus},
                      {"m_minus", m_minus},
                      {"r_plus", r_plus},
                      {"r_minus", r_minus},
                      {"rho_geom", rho_geom}};
  report["ours"] = {{"rho_plus", ours.rho_plus}, {"rho_minus", ours.rho_minus}};
  report["ldam"] = {{"rho_plus", theirs.rho_plus}, {"rho_minus", theirs.rho_minus}};
  const int our_sign =
      ours.rho_plus > ours.rho_minus ? 1 : (ours.rho_plus < ours.rho_minus ? -1 : 0);
  const int ldam_sign =
      theirs.rho_plus > theirs.rho_minus ? 1 : (theirs.rho_plus < theirs.rho_minus ? -1 : 0);
  report["ordering_verdict"] =
      our_sign == 0 && ldam_sign == 0
          ? "identical ordering (balanced)"
          : (our_sign == -ldam_sign ? "opposite ordering" : "same ordering");
  emit(report, report_path, manifest);
  return 0;
}

int run_analyze_bound(const std::string& mode, Real empirical_loss, Real complexity, Index m,
                      int classes, Real delta, bool uniform, bool empirical,
                      const std::string& radii_text, const std::string& rho_text,
                      const std::string& report_path, Manifest manifest) {
  Json report;
  report["manifest_hash"] = manifest.hash();
  if (mode == "binary") {
    immax::BinaryBoundInputs inputs;
    inputs.empirical_margin_loss = empirical_loss;
    inputs.complexity = complexity;
    inputs.m = m;
    inputs.delta = delta;
    inputs.uniform = uniform;
    inputs.empirical = empirical;
    if (uniform) {
      const Vector radii = parse_reals(radii_text);
      const Vector rho = parse_reals(rho_text);
      if (radii.size() != 2 || rho.size() != 2) {
        throw immax::ConfigError("uniform binary bound needs --radii r+,r- and --rho rho+,rho-");
      }
      inputs.r_plus = radii[0];
      inputs.r_minus = radii[1];
      inputs.rho_plus = rho[0];
      inputs.rho_minus = rho[1];
    }
    report["bound"] = immax::margin_bound_binary(inputs);
  } else if (mode == "multi") {
    immax::MultiBoundInputs inputs;
    inputs.empirical_margin_loss = empirical_loss;
    inputs.complexity = complexity;
    inputs.num_classes = classes;
    inputs.m = m;
    inputs.delta = delta;
    inputs.uniform = uniform;
    inputs.empirical = empirical;
    if (uniform) {
      const Vector radii = parse_reals(radii_text);
      const Vector rho = parse_reals(rho_text);
      inputs.class_radii.assign(radii.data(), radii.data() + radii.size());
      inputs.class_margins.assign(rho.data(), rho.data() + rho.size());
    }
    report["bound"] = immax::margin_bound_multi(inputs);
  } else {
    throw immax::ConfigError("--mode must be binary or multi");
  }
  emit(report, report_path, manifest);
  return 0;
}

int run_analyze_rademacher(const std::string& data_path, const std::string& rho_text,
                           Real lambda_cap, bool exact, long trials, std::uint64_t seed,
                           bool multi, const std::string& report_path, Manifest manifest) {
  const immax::Dataset data = immax::load_csv(data_path);
  immax::EstimationMode mode;
  mode.exact = exact;
  mode.trials = trials;
  mode.seed = seed;

  Json report;
  report["manifest_hash"] = manifest.hash();
  report["hypothesis_class"] = "l2-ball linear";  // the only class with a closed-form supremum
  if (multi) {
    const Vector rho = parse_reals(rho_text);
    const immax::ComplexityEstimate estimate =
        immax::empirical_multi_complexity(data, rho, lambda_cap, mode);
    report["estimate"] = estimate.value;
    report["std_error"] = estimate.std_error;
    report["trials"] = estimate.trials;
    report["method"] =
        estimate.method == immax::ComplexityEstimate::Method::Exact ? "exact" : "monte-carlo";
    report["l2_bound"] =
        immax::bound_kernel_l2(data.class_counts(), data.class_radii(), rho, lambda_cap);
    report["l2_bound_via_renyi"] = immax::bound_kernel_l2_via_renyi(
        data.class_counts(), data.class_radii(), rho, lambda_cap);
  } else {
    const Vector rho = parse_reals(rho_text);
    if (rho.size() != 2) throw immax::ConfigError("binary mode needs --rho rho+,rho-");
    const immax::MarginPair pair(rho[0], rho[1]);
    const immax::ComplexityEstimate estimate =
        immax::empirical_binary_complexity(data, pair, lambda_cap, mode);
    const immax::LinearBoundPair bounds =
        immax::bound_linear_binary(data.class_counts()[0], data.class_counts()[1],
                                   data.class_radii()[0], data.class_radii()[1], pair,
                                   lambda_cap);
    report["estimate"] = estimate.value;
    report["std_error"] = estimate.std_error;
    report["trials"] = estimate.trials;
    report["method"] =
        estimate.method == immax::ComplexityEstimate::Method::Exact ? "exact" : "monte-carlo";
    report["tight_bound"] = bounds.tight;
    report["loose_bound"] = bounds.loose;
  }
  emit(report, report_path, manifest);
  return 0;
}

int run_analyze_consistency(const std::string& mode, int trials, Index support, int classes,
                            Real c_plus, Real c_minus, Real epsilon, std::uint64_t seed,
                            const std::string& report_path, Manifest manifest) {
  Json report;
  report["manifest_hash"] = manifest.hash();
  immax::SplitMix64 rng(seed);

  const auto random_simplex = [&](Index n) {
    Vector v(n);
    Real sum = 0;
    for (Index i = 0; i < n; ++i) {
      v[i] = -std::log(1.0 - rng.uniform01());
      sum += v[i];
    }
    return Vector(v / sum);
  };

  if (mode == "verify-binary") {
    Real worst_slack = std::numeric_limits<Real>::infinity();
    int held = 0;
    for (int t = 0; t < trials; ++t) {
      const Index n = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(support)));
      immax::BinaryDistribution dist;
      dist.weights = random_simplex(n);
      dist.eta.resize(n);
      for (Index i = 0; i < n; ++i) dist.eta[i] = rng.uniform01();
      immax::BinaryHypothesis hypothesis;
      hypothesis.scores.resize(n);
      for (Index i = 0; i < n; ++i) hypothesis.scores[i] = rng.uniform(-8, 8);
      const immax::MarginPair rho(rng.uniform(0.1, 10), rng.uniform(0.1, 10));
      const immax::ConsistencyCheck check =
          immax::verify_h_consistency_binary(dist, hypothesis, rho);
      worst_slack = std::min(worst_slack, check.rhs - check.lhs);
      if (check.holds) ++held;
    }
    report["trials"] = trials;
    report["held"] = held;
    report["worst_slack"] = worst_slack;
    report["all_hold"] = held == trials;
  } else if (mode == "verify-multi") {
    Real worst_slack = std::numeric_limits<Real>::infinity();
    int held = 0;
    for (int t = 0; t < trials; ++t) {
      const Index n = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(support)));
      const Index c = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(classes - 1)));
      immax::MultiDistribution dist;
      dist.weights = random_simplex(n);
      dist.conditionals.resize(n, c);
      for (Index i = 0; i < n; ++i) dist.conditionals.row(i) = random_simplex(c).transpose();
      immax::MultiHypothesis hypothesis;
      hypothesis.scores.resize(n, c);
      for (Index i = 0; i < n; ++i) {
        for (Index y = 0; y < c; ++y) hypothesis.scores(i, y) = rng.uniform(-8, 8);
      }
      Vector rho(c);
      for (Index k = 0; k < c; ++k) rho[k] = rng.uniform(0.1, 10);
      const immax::ConsistencyCheck check =
          immax::verify_h_consistency_multi(dist, hypothesis, rho);
      worst_slack = std::min(worst_slack, check.rhs - check.lhs);
      if (check.holds) ++held;
    }
    report["trials"] = trials;
    report["held"] = held;
    report["worst_slack"] = worst_slack;
    report["all_hold"] = held == trials;
  } else if (mode == "demo") {
    const immax::InconsistencyDemo demo =
        immax::bayes_inconsistency_demo(c_plus, c_minus, epsilon);
    report["epsilon_star"] = demo.epsilon_star;
    report["eta"] = demo.eta;
    report["zero_one_minimizer_sign"] = demo.zero_one_minimizer_sign;
    report["cost_minimizer_sign"] = demo.cost_minimizer_sign;
    report["inconsistent"] = demo.inconsistent;
    report["zero_one_risks"] = {{"negative", demo.zero_one_risk_negative},
                                {"positive", demo.zero_one_risk_positive}};
    report["cost_risks"] = {{"negative", demo.cost_risk_negative},
                            {"positive", demo.cost_risk_positive}};
  } else {
    throw immax::ConfigError("--mode must be verify-binary, verify-multi, or demo");
  }
  emit(report, report_path, manifest);
  return 0;
}

int run_figure1(const std::string& data_path, Real ratio, Index train_size, Real separation,
                Real noise, Real minority_noise, Real lambda, int epochs, std::uint64_t seed,
                Real eval_scale, const std::string& csv_path, const std::string& report_path,
                Manifest manifest) {
  auto generators = immax::default_generators(2, 2, separation, noise);
  generators[1].scale = minority_noise;

  immax::Dataset train_set = [&] {
    if (!data_path.empty()) return immax::load_csv(data_path);
    immax::ImbalanceProfile profile;
    profile.kind = immax::ImbalanceKind::LongTailed;
    profile.ratio = ratio;
    profile.num_classes = 2;
    profile.max_class_size = static_cast<Index>(
        std::llround(static_cast<Real>(train_size) * ratio / (ratio + 1.0)));
    return immax::generate_imbalanced(profile, generators, immax::derive_seed(seed, 0x7472u));
  }();

  // Dense evaluation sample from the generating distribution.
  immax::ImbalanceProfile eval_profile;
  eval_profile.kind = immax::ImbalanceKind::LongTailed;
  eval_profile.ratio = ratio;
  eval_profile.num_classes = 2;
  eval_profile.max_class_size = static_cast<Index>(std::llround(
      static_cast<Real>(train_size) * eval_scale * ratio / (ratio + 1.0)));
  const immax::Dataset dense_eval = immax::generate_imbalanced(
      eval_profile, generators, immax::derive_seed(seed, 0x6576u));

  const immax::Figure1Result result =
      immax::run_figure1(train_set, dense_eval, lambda, immax::PsiKind::Hinge, epochs, seed);
  if (!result.separable) {
    std::cerr << "warning: training data is not linearly separable; proceeding\n";
  }

  Json report;
  report["manifest_hash"] = manifest.hash();
  report["separable"] = result.separable;
  Json boundaries = Json::array();
  for (const auto& boundary : result.boundaries) {
    Json entry;
    entry["name"] = boundary.name;
    entry["alpha"] = boundary.alpha;
    entry["w"] = vector_to_json(boundary.scorer.w);
    entry["bias"] = boundary.scorer.bias;
    entry["train_error"] = boundary.train_error;
    entry["eval_error"] = boundary.eval_error;
    entry["offset"] = boundary.offset;
    boundaries.push_back(entry);
  }
  report["boundaries"] = boundaries;

  if (!csv_path.empty()) {
    immax::write_figure1_csv(train_set, result, csv_path, "manifest=" + manifest.hash());
    manifest.outputs.push_back(csv_path);
  }
  emit(report, report_path, manifest);
  return 0;
}

int run_bench(Index train_size, Real ratio, Real separation, Real noise, Real minority_noise,
              int seeds, std::uint64_t seed, Real lambda, int folds, int grid_size, Real window,
              Real test_scale, int epochs, const std::string& report_path, Manifest manifest) {
  immax::DeskScaleConfig config;
  config.train_size = train_size;
  config.ratio = ratio;
  config.separation = separation;
  config.noise_scale = noise;
  config.minority_scale = minority_noise;
  config.seeds = seeds;
  config.base_seed = seed;
  config.lambda = lambda;
  config.cv_folds = folds;
  config.alpha_grid_size = grid_size;
  config.alpha_window = window;
  config.test_scale = test_scale;
  config.epochs = epochs;

  const immax::DeskScaleResult result = immax::run_desk_scale(config);
  Json report;
  report["manifest_hash"] = manifest.hash();
  report["mean_errors"] = {{"immax_cv", result.mean_error_immax_cv},
                           {"svm", result.mean_error_svm},
                           {"immax_opt", result.mean_error_immax_opt},
                           {"ldam", result.mean_error_ldam}};
  report["mean_offsets"] = {{"svm", result.mean_offset_svm},
                            {"immax_opt", result.mean_offset_immax_opt},
                            {"ldam", result.mean_offset_ldam}};
  Json per_seed = Json::array();
  for (const auto& outcome : result.per_seed) {
    Json entry;
    entry["seed"] = outcome.seed;
    entry["alpha_selected"] = outcome.alpha_selected;
    entry["error_immax_cv"] = outcome.error_immax_cv;
    entry["error_svm"] = outcome.error_svm;
    entry["error_immax_opt"] = outcome.error_immax_opt;
    entry["error_ldam"] = outcome.error_ldam;
    entry["offset_svm"] = outcome.offset_svm;
    entry["offset_immax_opt"] = outcome.offset_immax_opt;
    entry["offset_ldam"] = outcome.offset_ldam;
    per_seed.push_back(entry);
  }
  report["per_seed"] = per_seed;
  emit(report, report_path, manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-imbalanced margin losses, IMMAX training, and bound verification"};
  app.require_subcommand(1);

  CommonState state;
  app.add_option("--config", state.config_path, "flat key=value config file");

  // generate ------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "sample an imbalanced synthetic dataset");
  std::string gen_kind = "long-tailed";
  Real gen_ratio = 1.0;
  int gen_classes = 2;
  Index gen_max = 100;
  Real gen_step_fraction = 0.5;
  Index gen_dim = 2;
  Real gen_separation = 2.0;
  Real gen_noise = 1.0;
  std::string gen_scales;
  std::uint64_t gen_seed = 0;
  Real gen_test_scale = 1.0;
  std::string gen_out = "dataset.csv";
  std::string gen_test_out;
  std::string gen_report;
  generate->add_option("--kind", gen_kind, "long-tailed or step");
  generate->add_option("--ratio", gen_ratio, "imbalance ratio m_max/m_min");
  generate->add_option("--classes", gen_classes, "number of classes");
  generate->add_option("--max", gen_max, "largest class size");
  generate->add_option("--step-fraction", gen_step_fraction, "minority fraction (step)");
  generate->add_option("--dim", gen_dim, "feature dimension");
  generate->add_option("--separation", gen_separation, "class mean separation");
  generate->add_option("--noise", gen_noise, "gaussian scale");
  generate->add_option("--scales", gen_scales, "per-class gaussian scales, comma separated");
  generate->add_option("--seed", gen_seed, "random seed");
  generate->add_option("--test-scale", gen_test_scale, "paired test set size factor");
  generate->add_option("--out", gen_out, "output CSV");
  generate->add_option("--test-out", gen_test_out, "paired test CSV");
  generate->add_option("--report", gen_report, "JSON report path (stdout if empty)");

  // train ----------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "fit a scorer by regularized ERM");
  TrainCliConfig train_cli;
  std::string train_scorer_out;
  std::string train_trace_out;
  std::string train_report;
  train_cmd->add_option("--data", train_cli.data_path, "training CSV")->required();
  train_cmd->add_option("--test", train_cli.test_path, "test CSV for the report");
  train_cmd->add_option("--loss", train_cli.loss_name, "loss kind");
  train_cmd->add_option("--rho", train_cli.rho_text, "margin vector, comma separated");
  train_cmd->add_option("--alpha", train_cli.alpha, "immax-binary alpha");
  train_cmd->add_option("--psi", train_cli.psi_name, "surrogate: hinge|logistic|exponential");
  train_cmd->add_option("--tau", train_cli.tau, "la temperature");
  train_cmd->add_option("--gamma", train_cli.gamma, "cb/focal gamma");
  train_cmd->add_option("--ldam-C", train_cli.ldam_C, "ldam margin scale");
  train_cmd->add_option("--equal-p", train_cli.equal_p, "equalization Bernoulli p");
  train_cmd->add_option("--equal-lambda", train_cli.equal_lambda, "equalization threshold");
  train_cmd->add_option("--cplus", train_cli.c_plus, "cost of positive errors");
  train_cmd->add_option("--cminus", train_cli.c_minus, "cost of negative errors");
  train_cmd->add_option("--lambda", train_cli.lambda, "L2 penalty coefficient");
  train_cmd->add_option("--weight-cap", train_cli.weight_cap,
                        "project weights onto this norm ball (0 = off)");
  train_cmd->add_option("--scorer", train_cli.scorer_name,
                        "auto|binary-linear|multi-linear|mlp");
  train_cmd->add_option("--hidden", train_cli.hidden, "mlp hidden width");
  train_cmd->add_option("--optimizer", train_cli.optimizer_name, "gd|sgd");
  train_cmd->add_option("--batch", train_cli.batch, "sgd batch size (0 = full)");
  train_cmd->add_option("--schedule", train_cli.schedule_name, "constant|cosine");
  train_cmd->add_option("--lr", train_cli.learning_rate, "learning rate / initial step");
  train_cmd->add_option("--epochs", train_cli.epochs, "epoch cap");
  train_cmd->add_option("--seed", train_cli.seed, "random seed");
  train_cmd->add_option("--cv", train_cli.cv_folds, "cross-validation folds (0 = off)");
  train_cmd->add_option("--lambda-grid", train_cli.lambda_grid_text, "lambda grid for CV");
  train_cmd->add_option("--grid-window", train_cli.grid_window, "relative CV window");
  train_cmd->add_option("--grid-size", train_cli.grid_size, "CV grid size");
  train_cmd->add_option("--out-scorer", train_scorer_out, "scorer output path");
  train_cmd->add_option("--out-trace", train_trace_out, "training trace CSV");
  train_cmd->add_option("--report", train_report, "JSON report path (stdout if empty)");

  // eval -----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved scorer");
  std::string eval_data;
  std::string eval_scorer;
  std::string eval_report;
  eval_cmd->add_option("--data", eval_data, "CSV to evaluate on")->required();
  eval_cmd->add_option("--scorer", eval_scorer, "scorer file")->required();
  eval_cmd->add_option("--report", eval_report, "JSON report path (stdout if empty)");

  // analyze --------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "margin, bound, complexity, and consistency");
  analyze->require_subcommand(1);

  auto* margins_cmd = analyze->add_subcommand("margins", "separable-case optimal margins");
  Index ma_mplus = 1;
  Index ma_mminus = 1;
  Real ma_rplus = 1.0;
  Real ma_rminus = 1.0;
  Real ma_rho_geom = 1.0;
  std::string ma_report;
  margins_cmd->add_option("--mplus", ma_mplus, "positive count")->required();
  margins_cmd->add_option("--mminus", ma_mminus, "negative count")->required();
  margins_cmd->add_option("--rplus", ma_rplus, "positive radius");
  margins_cmd->add_option("--rminus", ma_rminus, "negative radius");
  margins_cmd->add_option("--rho-geom", ma_rho_geom, "geometric margin");
  margins_cmd->add_option("--report", ma_report, "JSON report path");

  auto* bound_cmd = analyze->add_subcommand("bound", "margin-based generalization bounds");
  std::string bo_mode = "binary";
  Real bo_empirical_loss = 0.0;
  Real bo_complexity = 0.0;
  Index bo_m = 100;
  int bo_classes = 2;
  Real bo_delta = 0.05;
  bool bo_uniform = false;
  bool bo_empirical = false;
  std::string bo_radii;
  std::string bo_rho;
  std::string bo_report;
  bound_cmd->add_option("--mode", bo_mode, "binary or multi");
  bound_cmd->add_option("--empirical-loss", bo_empirical_loss, "empirical margin loss");
  bound_cmd->add_option("--complexity", bo_complexity, "class-sensitive complexity term");
  bound_cmd->add_option("--m", bo_m, "sample size");
  bound_cmd->add_option("--classes", bo_classes, "number of classes (multi)");
  bound_cmd->add_option("--delta", bo_delta, "confidence parameter");
  bound_cmd->add_flag("--uniform", bo_uniform, "uniform-over-rho variant");
  bound_cmd->add_flag("--empirical-complexity", bo_empirical,
                      "sample-measured complexity variant");
  bound_cmd->add_option("--radii", bo_radii, "per-class radii (uniform variant)");
  bound_cmd->add_option("--rho", bo_rho, "per-class margins (uniform variant)");
  bound_cmd->add_option("--report", bo_report, "JSON report path");

  auto* rad_cmd = analyze->add_subcommand("rademacher", "class-sensitive complexity estimate");
  std::string ra_data;
  std::string ra_rho = "1,1";
  Real ra_lambda_cap = 1.0;
  bool ra_exact = false;
  long ra_trials = 1000;
  std::uint64_t ra_seed = 0;
  bool ra_multi = false;
  std::string ra_report;
  rad_cmd->add_option("--data", ra_data, "dataset CSV")->required();
  rad_cmd->add_option("--rho", ra_rho, "margins rho+,rho- (or per class with --multi)");
  rad_cmd->add_option("--Lambda", ra_lambda_cap, "weight norm cap");
  rad_cmd->add_flag("--exact", ra_exact, "exact enumeration (<= 20 sign variables)");
  rad_cmd->add_option("--trials", ra_trials, "monte carlo trials");
  rad_cmd->add_option("--seed", ra_seed, "monte carlo seed");
  rad_cmd->add_flag("--multi", ra_multi, "multi-class complexity");
  rad_cmd->add_option("--report", ra_report, "JSON report path");

  auto* cons_cmd = analyze->add_subcommand("consistency", "consistency bounds and the demo");
  std::string co_mode = "verify-binary";
  int co_trials = 1000;
  Index co_support = 10;
  int co_classes = 5;
  Real co_cplus = 2.0;
  Real co_cminus = 1.0;
  Real co_epsilon = 0.1;
  std::uint64_t co_seed = 0;
  std::string co_report;
  cons_cmd->add_option("--mode", co_mode, "verify-binary|verify-multi|demo");
  cons_cmd->add_option("--trials", co_trials, "random instances");
  cons_cmd->add_option("--support", co_support, "max support size");
  cons_cmd->add_option("--classes", co_classes, "max classes (multi)");
  cons_cmd->add_option("--cplus", co_cplus, "positive cost (demo)");
  cons_cmd->add_option("--cminus", co_cminus, "negative cost (demo)");
  cons_cmd->add_option("--epsilon", co_epsilon, "eta offset from 1/2 (demo)");
  cons_cmd->add_option("--seed", co_seed, "random seed");
  cons_cmd->add_option("--report", co_report, "JSON report path");

  // figure1 ----------------------------------------------------------------
  auto* fig_cmd = app.add_subcommand("figure1", "three-boundary separable-case comparison");
  std::string fig_data;
  Real fig_ratio = 100.0;
  Index fig_m = 2000;
  Real fig_separation = 3.1;
  Real fig_noise = 1.0;
  Real fig_minority_noise = 0.2;
  Real fig_lambda = 1e-3;
  int fig_epochs = 8000;
  std::uint64_t fig_seed = 1;
  Real fig_eval_scale = 10.0;
  std::string fig_csv = "figure1.csv";
  std::string fig_report;
  fig_cmd->add_option("--data", fig_data, "binary CSV (generated when omitted)");
  fig_cmd->add_option("--ratio", fig_ratio, "imbalance ratio");
  fig_cmd->add_option("--m", fig_m, "training size");
  fig_cmd->add_option("--separation", fig_separation, "class mean separation");
  fig_cmd->add_option("--noise", fig_noise, "majority gaussian scale");
  fig_cmd->add_option("--noise-minority", fig_minority_noise, "minority gaussian scale");
  fig_cmd->add_option("--lambda", fig_lambda, "L2 penalty");
  fig_cmd->add_option("--epochs", fig_epochs, "training epochs");
  fig_cmd->add_option("--seed", fig_seed, "random seed");
  fig_cmd->add_option("--eval-scale", fig_eval_scale, "dense evaluation sample factor");
  fig_cmd->add_option("--out", fig_csv, "points + boundaries CSV");
  fig_cmd->add_option("--report", fig_report, "JSON report path");

  // bench ------------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "multi-seed desk-scale benchmark sweep");
  Index be_m = 2000;
  Real be_ratio = 100.0;
  Real be_separation = 3.1;
  Real be_noise = 1.0;
  Real be_minority_noise = 0.2;
  int be_seeds = 20;
  std::uint64_t be_seed = 1;
  Real be_lambda = 1e-3;
  int be_folds = 5;
  int be_grid = 10;
  Real be_window = 0.8;
  Real be_test_scale = 25.0;
  int be_epochs = 8000;
  std::string be_report;
  bench_cmd->add_option("--m", be_m, "training size per seed");
  bench_cmd->add_option("--ratio", be_ratio, "imbalance ratio");
  bench_cmd->add_option("--separation", be_separation, "class mean separation");
  bench_cmd->add_option("--noise", be_noise, "majority gaussian scale");
  bench_cmd->add_option("--noise-minority", be_minority_noise, "minority gaussian scale");
  bench_cmd->add_option("--seeds", be_seeds, "number of seeds");
  bench_cmd->add_option("--seed", be_seed, "base seed");
  bench_cmd->add_option("--lambda", be_lambda, "L2 penalty");
  bench_cmd->add_option("--folds", be_folds, "CV folds");
  bench_cmd->add_option("--grid-size", be_grid, "alpha grid size");
  bench_cmd->add_option("--grid-window", be_window, "alpha window");
  bench_cmd->add_option("--test-scale", be_test_scale, "test size factor");
  bench_cmd->add_option("--epochs", be_epochs, "training epochs");
  bench_cmd->add_option("--report", be_report, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  try {
    state.load();

    Manifest manifest;
    Json config = Json::object();
    for (const auto& [key, value] : state.file_config) config[key] = value;

    if (*generate) {
      state.resolve(generate, "--ratio", "ratio", gen_ratio);
      state.resolve(generate, "--classes", "classes", gen_classes);
      state.resolve(generate, "--max", "max", gen_max);
      state.resolve(generate, "--seed", "seed", gen_seed);
      state.resolve(generate, "--kind", "kind", gen_kind);
      manifest.command = "generate";
      config["kind"] = gen_kind;
      config["ratio"] = gen_ratio;
      config["classes"] = gen_classes;
      config["max"] = gen_max;
      config["step_fraction"] = gen_step_fraction;
      config["dim"] = gen_dim;
      config["separation"] = gen_separation;
      config["noise"] = gen_noise;
      config["seed"] = gen_seed;
      config["test_scale"] = gen_test_scale;
      manifest.config = config;
      config["scales"] = gen_scales;
      return run_generate(gen_kind, gen_ratio, gen_classes, gen_max, gen_step_fraction, gen_dim,
                          gen_separation, gen_noise, gen_scales, gen_seed, gen_test_scale,
                          gen_out, gen_test_out, gen_report, std::move(manifest));
    }
    if (*train_cmd) {
      state.resolve(train_cmd, "--loss", "loss", train_cli.loss_name);
      state.resolve(train_cmd, "--rho", "rho", train_cli.rho_text);
      state.resolve(train_cmd, "--alpha", "alpha", train_cli.alpha);
      state.resolve(train_cmd, "--psi", "psi", train_cli.psi_name);
      state.resolve(train_cmd, "--lambda", "lambda", train_cli.lambda);
      state.resolve(train_cmd, "--tau", "tau", train_cli.tau);
      state.resolve(train_cmd, "--gamma", "gamma", train_cli.gamma);
      state.resolve(train_cmd, "--ldam-C", "C", train_cli.ldam_C);
      state.resolve(train_cmd, "--epochs", "epochs", train_cli.epochs);
      state.resolve(train_cmd, "--seed", "seed", train_cli.seed);
      state.resolve(train_cmd, "--cv", "cv", train_cli.cv_folds);
      manifest.command = "train";
      config["data"] = train_cli.data_path;
      config["loss"] = train_cli.loss_name;
      config["rho"] = train_cli.rho_text;
      config["alpha"] = train_cli.alpha;
      config["psi"] = train_cli.psi_name;
      config["lambda"] = train_cli.lambda;
      config["scorer"] = train_cli.scorer_name;
      config["optimizer"] = train_cli.optimizer_name;
      config["epochs"] = train_cli.epochs;
      config["seed"] = train_cli.seed;
      config["cv"] = train_cli.cv_folds;
      manifest.config = config;
      return run_train(train_cli, train_scorer_out, train_trace_out, train_report,
                       std::move(manifest));
    }
    if (*eval_cmd) {
      manifest.command = "eval";
      config["data"] = eval_data;
      config["scorer"] = eval_scorer;
      manifest.config = config;
      return run_eval(eval_data, eval_scorer, eval_report, std::move(manifest));
    }
    if (*analyze) {
      if (*margins_cmd) {
        manifest.command = "analyze margins";
        config["mplus"] = ma_mplus;
        config["mminus"] = ma_mminus;
        config["rplus"] = ma_rplus;
        config["rminus"] = ma_rminus;
        config["rho_geom"] = ma_rho_geom;
        manifest.config = config;
        return run_analyze_margins(ma_mplus, ma_mminus, ma_rplus, ma_rminus, ma_rho_geom,
                                   ma_report, std::move(manifest));
      }
      if (*bound_cmd) {
        manifest.command = "analyze bound";
        config["mode"] = bo_mode;
        config["empirical_loss"] = bo_empirical_loss;
        config["complexity"] = bo_complexity;
        config["m"] = bo_m;
        config["classes"] = bo_classes;
        config["delta"] = bo_delta;
        config["uniform"] = bo_uniform;
        config["empirical"] = bo_empirical;
        manifest.config = config;
        return run_analyze_bound(bo_mode, bo_empirical_loss, bo_complexity, bo_m, bo_classes,
                                 bo_delta, bo_uniform, bo_empirical, bo_radii, bo_rho,
                                 bo_report, std::move(manifest));
      }
      if (*rad_cmd) {
        manifest.command = "analyze rademacher";
        config["data"] = ra_data;
        config["rho"] = ra_rho;
        config["Lambda"] = ra_lambda_cap;
        config["exact"] = ra_exact;
        config["trials"] = ra_trials;
        config["seed"] = ra_seed;
        config["multi"] = ra_multi;
        manifest.config = config;
        return run_analyze_rademacher(ra_data, ra_rho, ra_lambda_cap, ra_exact, ra_trials,
                                      ra_seed, ra_multi, ra_report, std::move(manifest));
      }
      if (*cons_cmd) {
        manifest.command = "analyze consistency";
        config["mode"] = co_mode;
        config["trials"] = co_trials;
        config["support"] = co_support;
        config["classes"] = co_classes;
        config["cplus"] = co_cplus;
        config["cminus"] = co_cminus;
        config["epsilon"] = co_epsilon;
        config["seed"] = co_seed;
        manifest.config = config;
        return run_analyze_consistency(co_mode, co_trials, co_support, co_classes, co_cplus,
                                       co_cminus, co_epsilon, co_seed, co_report,
                                       std::move(manifest));
      }
    }
    if (*fig_cmd) {
      manifest.command = "figure1";
      config["data"] = fig_data;
      config["ratio"] = fig_ratio;
      config["m"] = fig_m;
      config["separation"] = fig_separation;
      config["noise"] = fig_noise;
      config["noise_minority"] = fig_minority_noise;
      config["lambda"] = fig_lambda;
      config["epochs"] = fig_epochs;
      config["seed"] = fig_seed;
      config["eval_scale"] = fig_eval_scale;
      manifest.config = config;
      return run_figure1(fig_data, fig_ratio, fig_m, fig_separation, fig_noise,
                         fig_minority_noise, fig_lambda, fig_epochs, fig_seed, fig_eval_scale,
                         fig_csv, fig_report, std::move(manifest));
    }
    if (*bench_cmd) {
      manifest.command = "bench";
      config["m"] = be_m;
      config["ratio"] = be_ratio;
      config["separation"] = be_separation;
      config["noise"] = be_noise;
      config["noise_minority"] = be_minority_noise;
      config["seeds"] = be_seeds;
      config["seed"] = be_seed;
      config["lambda"] = be_lambda;
      config["folds"] = be_folds;
      config["grid_size"] = be_grid;
      config["grid_window"] = be_window;
      config["test_scale"] = be_test_scale;
      config["epochs"] = be_epochs;
      manifest.config = config;
      return run_bench(be_m, be_ratio, be_separation, be_noise, be_minority_noise, be_seeds,
                       be_seed, be_lambda, be_folds, be_grid, be_window, be_test_scale,
                       be_epochs, be_report, std::move(manifest));
    }
    throw immax::ConfigError("no subcommand selected");
  } catch (const immax::NumericError& error) {
    std::cerr << "numeric error: " << error.what() << "\n";
    return kExitNumeric;
  } catch (const immax::ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitConfig;
  } catch (const immax::ParseError& error) {
    std::cerr << "parse error: " << error.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitConfig;
  }
}
