#include "immax/dataset.hpp"

#include "immax/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace immax {

Dataset::Dataset(Matrix features, std::vector<int> labels, int num_classes)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<Index>(labels_.size()) != features_.rows()) {
    throw ConfigError("dataset: labels/features size mismatch");
  }
  if (features_.rows() == 0) throw ParseError("empty dataset");
  int max_label = 0;
  for (int y : labels_) {
    if (y < 0) throw ConfigError("dataset: negative class index");
    max_label = std::max(max_label, y);
  }
  num_classes_ = num_classes > 0 ? num_classes : max_label + 1;
  if (max_label >= num_classes_) throw ConfigError("dataset: label out of range");

  index_sets_.assign(static_cast<size_t>(num_classes_), {});
  counts_.assign(static_cast<size_t>(num_classes_), 0);
  radii_.assign(static_cast<size_t>(num_classes_), 0.0);
  radius_ = 0.0;
  for (Index i = 0; i < features_.rows(); ++i) {
    const auto k = static_cast<size_t>(labels_[static_cast<size_t>(i)]);
    index_sets_[k].push_back(i);
    counts_[k] += 1;
    const Real norm = features_.row(i).norm();
    radii_[k] = std::max(radii_[k], norm);
    radius_ = std::max(radius_, norm);
  }
}

Real Dataset::imbalance_ratio() const {
  Index max_count = 0;
  Index min_count = std::numeric_limits<Index>::max();
  for (Index m_k : counts_) {
    if (m_k == 0) continue;
    max_count = std::max(max_count, m_k);
    min_count = std::min(min_count, m_k);
  }
  return static_cast<Real>(max_count) / static_cast<Real>(min_count);
}

ClassStats class_stats(const Dataset& dataset) {
  return ClassStats{dataset.class_counts(), dataset.class_radii(), dataset.radius(),
                    dataset.imbalance_ratio()};
}

std::vector<Index> profile_counts(const ImbalanceProfile& profile) {
  const int c = profile.num_classes;
  if (c < 2) throw ConfigError("profile: num_classes must be >= 2");
  if (profile.ratio < 1.0) throw ConfigError("profile: ratio must be >= 1");
  if (profile.max_class_size < 1) throw ConfigError("profile: max_class_size must be >= 1");
  const Real min_size = static_cast<Real>(profile.max_class_size) / profile.ratio;
  if (std::llround(min_size) < 1) {
    throw ConfigError("profile: max_class_size/ratio rounds below 1");
  }

  std::vector<Index> counts(static_cast<size_t>(c));
  if (profile.kind == ImbalanceKind::LongTailed) {
    for (int k = 0; k < c; ++k) {
      const Real exponent = -static_cast<Real>(k) / static_cast<Real>(c - 1);
      counts[static_cast<size_t>(k)] = static_cast<Index>(std::llround(
          static_cast<Real>(profile.max_class_size) * std::pow(profile.ratio, exponent)));
    }
  } else {
    if (profile.step_fraction <= 0 || profile.step_fraction >= 1) {
      throw ConfigError("profile: step_fraction must be in (0, 1)");
    }
    // Minority group size floored for odd class counts.
    const int minority = std::max(1, static_cast<int>(std::floor(c * profile.step_fraction)));
    const auto small = static_cast<Index>(std::llround(min_size));
    for (int k = 0; k < c; ++k) {
      counts[static_cast<size_t>(k)] = k < c - minority ? profile.max_class_size : small;
    }
  }
  return counts;
}

Dataset generate_imbalanced(const ImbalanceProfile& profile,
                            const std::vector<ClassGenerator>& generators,
                            std::uint64_t seed) {
  const std::vector<Index> counts = profile_counts(profile);
  if (generators.size() != counts.size()) {
    throw ConfigError("generate: one class generator per class required");
  }
  const Index dim = generators.front().mean.size();
  Index total = 0;
  for (Index m_k : counts) total += m_k;

  Matrix features(total, dim);
  std::vector<int> labels(static_cast<size_t>(total));
  Index row = 0;
  for (size_t k = 0; k < counts.size(); ++k) {
    if (generators[k].mean.size() != dim) {
      throw ConfigError("generate: class means must share the feature dimension");
    }
    SplitMix64 rng(derive_seed(seed, k));
    for (Index i = 0; i < counts[k]; ++i, ++row) {
      for (Index j = 0; j < dim; ++j) {
        features(row, j) = generators[k].mean[j] + generators[k].scale * rng.normal();
      }
      labels[static_cast<size_t>(row)] = static_cast<int>(k);
    }
  }
  return Dataset(std::move(features), std::move(labels), profile.num_classes);
}

std::pair<Dataset, Dataset> generate_train_test(const ImbalanceProfile& profile,
                                                const std::vector<ClassGenerator>& generators,
                                                std::uint64_t seed, Real test_scale) {
  ImbalanceProfile test_profile = profile;
  test_profile.max_class_size =
      std::max<Index>(1, static_cast<Index>(std::llround(
                             static_cast<Real>(profile.max_class_size) * test_scale)));
  Dataset train = generate_imbalanced(profile, generators, derive_seed(seed, 0x7261u));
  Dataset test = generate_imbalanced(test_profile, generators, derive_seed(seed, 0x7465u));
  return {std::move(train), std::move(test)};
}

std::vector<ClassGenerator> default_generators(int num_classes, Index dim, Real separation,
                                               Real scale) {
  if (num_classes < 2 || dim < 1) throw ConfigError("generators: need c >= 2 and d >= 1");
  std::vector<ClassGenerator> gens(static_cast<size_t>(num_classes));
  for (int k = 0; k < num_classes; ++k) {
    Vector mean = Vector::Zero(dim);
    if (num_classes == 2) {
      mean[0] = k == 0 ? separation : -separation;
    } else {
      const Real angle = 2.0 * M_PI * k / num_classes;
      mean[0] = separation * std::cos(angle);
      if (dim > 1) mean[1] = separation * std::sin(angle);
    }
    gens[static_cast<size_t>(k)] = ClassGenerator{std::move(mean), scale};
  }
  return gens;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, delimiter)) fields.push_back(field);
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

Real parse_real(const std::string& text, Index row) {
  try {
    size_t used = 0;
    const Real value = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError("row " + std::to_string(row) + ": non-numeric field '" + text + "'");
  }
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::vector<std::vector<Real>> rows;
  std::vector<long long> raw_labels;
  std::string line;
  Index row_number = 0;
  bool header_skipped = !schema.skip_header;
  size_t arity = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    const std::vector<std::string> fields = split_line(line, schema.delimiter);
    if (arity == 0) {
      arity = fields.size();
      if (arity < 2) throw ParseError("row " + std::to_string(row_number) + ": need a label and at least one feature");
      if (schema.label_column < 0 || static_cast<size_t>(schema.label_column) >= arity) {
        throw ConfigError("label_column out of range");
      }
    } else if (fields.size() != arity) {
      throw ParseError("row " + std::to_string(row_number) + ": expected " + std::to_string(arity) +
                       " fields, got " + std::to_string(fields.size()));
    }
    const Real label_value = parse_real(fields[static_cast<size_t>(schema.label_column)], row_number);
    const auto label = static_cast<long long>(std::llround(label_value));
    if (static_cast<Real>(label) != label_value) {
      throw ParseError("row " + std::to_string(row_number) + ": label '" +
                       fields[static_cast<size_t>(schema.label_column)] + "' is not an integer");
    }
    raw_labels.push_back(label);
    std::vector<Real> features;
    features.reserve(arity - 1);
    for (size_t j = 0; j < arity; ++j) {
      if (j == static_cast<size_t>(schema.label_column)) continue;
      features.push_back(parse_real(fields[j], row_number));
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw ParseError("empty dataset");

  // Label convention: {+1,-1} -> {0,1}; otherwise integers, 1-based shifted.
  bool plus_minus = true;
  long long min_label = raw_labels.front();
  for (long long y : raw_labels) {
    if (y != 1 && y != -1) plus_minus = false;
    min_label = std::min(min_label, y);
  }
  std::vector<int> labels(raw_labels.size());
  for (size_t i = 0; i < raw_labels.size(); ++i) {
    long long mapped;
    if (plus_minus) {
      mapped = raw_labels[i] == 1 ? 0 : 1;
    } else if (min_label >= 1) {
      mapped = raw_labels[i] - 1;
    } else if (min_label == 0) {
      mapped = raw_labels[i];
    } else {
      throw ParseError("unknown label '" + std::to_string(raw_labels[i]) + "'");
    }
    labels[i] = static_cast<int>(mapped);
  }

  Matrix features(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      features(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return Dataset(std::move(features), std::move(labels));
}

void save_csv(const Dataset& dataset, const std::string& path, const CsvSchema& schema,
              const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  if (!comment.empty()) out << "# " << comment << "\n";
  const bool binary = dataset.num_classes() == 2;
  char buffer[64];
  for (Index i = 0; i < dataset.size(); ++i) {
    const int label = binary ? dataset.binary_label(i) : dataset.label(i) + 1;
    out << label;
    for (Index j = 0; j < dataset.dim(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", dataset.features()(i, j));
      out << schema.delimiter << buffer;
    }
    out << "\n";
  }
}

}  // namespace immax
