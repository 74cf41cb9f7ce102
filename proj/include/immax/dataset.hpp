#pragma once

#include "immax/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace immax {

/// Labeled sample with per-class statistics. Labels are class indices in
/// [0, c). For binary data class 0 is the positive (+1) class and class 1
/// the negative (-1) class. Immutable after construction: all statistics
/// (index sets, counts, radii) are computed once in the constructor.
class Dataset {
 public:
  /// features: m x d matrix, one example per row; labels: class index per
  /// row. num_classes <= 0 infers c = max label + 1.
  Dataset(Matrix features, std::vector<int> labels, int num_classes = 0);

  Index size() const { return features_.rows(); }
  Index dim() const { return features_.cols(); }
  int num_classes() const { return num_classes_; }

  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(Index i) const { return labels_[static_cast<size_t>(i)]; }

  /// +1 for class 0, -1 for class 1. Only meaningful when num_classes == 2.
  int binary_label(Index i) const { return labels_[static_cast<size_t>(i)] == 0 ? +1 : -1; }

  /// I_k: indices of the examples labeled k. The I_k partition {0..m-1}.
  const std::vector<std::vector<Index>>& index_sets() const { return index_sets_; }
  /// m_k.
  const std::vector<Index>& class_counts() const { return counts_; }
  /// r_k = max_{i in I_k} ||x_i||_2 (0 for empty classes).
  const std::vector<Real>& class_radii() const { return radii_; }
  /// r = max_k r_k.
  Real radius() const { return radius_; }

  /// max_k m_k / min_k m_k over represented classes.
  Real imbalance_ratio() const;

 private:
  Matrix features_;
  std::vector<int> labels_;
  int num_classes_;
  std::vector<std::vector<Index>> index_sets_;
  std::vector<Index> counts_;
  std::vector<Real> radii_;
  Real radius_;
};

struct ClassStats {
  std::vector<Index> counts;
  std::vector<Real> radii;
  Real radius;
  Real imbalance_ratio;
};

ClassStats class_stats(const Dataset& dataset);

enum class ImbalanceKind { LongTailed, Step };

/// Class-count profile. LongTailed interpolates counts geometrically between
/// max_class_size and max_class_size/ratio; Step keeps the frequent classes
/// at max_class_size and drops the minority group to max_class_size/ratio.
struct ImbalanceProfile {
  ImbalanceKind kind = ImbalanceKind::LongTailed;
  Real ratio = 1.0;          // m_max / m_min, >= 1
  int num_classes = 2;
  Index max_class_size = 100;
  Real step_fraction = 0.5;  // fraction of classes that are minority (Step)
};

/// Per-class counts implied by the profile.
/// LongTailed: m_k = round(max * ratio^(-(k-1)/(c-1))), non-increasing.
/// Step: the last floor(c * step_fraction) classes get round(max / ratio).
std::vector<Index> profile_counts(const ImbalanceProfile& profile);

/// Isotropic Gaussian sampler for one class.
struct ClassGenerator {
  Vector mean;
  Real scale = 1.0;
};

/// Samples a dataset whose per-class counts follow the profile.
/// Deterministic given seed; per-class draws use independent derived streams
/// so that counts of one class do not shift the draws of another.
Dataset generate_imbalanced(const ImbalanceProfile& profile,
                            const std::vector<ClassGenerator>& generators,
                            std::uint64_t seed);

/// Training set plus a test set with the same per-class proportions
/// (test profile = profile with max_class_size scaled by test_scale),
/// drawn from independent streams of the same seed.
std::pair<Dataset, Dataset> generate_train_test(const ImbalanceProfile& profile,
                                                const std::vector<ClassGenerator>& generators,
                                                std::uint64_t seed,
                                                Real test_scale = 1.0);

/// Evenly spread class means for synthetic data: +/-separation*e1 for c=2,
/// a circle of radius separation in the first two coordinates otherwise.
std::vector<ClassGenerator> default_generators(int num_classes, Index dim,
                                               Real separation, Real scale);

struct CsvSchema {
  int label_column = 0;
  char delimiter = ',';
  bool skip_header = false;
};

/// One example per row; label in label_column, all other columns features.
/// Labels may be {+1,-1} (mapped to classes {0,1}) or non-negative integers
/// (1-based or 0-based; 1-based is shifted down). Lines starting with '#'
/// are skipped. Parse errors carry the 1-based row number.
Dataset load_csv(const std::string& path, const CsvSchema& schema = {});

/// Byte-stable writer: reals at 17 significant digits, labels written as
/// +1/-1 for binary datasets and 1-based indices otherwise.
void save_csv(const Dataset& dataset, const std::string& path,
              const CsvSchema& schema = {}, const std::string& comment = "");

}  // namespace immax
