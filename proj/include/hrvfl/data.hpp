#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrvfl/labels.hpp"
#include "hrvfl/types.hpp"

namespace hrvfl {

/// Binary classification data. Labels are encoded as -1 / +1.
struct Dataset {
  Matrix X;
  Vector y;
  std::string name;
  LabelMapping labels{};

  Index rows() const noexcept { return X.rows(); }
  Index cols() const noexcept { return X.cols(); }

  /// Rows at `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;
  /// Throws unless features are finite, labels are +-1, both classes occur and sizes agree.
  void validate() const;

  bool operator==(const Dataset& other) const;
};

struct CsvSchema {
  /// Label column by header name; takes precedence over label_index.
  std::optional<std::string> label_name;
  /// Label column by position; negative values count from the end (-1 = last).
  long label_index = -1;
  bool header = false;
  char delimiter = ',';
  /// When set, labels are mapped through this fixed mapping (evaluation files,
  /// which may hold a single class). Unknown label values are parse errors.
  std::optional<LabelMapping> labels;
};

/// Parses CSV text. The two distinct label values are mapped to -1 / +1 in
/// sorted order (numeric when both parse as numbers, lexicographic otherwise).
/// Throws ParseError with row/column for malformed rows or non-numeric features.
Dataset parse_csv(std::istream& in, const CsvSchema& schema, std::string name = {});
Dataset load_csv(const std::string& path, const CsvSchema& schema, std::string name = {});

/// Writes features then the original label value per row, no header, with
/// round-trip precision. Reading back with the default schema reproduces `ds`.
void write_csv(const Dataset& ds, std::ostream& out, char delimiter = ',');

/// Per-feature min-max statistics fit on training data.
struct NormStats {
  Vector min;
  Vector range;

  /// (x - min) / range per column; zero-range columns map to 0. Not clipped.
  Matrix apply(const Matrix& X) const;
};

NormStats fit_minmax(const Matrix& X);

struct Normalized {
  Dataset train;
  std::vector<Dataset> others;
  NormStats stats;
};

/// Min-max scaling fit on `train` only and applied to every dataset.
Normalized normalize(const Dataset& train, std::span<const Dataset> others = {});

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct KFold {
  std::vector<Fold> folds;
  /// False when some class had fewer than k members and plain shuffling was used.
  bool stratified = true;
};

/// Seeded k-fold split. Stratified by class: each class's shuffled indices
/// are dealt round-robin so every fold's class counts are within one of each other.
KFold kfold_split(const Dataset& ds, std::size_t k, std::uint64_t seed);

struct NoiseSpec {
  double rate = 0;
  std::uint64_t seed = 0;
};

struct NoisyDataset {
  Dataset data;
  /// Flipped row indices, in draw order.
  std::vector<std::size_t> flipped;
};

/// Flips exactly floor(rate * n) labels chosen uniformly without replacement.
NoisyDataset inject_label_noise(const Dataset& ds, const NoiseSpec& spec);

/// Two isotropic unit-variance Gaussian classes in m dimensions whose means
/// sit at -separation/2 and +separation/2 along the first axis. The Bayes
/// accuracy is Phi(separation / 2). Classes alternate, then rows are shuffled.
Dataset make_two_gaussians(std::size_t n, std::size_t m, double separation, std::uint64_t seed,
                           std::string name = "two_gaussians");

struct ManifestEntry {
  std::string name;
  std::string path;
  std::size_t n = 0;
  std::size_t m = 0;
  std::map<std::string, std::size_t> class_counts;

  bool operator==(const ManifestEntry&) const = default;
};

ManifestEntry describe(const Dataset& ds, const std::string& path);
/// One JSON object per line.
void write_manifest(std::span<const ManifestEntry> entries, std::ostream& out);
std::vector<ManifestEntry> read_manifest(std::istream& in);

}  // namespace hrvfl
