#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrvfl/data.hpp"
#include "hrvfl/model.hpp"

namespace hrvfl {

enum class ModelFamily { hrvfl, rvfl, rvfl_wodl };

std::string_view to_string(ModelFamily f) noexcept;
ModelFamily parse_family(std::string_view name);

/// Hyperparameter lists. Ridge families ignore lambda, a and epsilon.
struct ModelGrid {
  std::vector<double> C{1e-3, 1e-2, 1e-1, 1, 1e1, 1e2, 1e3};
  std::vector<double> lambda{0.5, 1, 2};
  std::vector<double> a{0.5, 1, 2};
  std::vector<double> epsilon{0, 0.1, 0.5};
  std::vector<std::size_t> hidden{50, 100, 200};
  std::vector<Activation> activation{Activation::sigmoid};
};

struct DatasetRef {
  std::string name;
  std::string path;
  CsvSchema schema{};
};

struct ExperimentSpec {
  std::vector<DatasetRef> datasets;
  std::vector<ModelFamily> families{ModelFamily::hrvfl, ModelFamily::rvfl};
  ModelGrid grid{};
  std::size_t folds = 5;
  std::vector<double> noise_rates{0.0};
  std::uint64_t master_seed = 0;
  /// Directory for result files; empty means do not write.
  std::string output_path;
  /// Optimizer settings for H-RVFL; the seed field is replaced per run.
  NAGConfig nag{};
  bool scale_lr = false;
  bool warm_start = false;
  double weight_scale = 1.0;
  bool normalize = true;

  void validate() const;
};

/// One point of the expanded grid.
struct HyperParams {
  ModelFamily family = ModelFamily::hrvfl;
  double C = 1;
  HLossParams hloss{};
  std::size_t hidden = 100;
  Activation activation = Activation::sigmoid;

  /// Canonical text form, e.g. "hrvfl C=1 lambda=1 a=1 eps=0 h=100 act=sigmoid".
  std::string key() const;
  /// Identifies the random feature map (hidden, activation) shared across families.
  std::string feature_key() const;
  ModelConfig to_config(const ExperimentSpec& spec) const;

  bool operator==(const HyperParams&) const = default;
};

/// Cartesian product of the grid for each family, in family then grid order.
std::vector<HyperParams> expand_grid(const ModelGrid& grid, std::span<const ModelFamily> families);

struct ResultRow {
  std::string dataset;
  std::string model;
  HyperParams params{};
  double noise_rate = 0;
  std::vector<double> fold_accuracy;
  double mean = 0;
  double std = 0;
  double wall_seconds = 0;
  /// Best grid point of its (dataset, model, noise rate) cell.
  bool selected = false;
  bool stratified = true;
  /// Non-empty when the dataset or fit failed.
  std::string error;
};

/// Arithmetic mean and sample (n - 1) standard deviation.
void fill_stats(ResultRow& row);

/// Seeds for every stochastic consumer, each derived from the master seed,
/// the dataset name and a consumer tag plus the context that consumer varies with.
struct SeedPlan {
  std::uint64_t master = 0;
  std::string dataset;

  std::uint64_t folds() const;
  std::uint64_t noise(std::size_t fold, double rate) const;
  std::uint64_t features(std::size_t fold, const HyperParams& hp) const;
  std::uint64_t sampler(std::size_t fold, double rate, const HyperParams& hp) const;
};

/// Trains one model on the training rows of `fold`: normalization statistics
/// and label noise come from those rows only.
struct FoldModel {
  TrainedModel model;
  NormStats normalization;
  std::vector<std::size_t> flipped;
};
FoldModel train_on_fold(const Dataset& ds, const Fold& fold, std::size_t fold_index, const HyperParams& hp,
                        double noise_rate, const ExperimentSpec& spec);

/// k-fold evaluation of every grid point at every noise rate. Rows come back
/// sorted by (dataset, noise rate, model, hyperparameters).
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, std::span<const Dataset> datasets);

/// Marks the best row of each (dataset, model, noise rate) cell: highest
/// mean accuracy, then smaller C, then smaller lambda.
void select_best(std::vector<ResultRow>& rows);

/// One JSON object per row; no wall time, so the output is reproducible.
void write_results(std::span<const ResultRow> rows, std::ostream& out);
std::vector<ResultRow> read_results(std::istream& in);
void write_timings(std::span<const ResultRow> rows, std::ostream& out);

/// Writes results.jsonl, table.txt and timings.jsonl into `dir`.
void write_output_dir(std::span<const ResultRow> rows, const std::string& dir);

/// Parses a JSON experiment description. Relative dataset paths resolve
/// against `base_dir`.
ExperimentSpec parse_experiment_spec(const std::string& json_text, const std::string& base_dir = ".");

}  // namespace hrvfl
