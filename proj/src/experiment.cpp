#include "hrvfl/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "hrvfl/error.hpp"
#include "hrvfl/kernels.hpp"
#include "hrvfl/rng.hpp"
#include "hrvfl/summary.hpp"

namespace hrvfl {

using nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::uint64_t rate_bits(double rate) { return std::bit_cast<std::uint64_t>(rate + 0.0); }

bool is_ridge(ModelFamily f) { return f != ModelFamily::hrvfl; }

auto order_key(const ResultRow& r) {
  const auto& p = r.params;
  return std::make_tuple(std::cref(r.dataset), r.noise_rate, std::cref(r.model), static_cast<int>(p.family), p.C,
                         p.hloss.lambda, p.hloss.a, p.hloss.epsilon, p.hidden, static_cast<int>(p.activation));
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return order_key(a) < order_key(b); });
}

// Features of one fold for one (hidden, activation) pair, with direct links.
struct FoldFeatures {
  FeatureMap map;
  Matrix train;
  Matrix test;
  /// gram_spectral_norm(train) when the step is curvature-scaled.
  std::optional<double> gram_norm;
};

struct PreparedFold {
  Dataset train;
  Dataset test;
  NormStats stats;
};

PreparedFold prepare_fold(const Dataset& ds, const Fold& fold, bool scale) {
  PreparedFold p{ds.subset(fold.train), ds.subset(fold.test), {}};
  if (scale) {
    p.stats = fit_minmax(p.train.X);
    p.train.X = p.stats.apply(p.train.X);
    p.test.X = p.stats.apply(p.test.X);
  } else {
    p.stats = NormStats{Vector::Zero(ds.cols()), Vector::Ones(ds.cols())};
  }
  return p;
}

FeatureMapConfig feature_config(const HyperParams& hp, const ExperimentSpec& spec, std::uint64_t seed) {
  return FeatureMapConfig{hp.hidden, hp.activation, spec.weight_scale, seed};
}

ordered_json params_json(const HyperParams& p) {
  ordered_json j;
  j["C"] = p.C;
  if (!is_ridge(p.family)) {
    j["lambda"] = p.hloss.lambda;
    j["a"] = p.hloss.a;
    j["epsilon"] = p.hloss.epsilon;
  }
  j["hidden"] = p.hidden;
  j["activation"] = std::string(to_string(p.activation));
  return j;
}

template <typename T>
std::vector<T> list_or(const nlohmann::json& j, const char* key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

std::string_view to_string(ModelFamily f) noexcept {
  switch (f) {
    case ModelFamily::hrvfl: return "hrvfl";
    case ModelFamily::rvfl: return "rvfl";
    case ModelFamily::rvfl_wodl: return "rvfl_wodl";
  }
  return "hrvfl";
}

ModelFamily parse_family(std::string_view name) {
  if (name == "hrvfl") return ModelFamily::hrvfl;
  if (name == "rvfl") return ModelFamily::rvfl;
  if (name == "rvfl_wodl") return ModelFamily::rvfl_wodl;
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (families.empty()) throw ConfigError("experiment: no model families");
  if (grid.C.empty() || grid.hidden.empty() || grid.activation.empty()) throw ConfigError("experiment: empty grid");
  const bool has_h = std::find(families.begin(), families.end(), ModelFamily::hrvfl) != families.end();
  if (has_h && (grid.lambda.empty() || grid.a.empty() || grid.epsilon.empty()))
    throw ConfigError("experiment: empty HawkEye grid");
  if (folds < 2) throw ConfigError("experiment: folds must be at least 2");
  if (noise_rates.empty()) throw ConfigError("experiment: no noise rates");
  for (double r : noise_rates)
    if (!(r >= 0 && r < 1)) throw ConfigError("experiment: noise rates must be in [0, 1)");
  for (double c : grid.C)
    if (!(c > 0)) throw ConfigError("experiment: C values must be positive");
  for (std::size_t h : grid.hidden)
    if (h < 1) throw ConfigError("experiment: hidden node counts must be positive");
  if (has_h) {
    for (double l : grid.lambda) HLossParams{l, 1, 0}.validate();
    for (double a : grid.a) HLossParams{1, a, 0}.validate();
    for (double e : grid.epsilon) HLossParams{1, 1, e}.validate();
    nag.validate();
  }
  if (!(weight_scale > 0)) throw ConfigError("experiment: weight_scale must be positive");
}

std::string HyperParams::key() const {
  std::string k = std::string(to_string(family)) + " C=" + shortest(C);
  if (!is_ridge(family))
    k += " lambda=" + shortest(hloss.lambda) + " a=" + shortest(hloss.a) + " eps=" + shortest(hloss.epsilon);
  return k + " h=" + std::to_string(hidden) + " act=" + std::string(to_string(activation));
}

std::string HyperParams::feature_key() const {
  return "h=" + std::to_string(hidden) + " act=" + std::string(to_string(activation));
}

ModelConfig HyperParams::to_config(const ExperimentSpec& spec) const {
  ModelConfig cfg;
  cfg.C = C;
  cfg.loss = is_ridge(family) ? Loss{LossKind::squared, {}} : Loss{LossKind::hawkeye, hloss};
  cfg.features = FeatureMapConfig{hidden, activation, spec.weight_scale, 0};
  cfg.direct_links = family != ModelFamily::rvfl_wodl;
  cfg.nag = spec.nag;
  cfg.warm_start = spec.warm_start;
  cfg.scale_lr = spec.scale_lr;
  return cfg;
}

std::vector<HyperParams> expand_grid(const ModelGrid& grid, std::span<const ModelFamily> families) {
  std::vector<HyperParams> out;
  for (ModelFamily f : families) {
    for (double c : grid.C) {
      for (std::size_t h : grid.hidden) {
        for (Activation act : grid.activation) {
          if (is_ridge(f)) {
            out.push_back({f, c, {}, h, act});
            continue;
          }
          for (double l : grid.lambda)
            for (double a : grid.a)
              for (double e : grid.epsilon) out.push_back({f, c, {l, a, e}, h, act});
        }
      }
    }
  }
  return out;
}

void fill_stats(ResultRow& row) {
  const auto n = row.fold_accuracy.size();
  if (n == 0) {
    row.mean = row.std = 0;
    return;
  }
  double sum = 0;
  for (double a : row.fold_accuracy) sum += a;
  row.mean = sum / static_cast<double>(n);
  double ss = 0;
  for (double a : row.fold_accuracy) ss += (a - row.mean) * (a - row.mean);
  row.std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
}

std::uint64_t SeedPlan::folds() const {
  return derive_seed(derive_seed(master, hash_string(dataset)), hash_string("folds"));
}

std::uint64_t SeedPlan::noise(std::size_t fold, double rate) const {
  const auto base = derive_seed(derive_seed(master, hash_string(dataset)), hash_string("noise"));
  return derive_seed(derive_seed(base, fold), rate_bits(rate));
}

std::uint64_t SeedPlan::features(std::size_t fold, const HyperParams& hp) const {
  const auto base = derive_seed(derive_seed(master, hash_string(dataset)), hash_string("features"));
  return derive_seed(derive_seed(base, fold), hash_string(hp.feature_key()));
}

std::uint64_t SeedPlan::sampler(std::size_t fold, double rate, const HyperParams& hp) const {
  const auto base = derive_seed(derive_seed(master, hash_string(dataset)), hash_string("sampler"));
  return derive_seed(derive_seed(derive_seed(base, fold), rate_bits(rate)), hash_string(hp.key()));
}

FoldModel train_on_fold(const Dataset& ds, const Fold& fold, std::size_t fold_index, const HyperParams& hp,
                        double noise_rate, const ExperimentSpec& spec) {
  const SeedPlan plan{spec.master_seed, ds.name};
  PreparedFold p = prepare_fold(ds, fold, spec.normalize);
  NoisyDataset noisy = inject_label_noise(p.train, {noise_rate, plan.noise(fold_index, noise_rate)});

  ModelConfig cfg = hp.to_config(spec);
  cfg.features.seed = plan.features(fold_index, hp);
  cfg.nag.seed = plan.sampler(fold_index, noise_rate, hp);
  cfg.validate();
  FeatureMap fm = FeatureMap::init(static_cast<std::size_t>(ds.cols()), cfg.features);
  const Matrix T = build_T(p.train.X, fm, cfg.direct_links);
  OutputFit out = fit_output_weights(T, noisy.data.y, cfg);
  return {TrainedModel{std::move(out.beta), std::move(fm), cfg, out.report, ds.labels}, std::move(p.stats),
          std::move(noisy.flipped)};
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  std::vector<Dataset> loaded;
  std::vector<ResultRow> failures;
  for (const auto& ref : spec.datasets) {
    try {
      Dataset ds = load_csv(ref.path, ref.schema, ref.name);
      ds.validate();
      loaded.push_back(std::move(ds));
    } catch (const Error& e) {
      ResultRow row;
      row.dataset = ref.name;
      row.model = "-";
      row.error = e.what();
      failures.push_back(std::move(row));
    }
  }
  std::vector<ResultRow> rows = run_experiment(spec, loaded);
  rows.insert(rows.end(), failures.begin(), failures.end());
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, std::span<const Dataset> datasets) {
  spec.validate();
  const std::vector<HyperParams> grid = expand_grid(spec.grid, spec.families);
  const std::size_t n_rates = spec.noise_rates.size();
  const std::size_t n_grid = grid.size();
  const std::size_t k = spec.folds;

  // Distinct feature maps; grid points sharing (hidden, activation) share features.
  std::vector<std::size_t> feature_slot(n_grid);
  std::vector<HyperParams> feature_reps;
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t g = 0; g < n_grid; ++g) {
      auto [it, inserted] = seen.emplace(grid[g].feature_key(), feature_reps.size());
      if (inserted) feature_reps.push_back(grid[g]);
      feature_slot[g] = it->second;
    }
  }
  const std::size_t n_feat = feature_reps.size();

  std::vector<ResultRow> rows;
  for (const Dataset& ds : datasets) {
    const SeedPlan plan{spec.master_seed, ds.name};
    KFold kf;
    std::vector<PreparedFold> prepared;
    try {
      ds.validate();
      kf = kfold_split(ds, k, plan.folds());
      for (const Fold& f : kf.folds) prepared.push_back(prepare_fold(ds, f, spec.normalize));
    } catch (const Error& e) {
      ResultRow row;
      row.dataset = ds.name;
      row.model = "-";
      row.error = e.what();
      rows.push_back(std::move(row));
      continue;
    }

    std::vector<std::optional<FoldFeatures>> features(k * n_feat);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < k * n_feat; ++t) {
      const std::size_t f = t / n_feat;
      const HyperParams& rep = feature_reps[t % n_feat];
      FeatureMap fm = FeatureMap::init(static_cast<std::size_t>(ds.cols()), feature_config(rep, spec, plan.features(f, rep)));
      Matrix tr = build_T(prepared[f].train.X, fm, true);
      Matrix te = build_T(prepared[f].test.X, fm, true);
      std::optional<double> gram;
      if (spec.scale_lr) gram = gram_spectral_norm(tr);
      features[t].emplace(FoldFeatures{std::move(fm), std::move(tr), std::move(te), gram});
    }

    std::vector<Vector> noisy_labels(k * n_rates);
    for (std::size_t f = 0; f < k; ++f)
      for (std::size_t r = 0; r < n_rates; ++r)
        noisy_labels[f * n_rates + r] =
            inject_label_noise(prepared[f].train, {spec.noise_rates[r], plan.noise(f, spec.noise_rates[r])}).data.y;

    const std::size_t n_tasks = n_rates * n_grid * k;
    std::vector<double> acc(n_tasks, 0.0);
    std::vector<double> secs(n_tasks, 0.0);
    std::vector<std::string> err(n_tasks);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < n_tasks; ++t) {
      const std::size_t r = t / (n_grid * k);
      const std::size_t g = (t / k) % n_grid;
      const std::size_t f = t % k;
      const HyperParams& hp = grid[g];
      const auto start = std::chrono::steady_clock::now();
      try {
        ModelConfig cfg = hp.to_config(spec);
        cfg.nag.seed = plan.sampler(f, spec.noise_rates[r], hp);
        const FoldFeatures& ff = *features[f * n_feat + feature_slot[g]];
        const Index h = static_cast<Index>(hp.hidden);
        const Matrix Ttrain = cfg.direct_links ? ff.train : Matrix(ff.train.rightCols(h));
        const Matrix Ttest = cfg.direct_links ? ff.test : Matrix(ff.test.rightCols(h));
        const OutputFit out = fit_output_weights(Ttrain, noisy_labels[f * n_rates + r], cfg,
                                                 cfg.direct_links ? ff.gram_norm : std::nullopt);
        acc[t] = accuracy(sign_labels(kernels::parallel::scores(Ttest, out.beta)), prepared[f].test.y);
      } catch (const Error& e) {
        err[t] = e.what();
      }
      secs[t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    for (std::size_t r = 0; r < n_rates; ++r) {
      for (std::size_t g = 0; g < n_grid; ++g) {
        ResultRow row;
        row.dataset = ds.name;
        row.model = std::string(to_string(grid[g].family));
        row.params = grid[g];
        row.noise_rate = spec.noise_rates[r];
        row.stratified = kf.stratified;
        for (std::size_t f = 0; f < k; ++f) {
          const std::size_t t = (r * n_grid + g) * k + f;
          row.wall_seconds += secs[t];
          if (!err[t].empty() && row.error.empty()) row.error = "fold " + std::to_string(f) + ": " + err[t];
          row.fold_accuracy.push_back(acc[t]);
        }
        if (!row.error.empty()) row.fold_accuracy.clear();
        fill_stats(row);
        rows.push_back(std::move(row));
      }
    }
  }
  sort_rows(rows);
  select_best(rows);
  return rows;
}

void select_best(std::vector<ResultRow>& rows) {
  std::map<std::tuple<std::string, std::string, double>, std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    row.selected = false;
    if (!row.error.empty()) continue;
    const auto cell = std::make_tuple(row.dataset, row.model, row.noise_rate);
    auto it = best.find(cell);
    if (it == best.end()) {
      best.emplace(cell, i);
      continue;
    }
    const ResultRow& cur = rows[it->second];
    const bool better = row.mean > cur.mean ||
                        (row.mean == cur.mean && (row.params.C < cur.params.C ||
                                                  (row.params.C == cur.params.C &&
                                                   row.params.hloss.lambda < cur.params.hloss.lambda)));
    if (better) it->second = i;
  }
  for (const auto& [cell, i] : best) rows[i].selected = true;
}

void write_results(std::span<const ResultRow> rows, std::ostream& out) {
  for (const auto& r : rows) {
    ordered_json j;
    j["dataset"] = r.dataset;
    j["model"] = r.model;
    if (r.error.empty()) {
      j["key"] = r.params.key();
      j["params"] = params_json(r.params);
      j["noise_rate"] = r.noise_rate;
      j["fold_accuracy"] = r.fold_accuracy;
      j["mean"] = r.mean;
      j["std"] = r.std;
      j["selected"] = r.selected;
      j["stratified"] = r.stratified;
    } else {
      if (r.model != "-") {
        j["key"] = r.params.key();
        j["noise_rate"] = r.noise_rate;
      }
      j["error"] = r.error;
    }
    out << j.dump() << '\n';
  }
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ResultRow r;
      r.dataset = j.at("dataset").get<std::string>();
      r.model = j.at("model").get<std::string>();
      if (j.contains("error")) {
        r.error = j.at("error").get<std::string>();
      } else {
        const auto& p = j.at("params");
        r.params.family = parse_family(r.model);
        r.params.C = p.at("C").get<double>();
        if (p.contains("lambda"))
          r.params.hloss = {p.at("lambda").get<double>(), p.at("a").get<double>(), p.at("epsilon").get<double>()};
        r.params.hidden = p.at("hidden").get<std::size_t>();
        r.params.activation = parse_activation(p.at("activation").get<std::string>());
        r.noise_rate = j.at("noise_rate").get<double>();
        r.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
        r.mean = j.at("mean").get<double>();
        r.std = j.at("std").get<double>();
        r.selected = j.at("selected").get<bool>();
        r.stratified = j.at("stratified").get<bool>();
      }
      rows.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("results: ") + e.what(), n);
    }
    ++n;
  }
  return rows;
}

void write_timings(std::span<const ResultRow> rows, std::ostream& out) {
  for (const auto& r : rows) {
    if (r.model == "-") continue;
    ordered_json j;
    j["dataset"] = r.dataset;
    j["key"] = r.params.key();
    j["noise_rate"] = r.noise_rate;
    j["wall_seconds"] = r.wall_seconds;
    out << j.dump() << '\n';
  }
}

void write_output_dir(std::span<const ResultRow> rows, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  auto open = [&](const char* name) {
    std::ofstream out(base / name, std::ios::binary);
    if (!out) throw IoError("cannot write '" + (base / name).string() + "'");
    return out;
  };
  {
    auto out = open("results.jsonl");
    write_results(rows, out);
  }
  {
    auto out = open("table.txt");
    bool any = std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.error.empty(); });
    if (any) out << render_table(summarize(rows));
  }
  {
    auto out = open("timings.jsonl");
    write_timings(rows, out);
  }
}

ExperimentSpec parse_experiment_spec(const std::string& json_text, const std::string& base_dir) {
  ExperimentSpec spec;
  const std::filesystem::path base(base_dir);
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (base / path).lexically_normal().string();
  };
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (j.contains("datasets")) {
      for (const auto& d : j.at("datasets")) {
        DatasetRef ref;
        ref.path = resolve(d.at("path").get<std::string>());
        ref.name = d.value("name", std::filesystem::path(ref.path).stem().string());
        ref.schema.header = d.value("header", false);
        const auto delim = d.value("delimiter", std::string(","));
        if (delim.size() != 1) throw ConfigError("experiment: delimiter must be a single character");
        ref.schema.delimiter = delim[0];
        if (d.contains("label_column")) {
          const auto& lc = d.at("label_column");
          if (lc.is_string()) ref.schema.label_name = lc.get<std::string>();
          else ref.schema.label_index = lc.get<long>();
        }
        spec.datasets.push_back(std::move(ref));
      }
    }
    if (j.contains("manifest")) {
      const std::string mpath = resolve(j.at("manifest").get<std::string>());
      std::ifstream in(mpath);
      if (!in) throw IoError("cannot open manifest '" + mpath + "'");
      const auto mbase = std::filesystem::path(mpath).parent_path();
      for (const auto& e : read_manifest(in)) {
        const std::filesystem::path p(e.path);
        spec.datasets.push_back({e.name, p.is_absolute() ? e.path : (mbase / p).lexically_normal().string(), {}});
      }
    }
    if (j.contains("models")) {
      spec.families.clear();
      for (const auto& m : j.at("models")) spec.families.push_back(parse_family(m.get<std::string>()));
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      spec.grid.C = list_or(g, "C", spec.grid.C);
      spec.grid.lambda = list_or(g, "lambda", spec.grid.lambda);
      spec.grid.a = list_or(g, "a", spec.grid.a);
      spec.grid.epsilon = list_or(g, "epsilon", spec.grid.epsilon);
      spec.grid.hidden = list_or(g, "hidden", spec.grid.hidden);
      if (g.contains("activation")) {
        spec.grid.activation.clear();
        for (const auto& a : list_or<std::string>(g, "activation", {})) spec.grid.activation.push_back(parse_activation(a));
      }
    }
    spec.folds = j.value("folds", spec.folds);
    spec.noise_rates = list_or(j, "noise_rates", spec.noise_rates);
    spec.master_seed = j.value("seed", spec.master_seed);
    if (j.contains("output")) spec.output_path = resolve(j.at("output").get<std::string>());
    spec.weight_scale = j.value("weight_scale", spec.weight_scale);
    spec.normalize = j.value("normalize", spec.normalize);
    if (j.contains("nag")) {
      const auto& n = j.at("nag");
      spec.nag.momentum = n.value("momentum", spec.nag.momentum);
      spec.nag.initial_lr = n.value("initial_lr", spec.nag.initial_lr);
      spec.nag.decay = n.value("decay", spec.nag.decay);
      spec.nag.max_iters = n.value("max_iters", spec.nag.max_iters);
      spec.nag.tol = n.value("tol", spec.nag.tol);
      spec.nag.batch_size = n.value("batch_size", spec.nag.batch_size);
      spec.scale_lr = n.value("scale_lr", spec.scale_lr);
      spec.warm_start = n.value("warm_start", spec.warm_start);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace hrvfl
