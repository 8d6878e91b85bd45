// hrvfl: train, evaluate and benchmark RVFL classifiers with the HawkEye loss.
//
// Exit codes: 0 success, 1 usage error, 10 + ErrorKind for library failures.
// Failures print one JSON error record to stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrvfl/data.hpp"
#include "hrvfl/error.hpp"
#include "hrvfl/experiment.hpp"
#include "hrvfl/loss_curve.hpp"
#include "hrvfl/model.hpp"
#include "hrvfl/model_io.hpp"
#include "hrvfl/rng.hpp"
#include "hrvfl/summary.hpp"

namespace {

using namespace hrvfl;

struct CsvOptions {
  std::string path;
  std::string label_column = "-1";
  bool header = false;
  std::string delimiter = ",";

  void add_to(CLI::App* app) {
    app->add_option("--data", path, "CSV file")->required()->check(CLI::ExistingFile);
    app->add_option("--label-column", label_column, "label column: index (negative counts from the end) or header name");
    app->add_flag("--header", header, "first row is a header");
    app->add_option("--delimiter", delimiter, "field delimiter");
  }

  CsvSchema schema() const {
    CsvSchema s;
    s.header = header;
    if (delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
    s.delimiter = delimiter[0];
    try {
      std::size_t used = 0;
      const long idx = std::stol(label_column, &used);
      if (used != label_column.size()) throw std::invalid_argument("name");
      s.label_index = idx;
    } catch (const std::logic_error&) {
      s.label_name = label_column;
    }
    return s;
  }
};

struct TrainOptions {
  CsvOptions csv;
  std::string loss = "hawkeye";
  double C = 1.0;
  double lambda = 1.0;
  double a = 1.0;
  double epsilon = 0.0;
  std::size_t hidden = 100;
  std::string activation = "sigmoid";
  double weight_scale = 1.0;
  bool no_direct_links = false;
  std::uint64_t seed = 0;
  NAGConfig nag{};
  bool warm_start = false;
  bool scale_lr = false;
  bool no_normalize = false;
  std::string out;
};

void add_nag_options(CLI::App* app, NAGConfig& nag) {
  app->add_option("--momentum", nag.momentum, "NAG momentum / look-ahead coefficient");
  app->add_option("--lr", nag.initial_lr, "initial learning rate");
  app->add_option("--decay", nag.decay, "learning-rate decay factor");
  app->add_option("--max-iters", nag.max_iters, "iteration cap");
  app->add_option("--tol", nag.tol, "step-norm tolerance");
  app->add_option("--batch", nag.batch_size, "mini-batch size (0 = full batch)");
}

void run_train(const TrainOptions& o) {
  Dataset ds = load_csv(o.csv.path, o.csv.schema(), std::filesystem::path(o.csv.path).stem().string());
  ds.validate();
  std::optional<NormStats> norm;
  if (!o.no_normalize) {
    norm = fit_minmax(ds.X);
    ds.X = norm->apply(ds.X);
  }
  ModelConfig cfg;
  cfg.C = o.C;
  if (o.loss == "hawkeye") cfg.loss = {LossKind::hawkeye, {o.lambda, o.a, o.epsilon}};
  else if (o.loss == "squared") cfg.loss = {LossKind::squared, {}};
  else throw ConfigError("--loss must be 'hawkeye' or 'squared'");
  cfg.features = {o.hidden, parse_activation(o.activation), o.weight_scale, derive_seed(o.seed, hash_string("features"))};
  cfg.direct_links = !o.no_direct_links;
  cfg.nag = o.nag;
  cfg.nag.seed = derive_seed(o.seed, hash_string("sampler"));
  cfg.warm_start = o.warm_start;
  cfg.scale_lr = o.scale_lr;

  TrainedModel model = fit(ds.X, ds.y, cfg);
  model.labels = ds.labels;
  const double acc = accuracy(predict(model, ds.X), ds.y);
  save_model({model, norm}, o.out);

  nlohmann::ordered_json j;
  j["model"] = o.out;
  j["train_accuracy"] = acc;
  j["training"] = model.report ? model.report->to_record() : "closed_form";
  std::cout << j.dump() << '\n';
}

void run_eval(const std::string& model_path, const CsvOptions& csv, const std::string& predictions) {
  const ModelBundle bundle = load_model(model_path);
  CsvSchema schema = csv.schema();
  schema.labels = bundle.model.labels;
  Dataset ds = load_csv(csv.path, schema);
  if (bundle.normalization) ds.X = bundle.normalization->apply(ds.X);
  const Vector pred = predict(bundle.model, ds.X);
  if (!predictions.empty()) {
    std::ofstream out(predictions);
    if (!out) throw IoError("cannot write '" + predictions + "'");
    for (Index i = 0; i < pred.size(); ++i) out << bundle.model.labels.original(pred(i)) << '\n';
  }
  nlohmann::ordered_json j;
  j["data"] = csv.path;
  j["n"] = ds.rows();
  j["accuracy"] = accuracy(pred, ds.y);
  std::cout << j.dump() << '\n';
}

void finish_experiment(const std::vector<ResultRow>& rows, const std::string& output) {
  if (!output.empty()) write_output_dir(rows, output);
  bool any = false;
  for (const auto& r : rows) {
    if (!r.error.empty()) std::cerr << "error: " << r.dataset << " " << r.model << ": " << r.error << '\n';
    else any = true;
  }
  if (any) std::cout << render_table(summarize(rows));
}

void run_bench(const std::string& config_path, const std::string& output_override) {
  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open '" + config_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const auto base = std::filesystem::absolute(config_path).parent_path().string();
  ExperimentSpec spec = parse_experiment_spec(text.str(), base);
  if (!output_override.empty()) spec.output_path = output_override;
  if (spec.datasets.empty()) throw ConfigError("experiment lists no datasets");
  finish_experiment(run_experiment(spec), spec.output_path);
}

struct SweepOptions {
  CsvOptions csv;
  std::vector<std::string> models{"hrvfl", "rvfl", "rvfl_wodl"};
  std::vector<double> rates{0.0, 0.05, 0.10, 0.20, 0.30, 0.40};
  std::vector<double> C{1.0};
  std::vector<double> lambda{1.0};
  std::vector<double> a{1.0};
  std::vector<double> epsilon{0.0};
  std::vector<std::size_t> hidden{100};
  std::vector<std::string> activation{"sigmoid"};
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  NAGConfig nag{};
  bool warm_start = false;
  bool scale_lr = false;
  std::string output;
};

void run_noise_sweep(const SweepOptions& o) {
  ExperimentSpec spec;
  spec.datasets.push_back({std::filesystem::path(o.csv.path).stem().string(), o.csv.path, o.csv.schema()});
  spec.families.clear();
  for (const auto& m : o.models) spec.families.push_back(parse_family(m));
  spec.grid.C = o.C;
  spec.grid.lambda = o.lambda;
  spec.grid.a = o.a;
  spec.grid.epsilon = o.epsilon;
  spec.grid.hidden = o.hidden;
  spec.grid.activation.clear();
  for (const auto& act : o.activation) spec.grid.activation.push_back(parse_activation(act));
  spec.folds = o.folds;
  spec.noise_rates = o.rates;
  spec.master_seed = o.seed;
  spec.nag = o.nag;
  spec.warm_start = o.warm_start;
  spec.scale_lr = o.scale_lr;
  spec.output_path = o.output;
  finish_experiment(run_experiment(spec), spec.output_path);
}

HLossParams parse_triple(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::logic_error&) {
      throw ConfigError("--params expects lambda,a,epsilon; got '" + text + "'");
    }
  }
  if (v.size() != 3) throw ConfigError("--params expects lambda,a,epsilon; got '" + text + "'");
  HLossParams p{v[0], v[1], v[2]};
  p.validate();
  return p;
}

void apply_thread_env() {
  if (const char* env = std::getenv("HRVFL_THREADS")) {
    const int n = std::atoi(env);
    if (n < 1) throw ConfigError("HRVFL_THREADS must be a positive integer");
    omp_set_num_threads(n);
  }
}

int report_error(const Error& e) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    if (pe->row() != ParseError::npos) j["error"]["row"] = pe->row();
    if (pe->column() != ParseError::npos) j["error"]["column"] = pe->column();
  }
  std::cerr << j.dump() << '\n';
  return 10 + static_cast<int>(e.kind());
}

int report_other(const char* kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-RVFL: random vector functional link networks with the HawkEye loss"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "fit one model and save it");
  train.csv.add_to(train_cmd);
  train_cmd->add_option("--loss", train.loss, "hawkeye or squared");
  train_cmd->add_option("-C,--C", train.C, "regularization trade-off");
  train_cmd->add_option("--lambda", train.lambda, "HawkEye bound");
  train_cmd->add_option("--a", train.a, "HawkEye shape");
  train_cmd->add_option("--epsilon", train.epsilon, "insensitive-zone half-width");
  train_cmd->add_option("--hidden", train.hidden, "hidden nodes");
  train_cmd->add_option("--activation", train.activation, "sigmoid, relu or tanh");
  train_cmd->add_option("--weight-scale", train.weight_scale, "random weight range");
  train_cmd->add_flag("--no-direct-links", train.no_direct_links, "drop the input-to-output links (RVFLwoDL)");
  train_cmd->add_option("--seed", train.seed, "master seed");
  add_nag_options(train_cmd, train.nag);
  train_cmd->add_flag("--warm-start", train.warm_start, "start NAG from the ridge solution");
  train_cmd->add_flag("--scale-lr", train.scale_lr, "divide --lr by the gradient Lipschitz bound");
  train_cmd->add_flag("--no-normalize", train.no_normalize, "skip min-max scaling");
  train_cmd->add_option("--out", train.out, "model file")->required();

  CsvOptions eval_csv;
  std::string eval_model;
  std::string eval_predictions;
  auto* eval_cmd = app.add_subcommand("eval", "score a CSV with a saved model");
  eval_cmd->add_option("--model", eval_model, "model file")->required()->check(CLI::ExistingFile);
  eval_csv.add_to(eval_cmd);
  eval_cmd->add_option("--predictions", eval_predictions, "write predicted labels here");

  std::string bench_config;
  std::string bench_output;
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment description (JSON)");
  bench_cmd->add_option("config", bench_config, "experiment file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--output", bench_output, "output directory (overrides the file)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("noise-sweep", "fixed grid across label-noise rates");
  sweep.csv.add_to(sweep_cmd);
  sweep_cmd->add_option("--models", sweep.models, "model families")->delimiter(',');
  sweep_cmd->add_option("--rates", sweep.rates, "noise rates")->delimiter(',');
  sweep_cmd->add_option("-C,--C", sweep.C)->delimiter(',');
  sweep_cmd->add_option("--lambda", sweep.lambda)->delimiter(',');
  sweep_cmd->add_option("--a", sweep.a)->delimiter(',');
  sweep_cmd->add_option("--epsilon", sweep.epsilon)->delimiter(',');
  sweep_cmd->add_option("--hidden", sweep.hidden)->delimiter(',');
  sweep_cmd->add_option("--activation", sweep.activation)->delimiter(',');
  sweep_cmd->add_option("--folds", sweep.folds);
  sweep_cmd->add_option("--seed", sweep.seed);
  add_nag_options(sweep_cmd, sweep.nag);
  sweep_cmd->add_flag("--warm-start", sweep.warm_start, "start NAG from the ridge solution");
  sweep_cmd->add_flag("--scale-lr", sweep.scale_lr, "divide --lr by the gradient Lipschitz bound");
  sweep_cmd->add_option("--output", sweep.output, "output directory");

  std::vector<std::string> curve_params{"1,1,0.5"};
  double curve_from = -5;
  double curve_to = 5;
  std::size_t curve_points = 1001;
  std::string curve_out;
  auto* curve_cmd = app.add_subcommand("loss-curve", "emit (x, loss, grad) samples as CSV");
  curve_cmd->add_option("--params", curve_params, "lambda,a,epsilon (repeatable)");
  curve_cmd->add_option("--from", curve_from);
  curve_cmd->add_option("--to", curve_to);
  curve_cmd->add_option("--points", curve_points);
  curve_cmd->add_option("--out", curve_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_other("usage", e.what(), 2);
  }

  try {
    apply_thread_env();
    if (*train_cmd) run_train(train);
    else if (*eval_cmd) run_eval(eval_model, eval_csv, eval_predictions);
    else if (*bench_cmd) run_bench(bench_config, bench_output);
    else if (*sweep_cmd) run_noise_sweep(sweep);
    else if (*curve_cmd) {
      std::vector<HLossParams> params;
      for (const auto& p : curve_params) params.push_back(parse_triple(p));
      if (curve_out.empty()) {
        write_loss_curves(params, curve_from, curve_to, curve_points, std::cout);
      } else {
        std::ofstream out(curve_out);
        if (!out) throw IoError("cannot write '" + curve_out + "'");
        write_loss_curves(params, curve_from, curve_to, curve_points, out);
      }
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    return report_other("internal", e.what(), 1);
  }
  return 0;
}
