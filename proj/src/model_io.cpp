#include "hrvfl/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hrvfl/error.hpp"
#include "hrvfl/rng.hpp"

namespace hrvfl {

using nlohmann::ordered_json;

namespace {

ordered_json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector json_vec(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

ordered_json config_json(const ModelConfig& c) {
  ordered_json j;
  j["C"] = c.C;
  j["loss"] = c.loss.kind == LossKind::hawkeye ? "hawkeye" : "squared";
  j["hloss"] = {{"lambda", c.loss.hawkeye.lambda}, {"a", c.loss.hawkeye.a}, {"epsilon", c.loss.hawkeye.epsilon}};
  j["features"] = {{"hidden_nodes", c.features.hidden_nodes},
                   {"activation", std::string(to_string(c.features.activation))},
                   {"weight_scale", c.features.weight_scale},
                   {"seed", c.features.seed}};
  j["direct_links"] = c.direct_links;
  j["nag"] = {{"momentum", c.nag.momentum},   {"initial_lr", c.nag.initial_lr}, {"decay", c.nag.decay},
              {"max_iters", c.nag.max_iters}, {"tol", c.nag.tol},               {"batch_size", c.nag.batch_size},
              {"seed", c.nag.seed}};
  j["warm_start"] = c.warm_start;
  j["scale_lr"] = c.scale_lr;
  return j;
}

ModelConfig json_config(const nlohmann::json& j) {
  ModelConfig c;
  c.C = j.at("C").get<double>();
  const auto loss = j.at("loss").get<std::string>();
  if (loss == "hawkeye") c.loss.kind = LossKind::hawkeye;
  else if (loss == "squared") c.loss.kind = LossKind::squared;
  else throw ParseError("model: unknown loss '" + loss + "'");
  const auto& h = j.at("hloss");
  c.loss.hawkeye = {h.at("lambda").get<double>(), h.at("a").get<double>(), h.at("epsilon").get<double>()};
  const auto& f = j.at("features");
  c.features.hidden_nodes = f.at("hidden_nodes").get<std::size_t>();
  c.features.activation = parse_activation(f.at("activation").get<std::string>());
  c.features.weight_scale = f.at("weight_scale").get<double>();
  c.features.seed = f.at("seed").get<std::uint64_t>();
  c.direct_links = j.at("direct_links").get<bool>();
  const auto& n = j.at("nag");
  c.nag.momentum = n.at("momentum").get<double>();
  c.nag.initial_lr = n.at("initial_lr").get<double>();
  c.nag.decay = n.at("decay").get<double>();
  c.nag.max_iters = n.at("max_iters").get<std::size_t>();
  c.nag.tol = n.at("tol").get<double>();
  c.nag.batch_size = n.at("batch_size").get<std::size_t>();
  c.nag.seed = n.at("seed").get<std::uint64_t>();
  c.warm_start = j.at("warm_start").get<bool>();
  c.scale_lr = j.value("scale_lr", false);
  return c;
}

}  // namespace

std::string model_to_json(const ModelBundle& bundle) {
  const TrainedModel& m = bundle.model;
  const FeatureMap& fm = m.feature_map;
  ordered_json j;
  j["format"] = "hrvfl-model";
  j["version"] = kModelFormatVersion;
  j["rng"] = std::string(Rng::algorithm);
  j["config"] = config_json(m.config);
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(fm.weights().size()));
  for (Index i = 0; i < fm.input_dim(); ++i)
    for (Index k = 0; k < fm.hidden_nodes(); ++k) w.push_back(fm.weights()(i, k));
  j["feature_map"] = {{"input_dim", fm.input_dim()},
                      {"hidden_nodes", fm.hidden_nodes()},
                      {"activation", std::string(to_string(fm.activation()))},
                      {"weights_row_major", w},
                      {"biases", vec_json(fm.biases())}};
  j["beta"] = vec_json(m.beta);
  j["training"] = m.report ? m.report->to_record() : "closed_form";
  j["labels"] = {{"negative", m.labels.negative}, {"positive", m.labels.positive}};
  if (bundle.normalization) {
    j["normalization"] = {{"min", vec_json(bundle.normalization->min)},
                          {"range", vec_json(bundle.normalization->range)}};
  }
  return j.dump(1) + "\n";
}

ModelBundle model_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "hrvfl-model") throw ParseError("model: not an hrvfl model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) throw ParseError("model: unsupported format version " + std::to_string(version));
    if (j.at("rng").get<std::string>() != Rng::algorithm) throw ParseError("model: written with a different RNG");

    const auto& f = j.at("feature_map");
    const auto m = f.at("input_dim").get<Index>();
    const auto h = f.at("hidden_nodes").get<Index>();
    const auto w = f.at("weights_row_major").get<std::vector<double>>();
    if (static_cast<Index>(w.size()) != m * h) throw ParseError("model: weight count does not match dimensions");
    Matrix W(m, h);
    for (Index i = 0; i < m; ++i)
      for (Index k = 0; k < h; ++k) W(i, k) = w[static_cast<std::size_t>(i * h + k)];
    FeatureMap fm =
        FeatureMap::from_parts(std::move(W), json_vec(f.at("biases")), parse_activation(f.at("activation").get<std::string>()));

    ModelConfig cfg = json_config(j.at("config"));
    Vector beta = json_vec(j.at("beta"));
    if (beta.size() != fm.output_dim(cfg.direct_links)) throw ParseError("model: beta length does not match feature map");

    std::optional<ConvergenceReport> report;
    const auto training = j.at("training").get<std::string>();
    if (training != "closed_form") report = ConvergenceReport::from_record(training);

    LabelMapping labels{j.at("labels").at("negative").get<std::string>(), j.at("labels").at("positive").get<std::string>()};

    ModelBundle bundle{TrainedModel{std::move(beta), std::move(fm), cfg, report, labels}, std::nullopt};
    if (j.contains("normalization")) {
      NormStats s{json_vec(j["normalization"].at("min")), json_vec(j["normalization"].at("range"))};
      if (s.min.size() != m || s.range.size() != m) throw ParseError("model: normalization width mismatch");
      bundle.normalization = std::move(s);
    }
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << model_to_json(bundle);
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace hrvfl
