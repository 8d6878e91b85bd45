#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hrvfl/data.hpp"
#include "hrvfl/model.hpp"

namespace hrvfl {

/// Model file format version written by save_model.
inline constexpr int kModelFormatVersion = 1;

/// A trained model plus the input scaling it was trained under.
struct ModelBundle {
  TrainedModel model;
  std::optional<NormStats> normalization;
};

/// JSON record with config, RNG identity, W, b, beta, label mapping and the
/// optional normalization. Doubles are written in shortest round-trip form,
/// so load(save(m)) reproduces every parameter bit for bit.
std::string model_to_json(const ModelBundle& bundle);
ModelBundle model_from_json(const std::string& text);

void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(const std::string& path);

}  // namespace hrvfl
