#include "hrvfl/feature_map.hpp"

#include <cmath>
#include <string>

#include "hrvfl/error.hpp"
#include "hrvfl/kernels.hpp"
#include "hrvfl/rng.hpp"

namespace hrvfl {

void FeatureMapConfig::validate() const {
  if (hidden_nodes < 1) throw ConfigError("feature map: hidden_nodes must be at least 1");
  if (!(std::isfinite(weight_scale) && weight_scale > 0)) throw ConfigError("feature map: weight_scale must be positive");
}

FeatureMap::FeatureMap(Matrix w, Vector b, Activation act)
    : weights_(std::move(w)), biases_(std::move(b)), activation_(act) {}

FeatureMap FeatureMap::init(std::size_t input_dim, const FeatureMapConfig& cfg) {
  if (input_dim == 0) throw ConfigError("feature map: input dimension must be at least 1");
  cfg.validate();
  const auto m = static_cast<Index>(input_dim);
  const auto h = static_cast<Index>(cfg.hidden_nodes);
  Rng rng(cfg.seed);
  Matrix w(m, h);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < h; ++j) w(i, j) = rng.uniform(-cfg.weight_scale, cfg.weight_scale);
  Vector b(h);
  for (Index j = 0; j < h; ++j) b(j) = rng.uniform(0.0, cfg.weight_scale);
  return FeatureMap(std::move(w), std::move(b), cfg.activation);
}

FeatureMap FeatureMap::from_parts(Matrix weights, Vector biases, Activation act) {
  if (weights.rows() < 1 || weights.cols() < 1) throw ShapeError("feature map: empty weight matrix");
  if (biases.size() != weights.cols()) throw ShapeError("feature map: bias length does not match hidden nodes");
  if (!weights.allFinite() || !biases.allFinite()) throw DomainError("feature map: non-finite parameters");
  return FeatureMap(std::move(weights), std::move(biases), act);
}

Matrix FeatureMap::hidden(const Matrix& X) const {
  if (X.cols() != input_dim()) {
    throw ShapeError("feature map expects " + std::to_string(input_dim()) + " columns, got " +
                     std::to_string(X.cols()));
  }
  return kernels::parallel::hidden_layer(X, weights_, biases_, activation_);
}

Matrix build_T(const Matrix& X, const FeatureMap& fm, bool direct_links) {
  if (!X.allFinite()) throw DomainError("build_T: input contains non-finite values");
  Matrix H = fm.hidden(X);
  if (!direct_links) return H;
  Matrix T(X.rows(), X.cols() + H.cols());
  T.leftCols(X.cols()) = X;
  T.rightCols(H.cols()) = H;
  return T;
}

}  // namespace hrvfl
