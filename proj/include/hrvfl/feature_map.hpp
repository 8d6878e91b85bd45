#pragma once

#include <cstddef>
#include <cstdint>

#include "hrvfl/activation.hpp"
#include "hrvfl/types.hpp"

namespace hrvfl {

struct FeatureMapConfig {
  std::size_t hidden_nodes = 100;
  Activation activation = Activation::sigmoid;
  /// Weights are drawn from U[-weight_scale, weight_scale], biases from U[0, weight_scale].
  double weight_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Frozen random input-to-hidden projection of an RVFL network.
///
/// Draw order: W is filled row by row (input feature outer, hidden node inner),
/// then b, all from one Rng seeded with cfg.seed.
class FeatureMap {
 public:
  static FeatureMap init(std::size_t input_dim, const FeatureMapConfig& cfg);
  /// Rebuilds a map from stored parameters (model loading).
  static FeatureMap from_parts(Matrix weights, Vector biases, Activation act);

  Index input_dim() const noexcept { return weights_.rows(); }
  Index hidden_nodes() const noexcept { return weights_.cols(); }
  Activation activation() const noexcept { return activation_; }
  const Matrix& weights() const noexcept { return weights_; }
  const Vector& biases() const noexcept { return biases_; }

  /// act(X W + 1 b^T).
  Matrix hidden(const Matrix& X) const;

  /// Width of the design matrix produced by build_T.
  Index output_dim(bool direct_links) const noexcept {
    return direct_links ? input_dim() + hidden_nodes() : hidden_nodes();
  }

 private:
  FeatureMap(Matrix w, Vector b, Activation act);

  Matrix weights_;
  Vector biases_;
  Activation activation_;
};

/// Design matrix T = [X | H] with direct links, or just H without them
/// (the RVFLwoDL / ELM variant). The first m columns copy X bit for bit.
Matrix build_T(const Matrix& X, const FeatureMap& fm, bool direct_links = true);

}  // namespace hrvfl
