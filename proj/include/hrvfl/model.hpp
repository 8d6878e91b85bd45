#pragma once

#include <optional>
#include <span>

#include "hrvfl/feature_map.hpp"
#include "hrvfl/labels.hpp"
#include "hrvfl/loss.hpp"
#include "hrvfl/optimizer.hpp"
#include "hrvfl/types.hpp"

namespace hrvfl {

struct ModelConfig {
  /// Weight of the data term: J = 0.5 ||beta||^2 + (C / 2) sum_i L(T_i beta - y_i).
  double C = 1.0;
  Loss loss{};
  FeatureMapConfig features{};
  bool direct_links = true;
  /// Used only when loss.kind is hawkeye.
  NAGConfig nag{};
  /// Start NAG from the closed-form ridge solution instead of zero.
  bool warm_start = false;
  /// Use nag.initial_lr / Lip as the first step, where
  /// Lip = 1 + (C / 2) max|L''| ||T||_2^2 bounds the gradient's Lipschitz constant.
  bool scale_lr = false;

  void validate() const;
};

struct TrainedModel {
  Vector beta;
  FeatureMap feature_map;
  ModelConfig config;
  /// Empty for closed-form (ridge) fits.
  std::optional<ConvergenceReport> report;
  LabelMapping labels{};

  Index input_dim() const noexcept { return feature_map.input_dim(); }
};

/// J(beta) = 0.5 ||beta||^2 + (C / 2) sum_i L(T_i beta - y_i).
double objective(const Vector& beta, const Matrix& T, const Vector& y, const ModelConfig& cfg);

/// beta + (C / 2) sum_i L'(T_i beta - y_i) T_i^T, summed over `batch` (all rows
/// when empty). The regularizer term is added once, not per sample.
Vector objective_grad(const Vector& beta, const Matrix& T, const Vector& y, const ModelConfig& cfg,
                      std::span<const std::size_t> batch = {});

/// Closed-form minimizer of the squared-loss objective:
/// beta = (T^T T + I / C)^{-1} T^T y, via a Cholesky solve.
Vector solve_ridge(const Matrix& T, const Vector& y, double C);

/// Largest eigenvalue of T^T T.
double gram_spectral_norm(const Matrix& T);

/// 1 + (C / 2) max|L''| gram_norm, with max|L''| = lambda a^2 (HawkEye) or 2 (squared).
double gradient_lipschitz(const ModelConfig& cfg, double gram_norm);

struct OutputFit {
  Vector beta;
  std::optional<ConvergenceReport> report;
};

/// Trains output weights on a prebuilt design matrix. Dispatches on the loss:
/// squared -> closed form, hawkeye -> NAG. `gram_norm` may carry a precomputed
/// gram_spectral_norm(T) for scale_lr; it is computed when absent.
OutputFit fit_output_weights(const Matrix& T, const Vector& y, const ModelConfig& cfg,
                             std::optional<double> gram_norm = std::nullopt);

/// H-RVFL: HawkEye loss minimized with NAG. Requires cfg.loss.kind == hawkeye.
TrainedModel fit_hrvfl(const Matrix& X, const Vector& y, const ModelConfig& cfg);
/// Squared-loss RVFL (or RVFLwoDL when direct_links is false) in closed form.
TrainedModel fit_ridge(const Matrix& X, const Vector& y, const ModelConfig& cfg);
/// Either of the above, chosen by cfg.loss.kind.
TrainedModel fit(const Matrix& X, const Vector& y, const ModelConfig& cfg);

Vector decision_scores(const TrainedModel& model, const Matrix& X);
/// sign(T beta) with sign(0) = +1.
Vector predict(const TrainedModel& model, const Matrix& X);
Vector sign_labels(const Vector& scores);

/// Fraction of matching entries.
double accuracy(const Vector& predicted, const Vector& truth);

/// Throws TrainingError unless every entry is -1 or +1 and both occur.
void check_binary_labels(const Vector& y);

}  // namespace hrvfl
