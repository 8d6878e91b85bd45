#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "hrvfl/types.hpp"

namespace hrvfl {

/// Nesterov accelerated gradient settings.
///
/// The look-ahead coefficient is the momentum coefficient: the gradient is
/// evaluated at beta + momentum * v.
struct NAGConfig {
  double momentum = 0.9;
  double initial_lr = 0.01;
  /// Per-step learning-rate update: lr <- lr * exp(-decay * t), t = 1, 2, ...
  double decay = 1e-4;
  std::size_t max_iters = 1000;
  /// Stop once ||beta_{t+1} - beta_t||_2 < tol.
  double tol = 1e-6;
  /// Mini-batch size; 0 means the full batch.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NAGState {
  Vector beta;
  Vector velocity;
  double lr = 0;
  /// Index of the next step; starts at 1.
  std::size_t iter = 1;

  static NAGState initial(Vector beta0, const NAGConfig& cfg);
};

enum class StopReason { tolerance, max_iters };

const char* to_string(StopReason r) noexcept;

struct ConvergenceReport {
  StopReason reason = StopReason::max_iters;
  std::size_t iters = 0;
  double final_step_norm = 0;
  double final_lr = 0;

  /// One-line record: reason=<r> iters=<n> final_step_norm=<x> final_lr=<x>
  std::string to_record() const;
  static ConvergenceReport from_record(const std::string& line);

  bool operator==(const ConvergenceReport&) const = default;
};

using GradFn = std::function<Vector(const Vector&)>;
/// Gradient over a subset of sample indices; an empty span means all samples.
using BatchGradFn = std::function<Vector(const Vector&, std::span<const std::size_t>)>;

/// One NAG step:
///   look = beta + r v;  g = grad(look);  v' = r v - lr g;  beta' = beta + v';
///   lr' = lr exp(-decay t);  t' = t + 1.
/// Throws DivergenceError if g or the new iterate is not finite.
NAGState nag_step(const NAGState& state, const GradFn& grad, const NAGConfig& cfg);

struct NAGResult {
  Vector beta;
  ConvergenceReport report;
};

/// Runs nag_step until the step norm drops below cfg.tol or cfg.max_iters
/// steps were taken. With batch_size < n_samples a fresh batch is drawn
/// uniformly without replacement before every step.
NAGResult nag_minimize(const BatchGradFn& grad, const Vector& init, std::size_t n_samples, const NAGConfig& cfg);

}  // namespace hrvfl
