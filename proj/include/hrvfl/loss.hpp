#pragma once

#include <span>

namespace hrvfl {

/// Shape parameters of the HawkEye loss.
///
///   lambda   asymptotic bound of the loss value
///   a        shape (steepness) parameter
///   epsilon  half-width of the zero-loss insensitive zone; 0 disables the zone
struct HLossParams {
  double lambda = 1.0;
  double a = 1.0;
  double epsilon = 0.0;

  /// Throws ConfigError unless lambda > 0, a > 0 and epsilon >= 0 (all finite).
  void validate() const;
  bool operator==(const HLossParams&) const = default;
};

/// HawkEye loss of a residual x:
///   0                                  for |x| <= epsilon
///   lambda * (1 - (a t + 1) exp(-a t))  with t = |x| - epsilon otherwise.
/// Always in [0, lambda). Throws DomainError for non-finite x.
double hloss_value(double x, const HLossParams& p);

/// Derivative of hloss_value: sign(x) * lambda a^2 t exp(-a t), zero on the
/// insensitive zone. Peaks at |x| = epsilon + 1/a with magnitude lambda a / e.
double hloss_grad(double x, const HLossParams& p);

double sqloss_value(double x);
double sqloss_grad(double x);

/// Elementwise maps; identical to calling the scalar form on each entry.
void hloss_value(std::span<const double> x, std::span<double> out, const HLossParams& p);
void hloss_grad(std::span<const double> x, std::span<double> out, const HLossParams& p);

enum class LossKind { hawkeye, squared };

/// Loss selector used by the training kernels.
struct Loss {
  LossKind kind = LossKind::hawkeye;
  HLossParams hawkeye{};

  double value(double x) const { return kind == LossKind::hawkeye ? hloss_value(x, hawkeye) : sqloss_value(x); }
  double grad(double x) const { return kind == LossKind::hawkeye ? hloss_grad(x, hawkeye) : sqloss_grad(x); }
};

}  // namespace hrvfl
