#include "hrvfl/loss.hpp"

#include <cmath>
#include <string>

#include "hrvfl/error.hpp"

namespace hrvfl {

namespace {

void require_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("loss evaluated at non-finite residual " + std::to_string(x));
}

void require_same_size(std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw ShapeError("loss map: input and output sizes differ");
}

}  // namespace

void HLossParams::validate() const {
  if (!(std::isfinite(lambda) && lambda > 0)) throw ConfigError("hloss: lambda must be a positive finite number");
  if (!(std::isfinite(a) && a > 0)) throw ConfigError("hloss: a must be a positive finite number");
  if (!(std::isfinite(epsilon) && epsilon >= 0)) throw ConfigError("hloss: epsilon must be a non-negative finite number");
}

double hloss_value(double x, const HLossParams& p) {
  require_finite(x);
  const double t = std::fabs(x) - p.epsilon;
  if (t <= 0) return 0.0;
  // exp(-a t) underflows to 0 for large t, so the product stays finite and the
  // result approaches lambda from below.
  const double at = p.a * t;
  const double v = p.lambda * (1.0 - (at + 1.0) * std::exp(-at));
  // The exact value is strictly below lambda; keep that true after rounding.
  return std::fmin(std::fmax(v, 0.0), std::nextafter(p.lambda, 0.0));
}

double hloss_grad(double x, const HLossParams& p) {
  require_finite(x);
  const double t = std::fabs(x) - p.epsilon;
  if (t <= 0) return 0.0;
  const double g = p.lambda * p.a * p.a * t * std::exp(-p.a * t);
  return x < 0 ? -g : g;
}

double sqloss_value(double x) {
  require_finite(x);
  return x * x;
}

double sqloss_grad(double x) {
  require_finite(x);
  return 2.0 * x;
}

void hloss_value(std::span<const double> x, std::span<double> out, const HLossParams& p) {
  require_same_size(x, out);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = hloss_value(x[i], p);
}

void hloss_grad(std::span<const double> x, std::span<double> out, const HLossParams& p) {
  require_same_size(x, out);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = hloss_grad(x[i], p);
}

}  // namespace hrvfl
