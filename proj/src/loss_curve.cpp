#include "hrvfl/loss_curve.hpp"

#include <cmath>

#include <cstdio>
#include <ostream>

#include "hrvfl/error.hpp"

namespace hrvfl {

std::vector<CurvePoint> loss_curve(const HLossParams& p, double lo, double hi, std::size_t points) {
  p.validate();
  if (points < 2) throw ConfigError("loss curve: need at least two points");
  if (!(lo < hi)) throw ConfigError("loss curve: empty range");
  std::vector<CurvePoint> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = std::lerp(lo, hi, static_cast<double>(i) / static_cast<double>(points - 1));
    out.push_back({x, hloss_value(x, p), hloss_grad(x, p)});
  }
  return out;
}

void write_loss_curves(std::span<const HLossParams> params, double lo, double hi, std::size_t points, std::ostream& out) {
  out << "lambda,a,epsilon,x,loss,grad\n";
  char buf[160];
  for (const auto& p : params) {
    for (const auto& c : loss_curve(p, lo, hi, points)) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.lambda, p.a, p.epsilon, c.x, c.value,
                    c.grad);
      out << buf;
    }
  }
}

}  // namespace hrvfl
