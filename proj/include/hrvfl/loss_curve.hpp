#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "hrvfl/loss.hpp"

namespace hrvfl {

struct CurvePoint {
  double x;
  double value;
  double grad;
};

/// `points` evenly spaced samples of the HawkEye loss and its derivative on
/// [lo, hi], endpoints included.
std::vector<CurvePoint> loss_curve(const HLossParams& p, double lo, double hi, std::size_t points);

/// CSV with header "lambda,a,epsilon,x,loss,grad", one block per parameter set.
void write_loss_curves(std::span<const HLossParams> params, double lo, double hi, std::size_t points, std::ostream& out);

}  // namespace hrvfl
