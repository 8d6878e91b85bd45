#pragma once

#include <Eigen/Dense>

namespace hrvfl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace hrvfl
