#pragma once

// Data-parallel inner loops of training and prediction.
//
// Two implementations share one interface:
//   serial::   plain row-by-row loops; the reference used by the tests
//   parallel:: OpenMP over fixed-size row chunks with vectorized Eigen blocks
//
// The parallel reductions sum per-chunk partials in chunk order, and the chunk
// size does not depend on the thread count, so results are bit-identical for
// any number of threads. They agree with the serial reference to rounding.

#include "hrvfl/activation.hpp"
#include "hrvfl/loss.hpp"
#include "hrvfl/types.hpp"

namespace hrvfl::kernels {

inline constexpr Index kChunkRows = 64;

namespace serial {

/// H(i, j) = act(sum_k X(i, k) W(k, j) + b(j)).
Matrix hidden_layer(const Matrix& X, const Matrix& W, const Vector& b, Activation act);
/// T * beta.
Vector scores(const Matrix& T, const Vector& beta);
/// sum_i loss(T_i beta - y_i).
double loss_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss);
/// sum_i loss'(T_i beta - y_i) T_i^T.
Vector loss_grad_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss);

}  // namespace serial

namespace parallel {

Matrix hidden_layer(const Matrix& X, const Matrix& W, const Vector& b, Activation act);
Vector scores(const Matrix& T, const Vector& beta);
double loss_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss);
Vector loss_grad_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss);

}  // namespace parallel

}  // namespace hrvfl::kernels
