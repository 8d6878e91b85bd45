#include "hrvfl/kernels.hpp"

namespace hrvfl::kernels::serial {

Matrix hidden_layer(const Matrix& X, const Matrix& W, const Vector& b, Activation act) {
  Matrix H(X.rows(), W.cols());
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < W.cols(); ++j) {
      double z = b(j);
      for (Index k = 0; k < X.cols(); ++k) z += X(i, k) * W(k, j);
      H(i, j) = activate(z, act);
    }
  }
  return H;
}

Vector scores(const Matrix& T, const Vector& beta) {
  Vector out(T.rows());
  for (Index i = 0; i < T.rows(); ++i) {
    double s = 0;
    for (Index j = 0; j < T.cols(); ++j) s += T(i, j) * beta(j);
    out(i) = s;
  }
  return out;
}

double loss_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss) {
  const Vector s = scores(T, beta);
  double total = 0;
  for (Index i = 0; i < T.rows(); ++i) total += loss.value(s(i) - y(i));
  return total;
}

Vector loss_grad_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss) {
  const Vector s = scores(T, beta);
  Vector g = Vector::Zero(T.cols());
  for (Index i = 0; i < T.rows(); ++i) {
    const double w = loss.grad(s(i) - y(i));
    if (w == 0) continue;
    for (Index j = 0; j < T.cols(); ++j) g(j) += w * T(i, j);
  }
  return g;
}

}  // namespace hrvfl::kernels::serial
