#include "hrvfl/kernels.hpp"

#include <vector>

namespace hrvfl::kernels::parallel {

namespace {

Index chunk_count(Index rows) { return (rows + kChunkRows - 1) / kChunkRows; }

struct ChunkRange {
  Index begin;
  Index size;
};

ChunkRange chunk(Index c, Index rows) {
  const Index begin = c * kChunkRows;
  return {begin, std::min(kChunkRows, rows - begin)};
}

Vector residual_weights(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss, ChunkRange r) {
  Vector xi = T.middleRows(r.begin, r.size) * beta - y.segment(r.begin, r.size);
  for (Index i = 0; i < r.size; ++i) xi(i) = loss.grad(xi(i));
  return xi;
}

}  // namespace

Matrix hidden_layer(const Matrix& X, const Matrix& W, const Vector& b, Activation act) {
  const Index rows = X.rows();
  const Index chunks = chunk_count(rows);
  Matrix H(rows, W.cols());
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const auto r = chunk(c, rows);
    Matrix Z = X.middleRows(r.begin, r.size) * W;
    Z.rowwise() += b.transpose();
    H.middleRows(r.begin, r.size) = Z.unaryExpr([act](double z) { return activate(z, act); });
  }
  return H;
}

Vector scores(const Matrix& T, const Vector& beta) {
  const Index rows = T.rows();
  const Index chunks = chunk_count(rows);
  Vector out(rows);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const auto r = chunk(c, rows);
    out.segment(r.begin, r.size).noalias() = T.middleRows(r.begin, r.size) * beta;
  }
  return out;
}

double loss_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss) {
  const Index rows = T.rows();
  const Index chunks = chunk_count(rows);
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const auto r = chunk(c, rows);
    const Vector xi = T.middleRows(r.begin, r.size) * beta - y.segment(r.begin, r.size);
    double s = 0;
    for (Index i = 0; i < r.size; ++i) s += loss.value(xi(i));
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0;
  for (double p : partial) total += p;
  return total;
}

Vector loss_grad_sum(const Matrix& T, const Vector& y, const Vector& beta, const Loss& loss) {
  const Index rows = T.rows();
  const Index chunks = chunk_count(rows);
  if (chunks == 0) return Vector::Zero(T.cols());
  if (chunks == 1) {
    const Vector w = residual_weights(T, y, beta, loss, chunk(0, rows));
    return T.transpose() * w;
  }
  std::vector<Vector> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const auto r = chunk(c, rows);
    const Vector w = residual_weights(T, y, beta, loss, r);
    partial[static_cast<std::size_t>(c)] = T.middleRows(r.begin, r.size).transpose() * w;
  }
  Vector g = partial.front();
  for (std::size_t c = 1; c < partial.size(); ++c) g += partial[c];
  return g;
}

}  // namespace hrvfl::kernels::parallel
