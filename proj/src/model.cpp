#include "hrvfl/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrvfl/error.hpp"
#include "hrvfl/kernels.hpp"

namespace hrvfl {

namespace {

void check_problem(const Vector& beta, const Matrix& T, const Vector& y) {
  if (beta.size() != T.cols())
    throw ShapeError("beta has " + std::to_string(beta.size()) + " entries, design matrix has " +
                     std::to_string(T.cols()) + " columns");
  if (y.size() != T.rows())
    throw ShapeError("label vector has " + std::to_string(y.size()) + " entries, design matrix has " +
                     std::to_string(T.rows()) + " rows");
}

void check_inputs(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) throw ShapeError("feature rows and label count differ");
  if (X.rows() < 2) throw TrainingError("need at least two training samples");
  if (!X.allFinite()) throw DomainError("training features contain non-finite values");
  check_binary_labels(y);
}

}  // namespace

void ModelConfig::validate() const {
  if (!(std::isfinite(C) && C > 0)) throw ConfigError("model: C must be positive");
  if (loss.kind == LossKind::hawkeye) {
    loss.hawkeye.validate();
    nag.validate();
  }
  features.validate();
}

void check_binary_labels(const Vector& y) {
  bool neg = false;
  bool pos = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) == -1.0) neg = true;
    else if (y(i) == 1.0) pos = true;
    else throw TrainingError("labels must be -1 or +1");
  }
  if (!(neg && pos)) throw TrainingError("training labels contain a single class");
}

double objective(const Vector& beta, const Matrix& T, const Vector& y, const ModelConfig& cfg) {
  check_problem(beta, T, y);
  return 0.5 * beta.squaredNorm() + 0.5 * cfg.C * kernels::parallel::loss_sum(T, y, beta, cfg.loss);
}

Vector objective_grad(const Vector& beta, const Matrix& T, const Vector& y, const ModelConfig& cfg,
                      std::span<const std::size_t> batch) {
  check_problem(beta, T, y);
  if (batch.empty()) return beta + 0.5 * cfg.C * kernels::parallel::loss_grad_sum(T, y, beta, cfg.loss);

  const auto k = static_cast<Index>(batch.size());
  Matrix Tb(k, T.cols());
  Vector yb(k);
  for (Index i = 0; i < k; ++i) {
    const auto row = static_cast<Index>(batch[static_cast<std::size_t>(i)]);
    if (row >= T.rows()) throw ShapeError("batch index out of range");
    Tb.row(i) = T.row(row);
    yb(i) = y(row);
  }
  return beta + 0.5 * cfg.C * kernels::parallel::loss_grad_sum(Tb, yb, beta, cfg.loss);
}

Vector solve_ridge(const Matrix& T, const Vector& y, double C) {
  if (y.size() != T.rows()) throw ShapeError("ridge: label count does not match design rows");
  if (!(C > 0)) throw ConfigError("ridge: C must be positive");
  Matrix A = T.transpose() * T;
  A.diagonal().array() += 1.0 / C;
  const Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw LinalgError("ridge: normal matrix is not positive definite");
  Vector beta = llt.solve(T.transpose() * y);
  if (!beta.allFinite()) throw LinalgError("ridge: solve produced non-finite weights");
  return beta;
}

double gram_spectral_norm(const Matrix& T) {
  if (T.size() == 0) return 0.0;
  const Matrix G = T.transpose() * T;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw LinalgError("eigenvalue solve of T^T T failed");
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

double gradient_lipschitz(const ModelConfig& cfg, double gram_norm) {
  const double curvature =
      cfg.loss.kind == LossKind::squared ? 2.0 : cfg.loss.hawkeye.lambda * cfg.loss.hawkeye.a * cfg.loss.hawkeye.a;
  return 1.0 + 0.5 * cfg.C * curvature * gram_norm;
}

OutputFit fit_output_weights(const Matrix& T, const Vector& y, const ModelConfig& cfg,
                             std::optional<double> gram_norm) {
  if (cfg.loss.kind == LossKind::squared) return {solve_ridge(T, y, cfg.C), std::nullopt};

  NAGConfig nag = cfg.nag;
  if (cfg.scale_lr) nag.initial_lr /= gradient_lipschitz(cfg, gram_norm ? *gram_norm : gram_spectral_norm(T));

  Vector init = cfg.warm_start ? solve_ridge(T, y, cfg.C) : Vector::Zero(T.cols());
  const BatchGradFn grad = [&](const Vector& beta, std::span<const std::size_t> batch) {
    return objective_grad(beta, T, y, cfg, batch);
  };
  auto result = nag_minimize(grad, init, static_cast<std::size_t>(T.rows()), nag);
  return {std::move(result.beta), result.report};
}

TrainedModel fit_hrvfl(const Matrix& X, const Vector& y, const ModelConfig& cfg) {
  if (cfg.loss.kind != LossKind::hawkeye) throw ConfigError("fit_hrvfl requires the HawkEye loss");
  return fit(X, y, cfg);
}

TrainedModel fit_ridge(const Matrix& X, const Vector& y, const ModelConfig& cfg) {
  if (cfg.loss.kind != LossKind::squared) throw ConfigError("fit_ridge requires the squared loss");
  return fit(X, y, cfg);
}

TrainedModel fit(const Matrix& X, const Vector& y, const ModelConfig& cfg) {
  cfg.validate();
  check_inputs(X, y);
  FeatureMap fm = FeatureMap::init(static_cast<std::size_t>(X.cols()), cfg.features);
  const Matrix T = build_T(X, fm, cfg.direct_links);
  OutputFit out = fit_output_weights(T, y, cfg);
  return TrainedModel{std::move(out.beta), std::move(fm), cfg, out.report, {}};
}

Vector decision_scores(const TrainedModel& model, const Matrix& X) {
  const Matrix T = build_T(X, model.feature_map, model.config.direct_links);
  if (T.cols() != model.beta.size()) throw ShapeError("model weights do not match the feature map width");
  return kernels::parallel::scores(T, model.beta);
}

Vector sign_labels(const Vector& scores) {
  return scores.unaryExpr([](double s) { return s >= 0 ? 1.0 : -1.0; });
}

Vector predict(const TrainedModel& model, const Matrix& X) { return sign_labels(decision_scores(model, X)); }

double accuracy(const Vector& predicted, const Vector& truth) {
  if (predicted.size() != truth.size()) throw ShapeError("accuracy: size mismatch");
  if (truth.size() == 0) return 0.0;
  Index hits = 0;
  for (Index i = 0; i < truth.size(); ++i) hits += predicted(i) == truth(i) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace hrvfl
