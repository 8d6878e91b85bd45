#include "hrvfl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "hrvfl/error.hpp"
#include "hrvfl/rng.hpp"

namespace hrvfl {

void NAGConfig::validate() const {
  if (!(momentum >= 0 && momentum < 1)) throw ConfigError("nag: momentum must be in [0, 1)");
  if (!(std::isfinite(initial_lr) && initial_lr > 0)) throw ConfigError("nag: initial_lr must be positive");
  if (!(std::isfinite(decay) && decay >= 0)) throw ConfigError("nag: decay must be non-negative");
  if (max_iters < 1) throw ConfigError("nag: max_iters must be at least 1");
  if (!(tol > 0)) throw ConfigError("nag: tol must be positive");
}

NAGState NAGState::initial(Vector beta0, const NAGConfig& cfg) {
  NAGState s;
  s.velocity = Vector::Zero(beta0.size());
  s.beta = std::move(beta0);
  s.lr = cfg.initial_lr;
  s.iter = 1;
  return s;
}

const char* to_string(StopReason r) noexcept { return r == StopReason::tolerance ? "tolerance" : "max_iters"; }

std::string ConvergenceReport::to_record() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "reason=%s iters=%zu final_step_norm=%.17g final_lr=%.17g", to_string(reason), iters,
                final_step_norm, final_lr);
  return buf;
}

ConvergenceReport ConvergenceReport::from_record(const std::string& line) {
  ConvergenceReport r;
  std::istringstream in(line);
  std::string field;
  int seen = 0;
  while (in >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError("convergence record: malformed field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    try {
      if (key == "reason") {
        if (val == "tolerance") r.reason = StopReason::tolerance;
        else if (val == "max_iters") r.reason = StopReason::max_iters;
        else throw ParseError("convergence record: unknown reason '" + val + "'");
      } else if (key == "iters") {
        r.iters = std::stoull(val);
      } else if (key == "final_step_norm") {
        r.final_step_norm = std::stod(val);
      } else if (key == "final_lr") {
        r.final_lr = std::stod(val);
      } else {
        throw ParseError("convergence record: unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ParseError("convergence record: bad value for '" + key + "'");
    }
    ++seen;
  }
  if (seen != 4) throw ParseError("convergence record: expected 4 fields");
  return r;
}

NAGState nag_step(const NAGState& state, const GradFn& grad, const NAGConfig& cfg) {
  const double r = cfg.momentum;
  const Vector look = state.beta + r * state.velocity;
  const Vector g = grad(look);
  if (g.size() != state.beta.size()) throw ShapeError("nag: gradient dimension does not match parameters");
  if (!g.allFinite()) throw DivergenceError("nag: non-finite gradient", state.beta, state.iter);

  NAGState next;
  next.velocity = r * state.velocity - state.lr * g;
  next.beta = state.beta + next.velocity;
  if (!next.beta.allFinite()) throw DivergenceError("nag: non-finite iterate", state.beta, state.iter);
  next.lr = state.lr * std::exp(-cfg.decay * static_cast<double>(state.iter));
  next.iter = state.iter + 1;
  return next;
}

NAGResult nag_minimize(const BatchGradFn& grad, const Vector& init, std::size_t n_samples, const NAGConfig& cfg) {
  cfg.validate();
  const bool mini_batch = cfg.batch_size != 0 && cfg.batch_size < n_samples;
  Rng sampler(cfg.seed);
  std::vector<std::size_t> batch;

  const GradFn step_grad = [&](const Vector& beta) {
    return grad(beta, std::span<const std::size_t>(batch));
  };

  NAGState state = NAGState::initial(init, cfg);
  ConvergenceReport report;
  for (std::size_t step = 1; step <= cfg.max_iters; ++step) {
    if (mini_batch) {
      batch = sample_without_replacement(n_samples, cfg.batch_size, sampler);
      std::sort(batch.begin(), batch.end());
    }
    NAGState next = nag_step(state, step_grad, cfg);
    const double step_norm = next.velocity.norm();
    state = std::move(next);
    report.iters = step;
    report.final_step_norm = step_norm;
    report.final_lr = state.lr;
    if (step_norm < cfg.tol) {
      report.reason = StopReason::tolerance;
      return {std::move(state.beta), report};
    }
  }
  report.reason = StopReason::max_iters;
  return {std::move(state.beta), report};
}

}  // namespace hrvfl
