#include <benchmark/benchmark.h>

#include "hrvfl/data.hpp"
#include "hrvfl/feature_map.hpp"
#include "hrvfl/kernels.hpp"
#include "hrvfl/model.hpp"
#include "hrvfl/rng.hpp"

using namespace hrvfl;

namespace {

struct Problem {
  Matrix X;
  FeatureMap fm;
  Matrix T;
  Vector y;
  Vector beta;
};

Problem make_problem(Index n, std::size_t hidden) {
  const Dataset ds = make_two_gaussians(static_cast<std::size_t>(n), 30, 2.0, 1);
  Problem p{ds.X, FeatureMap::init(30, {hidden, Activation::sigmoid, 1.0, 2}), {}, ds.y, {}};
  p.T = build_T(p.X, p.fm);
  Rng rng(3);
  p.beta.resize(p.T.cols());
  for (Index j = 0; j < p.beta.size(); ++j) p.beta(j) = rng.uniform(-0.1, 0.1);
  return p;
}

const Loss kLoss{LossKind::hawkeye, {1, 1, 0.1}};

void BM_HiddenSerial(benchmark::State& state) {
  const Problem p = make_problem(state.range(0), 200);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::serial::hidden_layer(p.X, p.fm.weights(), p.fm.biases(), Activation::sigmoid));
}

void BM_HiddenParallel(benchmark::State& state) {
  const Problem p = make_problem(state.range(0), 200);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::parallel::hidden_layer(p.X, p.fm.weights(), p.fm.biases(), Activation::sigmoid));
}

void BM_GradSerial(benchmark::State& state) {
  const Problem p = make_problem(state.range(0), 200);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::loss_grad_sum(p.T, p.y, p.beta, kLoss));
}

void BM_GradParallel(benchmark::State& state) {
  const Problem p = make_problem(state.range(0), 200);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::loss_grad_sum(p.T, p.y, p.beta, kLoss));
}

void BM_FitHrvfl(benchmark::State& state) {
  const Problem p = make_problem(state.range(0), 100);
  ModelConfig cfg;
  cfg.loss = kLoss;
  cfg.features = {100, Activation::sigmoid, 1.0, 2};
  cfg.scale_lr = true;
  cfg.nag.initial_lr = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(fit_hrvfl(p.X, p.y, cfg));
}

void BM_FitRidge(benchmark::State& state) {
  const Problem p = make_problem(state.range(0), 100);
  ModelConfig cfg;
  cfg.loss.kind = LossKind::squared;
  cfg.features = {100, Activation::sigmoid, 1.0, 2};
  for (auto _ : state) benchmark::DoNotOptimize(fit_ridge(p.X, p.y, cfg));
}

}  // namespace

BENCHMARK(BM_HiddenSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_HiddenParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_GradSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_GradParallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_FitHrvfl)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitRidge)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
