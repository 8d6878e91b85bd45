// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "hrvfl/data.hpp"
#include "hrvfl/experiment.hpp"
#include "hrvfl/feature_map.hpp"
#include "hrvfl/loss.hpp"
#include "hrvfl/loss_curve.hpp"
#include "hrvfl/model.hpp"
#include "hrvfl/optimizer.hpp"
#include "hrvfl/rng.hpp"

using namespace hrvfl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

HLossParams random_params(Rng& rng) {
  return {std::exp(rng.uniform(std::log(0.1), std::log(10.0))), std::exp(rng.uniform(std::log(0.1), std::log(10.0))),
          rng.uniform(0, 2)};
}

// 1. Insensitive zone, symmetry, boundedness and gradient continuity at +-eps.
Outcome loss_properties() {
  Rng rng(1001);
  std::size_t violations = 0;
  for (int s = 0; s < 10000; ++s) {
    const HLossParams p = random_params(rng);
    const double x = rng.uniform() < 0.2 ? rng.uniform(-p.epsilon, p.epsilon) : rng.uniform(-30, 30);
    const double v = hloss_value(x, p);
    bool ok = true;
    if (std::abs(x) <= p.epsilon) ok = ok && v == 0 && hloss_grad(x, p) == 0;
    ok = ok && std::abs(v - hloss_value(-x, p)) <= 1e-12;
    ok = ok && v >= 0 && v < p.lambda;
    ok = ok && std::abs(hloss_value(1e6, p) - p.lambda) <= 1e-9 && std::abs(hloss_value(-1e6, p) - p.lambda) <= 1e-9;
    // Derivative is continuous at the zone edge: it tends to 0 from outside.
    const double delta = 1e-9;
    const double edge_bound = p.lambda * p.a * p.a * delta * 1.000001;
    ok = ok && std::abs(hloss_grad(p.epsilon + delta, p)) <= edge_bound;
    ok = ok && std::abs(hloss_grad(-p.epsilon - delta, p)) <= edge_bound;
    ok = ok && hloss_grad(p.epsilon, p) == 0 && hloss_grad(-p.epsilon, p) == 0;
    if (!ok) ++violations;
  }
  return {violations == 0, fmt("%zu violations in 10000 samples", violations)};
}

// 2. Finite-difference agreement of hloss_grad and objective_grad.
Outcome gradient_fidelity() {
  Rng rng(1002);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const HLossParams p = random_params(rng);
    for (int k = 0; k < 10; ++k) {
      double x = rng.uniform(-10, 10);
      if (std::abs(std::abs(x) - p.epsilon) < 1e-4) x += 1e-3;
      const double h = 1e-6;
      const double fd = (hloss_value(x + h, p) - hloss_value(x - h, p)) / (2 * h);
      const double g = hloss_grad(x, p);
      worst = std::max(worst, std::abs(g - fd) / std::max(1e-3, std::abs(fd)));
    }

    const Index n = 1 + static_cast<Index>(rng.below(20));
    const Index dim = 1 + static_cast<Index>(rng.below(10));
    Matrix T(n, dim);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < dim; ++j) T(i, j) = rng.uniform(-1, 1);
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = rng.uniform() < 0.5 ? -1 : 1;
    Vector beta(dim);
    for (Index j = 0; j < dim; ++j) beta(j) = rng.uniform(-2, 2);
    ModelConfig cfg;
    cfg.C = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    cfg.loss = {LossKind::hawkeye, p};
    const Vector g = objective_grad(beta, T, y, cfg);
    Vector fd(dim);
    for (Index j = 0; j < dim; ++j) {
      Vector up = beta, down = beta;
      up(j) += 1e-6;
      down(j) -= 1e-6;
      fd(j) = (objective(up, T, y, cfg) - objective(down, T, y, cfg)) / 2e-6;
    }
    worst = std::max(worst, (g - fd).norm() / std::max(1.0, fd.norm()));
  }
  return {worst <= 1e-5, fmt("max relative error %.3g over 100 instances", worst)};
}

// 3. Full-batch NAG on the squared-loss objective reaches the ridge solution.
Outcome oracle_equivalence() {
  Rng rng(1003);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + rng.below(81);
    const std::size_t m = 2 + rng.below(9);
    const std::size_t h = 5 + rng.below(60 - m - 4);
    Matrix X(static_cast<Index>(n), static_cast<Index>(m));
    for (Index i = 0; i < X.rows(); ++i)
      for (Index j = 0; j < X.cols(); ++j) X(i, j) = rng.uniform();
    const FeatureMap fm = FeatureMap::init(m, {h, Activation::sigmoid, 1.0, rng.next()});
    const Matrix T = build_T(X, fm);
    Vector y(static_cast<Index>(n));
    for (Index i = 0; i < y.size(); ++i) y(i) = rng.uniform() < 0.5 ? -1 : 1;

    ModelConfig cfg;
    cfg.C = std::exp(rng.uniform(std::log(0.01), std::log(1.0)));
    cfg.loss.kind = LossKind::squared;
    const double L = gradient_lipschitz(cfg, gram_spectral_norm(T));
    const double kappa = L;  // strong convexity modulus is 1
    cfg.nag = {(std::sqrt(kappa) - 1) / (std::sqrt(kappa) + 1), 1.0 / L, 0.0, 5000, 1e-10, 0, 0};
    const BatchGradFn grad = [&](const Vector& b, std::span<const std::size_t> batch) {
      return objective_grad(b, T, y, cfg, batch);
    };
    const auto res = nag_minimize(grad, Vector::Zero(T.cols()), n, cfg.nag);
    worst = std::max(worst, (res.beta - solve_ridge(T, y, cfg.C)).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-4, fmt("max |beta_nag - beta_ridge|_inf = %.3g over 20 instances", worst)};
}

ExperimentSpec noise_spec(std::uint64_t seed) {
  ExperimentSpec spec;
  spec.families = {ModelFamily::hrvfl, ModelFamily::rvfl};
  spec.grid.C = {0.01, 0.1, 1, 10, 100};
  spec.grid.lambda = {1};
  spec.grid.a = {1};
  spec.grid.epsilon = {0, 0.5};
  spec.grid.hidden = {50};
  spec.folds = 5;
  spec.noise_rates = {0.0, 0.3};
  spec.master_seed = seed;
  spec.scale_lr = true;
  spec.warm_start = true;
  spec.nag.initial_lr = 1.0;
  return spec;
}

// Bayes accuracy Phi(s / 2) = 0.9.
constexpr double kSeparation = 2.5631031310892007;

Dataset noise_data(std::uint64_t seed) {
  return make_two_gaussians(500, 2, kSeparation, derive_seed(seed, hash_string("two_gaussians")), "two_gaussians");
}

double selected_mean(const std::vector<ResultRow>& rows, const std::string& model, double rate) {
  for (const auto& r : rows)
    if (r.selected && r.model == model && r.noise_rate == rate) return r.mean;
  return std::nan("");
}

// 4. Under 30% label flips H-RVFL beats ridge RVFL and degrades less.
Outcome bounded_influence() {
  int acc_wins = 0;
  int drop_wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<Dataset> data{noise_data(seed)};
    const auto rows = run_experiment(noise_spec(seed), data);
    const double h0 = selected_mean(rows, "hrvfl", 0.0), h30 = selected_mean(rows, "hrvfl", 0.3);
    const double r0 = selected_mean(rows, "rvfl", 0.0), r30 = selected_mean(rows, "rvfl", 0.3);
    acc_wins += h30 >= r30;
    drop_wins += (h0 - h30) <= (r0 - r30);
    per_seed += fmt(" [%llu: %.3f/%.3f]", static_cast<unsigned long long>(seed), h30, r30);
  }
  return {acc_wins >= 7 && drop_wins >= 7,
          fmt("accuracy wins %d/10, drop wins %d/10; hrvfl/rvfl at 30%%:", acc_wins, drop_wins) + per_seed};
}

// 5. Breast-cancer spot check with the default grid.
Outcome breast_cancer() {
  ExperimentSpec spec;
  spec.datasets = {{"breast_cancer", std::string(HRVFL_TEST_DATA_DIR) + "/breast_cancer.csv", {}}};
  spec.families = {ModelFamily::hrvfl};
  spec.noise_rates = {0.05, 0.10, 0.20, 0.30, 0.40};
  spec.scale_lr = true;
  spec.warm_start = true;
  spec.nag.initial_lr = 1.0;
  const auto rows = run_experiment(spec);
  double lo = 1, hi = 0;
  std::string per_rate;
  for (double rate : spec.noise_rates) {
    const double m = selected_mean(rows, "hrvfl", rate);
    if (!(m == m)) return {false, "missing result for rate " + std::to_string(rate)};
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    per_rate += fmt(" %g%%:%.4f", rate * 100, m);
  }
  const double spread = 100 * (hi - lo);
  return {lo >= 0.90 && spread <= 3.0, fmt("min %.4f, spread %.2f points;", lo, spread) + per_rate};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 6. Same spec and master seed give byte-identical result files, here also
// across thread counts.
Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "hrvfl_acceptance";
  std::filesystem::remove_all(base);
  const std::vector<Dataset> data{noise_data(3)};
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  write_output_dir(run_experiment(noise_spec(3), data), (base / "a").string());
  omp_set_num_threads(3);
  write_output_dir(run_experiment(noise_spec(3), data), (base / "b").string());
  omp_set_num_threads(threads);
  const std::string a = read_file(base / "a" / "results.jsonl");
  const std::string b = read_file(base / "b" / "results.jsonl");
  std::filesystem::remove_all(base);
  return {!a.empty() && a == b, fmt("results.jsonl %zu bytes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

// 7. Loss-curve output shows the zero plateau, monotone rise and asymptote.
Outcome loss_curves() {
  const std::vector<HLossParams> params{
      {1, 0.5, 0.5}, {1, 1, 0.5}, {1, 2, 0.5},   // varying a
      {0.5, 1, 0.5}, {1, 1, 0.5}, {2, 1, 0.5},   // varying lambda
      {1, 1, 0.0},   {1, 1, 0.5}, {1, 1, 1.0}};  // varying epsilon
  std::stringstream csv;
  write_loss_curves(params, -50, 50, 10001, csv);

  std::map<std::tuple<double, double, double>, std::vector<std::pair<double, double>>> curves;
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    double l, a, e, x, v, g;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &l, &a, &e, &x, &v, &g) != 6) return {false, "bad row"};
    curves[{l, a, e}].push_back({x, v});
  }
  const double spacing = 100.0 / 10000;
  std::size_t bad = 0;
  for (const auto& p : params) {
    const auto& pts = curves[{p.lambda, p.a, p.epsilon}];
    double zmin = 1e300, zmax = -1e300;
    for (const auto& [x, v] : pts) {
      if (v == 0) {
        zmin = std::min(zmin, x);
        zmax = std::max(zmax, x);
      }
    }
    const double width = p.epsilon == 0 ? 0 : zmax - zmin;
    bad += std::abs(width - 2 * p.epsilon) > 2 * spacing;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i - 1].first >= 0 && pts[i].second < pts[i - 1].second) ++bad;
      if (pts[i].first <= 0 && pts[i].second > pts[i - 1].second) ++bad;
    }
    if (p.a >= 1) bad += std::abs(pts.front().second - p.lambda) > 1e-6 * p.lambda;
    if (p.a >= 1) bad += std::abs(pts.back().second - p.lambda) > 1e-6 * p.lambda;
    for (const auto& pt : pts) bad += pt.second >= p.lambda;
  }
  return {bad == 0, fmt("%zu shape violations over %zu curves", bad, params.size())};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "loss properties", 1, loss_properties},
      {2, "gradient fidelity", 5, gradient_fidelity},
      {3, "oracle equivalence", 30, oracle_equivalence},
      {4, "bounded influence under label noise", 120, bounded_influence},
      {5, "breast cancer spot check", 300, breast_cancer},
      {6, "determinism", 120, determinism},
      {7, "loss curves", 1, loss_curves},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s; %.2fs of %.0fs budget\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
