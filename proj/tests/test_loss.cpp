#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "hrvfl/error.hpp"
#include "hrvfl/loss.hpp"
#include "hrvfl/rng.hpp"

using namespace hrvfl;

namespace {

// Frozen with 40-digit arithmetic: 1 - 2/e and 1/e.
constexpr double kLossAtOne = 0.26424111765711535681;
constexpr double kGradAtOne = 0.36787944117144232160;

HLossParams random_params(Rng& rng) {
  return {rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0), rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 2.0)};
}

}  // namespace

TEST_CASE("hloss value examples") {
  CHECK(hloss_value(0.0, {1, 1, 0.5}) == 0.0);
  CHECK(hloss_value(1.0, {1, 1, 0}) == doctest::Approx(kLossAtOne).epsilon(1e-15));
  CHECK(hloss_value(-1.0, {1, 1, 0}) == hloss_value(1.0, {1, 1, 0}));
  CHECK(std::fabs(hloss_value(1e6, {2.5, 1, 0}) - 2.5) <= 1e-9);
  CHECK(hloss_value(1e6, {2.5, 1, 0}) < 2.5);
}

TEST_CASE("hloss gradient examples") {
  CHECK(hloss_grad(0.3, {1, 2, 0.5}) == 0.0);
  CHECK(hloss_grad(1.0, {1, 1, 0}) == doctest::Approx(kGradAtOne).epsilon(1e-15));
  CHECK(hloss_grad(-1.0, {1, 1, 0}) == doctest::Approx(-kGradAtOne).epsilon(1e-15));
  CHECK(hloss_grad(1e3, {1, 1, 0}) == 0.0);
  CHECK(std::fabs(hloss_grad(50.0, {1, 1, 0})) < 1e-18);
}

TEST_CASE("zone boundaries evaluate to zero from both branches") {
  const HLossParams p{1.5, 2.0, 0.7};
  CHECK(hloss_value(0.7, p) == 0.0);
  CHECK(hloss_value(-0.7, p) == 0.0);
  CHECK(hloss_grad(0.7, p) == 0.0);
  CHECK(hloss_grad(-0.7, p) == 0.0);
  const double just_out = std::nextafter(0.7, 1.0);
  CHECK(hloss_value(just_out, p) < 1e-20);
  CHECK(std::fabs(hloss_grad(just_out, p)) < 1e-14);
}

TEST_CASE("epsilon = 0 has no zone") {
  const HLossParams p{1, 1, 0};
  CHECK(hloss_value(0.0, p) == 0.0);
  CHECK(hloss_value(1e-3, p) > 0.0);
  CHECK(hloss_grad(-1e-3, p) < 0.0);
}

TEST_CASE("squared loss") {
  CHECK(sqloss_value(0) == 0);
  CHECK(sqloss_value(3) == 9);
  CHECK(sqloss_value(-3) == 9);
  CHECK(sqloss_grad(3) == 6);
  CHECK(sqloss_grad(-1.5) == -3);
}

TEST_CASE("non-finite residuals are domain errors") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hloss_value(inf, {}), DomainError);
  CHECK_THROWS_AS(hloss_grad(nan, {}), DomainError);
  CHECK_THROWS_AS(sqloss_value(-inf), DomainError);
  CHECK_THROWS_AS(sqloss_grad(nan), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(HLossParams{1, 1, 0}.validate());
  CHECK_THROWS_AS((HLossParams{0, 1, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((HLossParams{1, -1, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((HLossParams{1, 1, -0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((HLossParams{std::nan(""), 1, 0}.validate()), ConfigError);
}

TEST_CASE("elementwise maps match the scalar form") {
  const HLossParams p{2, 0.5, 0.25};
  std::vector<double> x{-30, -2, -0.25, 0, 0.1, 0.26, 3, 400};
  std::vector<double> v(x.size());
  std::vector<double> g(x.size());
  hloss_value(x, v, p);
  hloss_grad(x, g, p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(v[i] == hloss_value(x[i], p));
    CHECK(g[i] == hloss_grad(x[i], p));
  }
  std::vector<double> short_out(2);
  CHECK_THROWS_AS(hloss_value(x, short_out, p), ShapeError);
}

TEST_CASE("property: zone, symmetry, bound, monotonicity") {
  Rng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const HLossParams p = random_params(rng);
    const double x = rng.uniform(-40, 40);
    if (std::fabs(x) <= p.epsilon) {
      CHECK(hloss_value(x, p) == 0.0);
      CHECK(hloss_grad(x, p) == 0.0);
    }
    CHECK(std::fabs(hloss_value(x, p) - hloss_value(-x, p)) <= 1e-12);
    CHECK(hloss_value(x, p) < p.lambda);
    CHECK(hloss_value(x, p) >= 0.0);
    const double y = std::fabs(x) + rng.uniform(0, 5);
    CHECK(hloss_value(y, p) >= hloss_value(x, p));
  }
}

TEST_CASE("property: derivative matches central differences") {
  Rng rng(7);
  const double h = 1e-6;
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const HLossParams p = random_params(rng);
    const double x = rng.uniform(-20, 20);
    const double fd = (hloss_value(x + h, p) - hloss_value(x - h, p)) / (2 * h);
    const double g = hloss_grad(x, p);
    if (std::fabs(g) < 1e-3) {
      CHECK(std::fabs(fd - g) <= 1e-8);
    } else {
      CHECK(std::fabs(fd - g) / std::fabs(g) <= 1e-5);
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("property: gradient peaks at epsilon + 1/a") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const HLossParams p = random_params(rng);
    const double peak = p.epsilon + 1.0 / p.a;
    double best_x = 0;
    double best = -1;
    const double step = 1e-4 / p.a;
    for (double x = p.epsilon; x < p.epsilon + 10.0 / p.a; x += step) {
      const double g = hloss_grad(x, p);
      if (g > best) {
        best = g;
        best_x = x;
      }
    }
    CHECK(best_x == doctest::Approx(peak).epsilon(1e-3));
    CHECK(best == doctest::Approx(p.lambda * p.a * std::exp(-1.0)).epsilon(1e-6));
    // rises before the peak, decays after it
    CHECK(hloss_grad(p.epsilon + 0.5 / p.a, p) < best);
    CHECK(hloss_grad(p.epsilon + 3.0 / p.a, p) < best);
    CHECK(hloss_grad(p.epsilon + 6.0 / p.a, p) < hloss_grad(p.epsilon + 3.0 / p.a, p));
  }
}
