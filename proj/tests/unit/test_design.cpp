#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "../support/oracle_math.hpp"
#include "doctest.h"
#include "oracle_values.hpp"
#include "wht/design.hpp"
#include "wht/errors.hpp"
#include "wht/power.hpp"

using namespace wht;

namespace {
const TestConfig kCfg{1000, 0.05};
}

TEST_CASE("marginal effect") {
  CHECK(marginal_effect(kCfg) == doctest::Approx(oracle::z_5e_5).epsilon(1e-12));
  CHECK(std::abs(marginal_effect(TestConfig{1, 0.5})) <= 1e-15);
  CHECK(power(marginal_effect(kCfg), 1.0, kCfg) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("turnaround point matches the reference") {
  const double b0 = turnaround_B0(0.1, kCfg);
  CHECK(b0 == doctest::Approx(oracle::turnaround_B0_eps_0_1).epsilon(1e-9));
  CHECK(std::abs(design_robustness(b0, 0.1, kCfg)) <= 1e-10);
  CHECK(turnaround_B0(1e-4, kCfg) > b0);
  CHECK_THROWS_AS(turnaround_B0(1.0, kCfg), DomainError);
  CHECK_THROWS_AS(turnaround_B0(1e-6, kCfg), DomainError);
}

TEST_CASE("turnaround point matches a grid scan") {
  double last_positive = 1.0;
  for (double B = 1.01; B < 400.0; B += 1e-2) {
    if (design_robustness(B, 0.1, kCfg) > 0.0) last_positive = B;
  }
  CHECK(std::abs(turnaround_B0(0.1, kCfg) - last_positive) <= 1e-2);
}

TEST_CASE("best B matches the reference and the grid argmax") {
  const double bs = best_B(0.1, kCfg);
  CHECK(bs == doctest::Approx(oracle::best_B_eps_0_1).epsilon(1e-5));
  const double peak = design_robustness(bs, 0.1, kCfg);
  CHECK(peak > 0.0);
  CHECK(peak >= design_robustness(bs + 1e-3, 0.1, kCfg));
  CHECK(peak >= design_robustness(bs - 1e-3, 0.1, kCfg));
  double arg = 1.0;
  double best = -1.0;
  for (double B = 1.0; B < 50.0; B += 1e-2) {
    const double r = design_robustness(B, 0.1, kCfg);
    if (r > best) {
      best = r;
      arg = B;
    }
  }
  CHECK(std::abs(bs - arg) <= 1e-2);
}

TEST_CASE("robustness curve is single peaked and ends negative") {
  for (double eps : {0.01, 0.05, 0.1, 0.2}) {
    CAPTURE(eps);
    const double b0 = turnaround_B0(eps, kCfg);
    const double bs = best_B(eps, kCfg);
    CHECK(1.0 < bs);
    CHECK(bs < b0);
    int sign_changes = 0;
    double prev_r = design_robustness(1.0, eps, kCfg);
    double prev_d = 0.0;
    const double hi = 10.0 * b0;
    for (int i = 1; i <= 4000; ++i) {
      const double B = 1.0 + (hi - 1.0) * i / 4000.0;
      const double r = design_robustness(B, eps, kCfg);
      const double d = r - prev_r;
      if (std::abs(d) > 1e-12) {
        if (prev_d != 0.0 && (d > 0.0) != (prev_d > 0.0)) ++sign_changes;
        prev_d = d;
      }
      prev_r = r;
    }
    CHECK(sign_changes <= 1);
    CHECK(design_robustness(1e6, eps, kCfg) < 0.0);
  }
}

TEST_CASE("minmax design satisfies its defining equalities") {
  const auto d = design_minmax(0.01, 0.2, kCfg);
  CHECK(d.B == doctest::Approx(oracle::minmax_B_eps_0_01_beta_0_2).epsilon(1e-10));
  CHECK(std::abs(d.epsilon * d.w1 + (1 - d.epsilon) * d.w0 - 1.0) <= 1e-10);
  CHECK(std::abs(power(d.xi, d.w1, kCfg) - 0.8) <= 1e-10);
  CHECK(std::abs(d.power_low - power(d.xi, d.w0, kCfg)) <= 1e-12);
  CHECK(d.k == 10);
  CHECK(d.w1 >= d.w0);

  const auto half = design_minmax(0.1, 0.5, kCfg);
  CHECK(half.B == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(half.w1 == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(design_minmax(0.1, 0.2, kCfg), InfeasibleError);
  CHECK_THROWS_AS(design_minmax(0.01, 0.7, kCfg), DomainError);
}

TEST_CASE("minmax design is not beaten by feasible perturbations") {
  // Perturbations keep k entries at or above w1 (power >= 1-β) and mean 1;
  // the question is whether the minimum power over the rest can go up.
  const std::size_t m = 1000;
  const auto d = design_minmax(0.01, 0.2, kCfg);
  const double design_min = std::min(d.power_high, d.power_low);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(m);
    for (std::size_t j = 0; j < m; ++j) w[j] = j < d.k ? d.w1 * (1.0 + 0.5 * u(rng)) : d.w0;
    // move mass among the low entries randomly, then renormalize to mean 1
    for (std::size_t j = d.k; j < m; ++j) w[j] *= 0.5 + u(rng);
    double high = 0.0;
    double low = 0.0;
    for (std::size_t j = 0; j < m; ++j) (j < d.k ? high : low) += w[j];
    const double scale = (static_cast<double>(m) - high) / low;
    if (scale <= 0.0) continue;
    double min_power = 1.0;
    for (std::size_t j = d.k; j < m; ++j) {
      min_power = std::min(min_power, ref::power(d.xi, w[j] * scale, 1000.0, 0.05));
    }
    CHECK(min_power <= design_min + 1e-9);
  }
}

TEST_CASE("count design satisfies its defining equalities") {
  const auto d0 = design_count_max(0.2, 0.0, kCfg);
  CHECK(d0.w1 == doctest::Approx(oracle::count_w1_beta_0_2).epsilon(1e-10));
  CHECK(d0.w0 == 0.0);
  CHECK(d0.epsilon == doctest::Approx(oracle::count_eps_beta_0_2_delta_0).epsilon(1e-10));
  CHECK(std::isinf(d0.B));
  CHECK(d0.k == 43);

  const auto d = design_count_max(0.2, 0.3, kCfg);
  CHECK(std::abs(power(d.xi, d.w1, kCfg) - 0.8) <= 1e-10);
  CHECK(std::abs(power(d.xi, d.w0, kCfg) - 0.3) <= 1e-10);
  CHECK(std::abs(d.epsilon * d.w1 + (1 - d.epsilon) * d.w0 - 1.0) <= 1e-10);
  CHECK(d.k == static_cast<std::size_t>(std::floor(1000 * d.epsilon)));

  CHECK_THROWS_AS(design_count_max(0.2, 0.6, kCfg), DomainError);
  CHECK_THROWS_AS(design_count_max(0.6, 0.1, kCfg), DomainError);
}
