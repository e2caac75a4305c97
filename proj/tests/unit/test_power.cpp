#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "../support/oracle_math.hpp"
#include "doctest.h"
#include "oracle_values.hpp"
#include "wht/errors.hpp"
#include "wht/gauss.hpp"
#include "wht/power.hpp"

using namespace wht;

namespace {
const TestConfig kCfg{1000, 0.05};
const TestConfig kTwoSided{1000, 0.05, Sidedness::TwoSided};
}  // namespace

TEST_CASE("power at simple points") {
  CHECK(power(oracle::z_5e_5, 1.0, kCfg) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(power(3.0, 0.0, kCfg) == 0.0);
  CHECK(power(0.0, 1.0, kCfg) == doctest::Approx(5e-5).epsilon(1e-10));
  CHECK(bonferroni_power(3.0, kCfg) ==
        doctest::Approx(oracle::bonferroni_power_xi3).epsilon(1e-12));
  CHECK(power(3.0, kCfg.cap(), kCfg) == 1.0);
  CHECK_THROWS_AS(power(3.0, 2.0 * kCfg.cap(), kCfg), DomainError);
  CHECK_THROWS_AS(power(3.0, -1.0, kCfg), DomainError);
}

TEST_CASE("power agrees with the reference and is monotone") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uxi(-2.0, 8.0);
  std::uniform_real_distribution<double> ulogw(-4.0, std::log10(kCfg.cap()) - 1e-9);
  for (int i = 0; i < 1000; ++i) {
    const double xi = uxi(rng);
    const double w = std::pow(10.0, ulogw(rng));
    const double p = power(xi, w, kCfg);
    CHECK(p == doctest::Approx(ref::power(xi, w, 1000.0, 0.05)).epsilon(1e-9));
    CHECK(power(xi, std::min(w * 1.01, kCfg.cap()), kCfg) >= p);
    CHECK(power(xi + 0.01, w, kCfg) >= p);
  }
}

TEST_CASE("two-sided power") {
  const double z = ref::z(0.05 / 2000.0);
  CHECK(power(2.5, 1.0, kTwoSided) ==
        doctest::Approx(ref::upper(z - 2.5) + ref::upper(z + 2.5)).epsilon(1e-10));
  CHECK(power(2.5, 1.0, kTwoSided) == doctest::Approx(power(-2.5, 1.0, kTwoSided)).epsilon(1e-14));
  CHECK(power(0.0, 1.0, kTwoSided) == doctest::Approx(5e-5).epsilon(1e-10));
}

TEST_CASE("binary weights") {
  const auto s = binary_weights(10.0, 0.1);
  CHECK(s.w1 == doctest::Approx(10.0 / 1.9).epsilon(1e-15));
  CHECK(s.w0 == doctest::Approx(1.0 / 1.9).epsilon(1e-15));
  CHECK(std::abs(0.1 * s.w1 + 0.9 * s.w0 - 1.0) <= 1e-12);
  const auto one = binary_weights(1.0, 0.3);
  CHECK(one.w1 == 1.0);
  CHECK(one.w0 == 1.0);
  CHECK_THROWS_AS(binary_weights(0.5, 0.1), DomainError);
  CHECK_THROWS_AS(binary_weights(2.0, 0.0), DomainError);
}

TEST_CASE("robustness at B = 1 is zero") {
  for (double eps : {0.001, 0.1, 0.5, 0.9}) {
    for (double xi : {0.0, 2.0, oracle::z_5e_5, 6.0}) {
      CHECK(robustness_R(1.0, eps, xi, kCfg) == 0.0);
    }
  }
}

TEST_CASE("robustness function agrees with power differences") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ulogB(0.0, 3.0);
  std::uniform_real_distribution<double> ueps(0.001, 0.9);
  std::uniform_real_distribution<double> uxi(0.0, 7.0);
  for (int i = 0; i < 500; ++i) {
    const double B = std::pow(10.0, ulogB(rng));
    const double eps = ueps(rng);
    const double xi = uxi(rng);
    const auto s = binary_weights(B, eps);
    if (0.05 * s.w1 / 1000.0 >= 1.0) continue;
    const double p1 = power(xi, 1.0, kCfg);
    const double assembled = (power(xi, s.w1, kCfg) - p1) - (p1 - power(xi, s.w0, kCfg));
    CHECK(std::abs(robustness_R(B, eps, xi, kCfg) - assembled) <= 1e-12);
  }
}

TEST_CASE("small up-weighted fractions always gain at the marginal effect") {
  for (double B : {2.0, 10.0, 100.0}) {
    for (double eps = 1e-8; eps <= 1e-3; eps *= 10.0) {
      CAPTURE(B);
      CAPTURE(eps);
      CHECK(robustness_R(B, eps, oracle::z_5e_5, kCfg) > 0.0);
    }
  }
  CHECK(robustness_R(10.0, 0.1, oracle::z_5e_5, kCfg) > 0.0);
}

TEST_CASE("general weight robustness") {
  CHECK(worst_case_robustness(2.0, 1.0, 1.0, kCfg) == 0.0);
  CHECK(worst_case_robustness(0.0, 0.0, 10.0, kCfg) < 0.0);
  for (double xi : {1.0, 3.0, 5.0}) {
    // b -> 1 approaches -(power gain at B), which is negative
    const double gain = power(xi, 10.0, kCfg) - power(xi, 1.0, kCfg);
    CHECK(worst_case_robustness(xi, 1.0 - 1e-7, 10.0, kCfg) == doctest::Approx(-gain).epsilon(1e-4));
    CHECK(robustness_margin(xi, 0.3, 10.0, kCfg) == -worst_case_robustness(xi, 0.3, 10.0, kCfg));
  }
}

TEST_CASE("safe zone bound") {
  CHECK(safe_zone_bound(2.0, kCfg) == doctest::Approx(oracle::safe_zone_B2).epsilon(1e-9));
  CHECK(safe_zone_bound(10.0, kCfg) == doctest::Approx(oracle::safe_zone_B10).epsilon(1e-9));
  CHECK_THROWS_AS(safe_zone_bound(1.5, kCfg), DomainError);
  for (double B : {2.0, 5.0, 10.0, 100.0, 1000.0}) {
    CAPTURE(B);
    CHECK(safe_zone_bound(B, kCfg) < oracle::z_5e_5);
    const auto scan = scan_safe_zone(B, kCfg);
    CHECK(scan.holds);
    CHECK(scan.min_margin >= 0.0);
  }
}

TEST_CASE("unrestricted worst case matches the reference root") {
  const auto r = unrestricted_worst_case(3.0, 0.01, 0.1, kCfg);
  CHECK(r.c_star == doctest::Approx(oracle::worst_c_star).epsilon(1e-10));
  CHECK(r.u_star == doctest::Approx(oracle::worst_u_star).epsilon(1e-10));
  CHECK(r.inf_power == doctest::Approx(oracle::worst_inf_power).epsilon(1e-9));
  CHECK(r.u_star == doctest::Approx(std::sqrt(2 * r.c_star)).epsilon(1e-15));
  CHECK(r.bonferroni_power == doctest::Approx(oracle::bonferroni_power_xi3).epsilon(1e-12));
  CHECK_THROWS_AS(unrestricted_worst_case(3.0, 1e-6, 1e-6, kCfg), InfeasibleError);
}

TEST_CASE("worst case agrees with a brute-force scan over u") {
  for (double xi : {2.0, 4.0}) {
    const auto r = unrestricted_worst_case(xi, 0.01, 0.1, kCfg);
    const auto g = ref::worst_over_u_grid(xi, 0.01, 0.1, 5e-5, 3 * oracle::z_5e_5, 1e-3);
    CHECK(std::abs(r.inf_power - g.power) <= 1e-4);
    CHECK(std::abs(r.u_star - g.u) <= 1e-3);
  }
}

TEST_CASE("small a approaches the leading-order forms") {
  const auto r = unrestricted_worst_case(3.0, 1e-8, 0.1, kCfg);
  const double zg = ref::z(0.05 / (1000 * 0.1));
  CHECK(std::abs(r.u_star - zg) <= 1e-4);
  CHECK(std::abs(r.c_star - zg * zg / 2) <= 1e-4);
  CHECK(std::abs(r.inf_power - ref::upper((zg * zg - 9.0) / 6.0)) <= 1e-4);
  CHECK(std::abs(r.u_star_approx - zg) <= 1e-9);
}

TEST_CASE("restricted worst case") {
  const auto r = restricted_worst_case(3.0, 0.01, 0.1, kCfg);
  CHECK(r.xi0 == doctest::Approx(oracle::restricted_xi0).epsilon(1e-10));
  CHECK(r.xi_star == doctest::Approx(oracle::restricted_xi_star).epsilon(1e-10));
  // ξ <= ξ0: closed form
  CHECK(r.C_of_xi == doctest::Approx(3.0 * r.xi0 - 4.5).epsilon(1e-12));
  CHECK(r.inf_power >= r.bonferroni_power);
  CHECK(r.below_xi_star);

  const auto big = restricted_worst_case(9.0, 0.01, 0.1, kCfg);
  CHECK(big.inf_power >= 1.0 - 0.1 / 0.99 - 0.05);

  CHECK_THROWS_AS(restricted_worst_case(3.0, 0.6, 0.6, kCfg), InfeasibleError);
  CHECK_THROWS_AS(restricted_worst_case(-1.0, 0.01, 0.1, kCfg), DomainError);
}

TEST_CASE("restricting the misspecified mean never lowers the worst case") {
  for (double xi : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0}) {
    for (double a : {0.001, 0.01, 0.05}) {
      for (double g : {0.05, 0.1, 0.3}) {
        CAPTURE(xi);
        CAPTURE(a);
        CAPTURE(g);
        CHECK(restricted_worst_case(xi, a, g, kCfg).inf_power >=
              unrestricted_worst_case(xi, a, g, kCfg).inf_power - 1e-12);
      }
    }
  }
}

TEST_CASE("average power") {
  std::vector<double> theta{3.0, 0.0, -1.0, 2.0};
  std::vector<double> w{2.0, 1.0, 0.5, 0.5};
  const TestConfig cfg{4, 0.05};
  CHECK(average_power(theta, w, cfg) ==
        doctest::Approx((power(3.0, 2.0, cfg) + power(2.0, 0.5, cfg)) / 4.0).epsilon(1e-15));
}
