#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracle_values.hpp"
#include "wht/errors.hpp"
#include "wht/gauss.hpp"

using namespace wht;

namespace {
double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("density at one") {
  CHECK(rel_err(std_normal_pdf(1.0), oracle::pdf_1) <= 1e-15);
  CHECK(std_normal_pdf(-1.0) == std_normal_pdf(1.0));
}

TEST_CASE("upper tail matches extended precision reference") {
  CHECK(rel_err(upper_tail(1.96), oracle::upper_1_96) <= 1e-13);
  for (const auto& pt : oracle::tail_points) {
    CAPTURE(pt.x);
    const double tol = std::abs(pt.x) <= 8.0 ? 1e-12 : 1e-10;
    CHECK(rel_err(upper_tail(pt.x), pt.upper) <= tol);
  }
}

TEST_CASE("tail limits") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(upper_tail(inf) == 0.0);
  CHECK(upper_tail(-inf) == 1.0);
  CHECK(lower_tail(-inf) == 0.0);
  CHECK(upper_tail(0.0) == doctest::Approx(0.5).epsilon(1e-16));
}

TEST_CASE("symmetry and complement") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    CHECK(std::abs(upper_tail(x) - lower_tail(-x)) <= 1e-15 * std::max(1e-300, upper_tail(x)));
    CHECK(std::abs(upper_tail(x) + lower_tail(x) - 1.0) <= 1e-15);
    const Probability p = upper_cdf(x);
    CHECK(p.value() == upper_tail(x));
    CHECK(p.complement() == lower_tail(x));
  }
}

TEST_CASE("quantile matches extended precision reference") {
  CHECK(std::abs(upper_quantile(5e-5) - oracle::z_5e_5) <= 1e-9);
  CHECK(std::abs(upper_quantile(1e-4) - oracle::z_1e_4) <= 1e-9);
  CHECK(std::abs(upper_quantile(1e-300) - oracle::z_1e_300) <= 1e-8);
  CHECK(upper_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("quantile round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logp(-300.0, std::log10(0.999));
  for (int i = 0; i < 2000; ++i) {
    const double p = std::pow(10.0, logp(rng));
    CAPTURE(p);
    CHECK(rel_err(upper_tail(upper_quantile(p)), p) <= 1e-10);
  }
  std::uniform_real_distribution<double> ux(-37.0, 37.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = ux(rng);
    CAPTURE(x);
    CHECK(std::abs(upper_quantile(upper_cdf(x)) - x) <= 1e-9 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("quantile antisymmetry") {
  // dyadic p so that 1 - p is exact
  for (double p : {0x1p-40, 0x1p-20, 0x1p-10, 0.125, 0.25, 0.375}) {
    CAPTURE(p);
    CHECK(std::abs(upper_quantile(p) + upper_quantile(1.0 - p)) <= 1e-9);
  }
}

TEST_CASE("quantile domain") {
  CHECK_THROWS_AS(upper_quantile(0.0), DomainError);
  CHECK_THROWS_AS(upper_quantile(1.0), DomainError);
  CHECK_THROWS_AS(upper_quantile(-0.1), DomainError);
  CHECK_THROWS_AS(upper_quantile(std::nan("")), DomainError);
  CHECK_THROWS_AS(Probability::from_tails(0.3, 0.3), DomainError);
}

TEST_CASE("tail approximation is close far out") {
  for (double p : {1e-8, 1e-20, 1e-100}) {
    CAPTURE(p);
    CHECK(std::abs(upper_quantile_tail_approx(p) - upper_quantile(p)) / upper_quantile(p) < 0.02);
  }
  CHECK_THROWS_AS(upper_quantile_tail_approx(0.6), DomainError);
}
