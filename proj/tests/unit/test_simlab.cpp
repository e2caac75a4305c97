#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "wht/errors.hpp"
#include "wht/simlab.hpp"
#include "wht/weights.hpp"

using namespace wht;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.m = 200;
  cfg.n_alt = 10;
  cfg.xi_alt = 3.0;
  cfg.lambda_grid = {0.0, 1.0, 2.0};
  cfg.methods = {Method::P, Method::B, Method::H, Method::S, Method::J, Method::O};
  cfg.replicates = 200;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("method codes round trip") {
  for (char ch : std::string("PBHSJO")) CHECK(method_code(parse_method(ch)) == ch);
  CHECK_THROWS_AS(parse_method('X'), DomainError);
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.n_alt = 500;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.b = 1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.lambda_grid = {-1.0};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.sidedness = Sidedness::TwoSided;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = small_config();
  cfg.replicates = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("means vector") {
  const auto cfg = small_config();
  const auto th = cfg.means();
  CHECK(th.size() == 200);
  CHECK(std::count(th.begin(), th.end(), 3.0) == 10);
  CHECK(th[9] == 3.0);
  CHECK(th[10] == 0.0);
}

TEST_CASE("statistics are a pure function of seed and replicate") {
  const auto cfg = small_config();
  const auto a = gen_statistics(cfg, 7);
  const auto b = gen_statistics(cfg, 7);
  const auto c = gen_statistics(cfg, 8);
  CHECK(a.t1() == b.t1());
  CHECK(a.t2() == b.t2());
  CHECK(a.t1() != c.t1());
  // stage means: √b ξ and √(1-b) ξ
  double s1 = 0.0;
  double s2 = 0.0;
  const std::size_t reps = 400;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto d = gen_statistics(cfg, r);
    for (std::size_t j = 0; j < cfg.n_alt; ++j) {
      s1 += d.t1()[j];
      s2 += d.t2()[j];
    }
  }
  const double n = static_cast<double>(reps * cfg.n_alt);
  CHECK(std::abs(s1 / n - std::sqrt(0.5) * 3.0) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - std::sqrt(0.5) * 3.0) < 4.0 / std::sqrt(n));
}

TEST_CASE("methods produce valid rejection sets") {
  const auto cfg = small_config();
  const auto data = gen_statistics(cfg, 0);
  for (Method m : cfg.methods) {
    for (double lambda : cfg.lambda_grid) {
      const auto run = run_method(m, data, lambda, cfg);
      const auto& idx = run.rejections.indices;
      CHECK(std::is_sorted(idx.begin(), idx.end()));
      for (std::size_t j : idx) CHECK(j < cfg.m);
    }
  }
  // λ = 0 binary weights are plain Bonferroni on the full-data statistic
  const auto b0 = run_method(Method::B, data, 0.0, cfg);
  std::vector<std::size_t> bonf;
  for (std::size_t j = 0; j < cfg.m; ++j) {
    if (data.t()[j] >= 0.0 && std::erfc(data.t()[j] / std::sqrt(2.0)) / 2 <= 0.05 / 200.0) {
      bonf.push_back(j);
    }
  }
  CHECK(b0.rejections.indices == bonf);
}

TEST_CASE("hard threshold above every statistic falls back to equal weights") {
  auto cfg = small_config();
  const auto data = gen_statistics(cfg, 3);
  const auto run = run_method(Method::P, data, 100.0, cfg);
  CHECK(run.fallback);
}

TEST_CASE("results do not depend on the thread count") {
  const auto cfg = small_config();
  const auto one = estimate_operating_characteristics(cfg, 1);
  const auto four = estimate_operating_characteristics(cfg, 4);
  const auto seven = estimate_operating_characteristics(cfg, 7);
  REQUIRE(one.rows.size() == cfg.methods.size() * cfg.lambda_grid.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].avg_power == four.rows[i].avg_power);
    CHECK(one.rows[i].fwer == four.rows[i].fwer);
    CHECK(one.rows[i].fallback_count == seven.rows[i].fallback_count);
    CHECK(one.rows[i].true_rejections == seven.rows[i].true_rejections);
  }
}

TEST_CASE("row bookkeeping") {
  const auto cfg = small_config();
  const auto res = estimate_operating_characteristics(cfg, 2);
  CHECK(res.replicates == cfg.replicates);
  std::size_t i = 0;
  for (Method m : cfg.methods) {
    for (double lambda : cfg.lambda_grid) {
      const auto& row = res.rows[i++];
      CHECK(row.method == m);
      CHECK(row.lambda == lambda);
      CHECK(row.avg_power ==
            doctest::Approx(static_cast<double>(row.true_rejections) / (200.0 * 10.0)).epsilon(1e-15));
      CHECK(row.fwer == doctest::Approx(static_cast<double>(row.error_replicates) / 200.0).epsilon(1e-15));
      REQUIRE(row.se_power.has_value());
      CHECK(*row.se_power == doctest::Approx(std::sqrt(row.avg_power * (1 - row.avg_power) / 200.0)));
    }
  }
  auto one_rep = cfg;
  one_rep.replicates = 1;
  const auto r1 = estimate_operating_characteristics(one_rep, 1);
  CHECK_FALSE(r1.rows[0].se_power.has_value());
  CHECK_FALSE(r1.rows[0].se_fwer.has_value());
}

TEST_CASE("oracle method is near its closed-form power") {
  auto cfg = small_config();
  cfg.methods = {Method::O};
  cfg.lambda_grid = {0.0};
  cfg.replicates = 2000;
  const auto res = estimate_operating_characteristics(cfg, 0);
  const double closed = oracle_power(cfg.means(), cfg.test_config()) * 200.0 / 10.0;
  const double se = std::sqrt(closed * (1 - closed) / (2000.0 * 10.0));
  CHECK(std::abs(res.rows[0].avg_power - closed) <= 4.0 * se);
}

TEST_CASE("thread count from the environment") {
  ::setenv("WHT_THREADS", "3", 1);
  CHECK(threads_from_env() == 3);
  ::setenv("WHT_THREADS", "abc", 1);
  CHECK_THROWS_AS(threads_from_env(), DomainError);
  ::setenv("WHT_THREADS", "-2", 1);
  CHECK_THROWS_AS(threads_from_env(), DomainError);
  ::unsetenv("WHT_THREADS");
  CHECK(threads_from_env() == 0);
}
