#include "wht/simlab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string_view>
#include <thread>

#include "wht/errors.hpp"
#include "wht/gauss.hpp"

namespace wht {

namespace {

bool uses_lambda(Method m) { return m != Method::J && m != Method::O; }

struct Counts {
  std::uint64_t true_rejections = 0;
  std::uint64_t error_replicates = 0;
  std::uint64_t fallbacks = 0;
};

// One slot per (method, λ) in row order.
using Tally = std::vector<Counts>;

void tally_replicate(const SimConfig& cfg, std::uint64_t rep, Tally& tally) {
  const SplitData data = gen_statistics(cfg, rep);
  std::size_t slot = 0;
  for (Method method : cfg.methods) {
    std::optional<MethodRun> shared;
    for (double lambda : cfg.lambda_grid) {
      if (!uses_lambda(method)) {
        if (!shared) shared = run_method(method, data, lambda, cfg);
      } else {
        shared = run_method(method, data, lambda, cfg);
      }
      Counts& c = tally[slot++];
      bool error = false;
      for (std::size_t j : shared->rejections.indices) {
        if (j < cfg.n_alt) {
          ++c.true_rejections;
        } else {
          error = true;
        }
      }
      c.error_replicates += error ? 1 : 0;
      c.fallbacks += shared->fallback ? 1 : 0;
    }
  }
}

std::optional<double> proportion_se(double p, std::size_t n) {
  if (n < 2) return std::nullopt;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

char method_code(Method m) {
  switch (m) {
    case Method::P: return 'P';
    case Method::B: return 'B';
    case Method::H: return 'H';
    case Method::S: return 'S';
    case Method::J: return 'J';
    case Method::O: return 'O';
  }
  return '?';
}

Method parse_method(char code) {
  switch (code) {
    case 'P': return Method::P;
    case 'B': return Method::B;
    case 'H': return Method::H;
    case 'S': return Method::S;
    case 'J': return Method::J;
    case 'O': return Method::O;
    default: throw DomainError(std::string("unknown method code '") + code + "'");
  }
}

void SimConfig::validate() const {
  test_config().validate();
  if (n_alt > m) throw DomainError("n_alt must not exceed m");
  if (!std::isfinite(xi_alt)) throw DomainError("xi_alt must be finite");
  if (!(b > 0.0 && b < 1.0)) throw DomainError("b must lie in (0, 1)");
  if (replicates < 1) throw DomainError("replicates must be at least 1");
  if (lambda_grid.empty()) throw DomainError("lambda grid must not be empty");
  for (double l : lambda_grid) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("lambda values must be finite and >= 0");
  }
  if (methods.empty()) throw DomainError("at least one method is required");
  if (sidedness != Sidedness::OneSided) {
    throw DomainError("simulation supports one-sided tests only");
  }
}

TestConfig SimConfig::test_config() const { return {m, alpha, sidedness}; }

std::vector<double> SimConfig::means() const {
  std::vector<double> theta(m, 0.0);
  std::fill_n(theta.begin(), std::min(n_alt, m), xi_alt);
  return theta;
}

SplitData gen_statistics(const SimConfig& cfg, std::uint64_t replicate_index) {
  const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(cfg.seed), hi(cfg.seed), lo(replicate_index), hi(replicate_index),
                    0x77687473u};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal;

  const double r1 = std::sqrt(cfg.b);
  const double r2 = std::sqrt(1.0 - cfg.b);
  std::vector<double> t1(cfg.m);
  std::vector<double> t2(cfg.m);
  for (std::size_t j = 0; j < cfg.m; ++j) {
    const double xi = j < cfg.n_alt ? cfg.xi_alt : 0.0;
    t1[j] = r1 * xi + normal(gen);
    t2[j] = r2 * xi + normal(gen);
  }
  return SplitData(std::move(t1), std::move(t2), cfg.b);
}

MethodRun run_method(Method method, const SplitData& data, double lambda, const SimConfig& cfg) {
  const TestConfig tc = cfg.test_config();
  const double b = data.b();
  MethodRun out;

  auto full_mode = [&](const Estimator& est) {
    const auto xi_hat = rescale(estimate_xi1(data.t1(), est), b, TestMode::Full);
    try {
      return full_mode_weights(xi_hat, data.t1(), b, tc);
    } catch (const InfeasibleError&) {
      return WeightVector::equal(tc.m, true);
    }
  };

  WeightVector w;
  const std::vector<double>* stats = &data.t();
  switch (method) {
    case Method::P: {
      const auto xi1 = estimate_xi1(data.t1(), {EstimatorKind::HardThreshold, lambda});
      w = split_mode_weights(rescale(xi1, b, TestMode::Split), tc);
      stats = &data.t2();
      break;
    }
    case Method::B:
      w = binary_full_mode_weights(data.t1(), lambda, b, tc);
      break;
    case Method::H:
      w = full_mode({EstimatorKind::HardThreshold, lambda});
      break;
    case Method::S:
      w = full_mode({EstimatorKind::SoftThreshold, lambda});
      break;
    case Method::J:
      w = full_mode({EstimatorKind::JamesStein, 0.0});
      break;
    case Method::O:
      if (cfg.n_alt > 0 && cfg.xi_alt > 0.0) {
        w = optimal_weights(cfg.means(), tc);
      } else {
        w = WeightVector::equal(tc.m, true);
      }
      break;
  }
  out.fallback = w.fallback;
  out.rejections = weighted_bonferroni(pvalues(*stats), w, tc);
  return out;
}

SimResult estimate_operating_characteristics(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t slots = cfg.methods.size() * cfg.lambda_grid.size();
  const std::size_t reps = cfg.replicates;

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));

  std::vector<Tally> tallies(workers, Tally(slots));
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned id) {
    try {
      const std::size_t begin = reps * id / workers;
      const std::size_t end = reps * (id + 1) / workers;
      for (std::size_t r = begin; r < end; ++r) tally_replicate(cfg, r, tallies[id]);
    } catch (...) {
      failures[id] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  SimResult result;
  result.replicates = reps;
  std::size_t slot = 0;
  for (Method method : cfg.methods) {
    for (double lambda : cfg.lambda_grid) {
      Counts total;
      for (const auto& t : tallies) {
        total.true_rejections += t[slot].true_rejections;
        total.error_replicates += t[slot].error_replicates;
        total.fallbacks += t[slot].fallbacks;
      }
      ++slot;
      SimRow row;
      row.method = method;
      row.lambda = lambda;
      row.true_rejections = total.true_rejections;
      row.error_replicates = total.error_replicates;
      row.fallback_count = total.fallbacks;
      row.avg_power = cfg.n_alt == 0 ? 0.0
                                     : static_cast<double>(total.true_rejections) /
                                           (static_cast<double>(cfg.n_alt) * static_cast<double>(reps));
      row.fwer = static_cast<double>(total.error_replicates) / static_cast<double>(reps);
      row.se_power = proportion_se(row.avg_power, reps);
      row.se_fwer = proportion_se(row.fwer, reps);
      result.rows.push_back(row);
    }
  }
  return result;
}

unsigned threads_from_env() {
  const char* raw = std::getenv("WHT_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string_view text(raw);
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("WHT_THREADS must be a nonnegative integer, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace wht
