#pragma once

// Seeded Monte Carlo estimation of average power and familywise error for
// the split-based testing methods.
//
// Every replicate draws from its own generator seeded by (seed, replicate
// index), and the reduction sums integer counts, so results are identical
// for any number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wht/split.hpp"
#include "wht/weights.hpp"

namespace wht {

/// P: hard threshold, weights tested on T2 (split mode).
/// B: binary weights on {|T1| > λ}, tested on T (calibrated level).
/// H, S, J: hard / soft / James–Stein estimate, weights tested on T.
/// O: true optimal weights from θ, tested on T (oracle benchmark).
enum class Method { P, B, H, S, J, O };

char method_code(Method m);
/// Throws DomainError on an unknown code.
Method parse_method(char code);

struct SimConfig {
  std::size_t m = 1000;
  std::size_t n_alt = 50;
  double xi_alt = 3.0;
  std::vector<double> lambda_grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  double b = 0.5;
  std::vector<Method> methods{Method::P, Method::B, Method::H, Method::S, Method::J};
  std::size_t replicates = 2000;
  std::uint64_t seed = 20080101;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::OneSided;

  /// Throws DomainError on out-of-range fields.
  void validate() const;
  TestConfig test_config() const;
  /// ξ_j = xi_alt for the first n_alt hypotheses, 0 after.
  std::vector<double> means() const;
};

/// Statistics for one replicate; a pure function of (cfg, replicate_index).
SplitData gen_statistics(const SimConfig& cfg, std::uint64_t replicate_index);

struct MethodRun {
  RejectionSet rejections;
  bool fallback = false;  // equal weights substituted
};

/// Applies one method at threshold λ (ignored by J and O).
MethodRun run_method(Method method, const SplitData& data, double lambda, const SimConfig& cfg);

struct SimRow {
  Method method = Method::P;
  double lambda = 0.0;
  double avg_power = 0.0;
  double fwer = 0.0;
  std::optional<double> se_power;  // empty with fewer than 2 replicates
  std::optional<double> se_fwer;
  std::uint64_t fallback_count = 0;
  std::uint64_t true_rejections = 0;
  std::uint64_t error_replicates = 0;
};

struct SimResult {
  std::size_t replicates = 0;
  std::vector<SimRow> rows;  // method-major, λ-minor, in configuration order
};

/// threads = 0 uses hardware concurrency.
SimResult estimate_operating_characteristics(const SimConfig& cfg, unsigned threads = 0);

/// WHT_THREADS from the environment (0 = auto). Throws DomainError if set
/// to something other than a nonnegative integer.
unsigned threads_from_env();

}  // namespace wht
