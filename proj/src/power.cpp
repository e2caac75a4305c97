#include "wht/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wht/errors.hpp"
#include "wht/gauss.hpp"
#include "wht/roots.hpp"

namespace wht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// z_t with the limits z_0 = +∞ and z_1 = -∞.
double cutoff(double threshold) {
  if (threshold <= 0.0) return kInf;
  if (threshold >= 1.0) return -kInf;
  return upper_quantile(threshold);
}

double one_sided_power(double xi, double w, const TestConfig& cfg) {
  return upper_tail(cutoff(cfg.level() * w) - xi);
}

void require_one_sided(const TestConfig& cfg) {
  cfg.validate();
  if (cfg.sidedness != Sidedness::OneSided) {
    throw DomainError("robustness and worst-case analysis are defined for one-sided tests only");
  }
}

void check_weight_range(double w, const TestConfig& cfg, const char* name) {
  if (!(w >= 0.0)) throw DomainError(std::string(name) + " must be nonnegative");
  if (cfg.level() * w > 1.0) {
    throw DomainError(std::string(name) + " exceeds m/alpha: working threshold above 1");
  }
}

// Misspecification equation γΦ̄(sqrt(2c)) + aΦ̄(ξ/2 + c/ξ) - α/m, scaled by
// m/α, on c >= 0. Decreasing in c.
double misspecified_residual(double c, double xi, double a, double gamma, const TestConfig& cfg) {
  const double total = gamma * upper_tail(std::sqrt(2.0 * c)) + a * upper_tail(0.5 * xi + c / xi);
  return total / cfg.level() - 1.0;
}

// Largest c >= 0 solving the misspecification equation on [0, hi]. When the
// equation has no root with c >= 0 the supremum is the boundary c = 0.
double misspecified_root(double xi, double a, double gamma, const TestConfig& cfg, double hi) {
  auto f = [&](double c) { return misspecified_residual(c, xi, a, gamma, cfg); };
  if (f(0.0) <= 0.0) return 0.0;
  if (!std::isfinite(hi)) hi = numeric::bracket_decreasing(f, 0.0, 1.0).hi;
  return numeric::bisect_decreasing(f, {0.0, hi});
}

void check_worst_case_inputs(double xi, double a, double gamma, const TestConfig& cfg) {
  require_one_sided(cfg);
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("xi must be positive and finite");
  if (!(a > 0.0 && a < 1.0)) throw DomainError("a must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (gamma + a < cfg.level()) {
    throw InfeasibleError("gamma + a < alpha/m: the misspecified weights cannot be normalized");
  }
}

void fill_common(WorstCaseReport& r, const TestConfig& cfg) {
  const double z = upper_quantile(cfg.level());
  r.inf_power = optimal_power_at(r.xi, r.c_star);
  r.bonferroni_power = one_sided_power(r.xi, 1.0, cfg);
  r.optimal_power = r.a * cfg.level() <= 1.0 ? one_sided_power(r.xi, 1.0 / r.a, cfg) : kNaN;
  r.beats_bonferroni = r.inf_power >= r.bonferroni_power;
  r.deficit_floor = 1.0 - r.gamma / (1.0 - r.a);

  const double tail = cfg.level() / r.gamma;
  if (tail < 1.0) {
    const double z_gamma = upper_quantile(tail);
    r.u_star_approx = z_gamma;
    r.c_star_approx = 0.5 * z_gamma * z_gamma;
    r.inf_power_approx = upper_tail((z_gamma * z_gamma - r.xi * r.xi) / (2.0 * r.xi));
    const double gap = z * z - z_gamma * z_gamma;
    r.domination_threshold = gap >= 0.0 ? z + std::sqrt(gap) : kNaN;
  } else {
    r.u_star_approx = r.c_star_approx = r.inf_power_approx = r.domination_threshold = kNaN;
  }
}

}  // namespace

double power(double xi, double w, const TestConfig& cfg) {
  cfg.validate();
  if (!(w >= 0.0)) throw DomainError("weight must be nonnegative");
  if (w == 0.0) return 0.0;
  if (cfg.sidedness == Sidedness::OneSided) {
    const double threshold = cfg.level() * w;
    if (threshold > 1.0) throw DomainError("working threshold alpha*w/m exceeds 1");
    return upper_tail(cutoff(threshold) - xi);
  }
  const double threshold = 0.5 * cfg.level() * w;
  if (threshold > 1.0) throw DomainError("working threshold alpha*w/(2m) exceeds 1");
  if (threshold >= 0.5) return 1.0;
  const double z = upper_quantile(threshold);
  return upper_tail(z - xi) + upper_tail(z + xi);
}

double bonferroni_power(double xi, const TestConfig& cfg) { return power(xi, 1.0, cfg); }

double average_power(std::span<const double> theta, std::span<const double> w,
                     const TestConfig& cfg) {
  if (theta.size() != cfg.m || w.size() != cfg.m) {
    throw DomainError("average_power: theta and w must both have length m");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] > 0.0) total += power(theta[j], w[j], cfg);
  }
  return total / static_cast<double>(cfg.m);
}

BinaryWeightScheme binary_weights(double B, double epsilon) {
  if (!(B >= 1.0) || !std::isfinite(B)) throw DomainError("B must be a finite value >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  const double scale = epsilon * B + (1.0 - epsilon);
  return {B, epsilon, B / scale, 1.0 / scale};
}

double robustness_R(double B, double epsilon, double xi, const TestConfig& cfg) {
  require_one_sided(cfg);
  const auto s = binary_weights(B, epsilon);
  check_weight_range(s.w1, cfg, "w1");
  return one_sided_power(xi, s.w1, cfg) + one_sided_power(xi, s.w0, cfg) -
         2.0 * one_sided_power(xi, 1.0, cfg);
}

double worst_case_robustness(double xi, double b, double B, const TestConfig& cfg) {
  return -robustness_margin(xi, b, B, cfg);
}

double robustness_margin(double xi, double b, double B, const TestConfig& cfg) {
  require_one_sided(cfg);
  if (!(b >= 0.0 && b <= 1.0)) throw DomainError("b must lie in [0, 1]");
  if (!(B >= 1.0)) throw DomainError("B must be at least 1");
  check_weight_range(B, cfg, "B");
  // Φ(x) = 1 - Φ̄(x); the constant terms cancel, leaving only upper tails.
  return one_sided_power(xi, B, cfg) + one_sided_power(xi, b, cfg) -
         2.0 * one_sided_power(xi, 1.0, cfg);
}

double safe_zone_bound(double B, const TestConfig& cfg) {
  require_one_sided(cfg);
  if (!(B >= 2.0)) throw DomainError("safe zone requires B >= 2");
  check_weight_range(B, cfg, "B");
  const double z = upper_quantile(cfg.level());
  const double z_b = cutoff(B * cfg.level());
  return z - 1.0 / (z - z_b);
}

SafeZoneScan scan_safe_zone(double B, const TestConfig& cfg, double step) {
  if (!(step > 0.0)) throw DomainError("scan step must be positive");
  SafeZoneScan scan;
  scan.bound = safe_zone_bound(B, cfg);
  scan.min_margin = std::numeric_limits<double>::infinity();
  if (scan.bound < 0.0) return scan;
  const auto n = static_cast<std::size_t>(std::floor(scan.bound / step));
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = std::min(static_cast<double>(i) * step, scan.bound);
    const double margin = robustness_margin(xi, 0.0, B, cfg);
    scan.min_margin = std::min(scan.min_margin, margin);
    ++scan.points;
  }
  scan.holds = scan.min_margin >= 0.0;
  return scan;
}

WorstCaseReport restricted_worst_case(double xi, double a, double gamma, const TestConfig& cfg) {
  check_worst_case_inputs(xi, a, gamma, cfg);
  if (gamma + a > 1.0) throw InfeasibleError("gamma + a > 1: more misspecified mass than nulls");

  WorstCaseReport r;
  r.restricted = true;
  r.xi = xi;
  r.a = a;
  r.gamma = gamma;
  r.xi0 = cutoff(cfg.level() / (gamma + a));
  if (xi <= r.xi0) {
    r.C_of_xi = xi * r.xi0 - 0.5 * xi * xi;
    r.u_star = xi;
  } else {
    // (γ+a)Φ̄(ξ) <= α/m here, so the root lies in [0, ξ²/2].
    r.C_of_xi = misspecified_root(xi, a, gamma, cfg, 0.5 * xi * xi);
    r.u_star = std::sqrt(2.0 * r.C_of_xi);
  }
  r.c_star = r.C_of_xi;

  const double q = cfg.alpha * (1.0 - a) / (static_cast<double>(cfg.m) * gamma);
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("q = alpha(1-a)/(m gamma) must lie in (0, 1), got " + std::to_string(q));
  }
  const double z = upper_quantile(cfg.level());
  const double z_q = upper_quantile(q);
  const double gap = z * z - z_q * z_q;
  if (gap < 0.0) throw DomainError("z_q exceeds z_{alpha/m}: gamma > 1 - a");
  r.xi_star = z + std::sqrt(gap);
  r.below_xi_star = xi < r.xi_star;

  fill_common(r, cfg);
  const double tail = cfg.level() / gamma;
  if (tail < 1.0) {
    const double z_gamma = upper_quantile(tail);
    r.large_xi_floor =
        upper_tail((z_gamma * z_gamma - r.xi_star * r.xi_star) / (2.0 * r.xi_star));
  } else {
    r.large_xi_floor = kNaN;
  }
  return r;
}

WorstCaseReport unrestricted_worst_case(double xi, double a, double gamma,
                                        const TestConfig& cfg) {
  check_worst_case_inputs(xi, a, gamma, cfg);
  WorstCaseReport r;
  r.restricted = false;
  r.xi = xi;
  r.a = a;
  r.gamma = gamma;
  r.xi0 = gamma + a <= 1.0 ? cutoff(cfg.level() / (gamma + a)) : kNaN;
  r.c_star = misspecified_root(xi, a, gamma, cfg, kInf);
  r.C_of_xi = r.c_star;
  r.u_star = std::sqrt(2.0 * r.c_star);
  fill_common(r, cfg);
  r.xi_star = r.domination_threshold;
  r.below_xi_star = std::isfinite(r.xi_star) && xi < r.xi_star;
  r.large_xi_floor = std::isfinite(r.xi_star) ? upper_tail((r.c_star_approx * 2.0 -
                                                            r.xi_star * r.xi_star) /
                                                           (2.0 * r.xi_star))
                                              : kNaN;
  return r;
}

}  // namespace wht
