#include "wht/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wht/errors.hpp"
#include "wht/gauss.hpp"
#include "wht/power.hpp"
#include "wht/roots.hpp"

namespace wht {

namespace {

void require_one_sided(const TestConfig& cfg) {
  cfg.validate();
  if (cfg.sidedness != Sidedness::OneSided) {
    throw DomainError("weight design is defined for one-sided tests only");
  }
}

double design_xi(const TestConfig& cfg, std::optional<double> xi) {
  if (!xi) return marginal_effect(cfg);
  if (!std::isfinite(*xi)) throw DomainError("xi must be finite");
  return *xi;
}

double capped_power(double xi, double w, const TestConfig& cfg) {
  return power(xi, std::min(w, cfg.cap()), cfg);
}

double r_at(double B, double epsilon, double xi, const TestConfig& cfg) {
  const auto s = binary_weights(B, epsilon);
  return capped_power(xi, s.w1, cfg) + capped_power(xi, s.w0, cfg) - 2.0 * power(xi, 1.0, cfg);
}

void check_epsilon(double epsilon, const TestConfig& cfg) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (epsilon <= cfg.level()) {
    throw DomainError("epsilon <= alpha/m: up-weighting never turns harmful, no turnaround");
  }
}

// Smallest doubling of B with R(B) < 0.
double negative_B(double epsilon, double xi, const TestConfig& cfg) {
  for (double B = 2.0; std::isfinite(B); B *= 2.0) {
    if (r_at(B, epsilon, xi, cfg) < 0.0) return B;
  }
  throw InfeasibleError("R(B, epsilon) stays nonnegative for all B");
}

struct Turnaround {
  double B0;
  double hi;
};

Turnaround find_turnaround(double epsilon, double xi, const TestConfig& cfg) {
  check_epsilon(epsilon, cfg);
  const double hi = negative_B(epsilon, xi, cfg);
  auto r = [&](double B) { return r_at(B, epsilon, xi, cfg); };
  const double peak = numeric::golden_section_max(r, 1.0, hi, 1e-8);
  if (!(r(peak) > 0.0)) {
    throw InfeasibleError("R(B, epsilon) has no positive part: weighting never helps at this epsilon");
  }
  return {numeric::bisect_decreasing(r, {peak, hi}), hi};
}

}  // namespace

double marginal_effect(const TestConfig& cfg) {
  require_one_sided(cfg);
  return upper_quantile(cfg.level());
}

double design_robustness(double B, double epsilon, const TestConfig& cfg,
                         std::optional<double> xi) {
  require_one_sided(cfg);
  return r_at(B, epsilon, design_xi(cfg, xi), cfg);
}

double turnaround_B0(double epsilon, const TestConfig& cfg, std::optional<double> xi) {
  require_one_sided(cfg);
  return find_turnaround(epsilon, design_xi(cfg, xi), cfg).B0;
}

double best_B(double epsilon, const TestConfig& cfg, std::optional<double> xi) {
  require_one_sided(cfg);
  const double x = design_xi(cfg, xi);
  const double b0 = find_turnaround(epsilon, x, cfg).B0;
  return numeric::golden_section_max([&](double B) { return r_at(B, epsilon, x, cfg); }, 1.0, b0,
                                     1e-8);
}

DesignSpec design_minmax(double epsilon, double beta, const TestConfig& cfg,
                         std::optional<double> xi) {
  require_one_sided(cfg);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 0.5)) throw DomainError("beta must lie in (0, 1/2]");
  const double x = design_xi(cfg, xi);
  const double c = upper_tail(x + upper_quantile(1.0 - beta));
  const double m = static_cast<double>(cfg.m);
  const double slack = cfg.alpha - epsilon * c * m;
  if (!(slack > 0.0)) {
    throw InfeasibleError("alpha <= epsilon*c*m: cannot give power 1-beta to a fraction epsilon");
  }
  const double B = c * m * (1.0 - epsilon) / slack;
  if (B < 1.0) throw DomainError("target power 1-beta is already exceeded without weighting");
  const auto s = binary_weights(B, epsilon);

  DesignSpec d;
  d.B = B;
  d.w1 = s.w1;
  d.w0 = s.w0;
  d.epsilon = epsilon;
  d.k = static_cast<std::size_t>(std::llround(epsilon * m));
  d.beta = beta;
  d.xi = x;
  d.power_high = power(x, s.w1, cfg);
  d.power_low = power(x, s.w0, cfg);
  d.delta = d.power_low;
  return d;
}

DesignSpec design_count_max(double beta, double delta, const TestConfig& cfg,
                            std::optional<double> xi) {
  require_one_sided(cfg);
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("beta must lie in (0, 1/2)");
  if (!(delta >= 0.0 && delta < 1.0 - beta)) throw DomainError("delta must lie in [0, 1-beta)");
  const double x = design_xi(cfg, xi);
  const double w1 = cfg.cap() * upper_tail(x + upper_quantile(1.0 - beta));
  const double w0 = delta == 0.0 ? 0.0 : cfg.cap() * upper_tail(x + upper_quantile(delta));
  if (w0 >= 1.0) throw DomainError("power floor delta needs w0 >= 1: no room to up-weight");
  if (w1 <= 1.0) throw DomainError("power 1-beta is reached without up-weighting (w1 <= 1)");

  DesignSpec d;
  d.w1 = w1;
  d.w0 = w0;
  d.B = w0 > 0.0 ? w1 / w0 : std::numeric_limits<double>::infinity();
  d.epsilon = (1.0 - w0) / (w1 - w0);
  d.k = static_cast<std::size_t>(std::floor(static_cast<double>(cfg.m) * d.epsilon));
  d.beta = beta;
  d.delta = delta;
  d.xi = x;
  d.power_high = power(x, w1, cfg);
  d.power_low = power(x, w0, cfg);
  return d;
}

}  // namespace wht
