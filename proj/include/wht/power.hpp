#pragma once

// Exact power of weighted Bonferroni tests and its robustness to weight
// misspecification.

#include <cstddef>
#include <span>

#include "wht/weights.hpp"

namespace wht {

/// π(ξ, w): probability that an alternative with mean ξ is rejected at
/// weight w. One-sided Φ̄(z_{αw/m} - ξ); two-sided
/// Φ̄(z_{αw/(2m)} - ξ) + Φ̄(z_{αw/(2m)} + ξ). Returns 0 for w = 0 and 1 when
/// the working threshold reaches 1 (one-sided) or 1/2 (two-sided). Throws
/// DomainError for w < 0 or a threshold above 1.
double power(double xi, double w, const TestConfig& cfg);

/// π(ξ, 1).
double bonferroni_power(double xi, const TestConfig& cfg);

/// (1/m) Σ_j π(ξ_j, w_j) I(ξ_j > 0).
double average_power(std::span<const double> theta, std::span<const double> w,
                     const TestConfig& cfg);

/// Two-level weights: a fraction ε gets B times the weight of the rest,
/// normalized to mean 1.
struct BinaryWeightScheme {
  double B = 1.0;
  double epsilon = 0.0;
  double w1 = 1.0;
  double w0 = 1.0;
};

/// Throws DomainError unless B >= 1 and 0 < ε < 1.
BinaryWeightScheme binary_weights(double B, double epsilon);

/// Gain of correct up-weighting minus loss of incorrect down-weighting:
/// Φ̄(z_{αw1/m} - ξ) + Φ̄(z_{αw0/m} - ξ) - 2Φ̄(z_{α/m} - ξ). One-sided.
double robustness_R(double B, double epsilon, double xi, const TestConfig& cfg);

/// R_{b,B}(ξ) = Φ(z_{αB/m} - ξ) + Φ(z_{αb/m} - ξ) - 2Φ(z_{α/m} - ξ), with
/// z at b = 0 taken as +∞. The worst-case gain-minus-loss over general
/// weights with min weight b and smallest up-weight B is positive exactly
/// when this is <= 0. Requires 0 <= b <= 1 <= B <= m/α.
double worst_case_robustness(double xi, double b, double B, const TestConfig& cfg);

/// Worst-case gain minus loss, -R_{b,B}(ξ). Positive means weighting helps.
double robustness_margin(double xi, double b, double B, const TestConfig& cfg);

/// z_{α/m} - 1/(z_{α/m} - z_{Bα/m}): for B >= 2 the margin at b = 0 is
/// nonnegative on [0, bound]. Throws DomainError for B < 2.
double safe_zone_bound(double B, const TestConfig& cfg);

struct SafeZoneScan {
  double bound = 0.0;
  double min_margin = 0.0;
  std::size_t points = 0;
  bool holds = true;
};

/// Evaluates robustness_margin(ξ, 0, B) on a grid over [0, bound] with the
/// given spacing. An empty interval (negative bound) holds trivially.
SafeZoneScan scan_safe_zone(double B, const TestConfig& cfg, double step = 1e-3);

/// Worst-case power at a true alternative ξ when a fraction γ of nulls is
/// mistaken for alternatives with mean u and the weights are computed from
/// Q̃ = (1-a-γ)δ_0 + γδ_u + aδ_ξ.
struct WorstCaseReport {
  bool restricted = false;  // u limited to [0, ξ]
  double xi = 0.0;
  double a = 0.0;
  double gamma = 0.0;
  double c_star = 0.0;   // sup over admissible u of the normalizing constant
  double u_star = 0.0;   // least favorable u
  double C_of_xi = 0.0;  // same value as c_star; named as in the restricted analysis
  double xi0 = 0.0;      // z_{α/(m(γ+a))}
  double xi_star = 0.0;  // Bonferroni domination boundary (restricted: z_{α/m} + sqrt(z²_{α/m} - z_q²))
  double inf_power = 0.0;
  double bonferroni_power = 0.0;
  double optimal_power = 0.0;  // power with correct weights 1/a
  bool below_xi_star = false;
  bool beats_bonferroni = false;

  // Leading-order forms with O(a) terms dropped; reported, never used above.
  double c_star_approx = 0.0;     // z²_{α/(mγ)}/2
  double u_star_approx = 0.0;     // z_{α/(mγ)}
  double inf_power_approx = 0.0;  // Φ̄((z²_{α/(mγ)} - ξ²)/(2ξ))
  double domination_threshold = 0.0;  // z_{α/m} + sqrt(z²_{α/m} - z²_{α/(mγ)})
  double large_xi_floor = 0.0;    // Φ̄((z²_{α/(mγ)} - ξ*²)/(2ξ*))
  double deficit_floor = 0.0;     // 1 - γ/(1-a)
};

/// u restricted to [0, ξ]. Throws InfeasibleError unless α/m <= γ + a <= 1,
/// DomainError if ξ <= 0 or q = α(1-a)/(mγ) is outside (0, 1).
WorstCaseReport restricted_worst_case(double xi, double a, double gamma, const TestConfig& cfg);

/// u unrestricted. u* = sqrt(2c*) where c* solves
/// γΦ̄(sqrt(2c)) + aΦ̄(ξ/2 + c/ξ) = α/m. Throws InfeasibleError if
/// γ + a < α/m.
WorstCaseReport unrestricted_worst_case(double xi, double a, double gamma,
                                        const TestConfig& cfg);

}  // namespace wht
