#pragma once

// External weight design from prior knowledge: how far to up-weight a
// fraction ε of hypotheses, and the two constrained binary designs.
//
// Every design evaluates power at a single alternative mean, by default the
// marginal effect ξ_m = z_{α/m} at which unweighted power is exactly 1/2.

#include <cstddef>
#include <optional>

#include "wht/weights.hpp"

namespace wht {

/// z_{α/m}. One-sided only.
double marginal_effect(const TestConfig& cfg);

/// R(B, ε) at ξ (default ξ_m). Weights past m/α are capped: their working
/// threshold is 1 and their power is 1, so R stays defined for every B >= 1.
double design_robustness(double B, double epsilon, const TestConfig& cfg,
                         std::optional<double> xi = std::nullopt);

/// B0(ε) = sup{B : R(B, ε) > 0}. Throws DomainError unless α/m < ε < 1
/// (for ε <= α/m the capped gain never turns negative) and InfeasibleError
/// if R(·, ε) has no positive part.
double turnaround_B0(double epsilon, const TestConfig& cfg,
                     std::optional<double> xi = std::nullopt);

/// B*(ε) = argmax_B R(B, ε), by golden section on [1, B0(ε)].
double best_B(double epsilon, const TestConfig& cfg, std::optional<double> xi = std::nullopt);

struct DesignSpec {
  double B = 1.0;  // w1/w0; +∞ when w0 = 0
  double w1 = 1.0;
  double w0 = 1.0;
  double epsilon = 0.0;
  std::size_t k = 0;  // number of hypotheses receiving w1
  double beta = 0.5;
  double delta = 0.5;
  double xi = 0.0;
  double power_high = 0.5;  // power at w1
  double power_low = 0.5;   // power at w0
};

/// Maximizes the minimum power subject to at least εm hypotheses having
/// power >= 1-β. w1 = cm/α with c = Φ̄(ξ + z_{1-β});
/// B = cm(1-ε)/(α - εcm); k = round(εm). Requires 0 < ε < 1, 0 < β <= 1/2.
/// Throws InfeasibleError when α <= εcm.
DesignSpec design_minmax(double epsilon, double beta, const TestConfig& cfg,
                         std::optional<double> xi = std::nullopt);

/// Maximizes the number of hypotheses with power >= 1-β subject to every
/// hypothesis keeping power >= δ. w1 = (m/α)Φ̄(ξ + z_{1-β}),
/// w0 = (m/α)Φ̄(ξ + z_δ) (0 when δ = 0), ε = (1-w0)/(w1-w0), k = floor(mε).
/// Throws DomainError when w0 >= 1 or w1 <= 1.
DesignSpec design_count_max(double beta, double delta, const TestConfig& cfg,
                            std::optional<double> xi = std::nullopt);

}  // namespace wht
