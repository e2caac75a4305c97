#pragma once

// Optimal p-value weights for the weighted Bonferroni procedure.
//
// For one-sided tests of T_j ~ N(ξ_j, 1) the weights maximizing average power
// subject to w_j >= 0 and mean(w) = 1 form the one-parameter family
//
//     ρ_c(ξ) = (m/α) Φ̄(ξ/2 + c/ξ) I(ξ > 0),
//
// with the constant c fixed by the normalization mean(ρ_c(ξ_j)) = 1.

#include <cstddef>
#include <span>
#include <vector>

namespace wht {

enum class Sidedness { OneSided, TwoSided };

/// Number of hypotheses, target familywise error, sidedness.
struct TestConfig {
  std::size_t m = 1;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::OneSided;

  /// Throws DomainError unless m >= 1 and 0 < alpha < 1.
  void validate() const;
  /// Bonferroni per-test level α/m.
  double level() const { return alpha / static_cast<double>(m); }
  /// Largest useful weight m/α (working threshold 1).
  double cap() const { return static_cast<double>(m) / alpha; }
};

/// Finite point-mass mixture of alternative means.
struct MixtureAtom {
  double mass;
  double location;
};

class MixtureSpec {
 public:
  /// Throws DomainError unless masses are >= 0 and sum to 1 within 1e-12 and
  /// locations are finite.
  explicit MixtureSpec(std::vector<MixtureAtom> atoms);

  const std::vector<MixtureAtom>& atoms() const { return atoms_; }

 private:
  std::vector<MixtureAtom> atoms_;
};

/// Kolmogorov–Smirnov distance sup_x |Q(-∞,x] - Q̃(-∞,x]| of two mixtures.
double ks_distance(const MixtureSpec& q, const MixtureSpec& q_tilde);

struct NormalizationConstant {
  double c = 0.0;
  /// Normalization residual at c.
  double residual = 0.0;
};

struct WeightVector {
  std::vector<double> values;
  /// Equal weights were substituted because estimation was infeasible.
  bool fallback = false;
  /// Familywise error is controlled by construction even though mean != 1
  /// (full-data calibrated weights).
  bool certified = false;

  std::size_t size() const { return values.size(); }
  double mean() const;
  static WeightVector equal(std::size_t m, bool fallback = false);
};

/// Start point and first step for the outward bracket search of solve_c.
struct SolveOptions {
  double start = 0.0;
  double initial_step = 1.0;
  double residual_tol = 1e-10;
};

/// ρ_c(ξ); 0 for ξ <= 0, otherwise in [0, m/α].
double rho(double xi, double c, const TestConfig& cfg);

/// (1/m) Σ_j ρ_c(ξ_j) - 1. Strictly decreasing in c when some ξ_j > 0.
double normalization_residual(double c, std::span<const double> theta, const TestConfig& cfg);

/// Σ_i mass_i ρ_c(location_i) - 1.
double normalization_residual(double c, const MixtureSpec& q, const TestConfig& cfg);

/// The unique c with |normalization_residual(c)| <= opts.residual_tol.
/// Throws InfeasibleError if no ξ_j > 0 and DomainError if theta.size() != m.
NormalizationConstant solve_c(std::span<const double> theta, const TestConfig& cfg,
                              const SolveOptions& opts = {});
NormalizationConstant solve_c(const MixtureSpec& q, const TestConfig& cfg,
                              const SolveOptions& opts = {});

/// w_j = ρ_c(ξ_j) with c = solve_c(θ).
WeightVector optimal_weights(std::span<const double> theta, const TestConfig& cfg);

/// (1/m) Σ_j Φ̄(c/ξ_j - ξ_j/2) I(ξ_j > 0): average power under optimal weights.
double oracle_power(std::span<const double> theta, const TestConfig& cfg);

/// Power at one alternative ξ > 0 under ρ_c: Φ̄(c/ξ - ξ/2).
double optimal_power_at(double xi, double c);

/// Two mixtures that are close in Kolmogorov–Smirnov distance but have
/// very different optimal weights at ξ.
struct DiscontinuityExample {
  double u = 0.0;
  double xi = 0.0;
  double w_on_u = 0.0;
  double w_on_xi = 0.0;
  double weight_under_Q = 0.0;
  double ks_distance = 0.0;
};

/// Builds Q = (1-a)δ_0 + aδ_ξ and Q̃ = (1-a-γ)δ_0 + γδ_u + aδ_ξ such that c
/// normalizes ρ_c under Q̃ and ρ_c(u)/ρ_c(ξ) = K. Throws DomainError when
/// K < 1, a quantile argument leaves (0,1), or a discriminant is negative.
DiscontinuityExample discontinuity_example(std::size_t m, double alpha, double a, double gamma,
                                           double K, double c);

}  // namespace wht
