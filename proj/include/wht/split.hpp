#pragma once

// Testing procedures: the weighted Bonferroni rejection rule and weight
// estimation from a stage-1 split of the data.
//
// The data for hypothesis j are summarized by independent statistics
// T1_j ~ N(√b ξ_j, 1) and T2_j ~ N(√(1-b) ξ_j, 1); the full-data statistic is
// T_j = √b T1_j + √(1-b) T2_j ~ N(ξ_j, 1). Weights estimated from T1 may be
// used either with T2 alone (split mode, valid because the weights are
// independent of T2) or with T (full mode, valid only with the recalibrated
// constant of full_data_c).

#include <cstddef>
#include <span>
#include <vector>

#include "wht/weights.hpp"

namespace wht {

class SplitData {
 public:
  /// Derives t = √b t1 + √(1-b) t2. Throws DomainError on length mismatch
  /// or b outside (0, 1).
  SplitData(std::vector<double> t1, std::vector<double> t2, double b);

  const std::vector<double>& t1() const { return t1_; }
  const std::vector<double>& t2() const { return t2_; }
  const std::vector<double>& t() const { return t_; }
  double b() const { return b_; }
  std::size_t size() const { return t_.size(); }

 private:
  std::vector<double> t1_;
  std::vector<double> t2_;
  std::vector<double> t_;
  double b_;
};

enum class EstimatorKind { Identity, HardThreshold, SoftThreshold, JamesStein };

struct Estimator {
  EstimatorKind kind = EstimatorKind::Identity;
  double lambda = 0.0;  // ignored by Identity and JamesStein
};

enum class TestMode { Split, Full };

/// 0-based indices of rejected hypotheses, ascending.
struct RejectionSet {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  bool contains(std::size_t j) const;
};

/// P_j = Φ̄(t_j).
std::vector<double> pvalues(std::span<const double> t);

/// {j : p_j <= α w_j / m}; a zero weight never rejects. Throws InvariantError
/// when |mean(w) - 1| > 1e-6 unless w.certified, and DomainError on length
/// mismatch.
RejectionSet weighted_bonferroni(std::span<const double> p, const WeightVector& w,
                                 const TestConfig& cfg);

/// Stage-1 estimate of ξ on the T1 scale. Throws DomainError for James–Stein
/// with fewer than 3 statistics or a negative λ.
std::vector<double> estimate_xi1(std::span<const double> t1, const Estimator& est);

/// r_s = sqrt((1-b)/b) for Split, r_f = 1/sqrt(b) for Full.
double rescale_factor(double b, TestMode mode);
std::vector<double> rescale(std::span<const double> xi1_hat, double b, TestMode mode);

/// optimal_weights(ξ̂); equal weights flagged as fallback when no ξ̂_j > 0.
WeightVector split_mode_weights(std::span<const double> xi_hat, const TestConfig& cfg);

/// Σ_{ξ̂_j > 0} Φ̄((ξ̂_j/2 + c/ξ̂_j - √b t1_j)/√(1-b)) - α. Decreasing in c.
double full_data_residual(double c, std::span<const double> xi_hat, std::span<const double> t1,
                          double b, const TestConfig& cfg);

/// Root of full_data_residual to |residual| <= 1e-12. Throws InfeasibleError
/// when no ξ̂_j > 0.
NormalizationConstant full_data_c(std::span<const double> xi_hat, std::span<const double> t1,
                                  double b, const TestConfig& cfg);

/// w_j = (m/α) Φ̄(ξ̂_j/2 + c/ξ̂_j) for ξ̂_j > 0, else 0, with c from
/// full_data_c; flagged certified. The mean is generally not 1: error control
/// comes from the recalibrated c. Throws InfeasibleError when no ξ̂_j > 0.
WeightVector full_mode_weights(std::span<const double> xi_hat, std::span<const double> t1,
                               double b, const TestConfig& cfg);

/// m/M on the M statistics with |t1_j| > λ, 0 elsewhere; equal weights
/// flagged as fallback when M = 0.
WeightVector binary_stage_weights(std::span<const double> t1, double lambda,
                                  const TestConfig& cfg);

/// Binary weights for use with full-data statistics. The same set
/// Λ = {|t1_j| > λ} shares one weight (m/α) Φ̄(κ), with κ solving
/// Σ_{j∈Λ} Φ̄((κ - √b t1_j)/√(1-b)) = α, so the familywise error is at most α
/// conditionally on T1. When Λ is everything this is plain Bonferroni
/// (all ones); when Λ is empty equal weights are flagged as fallback.
WeightVector binary_full_mode_weights(std::span<const double> t1, double lambda, double b,
                                      const TestConfig& cfg);

}  // namespace wht
