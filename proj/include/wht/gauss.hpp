#pragma once

// Standard normal kernel: density, upper-tail CDF and upper-tail quantile.
//
// Every other module evaluates tail areas through these functions, often far
// out in the tail (optimal weights involve arguments near 10 and beyond), so
// accuracy is relative rather than absolute:
//   upper_cdf       relative error <= 1e-12 for |x| <= 8, <= 1e-10 down to 1e-300
//   upper_quantile  |upper_cdf(z) - p| / p <= 1e-10

namespace wht {

/// A probability in [0, 1] that also carries its complement.
///
/// When built from upper_cdf() both tails are computed directly, so
/// upper_quantile(upper_cdf(x)) round-trips for negative x where 1 - p is
/// not representable. When built from a plain double the complement is
/// 1 - p.
class Probability {
 public:
  constexpr Probability() = default;
  Probability(double p);  // NOLINT(google-explicit-constructor)

  /// Both tails given explicitly; throws DomainError unless each is in
  /// [0, 1] and they sum to 1 within 1e-12.
  static Probability from_tails(double upper, double lower);

  double value() const noexcept { return value_; }
  double complement() const noexcept { return complement_; }
  operator double() const noexcept { return value_; }  // NOLINT

 private:
  friend Probability upper_cdf(double x) noexcept;
  constexpr Probability(double upper, double lower, int) noexcept
      : value_(upper), complement_(lower) {}

  double value_ = 0.0;
  double complement_ = 1.0;
};

/// (2π)^{-1/2} exp(-x²/2).
double std_normal_pdf(double x) noexcept;

/// Φ̄(x) = P(Z > x) for Z ~ N(0,1); accepts ±∞.
double upper_tail(double x) noexcept;

/// Φ(x) = P(Z <= x).
double lower_tail(double x) noexcept;

/// Φ̄(x) packaged with Φ(x).
Probability upper_cdf(double x) noexcept;

/// z_p = Φ̄^{-1}(p). Throws DomainError unless 0 < p < 1.
double upper_quantile(Probability p);

/// Diagnostic only: first-order tail approximation z_p ≈ sqrt(2 log(L/p))
/// with L = (4π log(1/p))^{-1/2}, from Φ̄(z) ≈ φ(z)/z. Requires p < 1/2.
double upper_quantile_tail_approx(double p);

}  // namespace wht
