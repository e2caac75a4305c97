#include "wht/gauss.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wht/errors.hpp"

namespace wht {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2π)

// Rational approximation of the lower-tail quantile Φ^{-1}(p) for
// 0 < p <= 1/2 (P. J. Acklam). Relative error about 1e-9; refined below.
double lower_quantile_initial(double p) {
  static constexpr std::array<double, 6> a = {
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// z >= 0 with Φ̄(z) = q for 0 < q <= 1/2.
double upper_quantile_small(double q) {
  double z = -lower_quantile_initial(q);
  // Halley corrector on f(z) = Φ̄(z) - q. Two steps take the 1e-9 start to
  // machine precision; the third is a guard for starts near the branch switch.
  for (int step = 0; step < 3; ++step) {
    const double density = std_normal_pdf(z);
    if (density == 0.0) break;
    const double u = (upper_tail(z) - q) / density;
    const double next = z + u / (1.0 - 0.5 * z * u);
    if (!std::isfinite(next)) break;
    if (next == z) break;
    z = next;
  }
  return z;
}

}  // namespace

Probability::Probability(double p) : value_(p), complement_(1.0 - p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
  }
}

Probability Probability::from_tails(double upper, double lower) {
  if (!(upper >= 0.0 && upper <= 1.0 && lower >= 0.0 && lower <= 1.0) ||
      std::abs(upper + lower - 1.0) > 1e-12) {
    throw DomainError("tails must be complementary probabilities");
  }
  return Probability(upper, lower, 0);
}

double std_normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double upper_tail(double x) noexcept {
  return 0.5 * std::erfc(x * std::numbers::sqrt2 * 0.5);
}

double lower_tail(double x) noexcept { return upper_tail(-x); }

Probability upper_cdf(double x) noexcept {
  return Probability(upper_tail(x), lower_tail(x), 0);
}

double upper_quantile(Probability p) {
  const double upper = p.value();
  const double lower = p.complement();
  if (!(upper > 0.0 && lower > 0.0)) {
    throw DomainError("upper_quantile requires 0 < p < 1, got " + std::to_string(upper));
  }
  if (upper == 0.5) return 0.0;
  return upper < lower ? upper_quantile_small(upper) : -upper_quantile_small(lower);
}

double upper_quantile_tail_approx(double p) {
  if (!(p > 0.0 && p < 0.5)) {
    throw DomainError("tail approximation needs 0 < p < 1/2");
  }
  const double log_inv = -std::log(p);
  const double slowly_varying = 1.0 / std::sqrt(4.0 * std::numbers::pi * log_inv);
  const double arg = 2.0 * std::log(slowly_varying / p);
  return arg > 0.0 ? std::sqrt(arg) : 0.0;
}

}  // namespace wht
