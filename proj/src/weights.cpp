#include "wht/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "wht/errors.hpp"
#include "wht/gauss.hpp"
#include "wht/roots.hpp"

namespace wht {

namespace {

// Positive-location atoms; every other atom has weight 0 and drops out of
// the normalization.
struct PositiveAtoms {
  std::vector<double> location;
  std::vector<double> mass;
};

PositiveAtoms positive_atoms(std::span<const double> theta) {
  PositiveAtoms atoms;
  const double mass = 1.0 / static_cast<double>(theta.size());
  for (double xi : theta) {
    if (xi > 0.0) {
      atoms.location.push_back(xi);
      atoms.mass.push_back(mass);
    }
  }
  return atoms;
}

PositiveAtoms positive_atoms(const MixtureSpec& q) {
  PositiveAtoms atoms;
  for (const auto& a : q.atoms()) {
    if (a.location > 0.0 && a.mass > 0.0) {
      atoms.location.push_back(a.location);
      atoms.mass.push_back(a.mass);
    }
  }
  return atoms;
}

// Residual Σ mass·ρ_c(loc) - 1 and its derivative in c.
std::pair<double, double> residual_and_slope(double c, const PositiveAtoms& atoms,
                                             const TestConfig& cfg) {
  double value = 0.0;
  double slope = 0.0;
  for (std::size_t i = 0; i < atoms.location.size(); ++i) {
    const double xi = atoms.location[i];
    const double arg = 0.5 * xi + c / xi;
    value += atoms.mass[i] * upper_tail(arg);
    slope -= atoms.mass[i] * std_normal_pdf(arg) / xi;
  }
  return {cfg.cap() * value - 1.0, cfg.cap() * slope};
}

NormalizationConstant solve_atoms(const PositiveAtoms& atoms, const TestConfig& cfg,
                                  const SolveOptions& opts) {
  if (atoms.location.empty()) {
    throw InfeasibleError("no positive mean: optimal weights are undefined (use equal weights)");
  }
  auto residual = [&](double c) { return residual_and_slope(c, atoms, cfg).first; };
  auto with_slope = [&](double c) { return residual_and_slope(c, atoms, cfg); };
  const auto br = numeric::bracket_decreasing(residual, opts.start, opts.initial_step);
  const double c =
      numeric::newton_decreasing(with_slope, br, {.residual_tol = opts.residual_tol});
  return {c, residual(c)};
}

void check_theta(std::span<const double> theta, const TestConfig& cfg) {
  cfg.validate();
  if (theta.size() != cfg.m) {
    throw DomainError("mean vector has length " + std::to_string(theta.size()) +
                      " but m = " + std::to_string(cfg.m));
  }
  for (double xi : theta) {
    if (!std::isfinite(xi)) throw DomainError("mean vector entries must be finite");
  }
}

}  // namespace

void TestConfig::validate() const {
  if (m < 1) throw DomainError("m must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

MixtureSpec::MixtureSpec(std::vector<MixtureAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("mixture needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.mass >= 0.0)) throw DomainError("mixture masses must be nonnegative");
    if (!std::isfinite(a.location)) throw DomainError("mixture locations must be finite");
    total += a.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture masses must sum to 1");
}

double ks_distance(const MixtureSpec& q, const MixtureSpec& q_tilde) {
  std::vector<double> points;
  for (const auto& a : q.atoms()) points.push_back(a.location);
  for (const auto& a : q_tilde.atoms()) points.push_back(a.location);
  auto cdf = [](const MixtureSpec& mix, double x) {
    double total = 0.0;
    for (const auto& a : mix.atoms()) {
      if (a.location <= x) total += a.mass;
    }
    return total;
  };
  double sup = 0.0;
  for (double x : points) sup = std::max(sup, std::abs(cdf(q, x) - cdf(q_tilde, x)));
  return sup;
}

double WeightVector::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

WeightVector WeightVector::equal(std::size_t m, bool fallback) {
  WeightVector w;
  w.values.assign(m, 1.0);
  w.fallback = fallback;
  return w;
}

double rho(double xi, double c, const TestConfig& cfg) {
  if (!(xi > 0.0)) return 0.0;
  return cfg.cap() * upper_tail(0.5 * xi + c / xi);
}

double normalization_residual(double c, std::span<const double> theta, const TestConfig& cfg) {
  check_theta(theta, cfg);
  double total = 0.0;
  for (double xi : theta) total += rho(xi, c, cfg);
  return total / static_cast<double>(cfg.m) - 1.0;
}

double normalization_residual(double c, const MixtureSpec& q, const TestConfig& cfg) {
  cfg.validate();
  double total = 0.0;
  for (const auto& a : q.atoms()) total += a.mass * rho(a.location, c, cfg);
  return total - 1.0;
}

NormalizationConstant solve_c(std::span<const double> theta, const TestConfig& cfg,
                              const SolveOptions& opts) {
  check_theta(theta, cfg);
  return solve_atoms(positive_atoms(theta), cfg, opts);
}

NormalizationConstant solve_c(const MixtureSpec& q, const TestConfig& cfg,
                              const SolveOptions& opts) {
  cfg.validate();
  return solve_atoms(positive_atoms(q), cfg, opts);
}

WeightVector optimal_weights(std::span<const double> theta, const TestConfig& cfg) {
  const double c = solve_c(theta, cfg).c;
  WeightVector w;
  w.values.reserve(theta.size());
  for (double xi : theta) w.values.push_back(rho(xi, c, cfg));
  return w;
}

double optimal_power_at(double xi, double c) { return upper_tail(c / xi - 0.5 * xi); }

double oracle_power(std::span<const double> theta, const TestConfig& cfg) {
  const double c = solve_c(theta, cfg).c;
  double total = 0.0;
  for (double xi : theta) {
    if (xi > 0.0) total += optimal_power_at(xi, c);
  }
  return total / static_cast<double>(cfg.m);
}

DiscontinuityExample discontinuity_example(std::size_t m, double alpha, double a, double gamma,
                                           double K, double c) {
  const TestConfig cfg{m, alpha};
  cfg.validate();
  if (!(a > 0.0 && a < 1.0) || !(gamma > 0.0 && gamma < 1.0) || a + gamma > 1.0) {
    throw DomainError("need 0 < a, 0 < gamma and a + gamma <= 1");
  }
  if (!(K >= 1.0)) throw DomainError("K must be at least 1");
  if (!(c > 0.0)) throw DomainError("c must be positive");

  const double denom = static_cast<double>(m) * (gamma * K + a);
  const double big = upper_quantile(alpha / denom);
  const double small = upper_quantile(K * alpha / denom);
  const double disc_xi = big * big - 2.0 * c;
  const double disc_u = small * small - 2.0 * c;
  if (disc_xi < 0.0 || disc_u < 0.0) {
    throw DomainError("discriminant negative: c too large for these quantiles");
  }

  DiscontinuityExample ex;
  ex.xi = big + std::sqrt(disc_xi);
  // u = B - sqrt(B² - 2c) written without cancellation
  ex.u = 2.0 * c / (small + std::sqrt(disc_u));
  if (!(ex.u > 0.0 && ex.xi > 0.0)) throw DomainError("constructed means must be positive");
  ex.w_on_xi = rho(ex.xi, c, cfg);
  ex.w_on_u = rho(ex.u, c, cfg);
  ex.weight_under_Q = 1.0 / a;

  const MixtureSpec q({{1.0 - a, 0.0}, {a, ex.xi}});
  const MixtureSpec q_tilde({{1.0 - a - gamma, 0.0}, {gamma, ex.u}, {a, ex.xi}});
  ex.ks_distance = ks_distance(q, q_tilde);
  return ex;
}

}  // namespace wht
