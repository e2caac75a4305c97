#include "wht/split.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "wht/errors.hpp"
#include "wht/gauss.hpp"
#include "wht/roots.hpp"

namespace wht {

namespace {

constexpr double kFullDataTol = 1e-12;

void check_fraction(double b) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("split fraction b must lie in (0, 1)");
}

void check_length(std::size_t n, const TestConfig& cfg, const char* what) {
  cfg.validate();
  if (n != cfg.m) {
    throw DomainError(std::string(what) + " has length " + std::to_string(n) +
                      " but m = " + std::to_string(cfg.m));
  }
}

// Σ_i Φ̄((loc_i - shift_i)/s) - α and its derivative with respect to a
// common additive change in loc, scaled per term by 1/xi_i.
struct FullDataTerms {
  std::vector<double> xi;     // positive estimates
  std::vector<double> shift;  // √b t1
  double s;                   // √(1-b)
};

FullDataTerms full_data_terms(std::span<const double> xi_hat, std::span<const double> t1,
                              double b) {
  FullDataTerms terms{{}, {}, std::sqrt(1.0 - b)};
  const double rb = std::sqrt(b);
  for (std::size_t j = 0; j < xi_hat.size(); ++j) {
    if (xi_hat[j] > 0.0) {
      terms.xi.push_back(xi_hat[j]);
      terms.shift.push_back(rb * t1[j]);
    }
  }
  return terms;
}

std::pair<double, double> full_data_value(double c, const FullDataTerms& terms, double alpha) {
  double value = 0.0;
  double slope = 0.0;
  for (std::size_t i = 0; i < terms.xi.size(); ++i) {
    const double xi = terms.xi[i];
    const double arg = (0.5 * xi + c / xi - terms.shift[i]) / terms.s;
    value += upper_tail(arg);
    slope -= std_normal_pdf(arg) / (xi * terms.s);
  }
  return {value - alpha, slope};
}

void check_full_inputs(std::span<const double> xi_hat, std::span<const double> t1, double b,
                       const TestConfig& cfg) {
  check_length(xi_hat.size(), cfg, "xi_hat");
  check_length(t1.size(), cfg, "t1");
  check_fraction(b);
  if (cfg.sidedness != Sidedness::OneSided) {
    throw DomainError("full-data weights are defined for one-sided tests only");
  }
}

}  // namespace

SplitData::SplitData(std::vector<double> t1, std::vector<double> t2, double b)
    : t1_(std::move(t1)), t2_(std::move(t2)), b_(b) {
  check_fraction(b);
  if (t1_.size() != t2_.size()) throw DomainError("t1 and t2 must have equal length");
  const double r1 = std::sqrt(b);
  const double r2 = std::sqrt(1.0 - b);
  t_.resize(t1_.size());
  for (std::size_t j = 0; j < t_.size(); ++j) t_[j] = r1 * t1_[j] + r2 * t2_[j];
}

bool RejectionSet::contains(std::size_t j) const {
  return std::binary_search(indices.begin(), indices.end(), j);
}

std::vector<double> pvalues(std::span<const double> t) {
  std::vector<double> p(t.size());
  std::transform(t.begin(), t.end(), p.begin(), [](double x) { return upper_tail(x); });
  return p;
}

RejectionSet weighted_bonferroni(std::span<const double> p, const WeightVector& w,
                                 const TestConfig& cfg) {
  check_length(p.size(), cfg, "p-value vector");
  check_length(w.size(), cfg, "weight vector");
  if (!w.certified && std::abs(w.mean() - 1.0) > 1e-6) {
    throw InvariantError("weights must average 1 for familywise error control (mean = " +
                         std::to_string(w.mean()) + ")");
  }
  RejectionSet r;
  const double level = cfg.level();
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double wj = w.values[j];
    if (wj < 0.0) throw InvariantError("weights must be nonnegative");
    if (wj > 0.0 && p[j] <= level * wj) r.indices.push_back(j);
  }
  return r;
}

std::vector<double> estimate_xi1(std::span<const double> t1, const Estimator& est) {
  if (!(est.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  std::vector<double> out(t1.begin(), t1.end());
  switch (est.kind) {
    case EstimatorKind::Identity:
      break;
    case EstimatorKind::HardThreshold:
      for (double& x : out) {
        if (!(std::abs(x) > est.lambda)) x = 0.0;
      }
      break;
    case EstimatorKind::SoftThreshold:
      for (double& x : out) {
        const double mag = std::max(std::abs(x) - est.lambda, 0.0);
        x = mag == 0.0 ? 0.0 : std::copysign(mag, x);
      }
      break;
    case EstimatorKind::JamesStein: {
      if (t1.size() < 3) throw DomainError("James-Stein needs at least 3 statistics");
      double ss = 0.0;
      for (double x : t1) ss += x * x;
      const double shrink =
          ss > 0.0 ? std::max(1.0 - static_cast<double>(t1.size() - 2) / ss, 0.0) : 0.0;
      for (double& x : out) x *= shrink;
      break;
    }
  }
  return out;
}

double rescale_factor(double b, TestMode mode) {
  check_fraction(b);
  return mode == TestMode::Split ? std::sqrt((1.0 - b) / b) : 1.0 / std::sqrt(b);
}

std::vector<double> rescale(std::span<const double> xi1_hat, double b, TestMode mode) {
  const double r = rescale_factor(b, mode);
  std::vector<double> out(xi1_hat.size());
  std::transform(xi1_hat.begin(), xi1_hat.end(), out.begin(), [r](double x) { return r * x; });
  return out;
}

WeightVector split_mode_weights(std::span<const double> xi_hat, const TestConfig& cfg) {
  check_length(xi_hat.size(), cfg, "xi_hat");
  if (std::none_of(xi_hat.begin(), xi_hat.end(), [](double x) { return x > 0.0; })) {
    return WeightVector::equal(cfg.m, true);
  }
  return optimal_weights(xi_hat, cfg);
}

double full_data_residual(double c, std::span<const double> xi_hat, std::span<const double> t1,
                          double b, const TestConfig& cfg) {
  check_full_inputs(xi_hat, t1, b, cfg);
  return full_data_value(c, full_data_terms(xi_hat, t1, b), cfg.alpha).first;
}

NormalizationConstant full_data_c(std::span<const double> xi_hat, std::span<const double> t1,
                                  double b, const TestConfig& cfg) {
  check_full_inputs(xi_hat, t1, b, cfg);
  const auto terms = full_data_terms(xi_hat, t1, b);
  if (terms.xi.empty()) {
    throw InfeasibleError("no positive estimated mean: use equal weights on full-data statistics");
  }
  auto fd = [&](double c) { return full_data_value(c, terms, cfg.alpha); };
  auto f = [&](double c) { return fd(c).first; };
  const auto br = numeric::bracket_decreasing(f, 0.0, 1.0);
  const double c = numeric::newton_decreasing(fd, br, {.residual_tol = kFullDataTol});
  return {c, f(c)};
}

WeightVector full_mode_weights(std::span<const double> xi_hat, std::span<const double> t1,
                               double b, const TestConfig& cfg) {
  const double c = full_data_c(xi_hat, t1, b, cfg).c;
  WeightVector w;
  w.certified = true;
  w.values.reserve(xi_hat.size());
  for (double xi : xi_hat) w.values.push_back(rho(xi, c, cfg));
  return w;
}

WeightVector binary_stage_weights(std::span<const double> t1, double lambda,
                                  const TestConfig& cfg) {
  check_length(t1.size(), cfg, "t1");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  const auto M = static_cast<std::size_t>(
      std::count_if(t1.begin(), t1.end(), [lambda](double x) { return std::abs(x) > lambda; }));
  if (M == 0) return WeightVector::equal(cfg.m, true);
  const double high = static_cast<double>(cfg.m) / static_cast<double>(M);
  WeightVector w;
  w.values.reserve(t1.size());
  for (double x : t1) w.values.push_back(std::abs(x) > lambda ? high : 0.0);
  return w;
}

WeightVector binary_full_mode_weights(std::span<const double> t1, double lambda, double b,
                                      const TestConfig& cfg) {
  check_length(t1.size(), cfg, "t1");
  check_fraction(b);
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (cfg.sidedness != Sidedness::OneSided) {
    throw DomainError("full-data weights are defined for one-sided tests only");
  }
  std::vector<double> shift;
  for (double x : t1) {
    if (std::abs(x) > lambda) shift.push_back(std::sqrt(b) * x);
  }
  if (shift.empty()) return WeightVector::equal(cfg.m, true);
  if (shift.size() == cfg.m) return WeightVector::equal(cfg.m);

  const double s = std::sqrt(1.0 - b);
  auto fd = [&](double kappa) {
    double value = 0.0;
    double slope = 0.0;
    for (double sh : shift) {
      const double arg = (kappa - sh) / s;
      value += upper_tail(arg);
      slope -= std_normal_pdf(arg) / s;
    }
    return std::pair{value - cfg.alpha, slope};
  };
  auto f = [&](double kappa) { return fd(kappa).first; };
  const auto br = numeric::bracket_decreasing(f, 0.0, 1.0);
  const double kappa = numeric::newton_decreasing(fd, br, {.residual_tol = kFullDataTol});

  const double level = cfg.cap() * upper_tail(kappa);
  WeightVector w;
  w.certified = true;
  w.values.reserve(t1.size());
  for (double x : t1) w.values.push_back(std::abs(x) > lambda ? level : 0.0);
  return w;
}

}  // namespace wht
