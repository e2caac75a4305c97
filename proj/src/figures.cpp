#include "wht/figures.hpp"

#include <cmath>
#include <random>

#include "wht/design.hpp"
#include "wht/errors.hpp"
#include "wht/gauss.hpp"
#include "wht/power.hpp"
#include "wht/split.hpp"
#include "wht/weights.hpp"

namespace wht {

namespace {

const std::vector<std::pair<Figure, std::string>>& registry() {
  static const std::vector<std::pair<Figure, std::string>> names{
      {Figure::Single, "single"},         {Figure::Minimax, "minimax"},
      {Figure::Family, "family"},         {Figure::Powermult, "powermult"},
      {Figure::Robust, "robust"},         {Figure::Turnaround, "turnaround"},
      {Figure::Power, "power"},           {Figure::Wghtdist, "wghtdist"},
  };
  return names;
}

// n+1 points from 10^lo to 10^hi.
std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(std::pow(10.0, lo + (hi - lo) * i / n));
  return g;
}

// i*step for i = first..last.
std::vector<double> lin_grid(int first, int last, double step) {
  std::vector<double> g;
  for (int i = first; i <= last; ++i) g.push_back(i * step);
  return g;
}

TestConfig one_sided(const FigureParams& p) { return {p.m, p.alpha, Sidedness::OneSided}; }

Table single(const FigureParams& p) {
  const auto cfg = one_sided(p);
  const double xi = marginal_effect(cfg);
  const double eps = 1.0 / static_cast<double>(p.m);
  Table t{{"B", "power_correct", "power_incorrect"}, {}};
  for (double B : log_grid(0.0, 3.0, 120)) {
    const auto s = binary_weights(B, eps);
    t.add_row({B, power(xi, std::min(s.w1, cfg.cap()), cfg), power(xi, s.w0, cfg)});
  }
  return t;
}

Table minimax(const FigureParams& p) {
  const auto cfg = one_sided(p);
  Table t{{"xi", "bonferroni", "worst_restricted", "worst_unrestricted", "worst_all_misspecified",
           "xi_star"},
          {}};
  for (double xi : lin_grid(1, 160, 0.05)) {
    const auto restricted = restricted_worst_case(xi, p.a, p.gamma, cfg);
    const auto unrestricted = unrestricted_worst_case(xi, p.a, p.gamma, cfg);
    const auto all = unrestricted_worst_case(xi, p.a, 1.0 - p.a, cfg);
    t.add_row({xi, restricted.bonferroni_power, restricted.inf_power, unrestricted.inf_power,
               all.inf_power, restricted.xi_star});
  }
  return t;
}

Table family(const FigureParams& p) {
  const auto cfg = one_sided(p);
  Table t{{"c", "xi", "rho", "rho_normalized"}, {}};
  for (double c : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double peak = cfg.cap() * upper_tail(std::sqrt(2.0 * c));
    for (double xi : lin_grid(1, 500, 0.02)) {
      const double r = rho(xi, c, cfg);
      t.add_row({c, xi, r, r / peak});
    }
  }
  return t;
}

Table powermult(const FigureParams& p) {
  const auto cfg = one_sided(p);
  Table t{{"epsilon", "B", "R"}, {}};
  for (double eps : {0.001, 0.01, 0.05, 0.1, 0.2}) {
    for (double B : log_grid(0.0, 3.0, 90)) t.add_row({eps, B, design_robustness(B, eps, cfg)});
  }
  return t;
}

Table robust(const FigureParams& p) {
  const auto cfg = one_sided(p);
  Table t{{"b", "xi", "R"}, {}};
  for (double b : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    for (double xi : lin_grid(0, 160, 0.05)) t.add_row({b, xi, robustness_margin(xi, b, p.B, cfg)});
  }
  return t;
}

Table turnaround(const FigureParams& p) {
  const auto cfg = one_sided(p);
  Table t{{"panel", "epsilon", "B0", "B_star", "B", "R"}, {}};
  for (double eps : log_grid(-3.0, std::log10(0.3), 40)) {
    if (eps <= cfg.level()) continue;
    t.add_row({std::string("turnaround"), eps, turnaround_B0(eps, cfg), best_B(eps, cfg),
               std::monostate{}, std::monostate{}});
  }
  const double b0 = turnaround_B0(p.epsilon, cfg);
  const double bstar = best_B(p.epsilon, cfg);
  const double top = 1.2 * b0;
  for (int i = 0; i <= 200; ++i) {
    const double B = 1.0 + (top - 1.0) * i / 200.0;
    t.add_row({std::string("curve"), p.epsilon, b0, bstar, B, design_robustness(B, p.epsilon, cfg)});
  }
  return t;
}

Table power_figure(const FigureParams& p, unsigned threads) {
  Table t{{"method", "lambda", "xi", "avg_power", "fwer", "se"}, {}};
  for (double xi : p.xi) {
    SimConfig cfg;
    cfg.m = p.m;
    cfg.n_alt = std::min<std::size_t>(cfg.n_alt, p.m);
    cfg.alpha = p.alpha;
    cfg.seed = p.seed;
    cfg.replicates = p.replicates;
    cfg.xi_alt = xi;
    const auto res = estimate_operating_characteristics(cfg, threads);
    for (const auto& row : res.rows) {
      t.add_row({std::string(1, method_code(row.method)), row.lambda, xi, row.avg_power, row.fwer,
                 row.se_power ? Cell{*row.se_power} : Cell{}});
    }
  }
  return t;
}

Table wghtdist(const FigureParams& p) {
  const auto cfg = one_sided(p);
  const double b = 0.5;
  const std::size_t n_alt = std::min<std::size_t>(100, p.m);
  Table t{{"panel", "index", "xi", "xi_hat", "weight", "oracle_weight"}, {}};
  const std::pair<const char*, double> panels[] = {{"strong", 8.0}, {"weak", 4.0}};
  for (std::uint32_t k = 0; k < 2; ++k) {
    const auto [name, xi_max] = panels[k];
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                      k, 0x77676874u};
    std::mt19937_64 gen(seq);
    std::uniform_real_distribution<double> unif(0.0, xi_max);
    std::normal_distribution<double> normal;
    std::vector<double> theta(p.m, 0.0);
    for (std::size_t j = 0; j < n_alt; ++j) theta[j] = unif(gen);
    std::vector<double> t1(p.m);
    for (std::size_t j = 0; j < p.m; ++j) t1[j] = std::sqrt(b) * theta[j] + normal(gen);
    const auto xi_hat = rescale(t1, b, TestMode::Split);
    const auto w = split_mode_weights(xi_hat, cfg);
    const auto oracle = optimal_weights(theta, cfg);
    for (std::size_t j = 0; j < p.m; ++j) {
      t.add_row({std::string(name), static_cast<std::int64_t>(j), theta[j], xi_hat[j], w.values[j],
                 oracle.values[j]});
    }
  }
  return t;
}

}  // namespace

Figure parse_figure(const std::string& name) {
  for (const auto& [f, n] : registry()) {
    if (n == name) return f;
  }
  throw DomainError("unknown figure '" + name + "'");
}

std::string figure_name(Figure f) {
  for (const auto& [g, n] : registry()) {
    if (g == f) return n;
  }
  return "?";
}

std::vector<std::string> figure_names() {
  std::vector<std::string> out;
  for (const auto& entry : registry()) out.push_back(entry.second);
  return out;
}

void FigureParams::validate() const {
  TestConfig{m, alpha}.validate();
  if (m < 2) throw DomainError("figures need m >= 2");
  if (replicates < 1) throw DomainError("replicates must be at least 1");
  if (xi.empty()) throw DomainError("xi list must not be empty");
  if (!(a > 0.0 && a < 1.0) || !(gamma > 0.0 && gamma < 1.0) || a + gamma > 1.0) {
    throw DomainError("need 0 < a, 0 < gamma and a + gamma <= 1");
  }
  if (!(B >= 1.0)) throw DomainError("B must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

Table figure_data(Figure f, const FigureParams& p, unsigned threads) {
  p.validate();
  switch (f) {
    case Figure::Single: return single(p);
    case Figure::Minimax: return minimax(p);
    case Figure::Family: return family(p);
    case Figure::Powermult: return powermult(p);
    case Figure::Robust: return robust(p);
    case Figure::Turnaround: return turnaround(p);
    case Figure::Power: return power_figure(p, threads);
    case Figure::Wghtdist: return wghtdist(p);
  }
  throw DomainError("unknown figure");
}

Table simulation_table(const SimConfig& cfg, const SimResult& result) {
  Table t{{"method", "lambda", "xi", "avg_power", "fwer", "se_power", "se_fwer", "fallback_count",
           "replicates"},
          {}};
  for (const auto& row : result.rows) {
    t.add_row({std::string(1, method_code(row.method)), row.lambda, cfg.xi_alt, row.avg_power,
               row.fwer, row.se_power ? Cell{*row.se_power} : Cell{},
               row.se_fwer ? Cell{*row.se_fwer} : Cell{}, static_cast<std::int64_t>(row.fallback_count),
               static_cast<std::int64_t>(result.replicates)});
  }
  return t;
}

}  // namespace wht
