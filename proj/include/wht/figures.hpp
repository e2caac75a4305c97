#pragma once

// Plot-ready tables behind each figure. Analytic figures are pure functions
// of their parameters; `power` and `wghtdist` are seeded Monte Carlo.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wht/simlab.hpp"
#include "wht/table.hpp"

namespace wht {

enum class Figure { Single, Minimax, Family, Powermult, Robust, Turnaround, Power, Wghtdist };

/// Throws DomainError on an unknown name.
Figure parse_figure(const std::string& name);
std::string figure_name(Figure f);
std::vector<std::string> figure_names();

struct FigureParams {
  std::size_t m = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 20080101;
  std::size_t replicates = 2000;
  std::vector<double> xi{2.0, 3.0, 4.0, 5.0};  // alternative means for `power`
  double a = 0.01;                            // `minimax`
  double gamma = 0.1;                         // `minimax`
  double B = 10.0;                            // `robust`
  double epsilon = 0.1;                       // `turnaround` curve

  /// Throws DomainError on out-of-range fields.
  void validate() const;
};

/// Columns by figure:
///   single      B,power_correct,power_incorrect
///   minimax     xi,bonferroni,worst_restricted,worst_unrestricted,worst_all_misspecified,xi_star
///   family      c,xi,rho,rho_normalized
///   powermult   epsilon,B,R
///   robust      b,xi,R
///   turnaround  panel,epsilon,B0,B_star,B,R
///   power       method,lambda,xi,avg_power,fwer,se
///   wghtdist    panel,index,xi,xi_hat,weight,oracle_weight
Table figure_data(Figure f, const FigureParams& p, unsigned threads = 0);

/// One row per (method, λ) of a simulation.
Table simulation_table(const SimConfig& cfg, const SimResult& result);

}  // namespace wht
