#pragma once

// Reference values from tests/oracles/*.py (mpmath, 50-60 digits). Each is a
// direct evaluation of a defining formula, independent of the library.

namespace oracle {

inline constexpr double pdf_1 = 0.2419707245191433498;
inline constexpr double upper_1_96 = 0.024997895148220434137;

struct TailPoint {
  double x;
  double upper;
};
inline constexpr TailPoint tail_points[] = {
    {-3.0, 0.99865010196836990547},   {0.5, 0.30853753872598689636},
    {2.0, 0.0227501319481792072},     {5.0, 2.8665157187919391167e-7},
    {8.0, 6.2209605742717841235e-16}, {10.0, 7.619853024160526066e-24},
    {15.0, 3.6709661993127508858e-51}, {20.0, 2.7536241186062336951e-89},
    {30.0, 4.9067139271481870595e-198}, {37.0, 5.7255712225245768227e-300},
};

inline constexpr double z_5e_5 = 3.890591886413093967;
inline constexpr double z_1e_4 = 3.7190164854556805644;
inline constexpr double z_1e_300 = 37.047096299361199237;

inline constexpr double bonferroni_power_xi3 = 0.18657407676747709193;
inline constexpr double safe_zone_B2 = -1.9377494400233759401;
inline constexpr double safe_zone_B10 = 2.224106185987245294;

inline constexpr double discontinuity_xi = 9.7631851946687036596;
inline constexpr double discontinuity_u = 0.030529286731795974447;

// xi = 3, a = .01, gamma = .1, m = 1000, alpha = .05
inline constexpr double worst_c_star = 5.4971782799958343929;
inline constexpr double worst_u_star = 3.3157739006138022236;
inline constexpr double worst_inf_power = 0.36979635237995489959;
inline constexpr double restricted_xi0 = 3.3172473615524539111;
inline constexpr double restricted_xi_star = 5.9619512163992709355;

inline constexpr double turnaround_B0_eps_0_1 = 118.96124089937486775;
inline constexpr double best_B_eps_0_1 = 9.5375754365703608705;

inline constexpr double minmax_B_eps_0_01_beta_0_2 = 29.509162059498240282;
inline constexpr double count_w1_beta_0_2 = 22.962691209390847238;
inline constexpr double count_eps_beta_0_2_delta_0 = 0.043548902473201351481;

}  // namespace oracle
