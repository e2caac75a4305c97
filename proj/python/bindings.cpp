#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wht/design.hpp"
#include "wht/errors.hpp"
#include "wht/figures.hpp"
#include "wht/gauss.hpp"
#include "wht/power.hpp"
#include "wht/simlab.hpp"
#include "wht/split.hpp"
#include "wht/weights.hpp"

namespace py = pybind11;
using namespace wht;

namespace {

TestConfig make_config(std::size_t m, double alpha, bool two_sided) {
  TestConfig cfg{m, alpha, two_sided ? Sidedness::TwoSided : Sidedness::OneSided};
  cfg.validate();
  return cfg;
}

py::dict weight_dict(const WeightVector& w) {
  py::dict d;
  d["values"] = w.values;
  d["fallback"] = w.fallback;
  d["certified"] = w.certified;
  return d;
}

py::dict worst_case_dict(const WorstCaseReport& r) {
  py::dict d;
  d["restricted"] = r.restricted;
  d["xi"] = r.xi;
  d["a"] = r.a;
  d["gamma"] = r.gamma;
  d["c_star"] = r.c_star;
  d["u_star"] = r.u_star;
  d["C_of_xi"] = r.C_of_xi;
  d["xi0"] = r.xi0;
  d["xi_star"] = r.xi_star;
  d["inf_power"] = r.inf_power;
  d["bonferroni_power"] = r.bonferroni_power;
  d["optimal_power"] = r.optimal_power;
  d["below_xi_star"] = r.below_xi_star;
  d["beats_bonferroni"] = r.beats_bonferroni;
  d["c_star_approx"] = r.c_star_approx;
  d["u_star_approx"] = r.u_star_approx;
  d["inf_power_approx"] = r.inf_power_approx;
  d["domination_threshold"] = r.domination_threshold;
  return d;
}

py::dict design_dict(const DesignSpec& s) {
  py::dict d;
  d["B"] = s.B;
  d["w1"] = s.w1;
  d["w0"] = s.w0;
  d["epsilon"] = s.epsilon;
  d["k"] = s.k;
  d["beta"] = s.beta;
  d["delta"] = s.delta;
  d["xi"] = s.xi;
  d["power_high"] = s.power_high;
  d["power_low"] = s.power_low;
  return d;
}

Estimator make_estimator(const std::string& kind, double lambda) {
  if (kind == "identity") return {EstimatorKind::Identity, lambda};
  if (kind == "hard") return {EstimatorKind::HardThreshold, lambda};
  if (kind == "soft") return {EstimatorKind::SoftThreshold, lambda};
  if (kind == "james-stein") return {EstimatorKind::JamesStein, lambda};
  throw DomainError("estimator must be identity, hard, soft or james-stein");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted multiple hypothesis testing with familywise error control";
  m.attr("__version__") = WHT_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());

  m.def("std_normal_pdf", &std_normal_pdf, py::arg("x"));
  m.def("upper_cdf", [](double x) { return upper_tail(x); }, py::arg("x"),
        "Upper tail probability 1 - Phi(x).");
  m.def("upper_quantile", [](double p) { return upper_quantile(p); }, py::arg("p"),
        "z such that upper_cdf(z) = p, for 0 < p < 1.");

  m.def("rho", [](double xi, double c, std::size_t m_, double alpha) {
    return rho(xi, c, make_config(m_, alpha, false));
  }, py::arg("xi"), py::arg("c"), py::arg("m"), py::arg("alpha") = 0.05);
  m.def("solve_c", [](const std::vector<double>& theta, double alpha) {
    return solve_c(theta, make_config(theta.size(), alpha, false)).c;
  }, py::arg("theta"), py::arg("alpha") = 0.05);
  m.def("optimal_weights", [](const std::vector<double>& theta, double alpha) {
    return optimal_weights(theta, make_config(theta.size(), alpha, false)).values;
  }, py::arg("theta"), py::arg("alpha") = 0.05);
  m.def("oracle_power", [](const std::vector<double>& theta, double alpha) {
    return oracle_power(theta, make_config(theta.size(), alpha, false));
  }, py::arg("theta"), py::arg("alpha") = 0.05);
  m.def("discontinuity_example", [](std::size_t m_, double alpha, double a, double gamma, double K,
                                    double c) {
    const auto ex = discontinuity_example(m_, alpha, a, gamma, K, c);
    py::dict d;
    d["u"] = ex.u;
    d["xi"] = ex.xi;
    d["w_on_u"] = ex.w_on_u;
    d["w_on_xi"] = ex.w_on_xi;
    d["weight_under_Q"] = ex.weight_under_Q;
    d["ks_distance"] = ex.ks_distance;
    return d;
  }, py::arg("m"), py::arg("alpha"), py::arg("a"), py::arg("gamma"), py::arg("K"), py::arg("c"));

  m.def("power", [](double xi, double w, std::size_t m_, double alpha, bool two_sided) {
    return power(xi, w, make_config(m_, alpha, two_sided));
  }, py::arg("xi"), py::arg("w"), py::arg("m"), py::arg("alpha") = 0.05,
     py::arg("two_sided") = false);
  m.def("robustness_R", [](double B, double epsilon, double xi, std::size_t m_, double alpha) {
    return robustness_R(B, epsilon, xi, make_config(m_, alpha, false));
  }, py::arg("B"), py::arg("epsilon"), py::arg("xi"), py::arg("m"), py::arg("alpha") = 0.05);
  m.def("robustness_margin", [](double xi, double b, double B, std::size_t m_, double alpha) {
    return robustness_margin(xi, b, B, make_config(m_, alpha, false));
  }, py::arg("xi"), py::arg("b"), py::arg("B"), py::arg("m"), py::arg("alpha") = 0.05);
  m.def("worst_case", [](double xi, double a, double gamma, std::size_t m_, double alpha,
                         bool restricted) {
    const auto cfg = make_config(m_, alpha, false);
    return worst_case_dict(restricted ? restricted_worst_case(xi, a, gamma, cfg)
                                      : unrestricted_worst_case(xi, a, gamma, cfg));
  }, py::arg("xi"), py::arg("a"), py::arg("gamma"), py::arg("m"), py::arg("alpha") = 0.05,
     py::arg("restricted") = false);

  m.def("turnaround_B0", [](double epsilon, std::size_t m_, double alpha) {
    return turnaround_B0(epsilon, make_config(m_, alpha, false));
  }, py::arg("epsilon"), py::arg("m"), py::arg("alpha") = 0.05);
  m.def("best_B", [](double epsilon, std::size_t m_, double alpha) {
    return best_B(epsilon, make_config(m_, alpha, false));
  }, py::arg("epsilon"), py::arg("m"), py::arg("alpha") = 0.05);
  m.def("design_minmax", [](double epsilon, double beta, std::size_t m_, double alpha) {
    return design_dict(design_minmax(epsilon, beta, make_config(m_, alpha, false)));
  }, py::arg("epsilon"), py::arg("beta"), py::arg("m"), py::arg("alpha") = 0.05);
  m.def("design_count_max", [](double beta, double delta, std::size_t m_, double alpha) {
    return design_dict(design_count_max(beta, delta, make_config(m_, alpha, false)));
  }, py::arg("beta"), py::arg("delta"), py::arg("m"), py::arg("alpha") = 0.05);

  m.def("pvalues", [](const std::vector<double>& t) { return pvalues(t); }, py::arg("t"));
  m.def("weighted_bonferroni", [](const std::vector<double>& p, const std::vector<double>& w,
                                  double alpha, bool certified) {
    WeightVector wv;
    wv.values = w;
    wv.certified = certified;
    return weighted_bonferroni(p, wv, make_config(p.size(), alpha, false)).indices;
  }, py::arg("p"), py::arg("w"), py::arg("alpha") = 0.05, py::arg("certified") = false,
     "0-based indices j with p_j <= alpha w_j / m.");
  m.def("estimate_xi1", [](const std::vector<double>& t1, const std::string& kind, double lambda) {
    return estimate_xi1(t1, make_estimator(kind, lambda));
  }, py::arg("t1"), py::arg("kind") = "identity", py::arg("lambda_") = 0.0);
  m.def("full_mode_weights", [](const std::vector<double>& xi_hat, const std::vector<double>& t1,
                                double b, double alpha) {
    return weight_dict(full_mode_weights(xi_hat, t1, b, make_config(xi_hat.size(), alpha, false)));
  }, py::arg("xi_hat"), py::arg("t1"), py::arg("b"), py::arg("alpha") = 0.05);

  m.def("simulate", [](std::size_t m_, std::size_t n_alt, double xi_alt,
                       std::vector<double> lambda_grid, double b, const std::string& methods,
                       std::size_t replicates, std::uint64_t seed, double alpha, unsigned threads) {
    SimConfig cfg;
    cfg.m = m_;
    cfg.n_alt = n_alt;
    cfg.xi_alt = xi_alt;
    cfg.lambda_grid = std::move(lambda_grid);
    cfg.b = b;
    cfg.methods.clear();
    for (char ch : methods) cfg.methods.push_back(parse_method(ch));
    cfg.replicates = replicates;
    cfg.seed = seed;
    cfg.alpha = alpha;
    SimResult res;
    {
      py::gil_scoped_release release;
      res = estimate_operating_characteristics(cfg, threads);
    }
    py::list rows;
    for (const auto& r : res.rows) {
      py::dict d;
      d["method"] = std::string(1, method_code(r.method));
      d["lambda"] = r.lambda;
      d["avg_power"] = r.avg_power;
      d["fwer"] = r.fwer;
      d["se_power"] = r.se_power ? py::object(py::float_(*r.se_power)) : py::object(py::none());
      d["se_fwer"] = r.se_fwer ? py::object(py::float_(*r.se_fwer)) : py::object(py::none());
      d["fallback_count"] = r.fallback_count;
      rows.append(d);
    }
    return rows;
  }, py::arg("m") = 1000, py::arg("n_alt") = 50, py::arg("xi_alt") = 3.0,
     py::arg("lambda_grid") = std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 2.5},
     py::arg("b") = 0.5, py::arg("methods") = "PBHSJ", py::arg("replicates") = 2000,
     py::arg("seed") = 20080101ULL, py::arg("alpha") = 0.05, py::arg("threads") = 1);

  m.def("figure_csv", [](const std::string& name, std::size_t replicates, std::uint64_t seed) {
    FigureParams p;
    p.replicates = replicates;
    p.seed = seed;
    return figure_data(parse_figure(name), p).to_csv();
  }, py::arg("name"), py::arg("replicates") = 2000, py::arg("seed") = 20080101ULL,
     "CSV text of the table behind a figure, with default parameters.");
}
