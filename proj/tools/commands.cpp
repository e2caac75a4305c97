#include "commands.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <sstream>

#include "wht/design.hpp"
#include "wht/errors.hpp"
#include "wht/figures.hpp"
#include "wht/gauss.hpp"
#include "wht/power.hpp"
#include "wht/simlab.hpp"
#include "wht/weights.hpp"

#ifndef WHT_VERSION
#define WHT_VERSION "0.0.0"
#endif

namespace wht::cli {

namespace {

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& what) {
  if (!j.is_object()) throw UsageError(what + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) throw UsageError(what + ": unknown key '" + item.key() + "'");
  }
}

double get_real(const json& j, const char* key, std::optional<double> def = std::nullopt) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (def) return *def;
    throw UsageError(std::string("missing required field '") + key + "'");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) throw UsageError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> get_optional_real(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_real(j, key);
}

std::uint64_t get_count(const json& j, const char* key, std::optional<std::uint64_t> def) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (def) return *def;
    throw UsageError(std::string("missing required field '") + key + "'");
  }
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  // Command-line flags arrive as doubles; accept them when integral.
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x >= 0.0 && x < 1.8e19 && std::floor(x) == x) return static_cast<std::uint64_t>(x);
  }
  throw UsageError(std::string("field '") + key + "' must be a nonnegative integer");
}

std::vector<double> get_reals(const json& j, const char* key, std::vector<double> def) {
  if (!j.contains(key) || j.at(key).is_null()) return def;
  const auto& v = j.at(key);
  if (!v.is_array()) throw UsageError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw UsageError(std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Sidedness get_sidedness(const json& j) {
  if (!j.contains("sidedness")) return Sidedness::OneSided;
  const auto& v = j.at("sidedness");
  if (v == "one-sided") return Sidedness::OneSided;
  if (v == "two-sided") return Sidedness::TwoSided;
  throw UsageError("sidedness must be \"one-sided\" or \"two-sided\"");
}

const char* sidedness_name(Sidedness s) {
  return s == Sidedness::OneSided ? "one-sided" : "two-sided";
}

std::vector<double> read_csv_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open CSV file '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw UsageError("CSV file '" + path + "' is empty");
  const auto header = split(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) col = i;
  }
  if (col == header.size()) throw UsageError("CSV file has no column '" + column + "'");
  std::vector<double> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (col >= cells.size()) throw UsageError("CSV line " + std::to_string(lineno) + " is short");
    const auto& text = cells[col];
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError("CSV line " + std::to_string(lineno) + ": '" + text + "' is not a number");
    }
    out.push_back(x);
  }
  return out;
}

TestConfig test_config_of(const json& c) {
  return {static_cast<std::size_t>(c.at("m").get<std::uint64_t>()), c.at("alpha").get<double>(),
          get_sidedness(c)};
}

std::string methods_string(const json& v) {
  std::string out;
  if (v.is_string()) {
    out = v.get<std::string>();
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_string() || x.get<std::string>().size() != 1) {
        throw UsageError("methods entries must be one-letter strings");
      }
      out += x.get<std::string>();
    }
  } else {
    throw UsageError("methods must be a string such as \"PBHSJ\" or an array of letters");
  }
  for (char ch : out) {
    try {
      parse_method(ch);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

SimConfig sim_config_of(const json& c) {
  SimConfig s;
  s.m = c.at("m").get<std::size_t>();
  s.n_alt = c.at("n_alt").get<std::size_t>();
  s.xi_alt = c.at("xi_alt").get<double>();
  s.lambda_grid = c.at("lambda_grid").get<std::vector<double>>();
  s.b = c.at("b").get<double>();
  s.methods.clear();
  for (char ch : c.at("methods").get<std::string>()) s.methods.push_back(parse_method(ch));
  s.replicates = c.at("replicates").get<std::size_t>();
  s.seed = c.at("seed").get<std::uint64_t>();
  s.alpha = c.at("alpha").get<double>();
  s.sidedness = get_sidedness(c);
  return s;
}

FigureParams figure_params_of(const json& c) {
  FigureParams p;
  p.m = c.at("m").get<std::size_t>();
  p.alpha = c.at("alpha").get<double>();
  p.seed = c.at("seed").get<std::uint64_t>();
  p.replicates = c.at("replicates").get<std::size_t>();
  p.xi = c.at("xi").get<std::vector<double>>();
  p.a = c.at("a").get<double>();
  p.gamma = c.at("gamma").get<double>();
  p.B = c.at("B").get<double>();
  p.epsilon = c.at("epsilon").get<double>();
  return p;
}

Table run_weights(const json& c) {
  const TestConfig cfg = test_config_of(c);
  if (cfg.sidedness != Sidedness::OneSided) {
    throw DomainError("optimal weights are derived for one-sided tests only");
  }
  const auto theta = c.at("theta").get<std::vector<double>>();
  const auto sol = solve_c(theta, cfg);
  Table t{{"index", "xi", "weight", "c"}, {}};
  for (std::size_t j = 0; j < theta.size(); ++j) {
    t.add_row({static_cast<std::int64_t>(j), theta[j], rho(theta[j], sol.c, cfg), sol.c});
  }
  return t;
}

Table record_table(const std::vector<std::pair<std::string, Cell>>& fields) {
  Table t;
  std::vector<Cell> row;
  for (const auto& [name, value] : fields) {
    t.columns.push_back(name);
    row.push_back(value);
  }
  t.add_row(std::move(row));
  return t;
}

Table run_analyze(const json& c) {
  const std::string analysis = c.at("analysis").get<std::string>();
  const TestConfig cfg = test_config_of(c);
  const auto xi = get_optional_real(c, "xi");

  if (analysis == "power") {
    const double w = c.at("w").get<double>();
    return record_table({{"xi", *xi},
                         {"w", w},
                         {"power", power(*xi, w, cfg)},
                         {"bonferroni_power", bonferroni_power(*xi, cfg)}});
  }
  if (analysis == "robustness") {
    const double B = c.at("B").get<double>();
    const double x = xi ? *xi : marginal_effect(cfg);
    if (const auto b = get_optional_real(c, "b")) {
      return record_table({{"xi", x},
                           {"b", *b},
                           {"B", B},
                           {"R_bB", worst_case_robustness(x, *b, B, cfg)},
                           {"margin", robustness_margin(x, *b, B, cfg)}});
    }
    const double eps = c.at("epsilon").get<double>();
    const auto s = binary_weights(B, eps);
    return record_table({{"xi", x},
                         {"B", B},
                         {"epsilon", eps},
                         {"w1", s.w1},
                         {"w0", s.w0},
                         {"R", robustness_R(B, eps, x, cfg)}});
  }
  if (analysis == "worstcase") {
    const double a = c.at("a").get<double>();
    const double gamma = c.at("gamma").get<double>();
    const bool restricted = c.at("restricted").get<bool>();
    const auto r = restricted ? restricted_worst_case(*xi, a, gamma, cfg)
                              : unrestricted_worst_case(*xi, a, gamma, cfg);
    return record_table({{"restricted", static_cast<std::int64_t>(r.restricted)},
                         {"xi", r.xi},
                         {"a", r.a},
                         {"gamma", r.gamma},
                         {"c_star", r.c_star},
                         {"u_star", r.u_star},
                         {"C_of_xi", r.C_of_xi},
                         {"xi0", r.xi0},
                         {"xi_star", r.xi_star},
                         {"inf_power", r.inf_power},
                         {"bonferroni_power", r.bonferroni_power},
                         {"optimal_power", r.optimal_power},
                         {"below_xi_star", static_cast<std::int64_t>(r.below_xi_star)},
                         {"beats_bonferroni", static_cast<std::int64_t>(r.beats_bonferroni)},
                         {"c_star_approx", r.c_star_approx},
                         {"u_star_approx", r.u_star_approx},
                         {"inf_power_approx", r.inf_power_approx},
                         {"domination_threshold", r.domination_threshold},
                         {"large_xi_floor", r.large_xi_floor},
                         {"deficit_floor", r.deficit_floor}});
  }
  if (analysis == "design") {
    const std::string scheme = c.at("scheme").get<std::string>();
    const double beta = c.at("beta").get<double>();
    const auto d = scheme == "minmax"
                       ? design_minmax(c.at("epsilon").get<double>(), beta, cfg, xi)
                       : design_count_max(beta, c.at("delta").get<double>(), cfg, xi);
    return record_table({{"scheme", scheme},
                         {"xi", d.xi},
                         {"B", d.B},
                         {"w1", d.w1},
                         {"w0", d.w0},
                         {"epsilon", d.epsilon},
                         {"k", static_cast<std::int64_t>(d.k)},
                         {"beta", d.beta},
                         {"delta", d.delta},
                         {"power_high", d.power_high},
                         {"power_low", d.power_low},
                         {"mean_weight", d.epsilon * d.w1 + (1.0 - d.epsilon) * d.w0}});
  }
  if (analysis == "turnaround") {
    const double eps = c.at("epsilon").get<double>();
    const double b0 = turnaround_B0(eps, cfg, xi);
    const double bstar = best_B(eps, cfg, xi);
    return record_table({{"epsilon", eps},
                         {"B0", b0},
                         {"B_star", bstar},
                         {"R_at_B_star", design_robustness(bstar, eps, cfg, xi)}});
  }
  if (analysis == "safezone") {
    const double B = c.at("B").get<double>();
    const auto scan = scan_safe_zone(B, cfg);
    return record_table({{"B", B},
                         {"bound", scan.bound},
                         {"min_margin", scan.points ? Cell{scan.min_margin} : Cell{}},
                         {"points", static_cast<std::int64_t>(scan.points)},
                         {"holds", static_cast<std::int64_t>(scan.holds)}});
  }
  throw UsageError("unknown analysis '" + analysis + "'");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

json resolve_weights(const json& raw) {
  allow_keys(raw, {"m", "alpha", "sidedness", "theta", "theta_csv"}, "weights config");
  std::vector<double> theta;
  if (raw.contains("theta") == raw.contains("theta_csv")) {
    throw UsageError("weights config needs exactly one of 'theta' or 'theta_csv'");
  }
  if (raw.contains("theta")) {
    theta = get_reals(raw, "theta", {});
  } else {
    const auto& src = raw.at("theta_csv");
    allow_keys(src, {"path", "column"}, "theta_csv");
    if (!src.contains("path") || !src.at("path").is_string()) {
      throw UsageError("theta_csv.path must be a string");
    }
    const std::string column = src.contains("column") ? src.at("column").get<std::string>() : "xi";
    theta = read_csv_column(src.at("path").get<std::string>(), column);
  }
  if (theta.empty()) throw UsageError("theta must not be empty");
  const auto m = get_count(raw, "m", theta.size());
  if (m != theta.size()) {
    throw UsageError("m = " + std::to_string(m) + " but theta has " +
                     std::to_string(theta.size()) + " entries");
  }
  return {{"m", m},
          {"alpha", get_real(raw, "alpha", 0.05)},
          {"sidedness", sidedness_name(get_sidedness(raw))},
          {"theta", theta}};
}

json resolve_simulate(const json& raw, const Overrides& o) {
  allow_keys(raw,
             {"m", "n_alt", "xi_alt", "lambda_grid", "b", "methods", "replicates", "seed", "alpha",
              "sidedness"},
             "simulate config");
  const SimConfig d;
  std::string methods;
  if (raw.contains("methods")) {
    methods = methods_string(raw.at("methods"));
  } else {
    for (Method m : d.methods) methods += method_code(m);
  }
  return {{"m", get_count(raw, "m", d.m)},
          {"n_alt", get_count(raw, "n_alt", d.n_alt)},
          {"xi_alt", get_real(raw, "xi_alt", d.xi_alt)},
          {"lambda_grid", get_reals(raw, "lambda_grid", d.lambda_grid)},
          {"b", get_real(raw, "b", d.b)},
          {"methods", methods},
          {"replicates", o.replicates ? *o.replicates : get_count(raw, "replicates", d.replicates)},
          {"seed", o.seed ? *o.seed : get_count(raw, "seed", d.seed)},
          {"alpha", get_real(raw, "alpha", d.alpha)},
          {"sidedness", sidedness_name(get_sidedness(raw))}};
}

json resolve_figure(const std::string& id, json params, const Overrides& o) {
  const FigureParams d;
  try {
    parse_figure(id);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return {{"figure", id},
          {"m", get_count(params, "m", d.m)},
          {"alpha", get_real(params, "alpha", d.alpha)},
          {"seed", o.seed ? *o.seed : d.seed},
          {"replicates", o.replicates ? *o.replicates : d.replicates},
          {"xi", get_reals(params, "xi", d.xi)},
          {"a", get_real(params, "a", d.a)},
          {"gamma", get_real(params, "gamma", d.gamma)},
          {"B", get_real(params, "B", d.B)},
          {"epsilon", get_real(params, "epsilon", d.epsilon)}};
}

json resolve_analyze(const std::string& analysis, json p) {
  json c{{"analysis", analysis},
         {"m", get_count(p, "m", 1000)},
         {"alpha", get_real(p, "alpha", 0.05)},
         {"sidedness", sidedness_name(get_sidedness(p))}};
  auto copy_required = [&](const char* key) { c[key] = get_real(p, key); };
  auto copy_optional = [&](const char* key) {
    const auto v = get_optional_real(p, key);
    c[key] = v ? json(*v) : json(nullptr);
  };
  if (analysis == "power") {
    copy_required("xi");
    c["w"] = get_real(p, "w", 1.0);
  } else if (analysis == "robustness") {
    copy_required("B");
    copy_optional("xi");
    copy_optional("b");
    if (c["b"].is_null()) copy_required("epsilon");
  } else if (analysis == "worstcase") {
    copy_required("xi");
    copy_required("a");
    copy_required("gamma");
    c["restricted"] = p.contains("restricted") && p.at("restricted").get<bool>();
  } else if (analysis == "design") {
    const std::string scheme = p.contains("scheme") ? p.at("scheme").get<std::string>()
                               : p.contains("epsilon") && !p.at("epsilon").is_null() ? "minmax"
                                                                                    : "count";
    if (scheme != "minmax" && scheme != "count") {
      throw UsageError("design scheme must be 'minmax' or 'count'");
    }
    c["scheme"] = scheme;
    copy_required("beta");
    copy_optional("xi");
    if (scheme == "minmax") {
      copy_required("epsilon");
    } else {
      c["delta"] = get_real(p, "delta", 0.0);
    }
  } else if (analysis == "turnaround") {
    copy_required("epsilon");
    copy_optional("xi");
  } else if (analysis == "safezone") {
    copy_required("B");
  } else {
    throw UsageError("unknown analysis '" + analysis + "'");
  }
  return c;
}

Table execute(const std::string& command, const json& config, unsigned threads) {
  if (command == "weights") return run_weights(config);
  if (command == "simulate") {
    const SimConfig cfg = sim_config_of(config);
    return simulation_table(cfg, estimate_operating_characteristics(cfg, threads));
  }
  if (command == "figure") {
    return figure_data(parse_figure(config.at("figure").get<std::string>()),
                       figure_params_of(config), threads);
  }
  if (command == "analyze") return run_analyze(config);
  throw UsageError("unknown command '" + command + "'");
}

json config_seed(const json& config) {
  if (config.contains("figure")) {
    const auto f = parse_figure(config.at("figure").get<std::string>());
    if (f != Figure::Power && f != Figure::Wghtdist) return nullptr;
  }
  return config.contains("seed") ? config.at("seed") : json(nullptr);
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string config_digest(const json& config) { return sha256_hex(config.dump()); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_manifest(const std::string& command, const json& config) {
  return {{"command", command},
          {"config", config},
          {"config_digest", config_digest(config)},
          {"seed", config_seed(config)},
          {"tool_version", WHT_VERSION},
          {"timestamp", utc_timestamp()}};
}

void write_outputs(const std::string& out, const Table& table, const json& manifest) {
  {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + out + "'");
    table.write_csv(os);
  }
  std::ofstream ms(out + ".manifest.json", std::ios::binary);
  if (!ms) throw std::runtime_error("cannot write '" + out + ".manifest.json'");
  ms << manifest.dump(2) << '\n';
}

}  // namespace wht::cli
