// wht: command-line front end.
//
// Exit codes: 0 success, 1 usage or parse error, 2 domain or infeasibility
// error raised by the library.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "wht/errors.hpp"
#include "wht/figures.hpp"
#include "wht/simlab.hpp"

namespace {

using wht::cli::json;

// Numeric flags whose presence (not just value) matters when building a
// config: absent flags fall back to the per-command default.
class RealFlags {
 public:
  void add(CLI::App* app, const std::string& name, const std::string& key,
           const std::string& help) {
    auto& slot = values_[key];
    options_.emplace_back(key, app->add_option(name, slot, help));
  }

  void add_list(CLI::App* app, const std::string& name, const std::string& key,
                const std::string& help) {
    auto& slot = lists_[key];
    list_options_.emplace_back(key, app->add_option(name, slot, help)->delimiter(','));
  }

  json collect() const {
    json out = json::object();
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) out[key] = values_.at(key);
    }
    for (const auto& [key, opt] : list_options_) {
      if (opt->count() > 0) out[key] = lists_.at(key);
    }
    return out;
  }

 private:
  std::map<std::string, double> values_;
  std::map<std::string, std::vector<double>> lists_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
  std::vector<std::pair<std::string, CLI::Option*>> list_options_;
};

int fail(int code, const std::string& msg) {
  std::cerr << "wht: error: " << msg << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted multiple hypothesis testing with familywise error control", "wht"};
  app.set_version_flag("--version", std::string(WHT_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed for Monte Carlo commands");
  auto* reps_opt = app.add_option("--replicates", replicates, "Monte Carlo replicates")
                       ->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output CSV path (a manifest is written alongside); stdout if omitted");

  auto* weights = app.add_subcommand("weights", "Optimal weights for a mean vector from a JSON config");
  std::string weights_config;
  weights->add_option("config", weights_config, "JSON config with m, alpha and theta or theta_csv")
      ->required();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo power and familywise error");
  std::string simulate_config;
  simulate->add_option("config", simulate_config, "JSON simulation config")->required();

  auto* figure = app.add_subcommand("figure", "Emit the data table behind a figure");
  std::string figure_id;
  figure->add_option("figure", figure_id, "Figure id")
      ->required()
      ->check(CLI::IsMember(wht::figure_names()));
  RealFlags figure_flags;
  figure_flags.add(figure, "--m", "m", "Number of hypotheses");
  figure_flags.add(figure, "--alpha", "alpha", "Familywise error level");
  figure_flags.add_list(figure, "--xi", "xi", "Alternative means (power figure)");
  figure_flags.add(figure, "--a", "a", "Fraction of alternatives (minimax)");
  figure_flags.add(figure, "--gamma", "gamma", "Fraction of misspecified nulls (minimax)");
  figure_flags.add(figure, "--B", "B", "Smallest up-weight (robust)");
  figure_flags.add(figure, "--epsilon", "epsilon", "Fraction up-weighted (turnaround curve)");

  auto* analyze = app.add_subcommand("analyze", "Closed-form power, robustness and design analyses");
  analyze->require_subcommand(1);
  analyze->fallthrough();
  RealFlags common_flags;
  common_flags.add(analyze, "--m", "m", "Number of hypotheses (default 1000)");
  common_flags.add(analyze, "--alpha", "alpha", "Familywise error level (default 0.05)");
  bool two_sided = false;
  analyze->add_flag("--two-sided", two_sided, "Two-sided power (power analysis only)");

  std::map<std::string, RealFlags> analysis_flags;
  auto add_analysis = [&](const std::string& name, const std::string& help) {
    auto* sub = analyze->add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  auto* a_power = add_analysis("power", "Power of one alternative at a given weight");
  analysis_flags["power"].add(a_power, "--xi", "xi", "Alternative mean");
  analysis_flags["power"].add(a_power, "--w", "w", "Weight (default 1)");

  auto* a_robust = add_analysis("robustness", "Gain minus loss of binary or general weights");
  analysis_flags["robustness"].add(a_robust, "--B", "B", "Up-weight ratio or smallest up-weight");
  analysis_flags["robustness"].add(a_robust, "--epsilon", "epsilon", "Fraction up-weighted");
  analysis_flags["robustness"].add(a_robust, "--xi", "xi", "Alternative mean (default z_{alpha/m})");
  analysis_flags["robustness"].add(a_robust, "--b", "b", "Minimum weight (general weights)");

  auto* a_worst = add_analysis("worstcase", "Worst-case power under misspecified weights");
  analysis_flags["worstcase"].add(a_worst, "--xi", "xi", "True alternative mean");
  analysis_flags["worstcase"].add(a_worst, "--a", "a", "Fraction of alternatives");
  analysis_flags["worstcase"].add(a_worst, "--gamma", "gamma", "Fraction of misspecified nulls");
  bool restricted = false;
  a_worst->add_flag("--restricted", restricted, "Restrict the misspecified mean to [0, xi]");

  auto* a_design = add_analysis("design", "Binary external weight designs");
  analysis_flags["design"].add(a_design, "--epsilon", "epsilon", "Fraction needing high power");
  analysis_flags["design"].add(a_design, "--beta", "beta", "Type II error target");
  analysis_flags["design"].add(a_design, "--delta", "delta", "Minimum power floor");
  analysis_flags["design"].add(a_design, "--xi", "xi", "Alternative mean (default z_{alpha/m})");
  std::string scheme;
  a_design->add_option("--scheme", scheme, "minmax or count (default: minmax if --epsilon given)")
      ->check(CLI::IsMember({"minmax", "count"}));

  auto* a_turn = add_analysis("turnaround", "Turnaround B0 and best B for a fraction epsilon");
  analysis_flags["turnaround"].add(a_turn, "--epsilon", "epsilon", "Fraction up-weighted");
  analysis_flags["turnaround"].add(a_turn, "--xi", "xi", "Alternative mean (default z_{alpha/m})");

  auto* a_safe = add_analysis("safezone", "Safe-zone bound with zero minimum weight");
  analysis_flags["safezone"].add(a_safe, "--B", "B", "Smallest up-weight (>= 2)");

  auto* rerun = app.add_subcommand("rerun", "Re-execute the config recorded in a manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "Manifest JSON written next to an output")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  unsigned threads = 0;
  try {
    threads = wht::threads_from_env();
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }

  try {
    wht::cli::Overrides overrides;
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (reps_opt->count() > 0) overrides.replicates = replicates;

    std::string command;
    json config;
    if (weights->parsed()) {
      command = "weights";
      config = wht::cli::resolve_weights(wht::cli::load_json_file(weights_config));
    } else if (simulate->parsed()) {
      command = "simulate";
      config = wht::cli::resolve_simulate(wht::cli::load_json_file(simulate_config), overrides);
    } else if (figure->parsed()) {
      command = "figure";
      config = wht::cli::resolve_figure(figure_id, figure_flags.collect(), overrides);
    } else if (analyze->parsed()) {
      command = "analyze";
      for (auto& [name, flags] : analysis_flags) {
        if (!analyze->get_subcommand(name)->parsed()) continue;
        json params = common_flags.collect();
        params.update(flags.collect());
        if (two_sided) params["sidedness"] = "two-sided";
        if (name == "worstcase") params["restricted"] = restricted;
        if (name == "design" && !scheme.empty()) params["scheme"] = scheme;
        config = wht::cli::resolve_analyze(name, params);
      }
    } else {
      const json manifest = wht::cli::load_json_file(manifest_path);
      if (!manifest.contains("command") || !manifest.contains("config")) {
        throw wht::cli::UsageError("manifest lacks 'command' or 'config'");
      }
      command = manifest.at("command").get<std::string>();
      config = manifest.at("config");
      if (manifest.contains("config_digest") &&
          manifest.at("config_digest") != wht::cli::config_digest(config)) {
        throw wht::cli::UsageError("manifest config does not match its recorded digest");
      }
    }

    const wht::Table table = wht::cli::execute(command, config, threads);
    if (out.empty()) {
      table.write_csv(std::cout);
    } else {
      wht::cli::write_outputs(out, table, wht::cli::make_manifest(command, config));
    }
  } catch (const wht::cli::UsageError& e) {
    return fail(1, e.what());
  } catch (const json::exception& e) {
    return fail(1, std::string("malformed config: ") + e.what());
  } catch (const wht::Error& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 0;
}
