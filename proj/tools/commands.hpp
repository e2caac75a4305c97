#pragma once

// Command implementations behind the `wht` executable. Every command first
// resolves its inputs into a canonical JSON config; execution is a pure
// function of that config (plus the worker count, which never changes
// results), and the config is what the manifest records and digests.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "wht/table.hpp"

namespace wht::cli {

using json = nlohmann::json;

/// Malformed input: exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
};

json load_json_file(const std::string& path);

json resolve_weights(const json& raw);
json resolve_simulate(const json& raw, const Overrides& o);
json resolve_figure(const std::string& id, json params, const Overrides& o);
json resolve_analyze(const std::string& analysis, json params);

/// Runs `command` ("weights", "simulate", "figure", "analyze") on a resolved
/// config.
Table execute(const std::string& command, const json& config, unsigned threads);

/// Seed recorded in the manifest; null for commands that draw no random
/// numbers.
json config_seed(const json& config);

std::string sha256_hex(const std::string& data);
std::string config_digest(const json& config);
std::string utc_timestamp();

json make_manifest(const std::string& command, const json& config);

/// Writes the CSV to `out` and the manifest to `out`.manifest.json.
void write_outputs(const std::string& out, const Table& table, const json& manifest);

}  // namespace wht::cli
