#ifndef NVDD_TOOLS_CONFIG_H
#define NVDD_TOOLS_CONFIG_H

#include <string>
#include <string_view>

#include <json.hpp>

#include "nvdd/engine.h"
#include "nvdd/hamiltonian.h"
#include "nvdd/noise.h"

namespace nvdd::cli {

enum class OutputFormat { Csv, Json };

// Effective run settings. JSON schema (all keys optional, unknown keys fatal):
//   {"system": "a"|"b",
//    "params": {"zero_field_splitting", "quadrupole", "hyperfine", "gamma_e",
//               "gamma_n", "field", "rabi_a_nu1", "rabi_a_nu2", "rabi_b_nu1",
//               "rabi_b_nu2", "rabi_mw_selective", "rabi_mw_hard", "t1", "t2_markov"},
//    "noise": "<noise spec>",
//    "engine": {"rwa_cutoff_factor", "rwa_cutoff", "dt_max", "n_traj", "seed", "workers"},
//    "output": {"path": "<file or empty for stdout>", "format": "csv"|"json"}}
// Numbers are SI (Hz, s, G).
struct RunConfig {
  System system = System::A;
  NvParams params;
  NoiseModel noise;
  EngineConfig engine;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
};

// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

// Reads a JSON config file; throws ConfigError if it cannot be read or parsed.
RunConfig load_config(const std::string& path);

// Applies "dotted.key=value", e.g. "params.field=0" or "engine.seed=7". The value
// is read as JSON when possible and as a plain string otherwise.
void apply_override(RunConfig& config, std::string_view assignment);

System parse_system(std::string_view text);
std::string_view system_name(System system);

}  // namespace nvdd::cli

#endif  // NVDD_TOOLS_CONFIG_H
