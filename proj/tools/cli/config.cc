#include "config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "nvdd/errors.h"

namespace nvdd::cli {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + ": expected a number");
  return j.get<double>();
}

template <typename T>
T integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key + ": expected an integer");
  return j.get<T>();
}

struct ParamField {
  const char* key;
  double NvParams::*member;
};

constexpr ParamField kScalarParams[] = {
    {"zero_field_splitting", &NvParams::zero_field_splitting},
    {"quadrupole", &NvParams::quadrupole},
    {"hyperfine", &NvParams::hyperfine},
    {"gamma_e", &NvParams::gamma_e},
    {"gamma_n", &NvParams::gamma_n},
    {"field", &NvParams::field},
    {"rabi_mw_selective", &NvParams::rabi_mw_selective},
    {"rabi_mw_hard", &NvParams::rabi_mw_hard},
    {"t1", &NvParams::t1},
    {"t2_markov", &NvParams::t2_markov},
};

constexpr const char* kRabiKeys[2][2] = {{"rabi_a_nu1", "rabi_a_nu2"}, {"rabi_b_nu1", "rabi_b_nu2"}};

}  // namespace

System parse_system(std::string_view text) {
  if (text == "a" || text == "A") return System::A;
  if (text == "b" || text == "B") return System::B;
  throw ConfigError("system must be 'a' or 'b', got '" + std::string(text) + "'");
}

std::string_view system_name(System system) { return system == System::A ? "a" : "b"; }

RunConfig config_from_json(const json& j) {
  RunConfig c;
  check_keys(j, "config", {"system", "params", "noise", "engine", "output"});
  if (j.contains("system")) {
    if (!j["system"].is_string()) throw ConfigError("system: expected a string");
    c.system = parse_system(j["system"].get<std::string>());
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    std::set<std::string> allowed;
    for (const auto& f : kScalarParams) allowed.insert(f.key);
    for (const auto& row : kRabiKeys) allowed.insert(row, row + 2);
    check_keys(p, "params", allowed);
    for (const auto& f : kScalarParams) {
      if (p.contains(f.key)) c.params.*f.member = number(p[f.key], f.key);
    }
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) {
        if (p.contains(kRabiKeys[s][t])) c.params.rabi_nuclear[s][t] = number(p[kRabiKeys[s][t]], kRabiKeys[s][t]);
      }
    }
    c.params.validate();
  }
  if (j.contains("noise")) {
    if (!j["noise"].is_string()) throw ConfigError("noise: expected a string");
    c.noise = parse_noise_spec(j["noise"].get<std::string>());
  }
  if (j.contains("engine")) {
    const json& e = j["engine"];
    check_keys(e, "engine", {"rwa_cutoff_factor", "rwa_cutoff", "dt_max", "n_traj", "seed", "workers"});
    if (e.contains("rwa_cutoff_factor")) c.engine.rwa_cutoff_factor = number(e["rwa_cutoff_factor"], "rwa_cutoff_factor");
    if (e.contains("rwa_cutoff") && !e["rwa_cutoff"].is_null()) c.engine.rwa_cutoff = number(e["rwa_cutoff"], "rwa_cutoff");
    if (e.contains("dt_max") && !e["dt_max"].is_null()) c.engine.dt_max = number(e["dt_max"], "dt_max");
    if (e.contains("n_traj")) c.engine.n_traj = integer<int>(e["n_traj"], "n_traj");
    if (e.contains("seed")) c.engine.seed = integer<std::uint64_t>(e["seed"], "seed");
    if (e.contains("workers")) c.engine.workers = integer<int>(e["workers"], "workers");
  }
  c.engine.validate(c.noise);
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path: expected a string");
      c.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const json& f = o["format"];
      if (f == "csv") {
        c.format = OutputFormat::Csv;
      } else if (f == "json") {
        c.format = OutputFormat::Json;
      } else {
        throw ConfigError("output.format: expected 'csv' or 'json'");
      }
    }
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json p = json::object();
  for (const auto& f : kScalarParams) p[f.key] = c.params.*f.member;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) p[kRabiKeys[s][t]] = c.params.rabi_nuclear[s][t];
  }
  json e = {{"rwa_cutoff_factor", c.engine.rwa_cutoff_factor},
            {"n_traj", c.engine.n_traj},
            {"seed", c.engine.seed},
            {"workers", c.engine.workers}};
  e["rwa_cutoff"] = c.engine.rwa_cutoff ? json(*c.engine.rwa_cutoff) : json(nullptr);
  e["dt_max"] = c.engine.dt_max ? json(*c.engine.dt_max) : json(nullptr);
  return {{"system", std::string(system_name(c.system))},
          {"params", p},
          {"noise", format_noise_spec(c.noise)},
          {"engine", e},
          {"output", {{"path", c.output_path}, {"format", c.format == OutputFormat::Csv ? "csv" : "json"}}}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--param expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json j = config_to_json(config);
  json* node = &j;
  std::istringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!node->is_object()) throw ConfigError("--param: '" + key + "' is not a config key");
    node = &(*node)[part];
  }
  *node = value;
  config = config_from_json(j);
}

}  // namespace nvdd::cli
