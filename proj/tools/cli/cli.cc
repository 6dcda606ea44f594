#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.h"
#include "nvdd/errors.h"
#include "nvdd/experiments.h"
#include "nvdd/units.h"

namespace nvdd::cli {
namespace {

using nlohmann::json;

double parse_theta(const std::string& text) {
  auto v = units::parse_angle_rad(text);
  if (!v) throw ConfigError("bad angle '" + text + "'");
  return *v;
}

std::vector<double> parse_theta_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("--theta expects start:stop:count");
  const auto count = units::parse_double(parts[2]);
  if (!count || *count < 1 || *count != std::floor(*count)) throw ConfigError("bad point count '" + parts[2] + "'");
  return linspace(parse_theta(parts[0]), parse_theta(parts[1]), static_cast<int>(*count));
}

DdPulseMode parse_pulse_mode(const std::string& text) {
  if (text == "instantaneous") return DdPulseMode::Instantaneous;
  if (text == "finite") return DdPulseMode::Finite;
  throw ConfigError("--pulse-mode must be 'instantaneous' or 'finite'");
}

MwMode parse_mw_mode(const std::string& text) {
  if (text == "finite") return MwMode::Finite;
  if (text == "ideal") return MwMode::Ideal;
  throw ConfigError("--mw-mode must be 'finite' or 'ideal'");
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ConfigError("--format must be 'csv' or 'json'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json matrix_json(const MatX& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      r.push_back(m(i, k).real());
      c.push_back(m(i, k).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"re", re}, {"im", im}};
}

// Options shared by the simulation subcommands; unset values keep the config.
struct SimFlags {
  std::optional<std::string> system;
  std::optional<std::string> noise;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;

  void add(CLI::App* cmd) {
    cmd->add_option("--system", system, "register: a or b");
    cmd->add_option("--noise", noise, "noise spec, e.g. lindblad:T2=34us or static:sigma=6.62kHz");
    cmd->add_option("--samples", samples, "classical-noise trajectories");
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--workers", workers, "worker threads");
  }

  void apply(RunConfig& c) const {
    if (system) c.system = parse_system(*system);
    if (noise) c.noise = parse_noise_spec(*noise);
    if (samples) c.engine.n_traj = *samples;
    if (seed) c.engine.seed = *seed;
    if (workers) c.engine.workers = *workers;
    c.engine.validate(c.noise);
  }
};

struct GateFlags {
  int control = 1;
  std::string theta;
  bool protected_gate = false;
  int dd_pulses = 2;
  std::string pulse_mode = "instantaneous";
  std::optional<std::string> mw_mode;
  double rf_phase = 0;

  MwMode mw(MwMode fallback) const { return mw_mode ? parse_mw_mode(*mw_mode) : fallback; }

  DdScheme scheme() const {
    if (dd_pulses < 0 || dd_pulses % 2 != 0) throw ConfigError("--dd-pulses must be even");
    return DdScheme::xy(dd_pulses, parse_pulse_mode(pulse_mode));
  }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void cmd_transitions(const RunConfig& c, const std::string& which, bool as_json, std::ostream& os) {
  std::vector<System> systems;
  if (which == "both") {
    systems = {System::A, System::B};
  } else {
    systems = {parse_system(which)};
  }
  json rows = json::array();
  std::ostringstream text;
  text << "system transition frequency\n";
  for (System s : systems) {
    for (const TransitionEntry& e : transition_table(c.params, s)) {
      rows.push_back({{"system", system_name(s)}, {"transition", e.label}, {"frequency_hz", e.frequency}});
      text << system_name(s) << " " << e.label << " "
           << units::format_quantity(e.frequency, units::Dimension::Frequency) << "\n";
    }
  }
  if (as_json) {
    os << rows.dump(2) << "\n";
  } else {
    os << text.str();
  }
}

void cmd_compile(const RunConfig& c, const GateFlags& g, bool experiment, std::ostream& os) {
  CrGateSpec gate{c.system, g.control, parse_theta(g.theta), g.rf_phase};
  if (gate.control != 0 && gate.control != 1) throw ConfigError("--control must be 0 or 1");
  Schedule s;
  if (experiment) {
    ExperimentSpec spec;
    spec.gate = gate;
    if (g.protected_gate) spec.dd = g.scheme();
    spec.mw_mode = g.mw(MwMode::Finite);
    s = compile_experiment(spec, c.params);
  } else {
    s = g.protected_gate ? compile_protected(gate, g.scheme(), c.params) : compile_unprotected(gate, c.params);
  }
  s.comment = std::string("CR theta=") + g.theta + " control=" + std::to_string(g.control) +
              (g.protected_gate ? " protected" : " unprotected");
  os << render_schedule(s);
}

void cmd_run(const RunConfig& c, const std::string& path, std::ostream& os) {
  const Schedule s = parse_schedule(read_file(path));
  const SimResult r = propagate(s, maximally_mixed(), c.params, c.noise, c.engine);
  if (c.format == OutputFormat::Json) {
    json m = json::array();
    for (const Measurement& x : r.measurements) m.push_back({{"label", x.label}, {"value", x.value}});
    os << json{{"measurements", m}}.dump(2) << "\n";
  } else {
    os << "label,value\n";
    for (const Measurement& x : r.measurements) os << x.label << "," << units::format_double(x.value) << "\n";
  }
}

void cmd_sweep(const RunConfig& c, const GateFlags& g, bool incoherent, std::ostream& os) {
  SweepOptions o;
  o.system = c.system;
  o.control = g.control;
  o.protected_gate = g.protected_gate;
  o.dd = g.scheme();
  o.mw_mode = g.mw(MwMode::Finite);
  o.coherent_input = !incoherent;
  os << theta_sweep(parse_theta_range(g.theta), o, c.params, c.noise, c.engine).to_csv();
}

void cmd_tomo(const RunConfig& c, const GateFlags& g, bool unprotected, std::ostream& os) {
  TomographyOptions o;
  o.system = c.system;
  o.control = g.control;
  o.protected_gate = !unprotected;
  o.dd = g.scheme();
  o.mw_mode = g.mw(MwMode::Ideal);
  const double theta = parse_theta(g.theta);
  const TomographyResult r = tomography_run(theta, o, c.params, c.noise, c.engine);
  const Mat2 ref0 = tomography_reference(0.0, c.params, c.system);
  const Eigen::Vector3d b = bloch_vector(r.rho);
  json j = {{"theta_rad", theta},
            {"probabilities", r.probabilities},
            {"rho", matrix_json(r.rho)},
            {"bloch", {b[0], b[1], b[2]}},
            {"reference", matrix_json(r.reference)},
            {"fidelity", r.fidelity},
            {"fidelity_theta0_reference", (r.rho * ref0).trace().real()}};
  os << j.dump(2) << "\n";
}

void cmd_fit(const std::string& model, const std::string& csv, std::ostream& os) {
  const SweepTable table = SweepTable::from_csv(read_file(csv));
  const std::vector<FitPoint> points = table.fit_points();
  const FitResult r = fit_decay(points, parse_model(model));
  json params = json::object();
  for (size_t k = 0; k < r.names.size(); ++k) params[r.names[k]] = r.values[k];
  json j = {{"model", model_name(r.model)},
            {"parameters", params},
            {"residual_norm", r.residual_norm},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"points", points.size()}};
  os << j.dump(2) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nuclear-electron controlled-rotation simulator for NV centers", "nvdd"};
  app.require_subcommand(1);

  std::string config_path;
  if (const char* env = std::getenv("NVDD_CONFIG")) config_path = env;
  std::vector<std::string> overrides;
  bool dump_config = false;
  app.add_option("--config", config_path, "JSON config file (default: $NVDD_CONFIG)");
  app.add_option("--param", overrides, "config override, dotted.key=value")->take_all();
  app.add_flag("--dump-config", dump_config, "print the effective config as JSON to stderr");

  SimFlags sim;
  GateFlags gate;
  std::string out_path;
  std::string format;

  auto* transitions = app.add_subcommand("transitions", "nuclear and MW transition frequencies");
  std::string which = "both";
  bool as_json = false;
  transitions->add_option("--system", which, "a, b or both");
  transitions->add_flag("--json", as_json, "emit JSON");

  auto add_gate = [&](CLI::App* cmd, bool theta_required) {
    auto* t = cmd->add_option("--theta", gate.theta, "rotation angle, e.g. 4pi");
    if (theta_required) t->required();
    cmd->add_option("--control", gate.control, "control condition 0 or 1");
    cmd->add_option("--dd-pulses", gate.dd_pulses, "DD pulses per gate (even)");
    cmd->add_option("--pulse-mode", gate.pulse_mode, "DD pulses: instantaneous or finite");
    cmd->add_option("--mw-mode", gate.mw_mode, "preparation/readout MW pulses: finite or ideal (tomo defaults to ideal)");
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  auto* compile = app.add_subcommand("compile", "compile a CR gate to a schedule file");
  bool experiment = false;
  add_gate(compile, true);
  compile->add_option("--system", sim.system, "register: a or b");
  compile->add_option("--rf-phase", gate.rf_phase, "RF phase, deg");
  compile->add_flag("--protected", gate.protected_gate, "interleave DD pulses");
  compile->add_flag("--experiment", experiment, "wrap in preparation, readout and measure");

  auto* run_cmd = app.add_subcommand("run", "simulate a schedule file");
  std::string schedule_path;
  run_cmd->add_option("schedule", schedule_path, "schedule file")->required();
  bool run_csv = false, run_json = false;
  auto* format_opt = run_cmd->add_option("--format", format, "csv or json");
  auto* csv_flag = run_cmd->add_flag("--csv", run_csv, "same as --format csv");
  auto* json_flag = run_cmd->add_flag("--json", run_json, "same as --format json");
  csv_flag->excludes(json_flag)->excludes(format_opt);
  json_flag->excludes(format_opt);
  run_cmd->add_option("--out", out_path, "output file (default stdout)");
  sim.add(run_cmd);

  auto* sweep = app.add_subcommand("sweep", "theta sweep of the population experiment");
  bool incoherent = false;
  add_gate(sweep, true);
  sweep->add_flag("--protected", gate.protected_gate, "protected gate");
  sweep->add_flag("--incoherent-input", incoherent, "remove the input electron coherence");
  sim.add(sweep);

  auto* tomo = app.add_subcommand("tomo", "five-setting electron tomography after the gate");
  bool unprotected = false;
  add_gate(tomo, true);
  tomo->add_flag("--unprotected", unprotected, "skip DD");
  sim.add(tomo);

  auto* fit = app.add_subcommand("fit", "fit a decay model to a sweep CSV");
  std::string model, csv;
  fit->add_option("--model", model, "eq6, s_r, exp, gaussian or linear")->required();
  fit->add_option("--csv", csv, "sweep CSV")->required();
  fit->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const std::string& o : overrides) apply_override(config, o);
    sim.apply(config);
    if (run_csv) format = "csv";
    if (run_json) format = "json";
    if (!format.empty()) config.format = parse_format(format);
    if (!out_path.empty()) config.output_path = out_path;
    if (dump_config) err << config_to_json(config).dump(2) << "\n";

    Output output(config.output_path, out);
    std::ostream& os = output.stream();
    if (transitions->parsed()) {
      cmd_transitions(config, which, as_json, os);
    } else if (compile->parsed()) {
      cmd_compile(config, gate, experiment, os);
    } else if (run_cmd->parsed()) {
      cmd_run(config, schedule_path, os);
    } else if (sweep->parsed()) {
      cmd_sweep(config, gate, incoherent, os);
    } else if (tomo->parsed()) {
      cmd_tomo(config, gate, unprotected, os);
    } else if (fit->parsed()) {
      cmd_fit(model, csv, os);
    }
    os.flush();
  } catch (const NumericError& e) {
    err << "nvdd: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "nvdd: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "nvdd: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace nvdd::cli
