#include "nvdd/experiments.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nvdd/errors.h"
#include "nvdd/units.h"

namespace nvdd {
namespace {

constexpr std::array<TomoSetting, 5> kSettings = {TomoSetting::None, TomoSetting::PlusX,
                                                  TomoSetting::MinusX, TomoSetting::PlusY,
                                                  TomoSetting::MinusY};

Mat2 addressed_block(const Mat9& rho) {
  const int a = LevelIndex{0, 0}.flat();
  const int b = LevelIndex{-1, 0}.flat();
  Mat2 out;
  out << rho(a, a), rho(a, b), rho(b, a), rho(b, b);
  const double tr = out.trace().real();
  if (tr < 1e-12) throw NumericError("no population in the m_i = 0 pair");
  return out / tr;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  while (true) {
    const size_t k = line.find(',', start);
    cells.push_back(line.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return cells;
}

}  // namespace

Mat9 input_state(const NvParams& params, System system, MwMode mw_mode, const EngineConfig& config) {
  ExperimentSpec spec;
  spec.gate.system = system;
  spec.readout = Readout::Tomography;
  spec.mw_mode = mw_mode;
  Schedule s = compile_experiment(spec, params);
  s.events.pop_back();  // Measure
  return propagate(s, maximally_mixed(), params, NoiseModel{}, config).final_state;
}

Mat9 strip_electron_coherence(const Mat9& rho) {
  Mat9 out = rho;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) out.block<3, 3>(3 * i, 3 * j).setZero();
    }
  }
  return out;
}

double ideal_signal(double theta) {
  const double c = 1.0 + std::cos(theta / 2.0);
  return c * c / 8.0 + 0.5;
}

double decayed_signal(double theta, double t, double t2) {
  const double c = std::cos(theta / 2.0);
  return (1.0 + 2.0 * c * std::exp(-t / t2) + c * c) / 8.0 + 0.5;
}

double residual_model(double theta, double t, double t2, double kappa) {
  return (1.0 - kappa * t) * decayed_signal(theta, t, t2);
}

std::string SweepTable::to_csv() const {
  std::string out = std::string("# system=") + (system == System::A ? "a" : "b") + "\n" +
                    "# protected=" + (protected_gate ? "true" : "false") + "\n" + "# noise=" + noise + "\n" +
                    "theta_rad,time_s,signal,stderr\n";
  for (const SweepRow& r : rows) {
    out += units::format_double(r.theta) + "," + units::format_double(r.time) + "," +
           units::format_double(r.signal) + ",";
    if (r.stderr_value) out += units::format_double(*r.stderr_value);
    out += "\n";
  }
  return out;
}

SweepTable SweepTable::from_csv(std::string_view text) {
  SweepTable table;
  int line_no = 0;
  bool header = false;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() == '#') {
      // Metadata lines look like "# key=value"; anything else is a comment.
      line.remove_prefix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      const size_t eq = line.find('=');
      if (header || eq == std::string_view::npos) continue;
      const std::string_view key = line.substr(0, eq);
      const std::string_view value = line.substr(eq + 1);
      if (key == "system") {
        if (value != "a" && value != "b") throw ParseError(line_no, "system must be a or b");
        table.system = value == "a" ? System::A : System::B;
      } else if (key == "protected") {
        if (value != "true" && value != "false") throw ParseError(line_no, "protected must be true or false");
        table.protected_gate = value == "true";
      } else if (key == "noise") {
        table.noise = std::string(value);
      }
      continue;
    }
    if (line.empty()) continue;
    if (!header) {
      if (line != "theta_rad,time_s,signal,stderr") throw ParseError(line_no, "unexpected CSV header");
      header = true;
      continue;
    }
    const auto cells = split_line(line);
    if (cells.size() != 4) throw ParseError(line_no, "expected 4 columns");
    SweepRow row;
    const auto theta = units::parse_double(cells[0]);
    const auto time = units::parse_double(cells[1]);
    const auto signal = units::parse_double(cells[2]);
    if (!theta || !time || !signal) throw ParseError(line_no, "malformed number");
    row.theta = *theta;
    row.time = *time;
    row.signal = *signal;
    if (!cells[3].empty()) {
      const auto se = units::parse_double(cells[3]);
      if (!se) throw ParseError(line_no, "malformed stderr");
      row.stderr_value = *se;
    }
    table.rows.push_back(row);
  }
  if (!header) throw ParseError(line_no, "missing CSV header");
  return table;
}

std::vector<FitPoint> SweepTable::fit_points() const {
  std::vector<FitPoint> out;
  out.reserve(rows.size());
  for (const SweepRow& r : rows) out.push_back({r.theta, r.time, r.signal});
  return out;
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw ConfigError("linspace: count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(start + (stop - start) * k / (count - 1));
  out.back() = stop;
  return out;
}

SweepTable theta_sweep(const std::vector<double>& grid, const SweepOptions& options,
                       const NvParams& params, const NoiseModel& noise, const EngineConfig& config) {
  for (size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0) || (k > 0 && !(grid[k] > grid[k - 1]))) {
      throw ConfigError("theta grid must be non-negative and strictly increasing");
    }
  }
  SweepTable table;
  table.system = options.system;
  table.protected_gate = options.protected_gate;
  table.noise = format_noise_spec(noise);

  const Mat9 rho0 = options.coherent_input
                        ? maximally_mixed()
                        : strip_electron_coherence(input_state(params, options.system, options.mw_mode));
  EngineConfig cfg = config;
  cfg.keep_trajectories = noise.has_classical() && config.n_traj > 1;

  for (double theta : grid) {
    ExperimentSpec spec;
    spec.gate = {options.system, options.control, theta, 0.0};
    if (options.protected_gate) spec.dd = options.dd;
    spec.mw_mode = options.mw_mode;
    spec.prepare = options.coherent_input;
    const Schedule s = compile_experiment(spec, params);
    const SimResult r = propagate(s, rho0, params, noise, cfg);

    SweepRow row;
    row.theta = theta;
    row.time = gate_rf_time(spec.gate, params, options.protected_gate);
    row.signal = r.value(spec.measure_label);
    if (cfg.keep_trajectories) {
      double mean = 0, sq = 0;
      for (const auto& t : r.trajectories) mean += t.back();
      mean /= static_cast<double>(r.trajectories.size());
      for (const auto& t : r.trajectories) sq += (t.back() - mean) * (t.back() - mean);
      const double n = static_cast<double>(r.trajectories.size());
      row.stderr_value = std::sqrt(sq / (n - 1.0) / n);
    }
    table.rows.push_back(row);
  }
  return table;
}

double coherence_after(double duration, bool protected_idle, System system, const DdScheme& dd,
                       const NvParams& params, const NoiseModel& noise, const EngineConfig& config) {
  Schedule s;
  s.system = system;
  if (protected_idle) {
    s = compile_protected_idle(duration, system, dd, params);
  } else if (duration > 0) {
    s.events.emplace_back(Delay{duration});
  }
  const SimResult r = propagate(s, input_state(params, system), params, noise, config);
  return electron_coherence(r.final_state);
}

Mat2 reconstruct_qubit(double p_none, double p_plus_x, double p_minus_x, double p_plus_y,
                       double p_minus_y) {
  for (double p : {p_none, p_plus_x, p_minus_x, p_plus_y, p_minus_y}) {
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) throw ConfigError("tomography: probability outside [0, 1]");
  }
  const double z = 2.0 * p_none - 1.0;
  const double y = p_plus_x - p_minus_x;
  const double x = p_minus_y - p_plus_y;
  if (std::sqrt(x * x + y * y + z * z) > 1.05) {
    throw ConfigError("tomography: inconsistent probabilities (Bloch vector length > 1.05)");
  }
  const Mat2 rho = bloch_state(x, y, z);
  Eigen::SelfAdjointEigenSolver<Mat2> eig(rho);
  if (eig.eigenvalues().minCoeff() >= 0.0) return rho;
  Eigen::Vector2d w = eig.eigenvalues().cwiseMax(0.0);
  w /= w.sum();
  return eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

Mat2 tomography_reference(double theta, const NvParams& params, System system) {
  const double turns = theta / (2.0 * std::numbers::pi);
  const double k = std::round(turns);
  if (std::abs(turns - k) > 1e-9 * std::max(1.0, std::abs(turns))) {
    throw ConfigError("tomography: theta must be a multiple of 2 pi");
  }
  Mat2 ref = addressed_block(input_state(params, system));
  if (std::fmod(std::abs(k), 2.0) == 1.0) ref = pauli_z() * ref * pauli_z();
  return ref;
}

std::array<double, 5> tomography_probabilities(const Mat9& rho, const NvParams& params,
                                               MwMode mw_mode, const EngineConfig& config) {
  std::array<double, 5> out{};
  for (size_t k = 0; k < kSettings.size(); ++k) {
    ExperimentSpec spec;
    spec.readout = Readout::Tomography;
    spec.setting = kSettings[k];
    spec.mw_mode = mw_mode;
    spec.prepare = false;
    const Schedule s = compile_experiment(spec, params);
    out[k] = addressed_p0(propagate(s, rho, params, NoiseModel{}, config).final_state);
  }
  return out;
}

TomographyResult tomography_run(double theta, const TomographyOptions& options,
                                const NvParams& params, const NoiseModel& noise,
                                const EngineConfig& config) {
  TomographyResult result;
  result.reference = tomography_reference(theta, params, options.system);
  for (size_t k = 0; k < kSettings.size(); ++k) {
    ExperimentSpec spec;
    spec.gate = {options.system, options.control, theta, 0.0};
    if (options.protected_gate) spec.dd = options.dd;
    spec.readout = Readout::Tomography;
    spec.setting = kSettings[k];
    spec.mw_mode = options.mw_mode;
    const Schedule s = compile_experiment(spec, params);
    result.probabilities[k] =
        addressed_p0(propagate(s, maximally_mixed(), params, noise, config).final_state);
  }
  const auto& p = result.probabilities;
  result.rho = reconstruct_qubit(p[0], p[1], p[2], p[3], p[4]);
  result.fidelity = (result.rho * result.reference).trace().real();
  return result;
}

}  // namespace nvdd
