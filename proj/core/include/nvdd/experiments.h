#ifndef NVDD_EXPERIMENTS_H
#define NVDD_EXPERIMENTS_H

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvdd/compiler.h"
#include "nvdd/engine.h"
#include "nvdd/fit.h"

namespace nvdd {

// Laser + selective MW pi/2 on the m_i = 0 line, from the fully mixed state.
Mat9 input_state(const NvParams& params, System system, MwMode mw_mode = MwMode::Ideal,
                 const EngineConfig& config = {});

// Input state with the electron coherences (m_s != m_s' blocks) removed.
Mat9 strip_electron_coherence(const Mat9& rho);

// (1/8)(1 + cos(theta/2))^2 + 1/2
double ideal_signal(double theta);
// (1/8)[1 + 2 cos(theta/2) e^{-t/T2} + cos^2(theta/2)] + 1/2
double decayed_signal(double theta, double t, double t2);
// (1 - kappa t) decayed_signal
double residual_model(double theta, double t, double t2, double kappa);

struct SweepRow {
  double theta = 0;  // rad
  double time = 0;   // gate RF time, s
  double signal = 0;
  std::optional<double> stderr_value;
};

struct SweepTable {
  System system = System::A;
  bool protected_gate = false;
  std::string noise = "none";
  std::vector<SweepRow> rows;

  // "# system=", "# protected=" and "# noise=" lines, then the header
  // "theta_rad,time_s,signal,stderr"; empty stderr cell when absent.
  std::string to_csv() const;
  // Throws ParseError on malformed input.
  static SweepTable from_csv(std::string_view text);
  std::vector<FitPoint> fit_points() const;
};

// `count` evenly spaced points from start to stop inclusive.
std::vector<double> linspace(double start, double stop, int count);

struct SweepOptions {
  System system = System::A;
  int control = 1;
  bool protected_gate = false;
  DdScheme dd;
  MwMode mw_mode = MwMode::Finite;
  // false: start from the input state with its electron coherence removed.
  bool coherent_input = true;
};

// Population readout experiment at each theta. Throws ConfigError unless the
// grid is strictly increasing with theta >= 0.
SweepTable theta_sweep(const std::vector<double>& grid, const SweepOptions& options,
                       const NvParams& params, const NoiseModel& noise, const EngineConfig& config);

// Electron coherence of the input state after idling for `duration`, either
// freely or under the DD cycle of `dd`.
double coherence_after(double duration, bool protected_idle, System system, const DdScheme& dd,
                       const NvParams& params, const NoiseModel& noise, const EngineConfig& config);

// Five-setting reconstruction (order: none, +x, -x, +y, -y), with
// Rx(pi/2) = exp(-i pi sigma_x / 4). Clips negative eigenvalues and
// renormalizes. Throws ConfigError for inputs outside [0, 1] or a Bloch vector
// longer than 1.05.
Mat2 reconstruct_qubit(double p_none, double p_plus_x, double p_minus_x, double p_plus_y,
                       double p_minus_y);

struct TomographyOptions {
  System system = System::A;
  int control = 1;
  bool protected_gate = true;
  DdScheme dd;
  MwMode mw_mode = MwMode::Ideal;
};

struct TomographyResult {
  std::array<double, 5> probabilities{};  // m_s = 0 population in the m_i = 0 pair
  Mat2 rho;
  Mat2 reference;
  double fidelity = 0;
};

// Electron state of the addressed m_i = 0 manifold after the gate, expected to
// be rho_ref for theta = 0 mod 4 pi and sigma_z rho_ref sigma_z for 2 pi mod 4 pi.
Mat2 tomography_reference(double theta, const NvParams& params, System system);

// Throws ConfigError unless theta is a multiple of 2 pi.
TomographyResult tomography_run(double theta, const TomographyOptions& options,
                                const NvParams& params, const NoiseModel& noise,
                                const EngineConfig& config);

// Five tomography readouts of an arbitrary state (no gate).
std::array<double, 5> tomography_probabilities(const Mat9& rho, const NvParams& params,
                                               MwMode mw_mode, const EngineConfig& config = {});

}  // namespace nvdd

#endif  // NVDD_EXPERIMENTS_H
