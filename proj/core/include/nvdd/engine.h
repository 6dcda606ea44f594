#ifndef NVDD_ENGINE_H
#define NVDD_ENGINE_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvdd/hamiltonian.h"
#include "nvdd/noise.h"
#include "nvdd/schedule.h"

namespace nvdd {

struct EngineConfig {
  // Couplings whose rotating-frame detuning exceeds factor * pulse Rabi are
  // dropped. An explicit cutoff (Hz) overrides the factor.
  double rwa_cutoff_factor = 50.0;
  std::optional<double> rwa_cutoff;

  // Longest constant-noise step for OU noise; defaults to tau_c / 20.
  std::optional<double> dt_max;

  int n_traj = 1;            // classical-noise trajectories
  std::uint64_t seed = 1;    // trajectory i uses seed + i
  int workers = 1;
  bool keep_trajectories = false;

  // Throws ConfigError for a non-physical setting or dt_max > tau_c.
  void validate(const NoiseModel& noise) const;
};

struct Measurement {
  std::string label;
  double value;  // trajectory mean of the readout
};

struct SimResult {
  Mat9 final_state;  // trajectory-averaged, in the logical frame
  std::vector<Measurement> measurements;
  // [trajectory][measurement] readouts when keep_trajectories is set.
  std::vector<std::vector<double>> trajectories;

  // Throws std::out_of_range for an unknown label.
  double value(std::string_view label) const;
};

// Evolves rho0 (interaction picture of the static Hamiltonian) through the
// schedule. Virtual-Z frame changes are folded into the returned state.
SimResult propagate(const Schedule& schedule, const Mat9& rho0, const NvParams& params,
                    const NoiseModel& noise, const EngineConfig& config);

// Noise-free propagator of a schedule without laser events, in the same frame
// as propagate's final state.
Mat9 schedule_unitary(const Schedule& schedule, const NvParams& params,
                      const EngineConfig& config = {});

// Interaction-picture propagator of one pulse starting at t_start.
// `phase_offset_deg` is subtracted from the pulse phase (pending virtual Z).
// Throws ConfigError when the target coupling falls outside the RWA cutoff.
Mat9 pulse_propagator(const PulseEvent& pulse, const NvParams& params, const EngineConfig& config,
                      double t_start, double phase_offset_deg = 0.0);

// Electron m_s = 0 population within the register's computational levels.
double readout_p0(const Mat9& rho, System system);

// |0,0> population within the m_i = 0 electron pair {|0,0>, |-1,0>}.
double addressed_p0(const Mat9& rho);

// 2 |<0,0|rho|-1,0>| normalized by the pair population.
double electron_coherence(const Mat9& rho);

// Electron to |0><0|, nuclear marginal kept.
Mat9 laser_init(const Mat9& rho);

Mat9 maximally_mixed();

}  // namespace nvdd

#endif  // NVDD_ENGINE_H
