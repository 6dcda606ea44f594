#ifndef NVDD_COMPILER_H
#define NVDD_COMPILER_H

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nvdd/hamiltonian.h"
#include "nvdd/schedule.h"

namespace nvdd {

// Controlled x-rotation of the nuclear (target) qubit conditioned on the
// electron (control) qubit being in logical `control`.
struct CrGateSpec {
  System system = System::A;
  int control = 1;      // 0 or 1
  double theta = 0;     // rad
  double rf_phase = 0;  // deg
};

enum class DdPulseMode { Instantaneous, Finite };

struct DdScheme {
  int n_pulses = 2;
  std::vector<double> axis_phases{0.0, 90.0};  // deg, one per pulse
  DdPulseMode mode = DdPulseMode::Instantaneous;
  double rabi = 11e6;  // Hz, finite mode only

  // Finite mode: delay each pulse so its centre lands on a multiple of the
  // hyperfine beat period of the two computational electron lines.
  bool hyperfine_sync = true;

  // X/Y alternation of `n` pulses.
  static DdScheme xy(int n, DdPulseMode mode = DdPulseMode::Instantaneous);
};

enum class TomoSetting { None, PlusX, MinusX, PlusY, MinusY };

enum class Readout { Population, Tomography };

enum class MwMode { Finite, Ideal };

struct ExperimentSpec {
  CrGateSpec gate;
  std::optional<DdScheme> dd;  // nullopt: unprotected gate
  Readout readout = Readout::Population;
  TomoSetting setting = TomoSetting::None;
  double readout_flip = 90.0;  // alpha, deg; step 3 applies -alpha
  MwMode mw_mode = MwMode::Finite;
  bool prepare = true;  // emit laser + step-1 pulse
  std::string measure_label = "p0";
};

// Total RF drive time of the gate body (DD pulses and sync delays excluded).
double gate_rf_time(const CrGateSpec& spec, const NvParams& params, bool protected_gate);

// Carrier of the finite DD pulses: midway between the m_i = 0 and m_i = q
// electron lines, so both computational manifolds see detuning A / 2.
double dd_carrier(const NvParams& params, System system);

// All compile_* functions accept the absolute schedule time at which the body
// starts; carrier phases are referenced to schedule time zero.
Schedule compile_unprotected(const CrGateSpec& spec, const NvParams& params);
Schedule compile_protected(const CrGateSpec& spec, const DdScheme& dd, const NvParams& params,
                           double start_time = 0.0);

// DD cycle with delays in place of the RF segments (input-state decay under DD).
Schedule compile_protected_idle(double duration, System system, const DdScheme& dd,
                                const NvParams& params, double start_time = 0.0);

Schedule compile_experiment(const ExperimentSpec& exp, const NvParams& params);

// Virtual-Z angle (deg, in [0, 360)) that makes Rz(angle) * prod(pi pulses)
// the identity on the electron qubit up to a global phase.
double dd_frame_correction(std::span<const double> axis_phases);

// Block-diagonal 4x4 gate in the |c t> basis.
Mat4 cr_unitary(const CrGateSpec& spec);

}  // namespace nvdd

#endif  // NVDD_COMPILER_H
