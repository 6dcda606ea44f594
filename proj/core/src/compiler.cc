#include "nvdd/compiler.h"

#include <cmath>
#include <numbers>

#include "nvdd/errors.h"

namespace nvdd {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_gate(const CrGateSpec& spec) {
  if (spec.control != 0 && spec.control != 1) throw ConfigError("control condition must be 0 or 1");
  if (!std::isfinite(spec.theta) || spec.theta < 0) throw ConfigError("theta must be finite and >= 0");
  if (!std::isfinite(spec.rf_phase)) throw ConfigError("rf phase must be finite");
}

void check_dd(const DdScheme& dd) {
  if (dd.n_pulses < 0 || dd.n_pulses % 2 != 0) {
    throw ConfigError("DD pulse count must be even and >= 0, got " + std::to_string(dd.n_pulses));
  }
  if (static_cast<int>(dd.axis_phases.size()) != dd.n_pulses) {
    throw ConfigError("DD axis phase list length must equal the pulse count");
  }
  if (dd.mode == DdPulseMode::Finite && !(dd.rabi > 0)) throw ConfigError("DD Rabi must be > 0");
}

NuclearTransition own_transition(int control) {
  return control == 0 ? NuclearTransition::Nu1 : NuclearTransition::Nu2;
}

NuclearTransition other(NuclearTransition t) {
  return t == NuclearTransition::Nu1 ? NuclearTransition::Nu2 : NuclearTransition::Nu1;
}

double transition_frequency(const NvParams& params, System system, NuclearTransition t) {
  const auto f = nuclear_transitions(params, system);
  return t == NuclearTransition::Nu1 ? f.nu1 : f.nu2;
}

PulseEvent rf_segment(const CrGateSpec& spec, const NvParams& params, NuclearTransition t,
                      double duration) {
  PulseEvent p;
  p.channel = Channel::RF;
  p.freq = transition_frequency(params, spec.system, t);
  p.rabi = params.rabi_rf(spec.system, t);
  p.duration = duration;
  p.flip = 360.0 * p.rabi * p.duration;
  p.phase = spec.rf_phase;
  p.target = nuclear_pair(spec.system, t);
  return p;
}

// Emits the DD skeleton: segment, pulse, segment, ..., pulse, segment, virtual-Z.
// `segment(k, duration, events)` fills the k-th window.
template <typename SegmentFn>
Schedule dd_cycle(System system, const DdScheme& dd, const NvParams& params, double total,
                  double start_time, SegmentFn&& segment) {
  Schedule s;
  s.system = system;
  const int n = dd.n_pulses;
  const double carrier = dd.mode == DdPulseMode::Finite ? dd_carrier(params, system)
                                                         : mw_transition(params, 0);
  const double beat = std::abs(mw_transition(params, nuclear_branch(system)) - carrier);
  double cursor = start_time;
  auto push = [&](Event e) {
    cursor += event_duration(e);
    s.events.push_back(std::move(e));
  };
  for (int k = 0; k <= n; ++k) {
    const double window = (k == 0 || k == n) ? total / (2.0 * n) : total / n;
    if (window > 0) segment(k, window, push);
    if (k == n) break;
    const double phase = dd.axis_phases[k];
    if (dd.mode == DdPulseMode::Instantaneous) {
      push(make_ideal_pulse(Channel::MW, carrier, 180.0, phase, mw_pair(0), IdealMode::Hard));
      continue;
    }
    PulseEvent pulse = make_pulse(Channel::MW, carrier, dd.rabi, 180.0, phase, mw_pair(0));
    if (dd.hyperfine_sync && beat > 0) {
      const double period = 1.0 / beat;
      const double centre = cursor + 0.5 * pulse.duration;
      const double r = std::fmod(centre, period);
      const double pad = period - r;
      if (r > 1e-13 && pad > 1e-13) push(Delay{pad});
    }
    push(pulse);
  }
  push(VirtualZ{Channel::MW, dd_frame_correction(dd.axis_phases)});
  return s;
}

}  // namespace

DdScheme DdScheme::xy(int n, DdPulseMode mode) {
  DdScheme dd;
  dd.n_pulses = n;
  dd.mode = mode;
  dd.axis_phases.clear();
  for (int k = 0; k < n; ++k) dd.axis_phases.push_back(k % 2 == 0 ? 0.0 : 90.0);
  return dd;
}

double gate_rf_time(const CrGateSpec& spec, const NvParams& params, bool protected_gate) {
  const NuclearTransition own = own_transition(spec.control);
  const double f_own = params.rabi_rf(spec.system, own);
  if (!protected_gate) return spec.theta / (kTwoPi * f_own);
  const double f_other = params.rabi_rf(spec.system, other(own));
  return 2.0 * spec.theta / (kTwoPi * (f_own + f_other));
}

double dd_carrier(const NvParams& params, System system) {
  return 0.5 * (mw_transition(params, 0) + mw_transition(params, nuclear_branch(system)));
}

Schedule compile_unprotected(const CrGateSpec& spec, const NvParams& params) {
  check_gate(spec);
  Schedule s;
  s.system = spec.system;
  const double t = gate_rf_time(spec, params, false);
  if (t > 0) s.events.emplace_back(rf_segment(spec, params, own_transition(spec.control), t));
  return s;
}

Schedule compile_protected(const CrGateSpec& spec, const DdScheme& dd, const NvParams& params,
                           double start_time) {
  check_gate(spec);
  check_dd(dd);
  if (dd.n_pulses == 0) return compile_unprotected(spec, params);
  const NuclearTransition own = own_transition(spec.control);
  const double t = gate_rf_time(spec, params, true);
  return dd_cycle(spec.system, dd, params, t, start_time, [&](int k, double window, auto& push) {
    push(rf_segment(spec, params, k % 2 == 0 ? own : other(own), window));
  });
}

Schedule compile_protected_idle(double duration, System system, const DdScheme& dd,
                                const NvParams& params, double start_time) {
  check_dd(dd);
  if (!(duration >= 0)) throw ConfigError("idle duration must be >= 0");
  if (dd.n_pulses == 0) {
    Schedule s;
    s.system = system;
    if (duration > 0) s.events.emplace_back(Delay{duration});
    return s;
  }
  return dd_cycle(system, dd, params, duration, start_time,
                  [](int, double window, auto& push) { push(Delay{window}); });
}

Schedule compile_experiment(const ExperimentSpec& exp, const NvParams& params) {
  Schedule s;
  s.system = exp.gate.system;
  const double mw_freq = mw_transition(params, 0);
  auto mw_pulse = [&](double flip, double phase) -> PulseEvent {
    if (exp.mw_mode == MwMode::Ideal) {
      return make_ideal_pulse(Channel::MW, mw_freq, flip, phase, mw_pair(0), IdealMode::Selective);
    }
    return make_pulse(Channel::MW, mw_freq, params.rabi_mw_selective, flip, phase, mw_pair(0));
  };

  if (exp.prepare) {
    s.events.emplace_back(LaserInit{});
    s.events.emplace_back(mw_pulse(exp.readout_flip, 0.0));
  }
  const Schedule body = exp.dd ? compile_protected(exp.gate, *exp.dd, params, total_duration(s))
                               : compile_unprotected(exp.gate, params);
  s.events.insert(s.events.end(), body.events.begin(), body.events.end());

  if (exp.readout == Readout::Population) {
    s.events.emplace_back(mw_pulse(exp.readout_flip, 180.0));
  } else {
    switch (exp.setting) {
      case TomoSetting::None:
        break;
      case TomoSetting::PlusX:
        s.events.emplace_back(mw_pulse(90.0, 0.0));
        break;
      case TomoSetting::MinusX:
        s.events.emplace_back(mw_pulse(90.0, 180.0));
        break;
      case TomoSetting::PlusY:
        s.events.emplace_back(mw_pulse(90.0, 90.0));
        break;
      case TomoSetting::MinusY:
        s.events.emplace_back(mw_pulse(90.0, 270.0));
        break;
    }
  }
  s.events.emplace_back(Measure{exp.measure_label});
  return s;
}

double dd_frame_correction(std::span<const double> axis_phases) {
  if (axis_phases.size() % 2 != 0) throw ConfigError("frame correction needs an even pulse count");
  Mat2 product = Mat2::Identity();
  for (double deg : axis_phases) {
    const double phi = deg * std::numbers::pi / 180.0;
    const Mat2 pulse = Complex(0, -1) * (std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y());
    product = pulse * product;
  }
  // An even train of equatorial pi rotations is a z rotation: diag(c, c e^{i beta}).
  const double beta = std::arg(product(1, 1) / product(0, 0)) * 180.0 / std::numbers::pi;
  double angle = std::fmod(-beta, 360.0);
  if (angle < 0) angle += 360.0;
  if (std::abs(angle - 360.0) < 1e-9 || std::abs(angle) < 1e-9) angle = 0.0;
  const double rounded = std::round(angle);
  if (std::abs(angle - rounded) < 1e-9) angle = rounded;
  return angle;
}

Mat4 cr_unitary(const CrGateSpec& spec) {
  check_gate(spec);
  const double c = std::cos(spec.theta / 2.0);
  const double s = std::sin(spec.theta / 2.0);
  // A carrier phase phi drives the nuclear pair with axis (cos phi, -sin phi):
  // m_i = 0 (logical |0>) is the upper level of every RF pair.
  const Complex e = std::polar(1.0, spec.rf_phase * std::numbers::pi / 180.0);
  Mat2 rx;
  rx << c, Complex(0, -1) * s * e, Complex(0, -1) * s * std::conj(e), c;
  Mat4 u = Mat4::Identity();
  const int block = spec.control == 0 ? 0 : 2;
  u.block<2, 2>(block, block) = rx;
  return u;
}

}  // namespace nvdd
