#ifndef NVDD_SCHEDULE_H
#define NVDD_SCHEDULE_H

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nvdd/hamiltonian.h"

namespace nvdd {

// Instantaneous pulses skip the finite-Rabi dynamics. Selective ones rotate only
// the target pair; hard ones rotate the same flip in every manifold of the
// other spin (all four electron lines for MW, all nuclear lines for RF).
enum class IdealMode { None, Selective, Hard };

struct PulseEvent {
  Channel channel = Channel::MW;
  double freq = 0;       // carrier, Hz
  double phase = 0;      // degrees, referenced to schedule time t = 0
  double rabi = 0;       // Hz, on the target pair; unused by ideal pulses
  double duration = 0;   // s; always 0 for ideal pulses
  double flip = 0;       // degrees; for finite pulses 360 * rabi * duration
  LevelPair target{};
  IdealMode ideal = IdealMode::None;

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

struct Delay {
  double duration = 0;
  friend bool operator==(const Delay&, const Delay&) = default;
};

// Frame rotation realized as a phase shift of all later pulses on the channel.
struct VirtualZ {
  Channel channel = Channel::MW;
  double angle = 0;  // degrees
  friend bool operator==(const VirtualZ&, const VirtualZ&) = default;
};

// Optical re-preparation: electron to m_s = 0, nuclear marginal kept.
struct LaserInit {
  friend bool operator==(const LaserInit&, const LaserInit&) = default;
};

struct Measure {
  std::string label;
  friend bool operator==(const Measure&, const Measure&) = default;
};

using Event = std::variant<PulseEvent, Delay, VirtualZ, LaserInit, Measure>;

struct Schedule {
  System system = System::A;
  std::string comment;  // leading '#' lines, joined with '\n'
  std::vector<Event> events;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Builds a finite pulse from a flip angle: duration = flip / (360 * rabi).
PulseEvent make_pulse(Channel channel, double freq, double rabi, double flip_deg,
                      double phase_deg, const LevelPair& target);
PulseEvent make_ideal_pulse(Channel channel, double freq, double flip_deg, double phase_deg,
                            const LevelPair& target, IdealMode mode);

// Throws ConfigError if the schedule breaks a structural invariant.
void validate(const Schedule& schedule);

// Line-oriented text format; throws ParseError with the offending line number.
Schedule parse_schedule(std::string_view text);
std::string render_schedule(const Schedule& schedule);

// Sum of pulse and delay durations; ideal pulses and virtual-Z count zero.
double total_duration(const Schedule& schedule);

double event_duration(const Event& event);

}  // namespace nvdd

#endif  // NVDD_SCHEDULE_H
