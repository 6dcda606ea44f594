#ifndef NVDD_NOISE_H
#define NVDD_NOISE_H

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nvdd/operators.h"

namespace nvdd {

// Markovian relaxation of the electron spin; either time may be absent.
struct LindbladNoise {
  std::optional<double> t1;
  std::optional<double> t2;
};

// Quasi-static detuning: one Gaussian draw per trajectory.
struct StaticGaussian {
  double sigma = 0;  // Hz
};

// Stationary Ornstein-Uhlenbeck detuning with correlation time tau_c.
struct OrnsteinUhlenbeck {
  double sigma = 0;  // Hz
  double tau_c = 0;  // s
};

using ClassicalNoise = std::variant<std::monostate, StaticGaussian, OrnsteinUhlenbeck>;

struct NoiseModel {
  std::optional<LindbladNoise> lindblad;
  ClassicalNoise classical;

  bool has_classical() const { return !std::holds_alternative<std::monostate>(classical); }
  void validate() const;
};

// Grammar: "none" | term ('+' term)*, where term is one of
//   lindblad:T1=3.5ms,T2=34us   (either key optional)
//   static:sigma=6.62kHz
//   ou:sigma=5kHz,tau=1ms
// At most one lindblad and one classical term. Throws ConfigError.
NoiseModel parse_noise_spec(std::string_view spec);
std::string format_noise_spec(const NoiseModel& noise);

struct Dissipator {
  Mat9 op;
  double rate;  // 1/s
};

// Pure dephasing embed(Sz, I) at rate 2/T2, so the m_s = 0 <-> -1 coherence decays
// at exactly 1/T2. T1: one jump |i,m><j,m| per electron pair i != j and nuclear
// level m, each at rate 1/(3 T1); the electron marginal relaxes to I/3 with
// population-difference decay time T1.
std::vector<Dissipator> lindblad_dissipators(const NoiseModel& noise);

// Piecewise-constant detuning trajectory (Hz) driven by a seeded generator.
class DetuningProcess {
 public:
  DetuningProcess(const ClassicalNoise& model, std::uint64_t seed);

  double value() const { return value_; }
  // Moves the process forward by dt using the exact OU transition density.
  void advance(double dt);

 private:
  ClassicalNoise model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double value_ = 0;
};

// Values of the process on a grid of `dt` steps covering `duration`.
std::vector<double> sample_noise(const ClassicalNoise& model, double duration, std::uint64_t seed,
                                 double dt);

}  // namespace nvdd

#endif  // NVDD_NOISE_H
