#ifndef NVDD_HAMILTONIAN_H
#define NVDD_HAMILTONIAN_H

#include <string>
#include <vector>

#include "nvdd/operators.h"

namespace nvdd {

enum class Channel { MW, RF };

// Which of the two nuclear transitions of a register: nu1 lives in the m_s = 0
// manifold, nu2 in the m_s = -1 manifold.
enum class NuclearTransition { Nu1, Nu2 };

struct LevelPair {
  LevelIndex p;
  LevelIndex q;
  friend constexpr bool operator==(const LevelPair&, const LevelPair&) = default;
};

// Physical constants of the NV register. All frequencies in Hz (not angular),
// gyromagnetic ratios in Hz/G, field in G, times in s.
struct NvParams {
  double zero_field_splitting = 2.87e9;
  double quadrupole = -4.95e6;
  double hyperfine = 2.16e6;
  double gamma_e = 2.8e6;
  double gamma_n = 3.0e2;
  double field = 87.0;

  // Per-transition nuclear Rabi frequencies, indexed [system][transition].
  double rabi_nuclear[2][2] = {{9.05e3, 5.84e3}, {9.00e3, 5.60e3}};
  double rabi_mw_selective = 0.28e6;
  double rabi_mw_hard = 11e6;

  double t1 = 3.5e-3;
  double t2_markov = 34e-6;

  double rabi_rf(System s, NuclearTransition t) const {
    return rabi_nuclear[s == System::A ? 0 : 1][t == NuclearTransition::Nu1 ? 0 : 1];
  }
  double& rabi_rf(System s, NuclearTransition t) {
    return rabi_nuclear[s == System::A ? 0 : 1][t == NuclearTransition::Nu1 ? 0 : 1];
  }

  // Throws ConfigError on a non-physical value.
  void validate() const;
};

// Diagonal entry of the static Hamiltonian for one level, Hz.
double level_energy(const NvParams& params, LevelIndex level);

// D Sz^2 + gamma_e B Sz + P Iz^2 + gamma_n B Iz + A Sz Iz. Exactly diagonal.
Mat9 static_hamiltonian(const NvParams& params);

struct NuclearFrequencies {
  double nu1;
  double nu2;
};

NuclearFrequencies nuclear_transitions(const NvParams& params, System system);

// |0,m_i> <-> |-1,m_i> electron transition frequency.
double mw_transition(const NvParams& params, int mi = 0);

LevelPair nuclear_pair(System system, NuclearTransition t);
LevelPair mw_pair(int mi = 0);

struct TransitionEntry {
  LevelPair pair;
  double frequency;
  Channel channel;
  std::string label;
};

// nu1, nu2 and the m_i = 0 microwave line of one register.
std::vector<TransitionEntry> transition_table(const NvParams& params, System system);

struct Drive {
  Mat9 flip;        // embed(Sx, I) for MW, embed(I, Ix) for RF
  double amp_norm;  // 1 / |<p|flip|q>| of the target pair
};

// Throws std::invalid_argument when the pair is not connected by the channel's
// flip operator (MW: Delta m_s = +-1, Delta m_i = 0; RF: the converse).
Drive drive_operator(Channel channel, const LevelPair& target);

}  // namespace nvdd

#endif  // NVDD_HAMILTONIAN_H
