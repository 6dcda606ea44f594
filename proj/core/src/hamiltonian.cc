#include "nvdd/hamiltonian.h"

#include <cmath>
#include <stdexcept>

#include "nvdd/errors.h"

namespace nvdd {

void NvParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid parameter: ") + what);
  };
  require(zero_field_splitting > 0, "D must be > 0");
  require(field >= 0, "B must be >= 0");
  require(std::isfinite(quadrupole) && std::isfinite(hyperfine), "P and A must be finite");
  require(std::isfinite(gamma_e) && std::isfinite(gamma_n), "gyromagnetic ratios must be finite");
  for (const auto& row : rabi_nuclear) {
    for (double r : row) require(r > 0, "nuclear Rabi frequencies must be > 0");
  }
  require(rabi_mw_selective > 0, "selective MW Rabi frequency must be > 0");
  require(rabi_mw_hard > 0, "hard MW Rabi frequency must be > 0");
  require(t1 > 0, "T1 must be > 0");
  require(t2_markov > 0, "T2 must be > 0");
}

double level_energy(const NvParams& p, LevelIndex l) {
  const double ms = l.ms;
  const double mi = l.mi;
  return p.zero_field_splitting * ms * ms + p.gamma_e * p.field * ms + p.quadrupole * mi * mi +
         p.gamma_n * p.field * mi + p.hyperfine * ms * mi;
}

Mat9 static_hamiltonian(const NvParams& params) {
  Mat9 h = Mat9::Zero();
  for (int k = 0; k < kLevels; ++k) h(k, k) = level_energy(params, LevelIndex::from_flat(k));
  return h;
}

LevelPair nuclear_pair(System system, NuclearTransition t) {
  const int q = nuclear_branch(system);
  const int ms = t == NuclearTransition::Nu1 ? 0 : -1;
  return {{ms, 0}, {ms, q}};
}

LevelPair mw_pair(int mi) { return {{0, mi}, {-1, mi}}; }

static double pair_frequency(const NvParams& params, const LevelPair& pair) {
  return std::abs(level_energy(params, pair.p) - level_energy(params, pair.q));
}

NuclearFrequencies nuclear_transitions(const NvParams& params, System system) {
  return {pair_frequency(params, nuclear_pair(system, NuclearTransition::Nu1)),
          pair_frequency(params, nuclear_pair(system, NuclearTransition::Nu2))};
}

double mw_transition(const NvParams& params, int mi) {
  return pair_frequency(params, mw_pair(mi));
}

std::vector<TransitionEntry> transition_table(const NvParams& params, System system) {
  const LevelPair n1 = nuclear_pair(system, NuclearTransition::Nu1);
  const LevelPair n2 = nuclear_pair(system, NuclearTransition::Nu2);
  const LevelPair mw = mw_pair(0);
  return {
      {n1, pair_frequency(params, n1), Channel::RF, "nu1"},
      {n2, pair_frequency(params, n2), Channel::RF, "nu2"},
      {mw, pair_frequency(params, mw), Channel::MW, "mw"},
  };
}

Drive drive_operator(Channel channel, const LevelPair& target) {
  const Spin1 s = spin1_matrices();
  const Mat3 id = Mat3::Identity();
  const int dms = std::abs(target.p.ms - target.q.ms);
  const int dmi = std::abs(target.p.mi - target.q.mi);
  const bool connected = channel == Channel::MW ? (dms == 1 && dmi == 0) : (dms == 0 && dmi == 1);
  if (!connected) {
    throw std::invalid_argument(channel == Channel::MW
                                    ? "MW drive needs a pair with |dm_s| = 1 and dm_i = 0"
                                    : "RF drive needs a pair with dm_s = 0 and |dm_i| = 1");
  }
  Drive d;
  d.flip = channel == Channel::MW ? embed(s.x, id) : embed(id, s.x);
  d.amp_norm = 1.0 / std::abs(d.flip(target.p.flat(), target.q.flat()));
  return d;
}

}  // namespace nvdd
