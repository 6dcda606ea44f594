#include "nvdd/hamiltonian.h"

#include <gtest/gtest.h>

#include "nvdd/errors.h"
#include "oracle.h"

namespace nvdd {
namespace {

TEST(StaticHamiltonian, ExactlyDiagonalWithOracleEnergies) {
  const NvParams p;
  const Mat9 h = static_hamiltonian(p);
  for (int i = 0; i < kLevels; ++i) {
    for (int j = 0; j < kLevels; ++j) {
      if (i != j) EXPECT_EQ(h(i, j), Complex(0, 0));
    }
    const LevelIndex l = LevelIndex::from_flat(i);
    EXPECT_NEAR(h(i, i).real(), oracle::energy(l.ms, l.mi), 1e-6);
  }
  EXPECT_EQ(level_energy(p, {0, 0}), 0.0);
  EXPECT_NEAR(level_energy(p, {-1, 0}), 2.6264e9, 1e-3);
  EXPECT_NEAR(level_energy(p, {0, -1}), -4.9761e6, 1e-6);
}

TEST(Transitions, OracleValues) {
  const NvParams p;
  const NuclearFrequencies a = nuclear_transitions(p, System::A);
  const NuclearFrequencies b = nuclear_transitions(p, System::B);
  EXPECT_NEAR(a.nu1, std::abs(oracle::energy(0, -1) - oracle::energy(0, 0)), 1e-6);
  EXPECT_NEAR(a.nu2, std::abs(oracle::energy(-1, -1) - oracle::energy(-1, 0)), 1e-6);
  EXPECT_NEAR(b.nu1, std::abs(oracle::energy(0, 1) - oracle::energy(0, 0)), 1e-6);
  EXPECT_NEAR(b.nu2, std::abs(oracle::energy(-1, 1) - oracle::energy(-1, 0)), 1e-6);
  EXPECT_NEAR(a.nu1, 4.9761e6, 1e-3);
  EXPECT_NEAR(a.nu2, 2.8161e6, 1e-3);
  EXPECT_NEAR(b.nu1, 4.9239e6, 1e-3);
  EXPECT_NEAR(b.nu2, 7.0839e6, 1e-3);
  EXPECT_NEAR(mw_transition(p), 2.6264e9, 1e-3);
}

TEST(Transitions, TableIWithinTenKilohertz) {
  const NvParams p;
  const NuclearFrequencies a = nuclear_transitions(p, System::A);
  const NuclearFrequencies b = nuclear_transitions(p, System::B);
  EXPECT_NEAR(a.nu1, 4.970e6, 10e3);
  EXPECT_NEAR(a.nu2, 2.808e6, 10e3);
  EXPECT_NEAR(b.nu1, 4.918e6, 10e3);
  EXPECT_NEAR(b.nu2, 7.088e6, 10e3);
}

TEST(Transitions, HyperfineSplittingAndFieldLinearity) {
  NvParams p;
  for (double field : {0.0, 20.0, 87.0, 500.0}) {
    p.field = field;
    for (System s : {System::A, System::B}) {
      const NuclearFrequencies f = nuclear_transitions(p, s);
      EXPECT_NEAR(std::abs(f.nu1 - f.nu2), p.hyperfine, 1e-6 * p.hyperfine) << field;
    }
  }
  p.field = 87.0;
  const double base = mw_transition(p);
  p.field = 87.5;
  EXPECT_NEAR(mw_transition(p) - base, -p.gamma_e * 0.5, 1e-6 * p.gamma_e * 0.5);
}

TEST(Transitions, ZeroField) {
  NvParams p;
  p.field = 0;
  const NuclearFrequencies a = nuclear_transitions(p, System::A);
  EXPECT_NEAR(a.nu1, 4.95e6, 1e-6);
  EXPECT_NEAR(a.nu2, 2.79e6, 1e-6);
}

TEST(TransitionTable, Labels) {
  const auto table = transition_table(NvParams{}, System::A);
  ASSERT_EQ(table.size(), 3u);
  EXPECT_EQ(table[0].channel, Channel::RF);
  EXPECT_EQ(table[2].channel, Channel::MW);
  for (const auto& e : table) EXPECT_GE(e.frequency, 0.0);
}

TEST(DriveOperator, NormalizationAndCrossTalk) {
  const Drive rf = drive_operator(Channel::RF, nuclear_pair(System::A, NuclearTransition::Nu1));
  EXPECT_NEAR(rf.amp_norm, std::sqrt(2.0), 1e-15);
  const Drive mw = drive_operator(Channel::MW, mw_pair(0));
  EXPECT_NEAR(mw.amp_norm, std::sqrt(2.0), 1e-15);
  const int a = LevelIndex{0, 0}.flat(), b = LevelIndex{-1, 0}.flat();
  const int c = LevelIndex{0, -1}.flat(), d = LevelIndex{-1, -1}.flat();
  EXPECT_NEAR(std::abs(mw.flip(c, d)) / std::abs(mw.flip(a, b)), 1.0, 1e-15);
  EXPECT_THROW(drive_operator(Channel::RF, mw_pair(0)), std::invalid_argument);
  EXPECT_THROW(drive_operator(Channel::MW, nuclear_pair(System::B, NuclearTransition::Nu2)),
               std::invalid_argument);
}

TEST(NvParams, Validation) {
  NvParams p;
  EXPECT_NO_THROW(p.validate());
  p.zero_field_splitting = -1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = NvParams{};
  p.rabi_rf(System::B, NuclearTransition::Nu2) = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = NvParams{};
  p.t1 = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace nvdd
