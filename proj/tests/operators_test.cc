#include "nvdd/operators.h"

#include <random>

#include <gtest/gtest.h>

#include "nvdd/errors.h"
#include "oracle.h"

namespace nvdd {
namespace {

Mat3 random_matrix(std::mt19937_64& rng, bool hermitian) {
  std::normal_distribution<double> n;
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Complex(n(rng), n(rng));
  return hermitian ? Mat3(m + m.adjoint()) : m;
}

TEST(LevelIndex, FlatOrderingIsMsMajorDescending) {
  EXPECT_EQ((LevelIndex{1, 1}.flat()), 0);
  EXPECT_EQ((LevelIndex{0, 0}.flat()), 4);
  EXPECT_EQ((LevelIndex{-1, -1}.flat()), 8);
  EXPECT_EQ((LevelIndex{0, -1}.flat()), 5);
  for (int k = 0; k < kLevels; ++k) EXPECT_EQ(LevelIndex::from_flat(k).flat(), k);
}

TEST(Spin1, StandardRepresentation) {
  const Spin1 s = spin1_matrices();
  EXPECT_EQ(s.z, Mat3(Eigen::Vector3cd(1, 0, -1).asDiagonal()));
  EXPECT_NEAR(s.x(0, 1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  const Mat3 comm = s.x * s.y - s.y * s.x;
  EXPECT_LT((comm - Complex(0, 1) * s.z).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(is_hermitian(s.x, 1e-15));
  EXPECT_TRUE(is_hermitian(s.y, 1e-15));
}

TEST(Embed, IdentityAndSz) {
  EXPECT_EQ(embed(Mat3::Identity(), Mat3::Identity()), Mat9::Identity());
  const Mat9 sz = embed(spin1_matrices().z, Mat3::Identity());
  Eigen::Matrix<double, 9, 1> expected;
  expected << 1, 1, 1, 0, 0, 0, -1, -1, -1;
  EXPECT_TRUE(sz.isDiagonal());
  EXPECT_EQ(sz.diagonal().real(), expected);
}

TEST(Embed, MatchesNaiveKroneckerAndIsMultiplicative) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 a = random_matrix(rng, true), b = random_matrix(rng, true);
    const Mat3 c = random_matrix(rng, false), d = random_matrix(rng, false);
    EXPECT_LT((embed(a, b) - oracle::kron(a, b)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(std::abs(embed(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
    const Mat9 lhs = embed(a, b) * embed(c, d);
    EXPECT_LT((lhs - embed(a * c, b * d)).cwiseAbs().maxCoeff(), 1e-12 * (1 + lhs.cwiseAbs().maxCoeff()));
    const Complex s(0.3, -1.1);
    EXPECT_LT((embed(a + s * c, b) - embed(a, b) - s * embed(c, b)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((embed(a, b + s * d) - embed(a, b) - s * embed(a, d)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(CompEmbedding, LogicalLevels) {
  const auto a = comp_embedding(System::A).levels;
  EXPECT_EQ(a[0], (LevelIndex{0, 0}));
  EXPECT_EQ(a[1], (LevelIndex{0, -1}));
  EXPECT_EQ(a[2], (LevelIndex{-1, 0}));
  EXPECT_EQ(a[3], (LevelIndex{-1, -1}));
  const auto b = comp_embedding(System::B).levels;
  EXPECT_EQ(b[1], (LevelIndex{0, 1}));
  EXPECT_EQ(b[3], (LevelIndex{-1, 1}));
}

TEST(ProjectComputational, Examples) {
  Mat9 rho = Mat9::Zero();
  rho(4, 4) = 1;
  Projection p = project_computational(rho, comp_embedding(System::A));
  EXPECT_DOUBLE_EQ(p.weight, 1.0);
  EXPECT_DOUBLE_EQ(p.rho(0, 0).real(), 1.0);

  p = project_computational(Mat9::Identity() / 9.0, comp_embedding(System::A));
  EXPECT_NEAR(p.weight, 4.0 / 9.0, 1e-15);
  EXPECT_LT((p.rho - Mat4::Identity() / 4.0).norm(), 1e-15);

  Mat3 e0 = Mat3::Zero();
  e0(1, 1) = 1;
  p = project_computational(embed(e0, Mat3::Identity() / 3.0), comp_embedding(System::A));
  EXPECT_NEAR(p.weight, 2.0 / 3.0, 1e-15);

  Mat9 spectator = Mat9::Zero();
  spectator(0, 0) = 1;
  EXPECT_THROW(project_computational(spectator, comp_embedding(System::A)), NumericError);
}

TEST(ReducedElectron, Examples) {
  Mat4 r = Mat4::Zero();
  r(0, 0) = 1;
  EXPECT_DOUBLE_EQ(reduced_electron(r)(0, 0).real(), 1.0);

  Eigen::Vector4cd bell(1, 0, 0, 1);
  bell /= std::sqrt(2.0);
  EXPECT_LT((reduced_electron(bell * bell.adjoint()) - Mat2::Identity() / 2.0).norm(), 1e-15);

  // Input state: 1/4 (|00> - i|10>)(<00| + i<10|) + 1/2 |01><01|.
  Eigen::Vector4cd v(1, 0, Complex(0, -1), 0);
  Mat4 rin = 0.25 * v * v.adjoint();
  rin(1, 1) += 0.5;
  Mat2 expected;
  expected << 0.75, Complex(0, 0.25), Complex(0, -0.25), 0.25;
  EXPECT_LT((reduced_electron(rin) - expected).norm(), 1e-15);
}

TEST(ReducedElectron, ProductStateReturnsElectronFactor) {
  const Mat2 e = bloch_state(0.3, -0.4, 0.5);
  const Mat2 n = bloch_state(-0.1, 0.2, 0.6);
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.block<2, 2>(2 * i, 2 * j) = e(i, j) * n;
  EXPECT_LT((reduced_electron(r) - e).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fidelity, OverlapDefinition) {
  const Mat2 plus = bloch_state(0, 1, 0), minus = bloch_state(0, -1, 0);
  EXPECT_NEAR(fidelity(plus, plus), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(plus, minus), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(Mat2::Identity() / 2.0, bloch_state(0.6, 0, 0.8)), 0.5, 1e-15);
  const Mat2 a = bloch_state(0.1, 0.2, 0.3), b = bloch_state(-0.5, 0.1, 0.7);
  EXPECT_DOUBLE_EQ(fidelity(a, b), fidelity(b, a));
  EXPECT_THROW(fidelity(Mat2::Identity(), Mat4::Identity()), std::invalid_argument);
}

TEST(UnitaryDistance, Examples) {
  const Mat4 v = oracle::kron(oracle::rx(0.4), oracle::rx(1.3));
  EXPECT_NEAR(unitary_distance(v, v), 0.0, 1e-15);
  EXPECT_NEAR(unitary_distance(std::polar(1.0, 0.7) * v, v), 0.0, 1e-12);
  const Mat4 xi = oracle::kron(pauli_x(), Mat2::Identity());
  EXPECT_NEAR(unitary_distance(xi, Mat4::Identity()), 1.0, 1e-15);
  EXPECT_THROW(unitary_distance(2.0 * v, v), std::invalid_argument);
}

TEST(AverageGateFidelity, UnitaryAndLeakyMaps) {
  const Mat2 u = oracle::rx(0.9);
  EXPECT_NEAR(average_gate_fidelity(u, u), 1.0, 1e-15);
  // Orthogonal Paulis: (d + 0) / (d (d + 1)) = 1/3 for d = 2.
  EXPECT_NEAR(average_gate_fidelity(pauli_x(), pauli_z()), 1.0 / 3.0, 1e-15);
  EXPECT_LT(average_gate_fidelity(0.9 * u, u), 1.0);
}

TEST(Metrics, NearestUnitaryAndTraceDistance) {
  const Mat2 u = oracle::rx(0.7);
  EXPECT_LT((nearest_unitary(1.3 * u) - u).norm(), 1e-14);
  EXPECT_NEAR(trace_distance(bloch_state(0, 0, 1), bloch_state(0, 0, -1)), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(bloch_state(0, 0, 0.5), Mat2::Identity() / 2.0), 0.25, 1e-15);
}

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(validate_density_matrix(Mat9::Identity() / 9.0));
  EXPECT_THROW(validate_density_matrix(Mat9::Identity()), std::invalid_argument);
  Mat2 neg = bloch_state(0, 0, 1.5);
  EXPECT_THROW(validate_density_matrix(neg), std::invalid_argument);
  Mat2 nh = Mat2::Identity() / 2.0;
  nh(0, 1) = 0.1;
  EXPECT_THROW(validate_density_matrix(nh), std::invalid_argument);
}

TEST(Bloch, RoundTrip) {
  const Eigen::Vector3d r(0.2, -0.3, 0.4);
  EXPECT_LT((bloch_vector(bloch_state(r[0], r[1], r[2])) - r).norm(), 1e-15);
}

}  // namespace
}  // namespace nvdd
