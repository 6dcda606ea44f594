#ifndef NVDD_OPERATORS_H
#define NVDD_OPERATORS_H

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace nvdd {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4cd;
using Mat9 = Eigen::Matrix<Complex, 9, 9>;
using MatX = Eigen::MatrixXcd;

inline constexpr int kLevels = 9;

// The two 4-level registers carved out of the 9-level space. System A uses the
// m_i = -1 nuclear level as logical |1>, system B uses m_i = +1.
enum class System { A, B };

// Sign of the nuclear quantum number used as logical |1> of the target qubit.
constexpr int nuclear_branch(System s) { return s == System::A ? -1 : +1; }

// (m_s, m_i) quantum numbers of one of the 9 product levels.
//
// Flat ordering is m_s in (+1, 0, -1) major, m_i in (+1, 0, -1) minor:
//   flat = 3 * (1 - m_s) + (1 - m_i)
// so flat 0 is |+1,+1>, flat 4 is |0,0>, flat 8 is |-1,-1>.
struct LevelIndex {
  int ms = 0;
  int mi = 0;

  constexpr int flat() const { return 3 * (1 - ms) + (1 - mi); }
  static constexpr LevelIndex from_flat(int flat) { return {1 - flat / 3, 1 - flat % 3}; }
  friend constexpr bool operator==(LevelIndex, LevelIndex) = default;
};

struct Spin1 {
  Mat3 x, y, z;
};

// Standard spin-1 matrices in the (+1, 0, -1) basis.
Spin1 spin1_matrices();

// Kronecker product op_e (x) op_n in the flat level ordering.
Mat9 embed(const Mat3& op_e, const Mat3& op_n);

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

// Logical |00>,|01>,|10>,|11> of a register as flat level indices.
struct CompEmbedding {
  System system = System::A;
  std::array<LevelIndex, 4> levels{};

  std::array<int, 4> flat() const;
};

CompEmbedding comp_embedding(System system);

struct Projection {
  Mat4 rho;       // normalized, unit trace
  double weight;  // Tr(P rho P) before normalization
};

// Restricts rho to the computational levels and renormalizes. Throws
// NumericError when the subspace weight is below 1e-12.
Projection project_computational(const Mat9& rho, const CompEmbedding& emb);

// Partial trace over the second (nuclear) logical qubit.
Mat2 reduced_electron(const Mat4& rho4);

// |Tr(a b)|, exactly as used for the tomography comparison. This is the overlap,
// not the Uhlmann fidelity; it is only a fidelity when one argument is pure.
double fidelity(const MatX& rho_exp, const MatX& rho_ideal);

// Phase-insensitive distance proxy 1 - |Tr(U^dag V)| / d. Zero iff U = e^{i phi} V.
// Throws std::invalid_argument if either input is not unitary within `tol`.
double unitary_distance(const MatX& u, const MatX& v, double tol = 1e-8);

// Average gate fidelity of a (possibly leaky, non-unitary) restricted map M
// against the target unitary V: (Tr(M M^dag) + |Tr(V^dag M)|^2) / (d (d + 1)).
double average_gate_fidelity(const MatX& m, const MatX& v);

// Closest unitary in Frobenius norm (polar factor).
MatX nearest_unitary(const MatX& m);

// Half the trace norm of (a - b); inputs are assumed Hermitian.
double trace_distance(const MatX& a, const MatX& b);

bool is_hermitian(const MatX& m, double tol);
bool is_unitary(const MatX& m, double tol);

// Throws std::invalid_argument unless rho is Hermitian and unit trace within
// 1e-10 with eigenvalues >= -1e-9.
void validate_density_matrix(const MatX& rho);

// Single-qubit state (E + x sx + y sy + z sz) / 2.
Mat2 bloch_state(double x, double y, double z);
Eigen::Vector3d bloch_vector(const Mat2& rho);

}  // namespace nvdd

#endif  // NVDD_OPERATORS_H
