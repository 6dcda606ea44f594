#include "nvdd/operators.h"

#include <cmath>
#include <stdexcept>

#include "nvdd/errors.h"

namespace nvdd {

Spin1 spin1_matrices() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Spin1 s;
  s.x << 0, r, 0,
         r, 0, r,
         0, r, 0;
  s.y << 0, -i * r, 0,
         i * r, 0, -i * r,
         0, i * r, 0;
  s.z << 1, 0, 0,
         0, 0, 0,
         0, 0, -1;
  return s;
}

Mat9 embed(const Mat3& op_e, const Mat3& op_n) {
  Mat9 out;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      out.block<3, 3>(3 * a, 3 * b) = op_e(a, b) * op_n;
    }
  }
  return out;
}

Mat2 pauli_x() { return (Mat2() << 0, 1, 1, 0).finished(); }
Mat2 pauli_y() { return (Mat2() << 0, Complex(0, -1), Complex(0, 1), 0).finished(); }
Mat2 pauli_z() { return (Mat2() << 1, 0, 0, -1).finished(); }

std::array<int, 4> CompEmbedding::flat() const {
  return {levels[0].flat(), levels[1].flat(), levels[2].flat(), levels[3].flat()};
}

CompEmbedding comp_embedding(System system) {
  const int q = nuclear_branch(system);
  return {system, {LevelIndex{0, 0}, LevelIndex{0, q}, LevelIndex{-1, 0}, LevelIndex{-1, q}}};
}

Projection project_computational(const Mat9& rho, const CompEmbedding& emb) {
  const auto idx = emb.flat();
  Mat4 sub;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) sub(a, b) = rho(idx[a], idx[b]);
  }
  const double weight = sub.trace().real();
  if (weight < 1e-12) {
    throw NumericError("computational subspace carries no weight (" + std::to_string(weight) + ")");
  }
  return {sub / weight, weight};
}

Mat2 reduced_electron(const Mat4& rho4) {
  Mat2 out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) out(a, b) = rho4(2 * a, 2 * b) + rho4(2 * a + 1, 2 * b + 1);
  }
  return out;
}

double fidelity(const MatX& rho_exp, const MatX& rho_ideal) {
  if (rho_exp.rows() != rho_ideal.rows() || rho_exp.cols() != rho_ideal.cols()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::abs((rho_exp * rho_ideal).trace());
}

bool is_hermitian(const MatX& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const MatX& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const MatX id = MatX::Identity(m.rows(), m.cols());
  return (m * m.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

double unitary_distance(const MatX& u, const MatX& v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("unitary_distance: dimension mismatch");
  }
  if (!is_unitary(u, tol) || !is_unitary(v, tol)) {
    throw std::invalid_argument("unitary_distance: input is not unitary");
  }
  const double d = static_cast<double>(u.rows());
  return std::max(0.0, 1.0 - std::abs((u.adjoint() * v).trace()) / d);
}

double average_gate_fidelity(const MatX& m, const MatX& v) {
  const double d = static_cast<double>(m.rows());
  const double overlap = std::norm((v.adjoint() * m).trace());
  return ((m * m.adjoint()).trace().real() + overlap) / (d * (d + 1.0));
}

MatX nearest_unitary(const MatX& m) {
  Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double trace_distance(const MatX& a, const MatX& b) {
  const MatX diff = a - b;
  const MatX herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<MatX> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void validate_density_matrix(const MatX& rho) {
  if (!is_hermitian(rho, 1e-10)) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  const MatX herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<MatX> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

Mat2 bloch_state(double x, double y, double z) {
  return 0.5 * (Mat2::Identity() + x * pauli_x() + y * pauli_y() + z * pauli_z());
}

Eigen::Vector3d bloch_vector(const Mat2& rho) {
  return {(rho * pauli_x()).trace().real(), (rho * pauli_y()).trace().real(),
          (rho * pauli_z()).trace().real()};
}

}  // namespace nvdd
