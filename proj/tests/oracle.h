// Reference formulas written independently of the library, used as test oracles.
#ifndef NVDD_TESTS_ORACLE_H
#define NVDD_TESTS_ORACLE_H

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

// Diagonal of D Sz^2 + ge B Sz + P Iz^2 + gn B Iz + A Sz Iz.
inline double energy(int ms, int mi, double d = 2.87e9, double p = -4.95e6, double a = 2.16e6,
                     double ge = 2.8e6, double gn = 300.0, double b = 87.0) {
  return d * ms * ms + ge * b * ms + p * mi * mi + gn * b * mi + a * ms * mi;
}

// Population signal, noiseless and with exponential decay.
inline double signal(double theta) {
  const double c = std::cos(theta / 2);
  return 0.125 * (1 + c) * (1 + c) + 0.5;
}
inline double signal_t2(double theta, double t, double t2) {
  const double c = std::cos(theta / 2);
  return 0.125 * (1 + 2 * c * std::exp(-t / t2) + c * c) + 0.5;
}
inline double signal_incoherent(double theta) {
  const double c = std::cos(theta / 2);
  return 0.125 * (1 + c * c) + 0.5;
}

// Two-level Rabi transfer probability after time t.
inline double rabi_transfer(double rabi, double detuning, double t) {
  const double w = std::sqrt(rabi * rabi + detuning * detuning);
  const double s = std::sin(kPi * w * t);
  return rabi * rabi / (w * w) * s * s;
}

// exp(-i theta sigma_x / 2)
inline Eigen::Matrix2cd rx(double theta) {
  Eigen::Matrix2cd m;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, C(0, -s), C(0, -s), c;
  return m;
}

// Naive Kronecker product with the first factor as the major index.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// 1 - |Tr(U^dag V)| / d
inline double phase_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  return 1.0 - std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

}  // namespace oracle

#endif  // NVDD_TESTS_ORACLE_H
