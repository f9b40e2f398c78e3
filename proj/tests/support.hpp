#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's own linear algebra beyond plain Eigen.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using CM = Eigen::MatrixXcd;

inline CM pauli(int k) {
  CM m = CM::Zero(2, 2);
  switch (k) {
    case 0:
      m << 1, 0, 0, 1;
      break;
    case 1:
      m << 0, 1, 1, 0;
      break;
    case 2:
      m << 0, C(0, -1), C(0, 1), 0;
      break;
    default:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

/// Transposes the second factor by explicit index swapping.
inline CM partial_transpose_b(const CM& rho, int N, int M) {
  CM out(N * M, N * M);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < M; ++k)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < M; ++l) out(i * M + k, j * M + l) = rho(i * M + l, j * M + k);
  return out;
}

inline double min_eig(const CM& m) {
  Eigen::SelfAdjointEigenSolver<CM> es(m);
  return es.eigenvalues().minCoeff();
}

/// Hermitian matrix with iid complex Gaussian entries (GUE up to scale).
inline CM random_hermitian(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  CM a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = C(g(gen), g(gen));
  return 0.5 * (a + a.adjoint());
}

inline Eigen::MatrixXd random_rotation(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace oracle
