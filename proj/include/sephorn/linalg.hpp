#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "sephorn/error.hpp"

namespace sephorn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Density matrices are plain complex matrices; validity is checked where it
/// matters (see bloch::validate_state).
using DensityMatrix = ComplexMatrix;

namespace linalg {

/// Thin singular value decomposition m = left * diag(singulars) * right^T.
/// `left` is rows x rows, `right` is cols x cols, singulars are descending.
struct Svd {
  RealMatrix left;
  RealVector singulars;
  RealMatrix right;
};

struct Eigh {
  RealVector values;  // descending
  ComplexMatrix vectors;  // column k belongs to values[k]
};

inline constexpr double kHermitianTol = 1e-9;

Eigh eigh(const ComplexMatrix& m, double herm_tol = kHermitianTol);

/// Eigenvalues only, descending.
RealVector eigvalsh(const ComplexMatrix& m, double herm_tol = kHermitianTol);

Svd svd_real(const RealMatrix& m);

RealVector singular_values(const RealMatrix& m);

/// Returns a dim x dim rotation whose last rows are `prescribed` (each row of
/// the argument is one prescribed row). Free rows come from Gram-Schmidt over
/// the standard basis; the first free row is negated if needed so det = +1.
RealMatrix complete_orthonormal(const RealMatrix& prescribed, int dim);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the R
/// diagonal made positive). Deterministic per seed.
RealMatrix random_orthogonal(int dim, std::uint64_t seed);

/// Haar-distributed unitary, same construction over the complex field.
ComplexMatrix random_unitary(int dim, std::uint64_t seed);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// f(m) for Hermitian m through its eigendecomposition.
template <typename F>
ComplexMatrix hermitian_apply(const ComplexMatrix& m, F&& f) {
  const Eigh e = eigh(m);
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    out += f(e.values[k]) * e.vectors.col(k) * e.vectors.col(k).adjoint();
  }
  return out;
}

/// m^{-1/2} for Hermitian positive definite m.
ComplexMatrix inverse_sqrt(const ComplexMatrix& m);

double max_hermitian_defect(const ComplexMatrix& m);

/// max |m m^T - I| entrywise.
double orthogonality_defect(const RealMatrix& m);

}  // namespace linalg
}  // namespace sephorn
