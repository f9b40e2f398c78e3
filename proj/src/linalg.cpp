#include "sephorn/linalg.hpp"

#include <cmath>
#include <random>
#include <string>

namespace sephorn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::NotFullRank: return "NotFullRank";
    case ErrorCode::BadCardinality: return "BadCardinality";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::NotNormalForm: return "NotNormalForm";
    case ErrorCode::Equation10Violated: return "Equation10Violated";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::OutOfPositivityRange: return "OutOfPositivityRange";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace linalg {

double max_hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigh eigh(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  }
  if (m.size() == 0) return {RealVector(0), ComplexMatrix(0, 0)};
  const double defect = max_hermitian_defect(m);
  if (!(defect <= herm_tol)) {
    throw Error(ErrorCode::NotHermitian, "max |m - m^H| = " + std::to_string(defect));
  }
  // Symmetrize so round-off in the input does not leak into the solver.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  Eigh out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

RealVector eigvalsh(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotHermitian, "matrix is not square");
  }
  if (m.size() == 0) return RealVector(0);
  const double defect = max_hermitian_defect(m);
  if (!(defect <= herm_tol)) {
    throw Error(ErrorCode::NotHermitian, "max |m - m^H| = " + std::to_string(defect));
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

Svd svd_real(const RealMatrix& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NoConvergence, "SVD input has non-finite entries");
  }
  if (m.size() == 0) {
    return {RealMatrix::Identity(m.rows(), m.rows()), RealVector(0),
            RealMatrix::Identity(m.cols(), m.cols())};
  }
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // JacobiSVD already sorts singular values in decreasing order.
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

RealVector singular_values(const RealMatrix& m) {
  if (m.size() == 0) return RealVector(0);
  if (!m.allFinite()) {
    throw Error(ErrorCode::NoConvergence, "SVD input has non-finite entries");
  }
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues();
}

RealMatrix complete_orthonormal(const RealMatrix& prescribed, int dim) {
  const int k = static_cast<int>(prescribed.rows());
  if (dim < 1 || k > dim || (k > 0 && prescribed.cols() != dim)) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot place " + std::to_string(k) + " rows in dimension " + std::to_string(dim));
  }
  if (k > 0) {
    const RealMatrix gram = prescribed * prescribed.transpose();
    const double defect = (gram - RealMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
      throw Error(ErrorCode::NotOrthonormal,
                  "prescribed rows deviate from orthonormal by " + std::to_string(defect));
    }
  }
  const int free_rows = dim - k;
  RealMatrix q(dim, dim);
  q.bottomRows(k) = prescribed;

  // Orthonormal rows accepted so far, stored as columns for convenience.
  RealMatrix basis(dim, dim);
  int count = 0;
  for (int i = 0; i < k; ++i) basis.col(count++) = prescribed.row(i).transpose();

  constexpr double kDependent = 1e-8;
  int placed = 0;
  for (int e = 0; e < dim && placed < free_rows; ++e) {
    RealVector v = RealVector::Unit(dim, e);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < count; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    }
    const double norm = v.norm();
    if (norm < kDependent) continue;
    v /= norm;
    basis.col(count++) = v;
    q.row(placed++) = v.transpose();
  }
  if (placed != free_rows) {
    throw Error(ErrorCode::NotOrthonormal, "Gram-Schmidt could not complete the basis");
  }
  if (q.determinant() < 0.0) {
    if (free_rows == 0) {
      throw Error(ErrorCode::DimensionMismatch,
                  "all rows prescribed and determinant is -1; no free row to flip");
    }
    q.row(0) *= -1.0;
  }
  return q;
}

RealMatrix random_orthogonal(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = normal(gen);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ() * RealMatrix::Identity(dim, dim);
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(gen), normal(gen));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix inverse_sqrt(const ComplexMatrix& m) {
  return hermitian_apply(m, [](double x) {
    if (!(x > 0.0)) {
      throw Error(ErrorCode::NotFullRank, "inverse square root of a singular matrix");
    }
    return 1.0 / std::sqrt(x);
  });
}

double orthogonality_defect(const RealMatrix& m) {
  return (m * m.transpose() - RealMatrix::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff();
}

}  // namespace linalg
}  // namespace sephorn
