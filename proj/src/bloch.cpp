#include "sephorn/bloch.hpp"

#include <cmath>
#include <string>

namespace sephorn {

BlochRadii radii(int N) {
  if (N < 2) throw Error(ErrorCode::DimensionTooSmall, "Bloch radii need N >= 2");
  return {std::sqrt(2.0 * (N - 1) / N), std::sqrt(2.0 / (N * (N - 1.0)))};
}

void validate_state(const ComplexMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw Error(ErrorCode::NotAState, "density matrix must be square and non-empty");
  }
  const double defect = linalg::max_hermitian_defect(rho);
  if (!(defect <= tol)) {
    throw Error(ErrorCode::NotAState, "not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Complex tr = rho.trace();
  if (!(std::abs(tr - 1.0) <= tol)) {
    throw Error(ErrorCode::NotAState, "trace " + std::to_string(tr.real()) + " differs from one");
  }
}

BlochVector to_bloch(const ComplexMatrix& rho) {
  validate_state(rho);
  const int N = static_cast<int>(rho.rows());
  const GeneratorBasis& basis = shared_basis(N);
  RealVector r(basis.size());
  for (int mu = 0; mu < basis.size(); ++mu) {
    // Tr[rho l] = sum_ij rho_ij l_ji
    r[mu] = (rho.cwiseProduct(basis.generators[mu].transpose())).sum().real();
  }
  return {N, std::move(r)};
}

ComplexMatrix from_bloch(const BlochVector& r) {
  const GeneratorBasis& basis = shared_basis(r.dim);
  if (r.components.size() != basis.size()) {
    throw Error(ErrorCode::DimensionMismatch, "Bloch vector length does not match N^2 - 1");
  }
  ComplexMatrix rho = ComplexMatrix::Identity(r.dim, r.dim) / static_cast<double>(r.dim);
  for (int mu = 0; mu < basis.size(); ++mu) rho += 0.5 * r.components[mu] * basis.generators[mu];
  return rho;
}

double min_eigenvalue(const BlochVector& r) {
  const RealVector ev = linalg::eigvalsh(from_bloch(r));
  return ev[ev.size() - 1];
}

bool is_physical(const BlochVector& r, double tol) {
  if (!r.components.allFinite()) return false;
  return min_eigenvalue(r) >= -tol;
}

BlochVector transpose_flip(const BlochVector& r) {
  BlochVector out = r;
  for (int mu : antisymmetric_indices(shared_basis(r.dim))) out.components[mu] = -out.components[mu];
  return out;
}

}  // namespace sephorn
