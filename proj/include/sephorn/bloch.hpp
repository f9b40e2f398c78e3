#pragma once

#include "sephorn/linalg.hpp"
#include "sephorn/su_basis.hpp"

namespace sephorn {

/// r_mu = Tr[rho l_mu] for an N-level system; N^2 - 1 components.
struct BlochVector {
  int dim = 0;
  RealVector components;

  BlochVector() = default;
  BlochVector(int n, RealVector c) : dim(n), components(std::move(c)) {}

  static BlochVector zero(int n) { return {n, RealVector::Zero(n * n - 1)}; }
  double norm() const { return components.norm(); }
};

struct BlochRadii {
  double outer;  // circumscribed sphere, pure states
  double inner;  // inscribed sphere, every direction physical
};

BlochRadii radii(int N);

inline constexpr double kStateTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;

/// Throws NotAState unless rho is square, Hermitian and trace one.
void validate_state(const ComplexMatrix& rho, double tol = kStateTol);

BlochVector to_bloch(const ComplexMatrix& rho);

/// rho = I/N + 1/2 r.l ; Hermitian and unit trace, not necessarily positive.
ComplexMatrix from_bloch(const BlochVector& r);

double min_eigenvalue(const BlochVector& r);

bool is_physical(const BlochVector& r, double tol = kPsdTol);

/// Negates the antisymmetric-generator components, so that
/// from_bloch(transpose_flip(r)) == from_bloch(r)^T.
BlochVector transpose_flip(const BlochVector& r);

}  // namespace sephorn
