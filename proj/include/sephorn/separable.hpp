#pragma once

#include <vector>

#include "sephorn/bipartite.hpp"

namespace sephorn {

struct ProductTerm {
  double p = 0.0;
  BlochVector r;
  BlochVector s;
};

/// sum_i p_i rho(r_i) x rho(s_i)
struct SeparableDecomposition {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<ProductTerm> entries;

  std::size_t size() const { return entries.size(); }
};

inline constexpr double kProbabilityTol = 1e-10;
inline constexpr double kResidualTol = 1e-8;

struct VerifyTolerances {
  double probability = kProbabilityTol;
  double residual = kResidualTol;
  double psd = kPsdTol;
};

struct VerifyReport {
  bool valid = false;
  /// Largest absolute deviation over the three Bloch-form equations.
  double max_residual = 0.0;
  double probability_defect = 0.0;
  double min_probability = 0.0;
  /// Most negative eigenvalue over every local state (positive if all PSD).
  double min_local_eigenvalue = 0.0;
};

VerifyReport verify_decomposition(const SeparableDecomposition& dec, const BipartiteDecomposed& d,
                                  const VerifyTolerances& tol = {});

/// Mixed state represented by the decomposition, in Bloch form.
BipartiteDecomposed decomposition_state(const SeparableDecomposition& dec);

/// Pushes each product term through rho_A -> F_A rho_A F_A^H (and likewise
/// for B), renormalizing the weights. Used to carry a decomposition of a
/// filtered or support-restricted state back to the original one. F_A is
/// N x n when the decomposition lives on an n x m system.
SeparableDecomposition map_decomposition(const SeparableDecomposition& dec, const ComplexMatrix& map_a,
                                         const ComplexMatrix& map_b);

}  // namespace sephorn
