#pragma once

#include <array>
#include <map>
#include <vector>

#include "sephorn/linalg.hpp"

namespace sephorn {

enum class GeneratorKind { SymmetricOffDiagonal, AntisymmetricOffDiagonal, Diagonal };

/// Generalized Gell-Mann matrices of SU(N), normalized Tr[l_a l_b] = 2 delta_ab.
///
/// Canonical ordering: every symmetric off-diagonal pair (j<k, lexicographic),
/// then every antisymmetric pair in the same order, then the N-1 diagonal
/// generators. File formats and simplex constructions rely on this order.
struct GeneratorBasis {
  int dim = 0;
  std::vector<ComplexMatrix> generators;
  std::vector<GeneratorKind> kinds;

  int size() const { return static_cast<int>(generators.size()); }
};

/// Throws DimensionTooSmall for N < 2.
GeneratorBasis generators(int N);

/// Cached basis shared by the library. Unlike generators(), N = 1 is allowed
/// and yields the empty basis of the trivial system.
const GeneratorBasis& shared_basis(int N);

std::vector<int> antisymmetric_indices(const GeneratorBasis& basis);

/// Symmetric structure constants d_abc = 1/4 Tr[{l_a, l_b} l_c] (standard
/// Gell-Mann convention, d_118 = 1/sqrt(3) for SU(3)). Only nonzero entries
/// are stored, under every permutation of their key.
struct DTensor {
  int dim = 0;
  std::map<std::array<int, 3>, double> entries;

  double operator()(int a, int b, int c) const;
  /// d_abc x_a y_b z_c summed over stored entries.
  double contract(const RealVector& x, const RealVector& y, const RealVector& z) const;
};

DTensor d_tensor(const GeneratorBasis& basis);

}  // namespace sephorn
