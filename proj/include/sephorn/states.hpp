#pragma once

#include <cstdint>

#include "sephorn/bipartite.hpp"

namespace sephorn::states {

struct WernerParams {
  int N = 2;
  double phi = 1.0;
};

struct IsotropicParams {
  int N = 2;
  double p = 0.0;
};

/// a = b = 0, corr = c I with c = 2(N phi - 1)/(N(N^2-1)). Throws NotPSD.
BipartiteDecomposed werner(const WernerParams& params);

/// corr = (2p/N) on symmetric and diagonal generators, -(2p/N) on
/// antisymmetric ones. Throws NotPSD below -1/(N^2-1) or above 1.
BipartiteDecomposed isotropic(const IsotropicParams& params);

/// 1/4 (I + sx sx - sy sy + sz sz)
BipartiteDecomposed bell();

/// p |psi+-><psi+-| + (1-p) |00><00|, psi+- = (|01> +- |10>)/sqrt 2.
BipartiteDecomposed p_zero(double p, int sign = +1);

/// |psi+> = (|01> + |10>)/sqrt 2 as a column vector.
ComplexMatrix psi_plus();

/// G G^H / Tr with G an N x rank complex Gaussian matrix.
DensityMatrix random_density(int N, int rank, std::uint64_t seed);

}  // namespace sephorn::states
