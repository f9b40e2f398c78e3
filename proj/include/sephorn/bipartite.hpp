#pragma once

#include "sephorn/bloch.hpp"

namespace sephorn {

/// rho_AB = I/(NM) + (1/2M) a.l x I + (1/2N) I x b.s + 1/4 sum corr_mn l_m x s_n
struct BipartiteDecomposed {
  int dim_a = 0;
  int dim_b = 0;
  BlochVector a;
  BlochVector b;
  RealMatrix corr;  // (N^2-1) x (M^2-1)
};

ComplexMatrix partial_trace_a(const ComplexMatrix& rho, int N, int M);
ComplexMatrix partial_trace_b(const ComplexMatrix& rho, int N, int M);

/// Transposition of subsystem B applied directly to the matrix.
ComplexMatrix partial_transpose_matrix(const ComplexMatrix& rho, int N, int M);

BipartiteDecomposed decompose_state(const ComplexMatrix& rho, int N, int M);
ComplexMatrix compose_state(const BipartiteDecomposed& d);

/// Flips the corr columns and b components at antisymmetric indices of B.
BipartiteDecomposed partial_transpose(const BipartiteDecomposed& d);

struct LocalRanks {
  int n = 0;
  int m = 0;
};

inline constexpr double kRankTol = 1e-9;

LocalRanks local_ranks(const BipartiteDecomposed& d, double tol = kRankTol);

/// Restriction to supp(rho_A) x supp(rho_B). `isometry_a` is N x n with
/// orthonormal columns and rho = (Va x Vb) rho' (Va x Vb)^H.
struct SupportProjection {
  BipartiteDecomposed state;
  ComplexMatrix isometry_a;
  ComplexMatrix isometry_b;
};

SupportProjection project_to_support_detailed(const BipartiteDecomposed& d, double tol = kRankTol);
BipartiteDecomposed project_to_support(const BipartiteDecomposed& d, double tol = kRankTol);

/// Output of local filtering. `state` equals
/// (filter_a x filter_b) rho (filter_a x filter_b)^H / trace.
struct NormalFormResult {
  BipartiteDecomposed state;
  ComplexMatrix filter_a;
  ComplexMatrix filter_b;
  bool converged = false;
  int iterations = 0;
};

inline constexpr int kNormalFormMaxIter = 500;
inline constexpr double kNormalFormTol = 1e-10;

/// Alternating conjugation by (N rho_A)^{-1/2} x I and I x (M rho_B)^{-1/2}.
/// One iteration is one A step followed by one B step; convergence is tested
/// on |a| and |b| before each iteration. Throws NotFullRank.
NormalFormResult normal_form(const BipartiteDecomposed& d, int max_iter = kNormalFormMaxIter,
                             double tol = kNormalFormTol);

}  // namespace sephorn
