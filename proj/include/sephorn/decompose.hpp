#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sephorn/separable.hpp"

namespace sephorn::decompose {

/// Singular frame of a correlation matrix: corr = sum_i tau_i u_i v_i^T.
/// `left` and `right` are the full orthogonal SVD factors; `tau` holds the
/// descending singular values padded with zeros (or truncated) to length L.
struct FactorizationFrame {
  int L = 0;
  int rank = 0;
  RealMatrix left;
  RealMatrix right;
  RealVector tau;
};

inline constexpr double kRankTol = 1e-12;

/// L defaults to rank + 1, the smallest count that leaves room for the
/// zero-mean constraint M_r p = 0.
FactorizationFrame make_frame(const RealMatrix& corr, std::optional<int> L = std::nullopt);

struct FactorPair {
  RealMatrix m_rp;  // (N^2-1) x L, columns sqrt(p_j) r_j
  RealMatrix m_sp;  // (M^2-1) x L
};

/// M_rp = U X D_alpha Q1, M_sp = V Y D_beta Q2 after checking that
/// X D_alpha Q1 Q2^T D_beta Y^T equals D_tau within 1e-8. Throws
/// Equation10Violated reporting the singular-value mismatch.
FactorPair theorem1_assemble(const FactorizationFrame& frame, const RealMatrix& X, const RealMatrix& Y,
                             const RealMatrix& Q1, const RealMatrix& Q2, const RealVector& alpha,
                             const RealVector& beta);

/// Columns divided by sqrt(p_j). Columns with p_j <= 0 are dropped.
SeparableDecomposition factors_to_decomposition(const FactorPair& factors, const RealVector& probabilities,
                                                int N, int M);

/// Orthogonal G with every diagonal entry of G^T S G equal to zero, for a
/// symmetric S of zero trace. Built from successive Givens rotations.
RealMatrix zero_diagonal_rotation(const RealMatrix& S);

/// Q in SO(l+1) whose last row is sqrt(p), plus the local singular values
/// alpha_i = sqrt(2 kappa_i / (N(N-1))) and beta_i = sqrt(2 kappa_i / (M(M-1))).
struct SimplexFrame {
  RealMatrix q;
  RealVector alpha;
  RealVector beta;
  RealVector kappa;
  RealVector probabilities;
  double k_total = 0.0;
};

inline constexpr double kBoundSlack = 1e-9;

/// kappa_i = tau_i sqrt(N(N-1)M(M-1)) / 2, sum kappa_i <= 1. The weights
/// p_j = sum_i kappa_i Q_ij^2 / K are made consistent with the last row of Q
/// by rotating diag(kappa, -K) to zero diagonal. Throws BoundExceeded.
SimplexFrame corollary2_frame(const FactorizationFrame& frame, int N, int M);

/// Explicit l+1 component decomposition of a zero-marginal state whose
/// correlation Ky Fan norm is within the inner-ball bound. Every |r_j|^2
/// equals 2K/(N(N-1)).
SeparableDecomposition corollary2_construct(const FactorizationFrame& frame, int N, int M);

/// Same construction when a and b are not exactly zero: a small weight eps
/// is spent on rho_u x I/M and I/N x rho_v to absorb the marginals and the
/// remaining correlation is rescaled by 1/(1-eps). Returns nullopt when the
/// rescaled correlation leaves the bound.
std::optional<SeparableDecomposition> corollary2_with_marginals(const BipartiteDecomposed& d);

// ---------------------------------------------------------------------------
// Regular simplices of pure states

struct SimplexSearchOptions {
  int restarts = 200;
  int iterations = 2000;
  /// Success threshold on the most negative eigenvalue over all vertices.
  double positivity_target = 1e-10;
};

struct PureSimplex {
  int dim = 0;
  /// SO(N^2) matrix with last row 1/N; vertex i is sqrt(2N/(N+1)) times the
  /// first N^2-1 entries of column i.
  RealMatrix q;
  std::vector<BlochVector> vertices;
  /// max_i max(0, -min eig rho_i)
  double positivity_residual = 0.0;
  /// sum_i sum_k max(0, -eig_k rho_i)^2
  double negative_mass = 0.0;
  int restart = 0;
};

/// N^2 pure-state Bloch vectors with pairwise cosine -1/(N^2-1). The
/// simplex geometry is exact by construction (a rotation of a reference
/// simplex); purity is reached by Levenberg-Marquardt on rho_i^2 = rho_i.
/// Multi-start runs in parallel; the lowest successful restart index wins, so
/// the result is independent of the thread count. Results are cached.
/// Throws SearchFailed when the budget is exhausted.
const PureSimplex& pure_simplex(int N, std::uint64_t seed = 0, const SimplexSearchOptions& opts = {});

/// Reference simplex (uniform last row, Gram-Schmidt completion) before any
/// rotation. For N = 2 it is already pure.
RealMatrix reference_simplex_frame(int N);

// ---------------------------------------------------------------------------
// Named families

struct FamilyOutcome {
  enum class Kind { Decomposed, Entangled, NotDecomposedHere };
  Kind kind = Kind::NotDecomposedHere;
  std::optional<SeparableDecomposition> decomposition;
  std::string note;
};

/// Werner family with corr = c I, c = 2(N phi - 1)/(N(N^2-1)).
FamilyOutcome werner_decompose(int N, double phi, std::uint64_t seed = 0);

/// Isotropic family via p = (N phi - 1)/(N^2 - 1) and a transpose flip of
/// every B-side vector. Throws OutOfPositivityRange.
FamilyOutcome isotropic_decompose(int N, double p, std::uint64_t seed = 0);

/// (tau, alpha, beta) of a decomposition, all padded to L = component
/// count: singular values of corr, of M_rp and of M_sp.
struct HornProfile {
  RealVector tau;
  RealVector alpha;
  RealVector beta;
};

HornProfile horn_profile(const SeparableDecomposition& dec);

namespace serial {

/// Sequential multi-start, uncached.
PureSimplex pure_simplex(int N, std::uint64_t seed = 0, const SimplexSearchOptions& opts = {});

}  // namespace serial

}  // namespace sephorn::decompose
