#include "sephorn/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sephorn::decompose {
namespace {

RealVector padded(const RealVector& v, int L) {
  RealVector out = RealVector::Zero(L);
  const int k = std::min<int>(L, static_cast<int>(v.size()));
  out.head(k) = v.head(k);
  return out;
}

void require_square(const RealMatrix& m, int L, const char* name) {
  if (m.rows() != L || m.cols() != L) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " must be " + std::to_string(L) + " x " +
                                                  std::to_string(L));
  }
}

void require_orthogonal(const RealMatrix& m, const char* name) {
  const double defect = linalg::orthogonality_defect(m);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << name << " is not orthogonal (defect " << defect << ")";
    throw Error(ErrorCode::NotOrthonormal, os.str());
  }
}

/// Keeps the first `rows` rows of U * core, where the rows of core beyond
/// the local dimension have to vanish.
RealMatrix lift(const RealMatrix& basis, const RealMatrix& core, const char* side) {
  const int dim = static_cast<int>(basis.rows());
  const int L = static_cast<int>(core.rows());
  const int k = std::min(dim, L);
  if (L > k && core.bottomRows(L - k).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(side) + " factor has weight outside the local Bloch space");
  }
  return basis.leftCols(k) * core.topRows(k);
}

double bound_factor(int N, int M) {
  return std::sqrt(static_cast<double>(N) * (N - 1) * M * (M - 1)) / 2.0;
}

void check_local_dims(int N, int M) {
  if (N < 2 || M < 2) {
    throw Error(ErrorCode::DimensionTooSmall, "the construction needs N, M >= 2");
  }
}

}  // namespace

FactorizationFrame make_frame(const RealMatrix& corr, std::optional<int> L) {
  const linalg::Svd s = linalg::svd_real(corr);
  FactorizationFrame f;
  f.left = s.left;
  f.right = s.right;
  f.rank = 0;
  for (Eigen::Index i = 0; i < s.singulars.size(); ++i) {
    if (s.singulars[i] > kRankTol) ++f.rank;
  }
  f.L = L.value_or(f.rank + 1);
  if (f.L < std::max(f.rank, 1)) {
    throw Error(ErrorCode::BadCardinality,
                "L = " + std::to_string(f.L) + " is below rank " + std::to_string(f.rank));
  }
  f.tau = padded(s.singulars, f.L);
  return f;
}

FactorPair theorem1_assemble(const FactorizationFrame& frame, const RealMatrix& X, const RealMatrix& Y,
                             const RealMatrix& Q1, const RealMatrix& Q2, const RealVector& alpha,
                             const RealVector& beta) {
  const int L = frame.L;
  require_square(X, L, "X");
  require_square(Y, L, "Y");
  require_square(Q1, L, "Q1");
  require_square(Q2, L, "Q2");
  if (alpha.size() != L || beta.size() != L) {
    throw Error(ErrorCode::LengthMismatch, "alpha and beta must have length L");
  }
  require_orthogonal(X, "X");
  require_orthogonal(Y, "Y");
  require_orthogonal(Q1, "Q1");
  require_orthogonal(Q2, "Q2");

  const RealMatrix a_core = X * alpha.asDiagonal() * Q1;
  const RealMatrix b_core = Y * beta.asDiagonal() * Q2;
  const RealMatrix core = a_core * b_core.transpose();
  const RealMatrix target = frame.tau.asDiagonal();
  const double sv_gap = (linalg::singular_values(core) - frame.tau).cwiseAbs().maxCoeff();
  const double entry_gap = (core - target).cwiseAbs().maxCoeff();
  if (sv_gap > 1e-8 || entry_gap > 1e-8) {
    std::ostringstream os;
    os << "X D_alpha Q1 Q2^T D_beta Y^T differs from D_tau: singular-value mismatch " << sv_gap
       << ", entrywise mismatch " << entry_gap;
    throw Error(ErrorCode::Equation10Violated, os.str());
  }
  return {lift(frame.left, a_core, "A"), lift(frame.right, b_core, "B")};
}

SeparableDecomposition factors_to_decomposition(const FactorPair& factors, const RealVector& probabilities,
                                                int N, int M) {
  if (factors.m_rp.cols() != probabilities.size() || factors.m_sp.cols() != probabilities.size()) {
    throw Error(ErrorCode::LengthMismatch, "one probability per factor column");
  }
  if (factors.m_rp.rows() != N * N - 1 || factors.m_sp.rows() != M * M - 1) {
    throw Error(ErrorCode::DimensionMismatch, "factor rows must match N^2-1 and M^2-1");
  }
  SeparableDecomposition dec;
  dec.dim_a = N;
  dec.dim_b = M;
  for (Eigen::Index j = 0; j < probabilities.size(); ++j) {
    const double p = probabilities[j];
    if (!(p > 0.0)) continue;
    const double root = std::sqrt(p);
    dec.entries.push_back(
        {p, BlochVector(N, factors.m_rp.col(j) / root), BlochVector(M, factors.m_sp.col(j) / root)});
  }
  return dec;
}

RealMatrix zero_diagonal_rotation(const RealMatrix& S) {
  const int n = static_cast<int>(S.rows());
  if (S.cols() != n) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if (std::abs(S.trace()) > 1e-10 * scale * std::max(1, n)) {
    throw Error(ErrorCode::FixedPointDiverged, "a zero diagonal needs a traceless matrix");
  }
  RealMatrix work = 0.5 * (S + S.transpose());
  RealMatrix G = RealMatrix::Identity(n, n);
  const double eps = 1e-15 * scale;
  for (int k = 0; k + 1 < n; ++k) {
    const double skk = work(k, k);
    if (std::abs(skk) <= eps) continue;
    int partner = -1;
    for (int j = k + 1; j < n; ++j) {
      if (work(j, j) * skk < 0.0 && (partner < 0 || std::abs(work(j, j)) > std::abs(work(partner, partner)))) {
        partner = j;
      }
    }
    if (partner < 0) continue;
    const double sjj = work(partner, partner);
    const double skj = work(k, partner);
    // skk + 2 t skj + t^2 sjj = 0; opposite signs make the discriminant positive.
    const double disc = std::sqrt(skj * skj - skk * sjj);
    const double t1 = (-skj + disc) / sjj;
    const double t2 = (-skj - disc) / sjj;
    const double t = std::abs(t1) < std::abs(t2) ? t1 : t2;
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    RealMatrix rot = RealMatrix::Identity(n, n);
    rot(k, k) = c;
    rot(partner, partner) = c;
    rot(partner, k) = s;
    rot(k, partner) = -s;
    work = rot.transpose() * work * rot;
    G = G * rot;
  }
  return G;
}

SimplexFrame corollary2_frame(const FactorizationFrame& frame, int N, int M) {
  check_local_dims(N, M);
  const int l = frame.rank;
  SimplexFrame out;
  out.kappa = frame.tau.head(l) * bound_factor(N, M);
  out.k_total = out.kappa.sum();
  if (out.k_total > 1.0 + kBoundSlack) {
    std::ostringstream os;
    os << "sum of kappa is " << out.k_total << " > 1";
    throw Error(ErrorCode::BoundExceeded, os.str());
  }
  out.alpha = (out.kappa * (2.0 / (N * (N - 1.0)))).cwiseSqrt();
  out.beta = (out.kappa * (2.0 / (M * (M - 1.0)))).cwiseSqrt();
  if (l == 0) {
    out.q = RealMatrix::Identity(1, 1);
    out.probabilities = RealVector::Ones(1);
    return out;
  }

  RealVector weights(l + 1);
  weights.head(l) = out.kappa;
  weights[l] = -out.k_total;
  RealMatrix q = zero_diagonal_rotation(weights.asDiagonal().toDenseMatrix());
  for (int j = 0; j <= l; ++j) {
    if (q(l, j) < 0.0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0.0) q.row(0) *= -1.0;

  out.probabilities.resize(l + 1);
  double worst = 0.0;
  for (int j = 0; j <= l; ++j) {
    double acc = 0.0;
    for (int i = 0; i < l; ++i) acc += out.kappa[i] * q(i, j) * q(i, j);
    out.probabilities[j] = acc / out.k_total;
    worst = std::max(worst, std::abs(out.probabilities[j] - q(l, j) * q(l, j)));
  }
  if (worst > 1e-10 || linalg::orthogonality_defect(q) > 1e-10) {
    std::ostringstream os;
    os << "last row of Q disagrees with the weights by " << worst;
    throw Error(ErrorCode::FixedPointDiverged, os.str());
  }
  out.q = std::move(q);
  return out;
}

SeparableDecomposition corollary2_construct(const FactorizationFrame& frame, int N, int M) {
  const SimplexFrame sf = corollary2_frame(frame, N, M);
  SeparableDecomposition dec;
  dec.dim_a = N;
  dec.dim_b = M;
  const int l = frame.rank;
  if (l == 0) {
    dec.entries.push_back({1.0, BlochVector::zero(N), BlochVector::zero(M)});
    return dec;
  }
  const RealMatrix& u = frame.left;
  const RealMatrix& v = frame.right;
  for (int j = 0; j <= l; ++j) {
    const double root = sf.q(l, j);
    const RealVector ca = sf.alpha.cwiseProduct(sf.q.col(j).head(l)) / root;
    const RealVector cb = sf.beta.cwiseProduct(sf.q.col(j).head(l)) / root;
    dec.entries.push_back(
        {sf.probabilities[j], BlochVector(N, u.leftCols(l) * ca), BlochVector(M, v.leftCols(l) * cb)});
  }
  double total = 0.0;
  for (const auto& e : dec.entries) total += e.p;
  for (auto& e : dec.entries) e.p /= total;
  return dec;
}

std::optional<SeparableDecomposition> corollary2_with_marginals(const BipartiteDecomposed& d) {
  const int N = d.dim_a;
  const int M = d.dim_b;
  check_local_dims(N, M);
  const double eps = std::max(2.0 * d.a.norm() / radii(N).inner, 2.0 * d.b.norm() / radii(M).inner);
  if (eps == 0.0) {
    const FactorizationFrame frame = make_frame(d.corr);
    if (frame.tau.sum() * bound_factor(N, M) > 1.0 + kBoundSlack) return std::nullopt;
    return corollary2_construct(frame, N, M);
  }
  if (eps >= 1.0) return std::nullopt;
  const FactorizationFrame frame = make_frame(d.corr / (1.0 - eps));
  if (frame.tau.sum() * bound_factor(N, M) > 1.0 + kBoundSlack) return std::nullopt;
  SeparableDecomposition dec = corollary2_construct(frame, N, M);
  for (auto& e : dec.entries) e.p *= 1.0 - eps;
  dec.entries.push_back({eps / 2.0, BlochVector(N, 2.0 * d.a.components / eps), BlochVector::zero(M)});
  dec.entries.push_back({eps / 2.0, BlochVector::zero(N), BlochVector(M, 2.0 * d.b.components / eps)});
  return dec;
}

FamilyOutcome werner_decompose(int N, double phi, std::uint64_t seed) {
  if (N < 2) throw Error(ErrorCode::DimensionTooSmall, "Werner family needs N >= 2");
  if (!(phi >= -1.0 && phi <= 1.0)) {
    throw Error(ErrorCode::OutOfPositivityRange, "Werner parameter must lie in [-1, 1]");
  }
  FamilyOutcome out;
  if (phi < 0.0) {
    out.kind = FamilyOutcome::Kind::Entangled;
    out.note = "phi < 0";
    return out;
  }
  const double n = N;
  const double c = 2.0 * (n * phi - 1.0) / (n * (n * n - 1.0));
  const PureSimplex& simplex = pure_simplex(N, seed);
  const double p = 1.0 / (n * n);
  SeparableDecomposition dec;
  dec.dim_a = N;
  dec.dim_b = N;
  if (c >= 0.0) {
    const double t = std::sqrt(c * n * (n + 1.0) / 2.0);
    for (const auto& v : simplex.vertices) {
      dec.entries.push_back({p, BlochVector(N, t * v.components), BlochVector(N, t * v.components)});
    }
    out.note = "scaled pure simplex on both sides";
  } else {
    const double beta = std::sqrt(2.0 / (n * (n + 1.0)));
    const double alpha = -c / beta;
    if (alpha * alpha > 2.0 / (n * (n - 1.0) * (n * n - 1.0)) * (1.0 + 1e-12)) {
      out.note = "negative correlation beyond the simplex pair";
      return out;
    }
    for (const auto& v : simplex.vertices) {
      dec.entries.push_back({p, BlochVector(N, -(alpha / beta) * v.components), v});
    }
    out.note = "inner simplex on A, pure simplex on B";
  }
  out.kind = FamilyOutcome::Kind::Decomposed;
  out.decomposition = std::move(dec);
  return out;
}

FamilyOutcome isotropic_decompose(int N, double p, std::uint64_t seed) {
  if (N < 2) throw Error(ErrorCode::DimensionTooSmall, "isotropic family needs N >= 2");
  const double n = N;
  const double lower = -1.0 / (n * n - 1.0);
  if (!(p >= lower - 1e-12 && p <= 1.0)) {
    std::ostringstream os;
    os << "isotropic parameter " << p << " outside [" << lower << ", 1]";
    throw Error(ErrorCode::OutOfPositivityRange, os.str());
  }
  if (p > 1.0 / (n + 1.0)) {
    FamilyOutcome out;
    out.kind = FamilyOutcome::Kind::Entangled;
    out.note = "p > 1/(N+1)";
    return out;
  }
  const double phi = std::clamp((p * (n * n - 1.0) + 1.0) / n, 0.0, 1.0);
  FamilyOutcome out = werner_decompose(N, phi, seed);
  if (out.decomposition) {
    for (auto& e : out.decomposition->entries) e.s = transpose_flip(e.s);
    out.note += ", B side transposed";
  }
  return out;
}

HornProfile horn_profile(const SeparableDecomposition& dec) {
  const int L = static_cast<int>(dec.entries.size());
  const int da = dec.dim_a * dec.dim_a - 1;
  const int db = dec.dim_b * dec.dim_b - 1;
  RealMatrix m_rp(da, L);
  RealMatrix m_sp(db, L);
  for (int j = 0; j < L; ++j) {
    const double root = std::sqrt(dec.entries[j].p);
    m_rp.col(j) = root * dec.entries[j].r.components;
    m_sp.col(j) = root * dec.entries[j].s.components;
  }
  HornProfile out;
  out.alpha = padded(linalg::singular_values(m_rp), L);
  out.beta = padded(linalg::singular_values(m_sp), L);
  out.tau = padded(linalg::singular_values(m_rp * m_sp.transpose()), L);
  return out;
}

}  // namespace sephorn::decompose
