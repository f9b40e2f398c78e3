#include <algorithm>
#include <functional>

#include <gtest/gtest.h>

#include "sephorn/decompose.hpp"
#include "sephorn/horn.hpp"
#include "sephorn/states.hpp"
#include "support.hpp"

using namespace sephorn;
namespace dc = sephorn::decompose;

namespace {

BipartiteDecomposed zero_marginal(int N, int M, const RealMatrix& corr) {
  BipartiteDecomposed d;
  d.dim_a = N;
  d.dim_b = M;
  d.a = BlochVector::zero(N);
  d.b = BlochVector::zero(M);
  d.corr = corr;
  return d;
}

void expect_horn_consistent(const SeparableDecomposition& dec) {
  if (dec.size() > 9) return;
  const dc::HornProfile h = dc::horn_profile(dec);
  // Singular values can pick up rounding noise in the last place.
  const auto rep = horn::check_product_inequalities(h.tau, h.alpha, h.beta, 1e-7);
  EXPECT_TRUE(rep.feasible) << "worst margin " << rep.worst_margin;
}

}  // namespace

TEST(Frame, PadsAndCountsRank) {
  RealMatrix t = RealMatrix::Zero(3, 3);
  t(0, 0) = 0.5;
  const dc::FactorizationFrame f = dc::make_frame(t);
  EXPECT_EQ(f.rank, 1);
  EXPECT_EQ(f.L, 2);
  EXPECT_DOUBLE_EQ(f.tau[0], 0.5);
  EXPECT_DOUBLE_EQ(f.tau[1], 0.0);
  const dc::FactorizationFrame g = dc::make_frame(t, 5);
  EXPECT_EQ(g.tau.size(), 5);
  RealMatrix back = RealMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) back += g.tau[std::min(i, 4)] * g.left.col(i) * g.right.col(i).transpose();
  EXPECT_LT((back - t).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(dc::make_frame(RealMatrix::Identity(3, 3), 2), Error);
}

TEST(FactorAssembly, DiagonalCaseReproducesCorrelation) {
  RealMatrix t = RealMatrix::Zero(3, 3);
  t.diagonal() << 0.4, 0.2, 0.1;
  const dc::FactorizationFrame f = dc::make_frame(t, 3);
  RealVector alpha(3), beta(3);
  alpha << 0.8, 0.5, 0.5;
  beta << 0.5, 0.4, 0.2;
  const RealMatrix I = RealMatrix::Identity(3, 3);
  const dc::FactorPair fp = dc::theorem1_assemble(f, I, I, I, I, alpha, beta);
  EXPECT_LT((fp.m_rp * fp.m_sp.transpose() - t).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FactorAssembly, MismatchIsReported) {
  RealMatrix t = RealMatrix::Zero(3, 3);
  t.diagonal() << 0.4, 0.2, 0.1;
  const dc::FactorizationFrame f = dc::make_frame(t, 3);
  const RealMatrix I = RealMatrix::Identity(3, 3);
  try {
    dc::theorem1_assemble(f, I, I, I, I, RealVector::Ones(3), RealVector::Ones(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Equation10Violated);
    EXPECT_NE(std::string(e.what()).find("singular-value mismatch"), std::string::npos);
  }
  RealMatrix skew = I;
  skew(0, 1) = 0.1;
  EXPECT_THROW(dc::theorem1_assemble(f, skew, I, I, I, RealVector::Ones(3), RealVector::Ones(3)), Error);
}

TEST(FactorAssembly, BellFrameIsCaughtDownstream) {
  RealMatrix t = RealMatrix::Zero(3, 3);
  t.diagonal() << 1, -1, 1;
  const dc::FactorizationFrame f = dc::make_frame(t, 3);
  const RealMatrix I = RealMatrix::Identity(3, 3);
  const dc::FactorPair fp = dc::theorem1_assemble(f, I, I, I, I, RealVector::Ones(3), RealVector::Ones(3));
  EXPECT_LT((fp.m_rp * fp.m_sp.transpose() - t).cwiseAbs().maxCoeff(), 1e-14);
  const SeparableDecomposition dec =
      dc::factors_to_decomposition(fp, RealVector::Constant(3, 1.0 / 3.0), 2, 2);
  const VerifyReport rep = verify_decomposition(dec, zero_marginal(2, 2, t));
  EXPECT_FALSE(rep.valid);
}

TEST(FactorAssembly, ForwardRoundTrip) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 3;
    RealVector alpha(L), beta(L);
    for (int i = 0; i < L; ++i) {
      alpha[i] = u(gen);
      beta[i] = u(gen);
    }
    const RealMatrix Q1 = oracle::random_rotation(L, gen);
    const RealMatrix Q2 = oracle::random_rotation(L, gen);
    const RealMatrix inner = alpha.asDiagonal() * Q1 * Q2.transpose() * beta.asDiagonal();
    Eigen::JacobiSVD<RealMatrix> svd(inner, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Any correlation with the same singular values, placed in random frames.
    const RealMatrix t = oracle::random_rotation(L, gen) * svd.singularValues().asDiagonal() *
                         oracle::random_rotation(L, gen).transpose();
    const dc::FactorizationFrame f = dc::make_frame(t, L);
    const RealMatrix X = svd.matrixU().transpose();
    const RealMatrix Y = svd.matrixV().transpose();
    const dc::FactorPair fp = dc::theorem1_assemble(f, X, Y, Q1, Q2, alpha, beta);
    EXPECT_LT((fp.m_rp * fp.m_sp.transpose() - t).cwiseAbs().maxCoeff(), 1e-9);
    RealVector sorted = alpha;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    EXPECT_LT((linalg::singular_values(fp.m_rp) - sorted).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ZeroDiagonal, MakesEveryDiagonalEntryVanish) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 7; ++n) {
    RealMatrix s(n, n);
    for (int i = 0; i < s.size(); ++i) s.data()[i] = g(gen);
    s = s + s.transpose();
    s.diagonal().array() -= s.trace() / n;
    const RealMatrix q = dc::zero_diagonal_rotation(s);
    EXPECT_LT(linalg::orthogonality_defect(q), 1e-13);
    EXPECT_LT((q.transpose() * s * q).diagonal().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(InnerBallConstruction, ZeroCorrelation) {
  const SeparableDecomposition dec = dc::corollary2_construct(dc::make_frame(RealMatrix::Zero(3, 3)), 2, 2);
  ASSERT_EQ(dec.size(), 1u);
  EXPECT_DOUBLE_EQ(dec.entries[0].p, 1.0);
  EXPECT_DOUBLE_EQ(dec.entries[0].r.norm(), 0.0);
}

TEST(InnerBallConstruction, IsotropicQubitCorrelation) {
  RealMatrix t = RealMatrix::Zero(3, 3);
  t.diagonal() << 0.3, 0.3, 0.3;
  const SeparableDecomposition dec = dc::corollary2_construct(dc::make_frame(t), 2, 2);
  ASSERT_EQ(dec.size(), 4u);
  const VerifyReport rep = verify_decomposition(dec, zero_marginal(2, 2, t));
  EXPECT_TRUE(rep.valid);
  EXPECT_LT(rep.max_residual, 1e-8);
  for (const auto& e : dec.entries) {
    EXPECT_NEAR(e.r.components.squaredNorm(), 0.9, 1e-12);
    EXPECT_NEAR(e.s.components.squaredNorm(), 0.9, 1e-12);
  }
  expect_horn_consistent(dec);
}

TEST(InnerBallConstruction, RankOne) {
  RealVector u(3), v(3);
  u << 1, 2, 2;
  v << 0, 0.6, 0.8;
  const RealMatrix t = 0.5 * (u / 3.0) * v.transpose();
  const dc::FactorizationFrame f = dc::make_frame(t);
  EXPECT_EQ(f.rank, 1);
  const dc::SimplexFrame sf = dc::corollary2_frame(f, 2, 2);
  EXPECT_EQ(sf.q.rows(), 2);
  EXPECT_NEAR(sf.q.determinant(), 1.0, 1e-14);
  EXPECT_GE(sf.q.row(1).minCoeff(), 0.0);
  const SeparableDecomposition dec = dc::corollary2_construct(f, 2, 2);
  EXPECT_EQ(dec.size(), 2u);
  EXPECT_TRUE(verify_decomposition(dec, zero_marginal(2, 2, t)).valid);
}

TEST(InnerBallConstruction, BoundExceeded) {
  try {
    dc::corollary2_construct(dc::make_frame(RealMatrix::Identity(3, 3) * 0.34), 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundExceeded);
  }
}

TEST(InnerBallConstruction, RectangularAndHigherDimensions) {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> g;
  for (auto [N, M] : {std::pair{2, 3}, std::pair{3, 3}, std::pair{3, 4}}) {
    RealMatrix t(N * N - 1, M * M - 1);
    for (int i = 0; i < t.size(); ++i) t.data()[i] = g(gen);
    const double kf = linalg::singular_values(t).sum();
    const double k_total = 0.9;
    t *= k_total * 2.0 / std::sqrt(double(N) * (N - 1) * M * (M - 1)) / kf;
    const SeparableDecomposition dec = dc::corollary2_construct(dc::make_frame(t), N, M);
    const VerifyReport rep = verify_decomposition(dec, zero_marginal(N, M, t));
    EXPECT_TRUE(rep.valid) << N << "x" << M << " residual " << rep.max_residual;
    for (const auto& e : dec.entries) {
      EXPECT_NEAR(e.r.components.squaredNorm(), 2.0 * k_total / (N * (N - 1)), 1e-9);
      EXPECT_NEAR(e.s.components.squaredNorm(), 2.0 * k_total / (M * (M - 1)), 1e-9);
    }
    expect_horn_consistent(dec);
  }
}

TEST(InnerBallConstruction, AbsorbsSmallMarginals) {
  BipartiteDecomposed d = decompose_state(states::random_density(9, 9, 4), 3, 3);
  // Shrink toward the maximally mixed state until the construction applies.
  d.a.components *= 0.01;
  d.b.components *= 0.01;
  d.corr *= 0.01;
  const auto dec = dc::corollary2_with_marginals(d);
  ASSERT_TRUE(dec.has_value());
  EXPECT_TRUE(verify_decomposition(*dec, d).valid);
  d.corr *= 1000.0;
  EXPECT_FALSE(dc::corollary2_with_marginals(d).has_value());
}

TEST(PureSimplex, QubitTetrahedron) {
  const dc::PureSimplex& s = dc::pure_simplex(2);
  ASSERT_EQ(s.vertices.size(), 4u);
  for (const auto& v : s.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-14);
}

class SimplexGeometry : public ::testing::TestWithParam<int> {};

TEST_P(SimplexGeometry, RegularAndPure) {
  const int N = GetParam();
  const dc::PureSimplex& s = dc::pure_simplex(N);
  const int count = N * N;
  ASSERT_EQ(static_cast<int>(s.vertices.size()), count);
  const double r2 = 2.0 * (N - 1.0) / N;
  for (int i = 0; i < count; ++i) {
    EXPECT_NEAR(s.vertices[i].components.squaredNorm(), r2, 1e-12);
    EXPECT_TRUE(is_physical(s.vertices[i]));
    for (int j = i + 1; j < count; ++j) {
      EXPECT_NEAR(s.vertices[i].components.dot(s.vertices[j].components) / r2, -1.0 / (count - 1.0), 1e-12);
    }
  }
  EXPECT_LT(s.positivity_residual, 1e-8);
  EXPECT_LT(linalg::orthogonality_defect(s.q), 1e-12);
  EXPECT_LT((s.q.row(count - 1).array() - 1.0 / N).abs().maxCoeff(), 1e-14);
  // Columns of the upper block carry (N^2-1)/N^2 of their weight.
  for (int i = 0; i < count; ++i) {
    EXPECT_NEAR(s.q.col(i).head(count - 1).squaredNorm(), (count - 1.0) / count, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(N2to4, SimplexGeometry, ::testing::Values(2, 3, 4));

TEST(PureSimplex, QutritDTensorInvariant) {
  const dc::PureSimplex& s = dc::pure_simplex(3);
  const DTensor d = d_tensor(shared_basis(3));
  for (const auto& v : s.vertices) EXPECT_NEAR(d.contract(v.components, v.components, v.components), 8.0 / 9.0, 1e-10);
}

TEST(PureSimplex, SerialMatchesCachedParallel) {
  const dc::PureSimplex& par = dc::pure_simplex(3, 7);
  const dc::PureSimplex ser = dc::serial::pure_simplex(3, 7);
  EXPECT_EQ(par.restart, ser.restart);
  EXPECT_LT((par.q - ser.q).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(&dc::pure_simplex(3, 7), &par);
}

TEST(PureSimplex, BudgetExhaustionReportsSearchFailed) {
  dc::SimplexSearchOptions opts;
  opts.restarts = 1;
  opts.iterations = 0;
  try {
    dc::serial::pure_simplex(3, 1, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SearchFailed);
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(Werner, Endpoints) {
  for (int N : {2, 3}) {
    for (double phi : {1.0, 0.0, 0.6, 1.0 / N, 0.2}) {
      const dc::FamilyOutcome out = dc::werner_decompose(N, phi);
      ASSERT_EQ(out.kind, dc::FamilyOutcome::Kind::Decomposed) << N << " " << phi;
      const SeparableDecomposition& dec = *out.decomposition;
      EXPECT_EQ(static_cast<int>(dec.size()), N * N);
      const VerifyReport rep = verify_decomposition(dec, states::werner({N, phi}));
      EXPECT_TRUE(rep.valid) << N << " " << phi << " residual " << rep.max_residual;
      for (const auto& e : dec.entries) EXPECT_NEAR(e.p, 1.0 / (N * N), 1e-15);
      const double n = N;
      const double c = std::abs(2.0 * (n * phi - 1.0) / (n * (n * n - 1.0)));
      const dc::HornProfile h = dc::horn_profile(dec);
      // alpha_i beta_i equals |c| on every non-trivial direction.
      for (int i = 0; i < N * N - 1; ++i) EXPECT_NEAR(h.alpha[i] * h.beta[i], c, 1e-10);
    }
  }
}

TEST(Werner, QutritLowerEndpointShells) {
  const dc::FamilyOutcome out = dc::werner_decompose(3, 0.0);
  for (const auto& e : out.decomposition->entries) {
    EXPECT_NEAR(e.r.components.squaredNorm(), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(e.s.components.squaredNorm(), 4.0 / 3.0, 1e-12);
  }
}

TEST(Werner, NegativePhiIsEntangled) {
  EXPECT_EQ(dc::werner_decompose(3, -0.1).kind, dc::FamilyOutcome::Kind::Entangled);
  EXPECT_THROW(dc::werner_decompose(3, 1.5), Error);
}

TEST(Isotropic, Examples) {
  const dc::FamilyOutcome q = dc::isotropic_decompose(2, 1.0 / 3.0);
  ASSERT_EQ(q.kind, dc::FamilyOutcome::Kind::Decomposed);
  EXPECT_TRUE(verify_decomposition(*q.decomposition, states::isotropic({2, 1.0 / 3.0})).valid);

  EXPECT_EQ(dc::isotropic_decompose(3, 0.26).kind, dc::FamilyOutcome::Kind::Entangled);

  const dc::FamilyOutcome edge = dc::isotropic_decompose(3, -1.0 / 8.0);
  ASSERT_EQ(edge.kind, dc::FamilyOutcome::Kind::Decomposed);
  EXPECT_TRUE(verify_decomposition(*edge.decomposition, states::isotropic({3, -1.0 / 8.0})).valid);

  try {
    dc::isotropic_decompose(3, -0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfPositivityRange);
  }
}
