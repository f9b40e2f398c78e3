#include <gtest/gtest.h>

#include "sephorn/linalg.hpp"
#include "support.hpp"

using namespace sephorn;

TEST(Eigh, IdentityHasUnitSpectrum) {
  const auto e = linalg::eigh(ComplexMatrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 1.0);
}

TEST(Eigh, PauliZDescendingWithStandardVectors) {
  const auto e = linalg::eigh(oracle::pauli(3));
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], -1.0);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(1, 1)), 1.0, 1e-15);
}

TEST(Eigh, RandomHermitianReconstructs) {
  std::mt19937_64 gen(42);
  const ComplexMatrix h = oracle::random_hermitian(4, gen);
  const auto e = linalg::eigh(h);
  const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-12);
  for (int k = 1; k < 4; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
}

TEST(Eigh, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    linalg::eigh(m);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(Svd, Basics) {
  EXPECT_TRUE(linalg::singular_values(RealMatrix::Identity(3, 3)).isApprox(RealVector::Ones(3)));
  RealMatrix bell = RealMatrix::Zero(3, 3);
  bell.diagonal() << 1, -1, 1;
  EXPECT_TRUE(linalg::singular_values(bell).isApprox(RealVector::Ones(3)));

  RealVector u(3), v(4);
  u << 1, 2, 2;
  v << 0, 3, 0, 4;
  const RealVector s = linalg::singular_values((u / 3.0) * (v / 5.0).transpose());
  EXPECT_NEAR(s[0], 1.0, 1e-14);
  EXPECT_NEAR(s.tail(s.size() - 1).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(Svd, FactorsReconstruct) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  RealMatrix m(3, 5);
  for (int i = 0; i < m.size(); ++i) m.data()[i] = g(gen);
  const auto s = linalg::svd_real(m);
  RealMatrix d = RealMatrix::Zero(3, 5);
  for (int i = 0; i < 3; ++i) d(i, i) = s.singulars[i];
  EXPECT_LT((s.left * d * s.right.transpose() - m).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CompleteOrthonormal, PrescribedRowsGoLast) {
  RealMatrix row(1, 2);
  row << 1, 0;
  const RealMatrix q = linalg::complete_orthonormal(row, 2);
  EXPECT_TRUE(q.row(1).isApprox(row));
  EXPECT_NEAR(q.determinant(), 1.0, 1e-14);

  const RealMatrix half = RealMatrix::Constant(1, 4, 0.5);
  const RealMatrix q4 = linalg::complete_orthonormal(half, 4);
  EXPECT_LT(linalg::orthogonality_defect(q4), 1e-14);
  EXPECT_LT((q4.row(3) - half).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(q4.determinant(), 1.0, 1e-13);

  const RealMatrix q3 = linalg::complete_orthonormal(RealMatrix(0, 3), 3);
  EXPECT_NEAR(q3.determinant(), 1.0, 1e-14);
  EXPECT_LT(linalg::orthogonality_defect(q3), 1e-14);
}

TEST(RandomOrthogonal, DeterministicAndOrthogonal) {
  EXPECT_NEAR(std::abs(linalg::random_orthogonal(1, 9)(0, 0)), 1.0, 0.0);
  EXPECT_EQ(linalg::random_orthogonal(3, 7), linalg::random_orthogonal(3, 7));
  EXPECT_LT(linalg::orthogonality_defect(linalg::random_orthogonal(5, 1)), 1e-12);
  const ComplexMatrix u = linalg::random_unitary(4, 2);
  EXPECT_LT((u * u.adjoint() - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(InverseSqrt, SquaresToInverse) {
  std::mt19937_64 gen(5);
  ComplexMatrix h = oracle::random_hermitian(3, gen);
  h = h * h.adjoint() + ComplexMatrix::Identity(3, 3);
  const ComplexMatrix r = linalg::inverse_sqrt(h);
  EXPECT_LT((r * h * r - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);

  ComplexMatrix singular = ComplexMatrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  try {
    linalg::inverse_sqrt(singular);
    FAIL() << "expected NotFullRank";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFullRank);
  }
}

TEST(Kron, MatchesIndexFormula) {
  const ComplexMatrix k = linalg::kron(oracle::pauli(1), oracle::pauli(2));
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int j = 0; j < 2; ++j)
        for (int b = 0; b < 2; ++b)
          EXPECT_EQ(k(i * 2 + a, j * 2 + b), oracle::pauli(1)(i, j) * oracle::pauli(2)(a, b));
}
