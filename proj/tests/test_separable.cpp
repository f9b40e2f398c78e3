#include <gtest/gtest.h>

#include "sephorn/separable.hpp"
#include "sephorn/states.hpp"

using namespace sephorn;

namespace {

BlochVector axis(int k, double len) {
  RealVector c = RealVector::Zero(3);
  c[k] = len;
  return {2, c};
}

/// Equal mixture of |00>,|11>,|++>,|--> style terms along each axis.
SeparableDecomposition axis_mixture() {
  SeparableDecomposition dec;
  dec.dim_a = dec.dim_b = 2;
  for (int k = 0; k < 3; ++k) {
    dec.entries.push_back({1.0 / 6.0, axis(k, 1.0), axis(k, 1.0)});
    dec.entries.push_back({1.0 / 6.0, axis(k, -1.0), axis(k, -1.0)});
  }
  return dec;
}

}  // namespace

TEST(Verify, AcceptsItsOwnState) {
  const SeparableDecomposition dec = axis_mixture();
  const BipartiteDecomposed d = decomposition_state(dec);
  EXPECT_TRUE(d.corr.isApprox(RealMatrix::Identity(3, 3) / 3.0));
  const VerifyReport rep = verify_decomposition(dec, d);
  EXPECT_TRUE(rep.valid);
  EXPECT_LT(rep.max_residual, 1e-15);
  // Same state as the qubit Werner endpoint.
  EXPECT_TRUE(verify_decomposition(dec, states::werner({2, 1.0})).valid);
}

TEST(Verify, RejectsUnphysicalVector) {
  SeparableDecomposition dec = axis_mixture();
  dec.entries[0].r = axis(0, 1.2);
  const VerifyReport rep = verify_decomposition(dec, decomposition_state(dec));
  EXPECT_FALSE(rep.valid);
  EXPECT_LT(rep.min_local_eigenvalue, 0.0);
}

TEST(Verify, RejectsBadProbabilities) {
  SeparableDecomposition dec = axis_mixture();
  const BipartiteDecomposed d = decomposition_state(dec);
  for (auto& e : dec.entries) e.p *= 1.01;
  EXPECT_FALSE(verify_decomposition(dec, d).valid);
  dec = axis_mixture();
  dec.entries[0].p = 0.0;
  EXPECT_FALSE(verify_decomposition(dec, d).valid);
}

TEST(Verify, RejectsWrongState) {
  EXPECT_FALSE(verify_decomposition(axis_mixture(), states::werner({2, 0.5})).valid);
  SeparableDecomposition empty;
  empty.dim_a = empty.dim_b = 2;
  EXPECT_FALSE(verify_decomposition(empty, states::werner({2, 0.5})).valid);
}

TEST(MapDecomposition, FollowsLocalFilters) {
  const SeparableDecomposition dec = axis_mixture();
  const ComplexMatrix rho = compose_state(decomposition_state(dec));
  ComplexMatrix fa(2, 2), fb(2, 2);
  fa << 1.0, Complex(0.2, 0.1), 0.0, 0.7;
  fb << 0.9, 0.0, Complex(0.3, -0.2), 1.4;
  const ComplexMatrix f = linalg::kron(fa, fb);
  ComplexMatrix target = f * rho * f.adjoint();
  target /= target.trace();
  const SeparableDecomposition mapped = map_decomposition(dec, fa, fb);
  EXPECT_TRUE(verify_decomposition(mapped, decompose_state(target, 2, 2)).valid);
}

TEST(MapDecomposition, EmbedsIntoLargerSpace) {
  const SeparableDecomposition dec = axis_mixture();
  ComplexMatrix v = ComplexMatrix::Zero(3, 2);
  v(0, 0) = v(2, 1) = 1.0;
  const SeparableDecomposition mapped = map_decomposition(dec, v, ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(mapped.dim_a, 3);
  const ComplexMatrix f = linalg::kron(v, ComplexMatrix::Identity(2, 2));
  const ComplexMatrix target = f * compose_state(decomposition_state(dec)) * f.adjoint();
  EXPECT_TRUE(verify_decomposition(mapped, decompose_state(target, 3, 2)).valid);
}
