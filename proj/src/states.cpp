#include "sephorn/states.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sephorn::states {
namespace {

void require_psd(const BipartiteDecomposed& d, const char* family, double parameter) {
  const double lowest = linalg::eigvalsh(compose_state(d)).minCoeff();
  if (lowest < -kPsdTol) {
    std::ostringstream os;
    os << family << " state with parameter " << parameter << " has eigenvalue " << lowest;
    throw Error(ErrorCode::NotPSD, os.str());
  }
}

BipartiteDecomposed symmetric_pair(int N, const RealVector& diag) {
  BipartiteDecomposed d;
  d.dim_a = N;
  d.dim_b = N;
  d.a = BlochVector::zero(N);
  d.b = BlochVector::zero(N);
  d.corr = diag.asDiagonal();
  return d;
}

}  // namespace

BipartiteDecomposed werner(const WernerParams& params) {
  const int N = params.N;
  if (N < 2) throw Error(ErrorCode::DimensionTooSmall, "Werner state needs N >= 2");
  if (!(params.phi >= -1.0 && params.phi <= 1.0)) {
    throw Error(ErrorCode::NotPSD, "Werner parameter must lie in [-1, 1]");
  }
  const double n = N;
  const double c = 2.0 * (n * params.phi - 1.0) / (n * (n * n - 1.0));
  BipartiteDecomposed d = symmetric_pair(N, RealVector::Constant(N * N - 1, c));
  require_psd(d, "Werner", params.phi);
  return d;
}

BipartiteDecomposed isotropic(const IsotropicParams& params) {
  const int N = params.N;
  if (N < 2) throw Error(ErrorCode::DimensionTooSmall, "isotropic state needs N >= 2");
  const double n = N;
  if (!(params.p >= -1.0 / (n * n - 1.0) - 1e-12 && params.p <= 1.0)) {
    throw Error(ErrorCode::NotPSD, "isotropic parameter outside [-1/(N^2-1), 1]");
  }
  RealVector diag = RealVector::Constant(N * N - 1, 2.0 * params.p / n);
  for (int k : antisymmetric_indices(shared_basis(N))) diag[k] = -diag[k];
  BipartiteDecomposed d = symmetric_pair(N, diag);
  require_psd(d, "isotropic", params.p);
  return d;
}

BipartiteDecomposed bell() {
  RealVector diag(3);
  diag << 1.0, -1.0, 1.0;
  return symmetric_pair(2, diag);
}

ComplexMatrix psi_plus() {
  ComplexMatrix v = ComplexMatrix::Zero(4, 1);
  v(1, 0) = v(2, 0) = 1.0 / std::sqrt(2.0);
  return v;
}

BipartiteDecomposed p_zero(double p, int sign) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::NotAState, "mixing weight must lie in [0, 1]");
  ComplexMatrix psi = psi_plus();
  if (sign < 0) psi(2, 0) = -psi(2, 0);
  ComplexMatrix rho = p * psi * psi.adjoint();
  rho(0, 0) += 1.0 - p;
  return decompose_state(rho, 2, 2);
}

DensityMatrix random_density(int N, int rank, std::uint64_t seed) {
  if (N < 1 || rank < 1 || rank > N) {
    throw Error(ErrorCode::DimensionMismatch, "need 1 <= rank <= N");
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix g(N, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < N; ++i) g(i, j) = Complex(normal(gen), normal(gen));
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace().real();
}

}  // namespace sephorn::states
