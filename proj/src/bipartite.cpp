#include "sephorn/bipartite.hpp"

#include <cmath>
#include <string>

namespace sephorn {
namespace {

void check_dims(const ComplexMatrix& rho, int N, int M) {
  if (N < 1 || M < 1 || rho.rows() != N * M || rho.cols() != N * M) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix of size " + std::to_string(rho.rows()) + " is not " + std::to_string(N) + "x" +
                    std::to_string(M));
  }
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Orthonormal basis of the span of the eigenvectors whose eigenvalue exceeds
/// tol, chosen canonically: project e_0, e_1, ... and orthonormalize. This
/// makes the embedding of an already-aligned support the identity.
ComplexMatrix support_isometry(const ComplexMatrix& marginal, double tol) {
  const int n = static_cast<int>(marginal.rows());
  const linalg::Eigh e = linalg::eigh(marginal);
  int rank = 0;
  while (rank < n && e.values[rank] > tol) ++rank;
  const ComplexMatrix vecs = e.vectors.leftCols(rank);
  const ComplexMatrix projector = vecs * vecs.adjoint();

  ComplexMatrix basis(n, rank);
  int count = 0;
  for (int k = 0; k < n && count < rank; ++k) {
    Eigen::VectorXcd v = projector.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < count; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    basis.col(count++) = v / norm;
  }
  return basis.leftCols(count);
}

double marginal_norm(const ComplexMatrix& marginal) {
  const double n = static_cast<double>(marginal.rows());
  const ComplexMatrix centered = marginal - ComplexMatrix::Identity(marginal.rows(), marginal.cols()) / n;
  return std::sqrt(2.0) * centered.norm();
}

}  // namespace

ComplexMatrix partial_trace_b(const ComplexMatrix& rho, int N, int M) {
  check_dims(rho, N, M);
  ComplexMatrix out(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = rho.block(i * M, j * M, M, M).trace();
  return out;
}

ComplexMatrix partial_trace_a(const ComplexMatrix& rho, int N, int M) {
  check_dims(rho, N, M);
  ComplexMatrix out = ComplexMatrix::Zero(M, M);
  for (int i = 0; i < N; ++i) out += rho.block(i * M, i * M, M, M);
  return out;
}

ComplexMatrix partial_transpose_matrix(const ComplexMatrix& rho, int N, int M) {
  check_dims(rho, N, M);
  ComplexMatrix out(N * M, N * M);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out.block(i * M, j * M, M, M) = rho.block(i * M, j * M, M, M).transpose();
  return out;
}

BipartiteDecomposed decompose_state(const ComplexMatrix& rho, int N, int M) {
  check_dims(rho, N, M);
  validate_state(rho);
  const GeneratorBasis& ba = shared_basis(N);
  const GeneratorBasis& bb = shared_basis(M);

  BipartiteDecomposed d;
  d.dim_a = N;
  d.dim_b = M;
  d.a = to_bloch(partial_trace_b(rho, N, M));
  d.b = to_bloch(partial_trace_a(rho, N, M));
  d.corr = RealMatrix::Zero(ba.size(), bb.size());
  for (int mu = 0; mu < ba.size(); ++mu) {
    const ComplexMatrix& l = ba.generators[mu];
    // x = Tr_A[rho (l x I)]
    ComplexMatrix x = ComplexMatrix::Zero(M, M);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (l(j, i) != 0.0) x += l(j, i) * rho.block(i * M, j * M, M, M);
    for (int nu = 0; nu < bb.size(); ++nu) {
      d.corr(mu, nu) = x.cwiseProduct(bb.generators[nu].transpose()).sum().real();
    }
  }
  return d;
}

ComplexMatrix compose_state(const BipartiteDecomposed& d) {
  const int N = d.dim_a;
  const int M = d.dim_b;
  const GeneratorBasis& ba = shared_basis(N);
  const GeneratorBasis& bb = shared_basis(M);
  if (d.a.components.size() != ba.size() || d.b.components.size() != bb.size() ||
      d.corr.rows() != ba.size() || d.corr.cols() != bb.size()) {
    throw Error(ErrorCode::DimensionMismatch, "bipartite components do not match dimensions");
  }
  const ComplexMatrix ia = ComplexMatrix::Identity(N, N);
  const ComplexMatrix ib = ComplexMatrix::Identity(M, M);

  ComplexMatrix local_a = ComplexMatrix::Zero(N, N);
  for (int mu = 0; mu < ba.size(); ++mu) local_a += d.a.components[mu] * ba.generators[mu];
  ComplexMatrix local_b = ComplexMatrix::Zero(M, M);
  for (int nu = 0; nu < bb.size(); ++nu) local_b += d.b.components[nu] * bb.generators[nu];

  ComplexMatrix rho = ComplexMatrix::Identity(N * M, N * M) / static_cast<double>(N * M);
  rho += linalg::kron(local_a / (2.0 * M), ib);
  rho += linalg::kron(ia, local_b / (2.0 * N));
  for (int mu = 0; mu < ba.size(); ++mu) {
    ComplexMatrix row = ComplexMatrix::Zero(M, M);
    for (int nu = 0; nu < bb.size(); ++nu) row += d.corr(mu, nu) * bb.generators[nu];
    rho += 0.25 * linalg::kron(ba.generators[mu], row);
  }
  return rho;
}

BipartiteDecomposed partial_transpose(const BipartiteDecomposed& d) {
  BipartiteDecomposed out = d;
  for (int nu : antisymmetric_indices(shared_basis(d.dim_b))) {
    out.corr.col(nu) *= -1.0;
    out.b.components[nu] = -out.b.components[nu];
  }
  return out;
}

LocalRanks local_ranks(const BipartiteDecomposed& d, double tol) {
  auto rank_of = [tol](const BlochVector& r) {
    const RealVector ev = linalg::eigvalsh(from_bloch(r));
    return static_cast<int>((ev.array() > tol).count());
  };
  return {rank_of(d.a), rank_of(d.b)};
}

SupportProjection project_to_support_detailed(const BipartiteDecomposed& d, double tol) {
  const ComplexMatrix va = support_isometry(from_bloch(d.a), tol);
  const ComplexMatrix vb = support_isometry(from_bloch(d.b), tol);
  const int n = static_cast<int>(va.cols());
  const int m = static_cast<int>(vb.cols());
  if (n == d.dim_a && m == d.dim_b) {
    return {d, ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(m, m)};
  }
  const ComplexMatrix v = linalg::kron(va, vb);
  ComplexMatrix reduced = hermitize(v.adjoint() * compose_state(d) * v);
  reduced /= reduced.trace();
  return {decompose_state(reduced, n, m), va, vb};
}

BipartiteDecomposed project_to_support(const BipartiteDecomposed& d, double tol) {
  return project_to_support_detailed(d, tol).state;
}

NormalFormResult normal_form(const BipartiteDecomposed& d, int max_iter, double tol) {
  const int N = d.dim_a;
  const int M = d.dim_b;
  const LocalRanks ranks = local_ranks(d);
  if (ranks.n != N || ranks.m != M) {
    throw Error(ErrorCode::NotFullRank, "local ranks (" + std::to_string(ranks.n) + "," +
                                            std::to_string(ranks.m) + ") are not full");
  }
  NormalFormResult result;
  result.filter_a = ComplexMatrix::Identity(N, N);
  result.filter_b = ComplexMatrix::Identity(M, M);
  if (d.a.norm() < tol && d.b.norm() < tol) {
    result.state = d;
    result.converged = true;
    return result;
  }

  const ComplexMatrix ia = ComplexMatrix::Identity(N, N);
  const ComplexMatrix ib = ComplexMatrix::Identity(M, M);
  ComplexMatrix rho = compose_state(d);
  for (;;) {
    const ComplexMatrix rho_a = partial_trace_b(rho, N, M);
    const ComplexMatrix rho_b = partial_trace_a(rho, N, M);
    if (marginal_norm(rho_a) < tol && marginal_norm(rho_b) < tol) {
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iter) break;

    const ComplexMatrix fa = linalg::inverse_sqrt(static_cast<double>(N) * rho_a);
    ComplexMatrix k = linalg::kron(fa, ib);
    rho = hermitize(k * rho * k.adjoint());
    rho /= rho.trace();
    result.filter_a = fa * result.filter_a;

    const ComplexMatrix fb = linalg::inverse_sqrt(static_cast<double>(M) * partial_trace_a(rho, N, M));
    k = linalg::kron(ia, fb);
    rho = hermitize(k * rho * k.adjoint());
    rho /= rho.trace();
    result.filter_b = fb * result.filter_b;

    ++result.iterations;
  }
  result.state = decompose_state(rho, N, M);
  return result;
}

}  // namespace sephorn
