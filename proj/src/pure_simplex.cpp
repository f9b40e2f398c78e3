#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include <omp.h>

#include "sephorn/decompose.hpp"

namespace sephorn::decompose {
namespace {

struct Problem {
  int N = 0;
  int D = 0;
  const GeneratorBasis* basis = nullptr;
  RealMatrix reference;  // D x N^2, scaled reference vertices
};

struct Attempt {
  bool success = false;
  RealMatrix rotation;
  double positivity = INFINITY;
};

Problem make_problem(int N) {
  Problem pb;
  pb.N = N;
  pb.D = N * N - 1;
  pb.basis = &shared_basis(N);
  const RealMatrix q0 = reference_simplex_frame(N);
  pb.reference = std::sqrt(2.0 * N / (N + 1.0)) * q0.topRows(pb.D);
  return pb;
}

ComplexMatrix state_of(const Problem& pb, const RealVector& v) {
  ComplexMatrix rho = ComplexMatrix::Identity(pb.N, pb.N) / static_cast<double>(pb.N);
  for (int mu = 0; mu < pb.D; ++mu) rho += 0.5 * v[mu] * pb.basis->generators[mu];
  return rho;
}

/// Real coordinates of a Hermitian matrix such that their Euclidean norm is
/// the Frobenius norm.
void flatten_hermitian(const ComplexMatrix& m, double* out) {
  const int n = static_cast<int>(m.rows());
  int k = 0;
  for (int a = 0; a < n; ++a) {
    out[k++] = m(a, a).real();
    for (int b = a + 1; b < n; ++b) {
      out[k++] = std::sqrt(2.0) * m(a, b).real();
      out[k++] = std::sqrt(2.0) * m(a, b).imag();
    }
  }
}

RealVector residual(const Problem& pb, const RealMatrix& R) {
  const int vertices = pb.N * pb.N;
  const int per = pb.N * pb.N;
  RealVector h(vertices * per);
  const RealMatrix v = R * pb.reference;
  for (int i = 0; i < vertices; ++i) {
    const ComplexMatrix rho = state_of(pb, v.col(i));
    flatten_hermitian(rho * rho - rho, h.data() + i * per);
  }
  return h;
}

RealMatrix jacobian(const Problem& pb, const RealMatrix& R) {
  const int vertices = pb.N * pb.N;
  const int per = pb.N * pb.N;
  const int params = pb.D * (pb.D - 1) / 2;
  RealMatrix J(vertices * per, params);
  const RealMatrix v = R * pb.reference;
  std::vector<ComplexMatrix> lin(pb.D);
  RealVector col(per);
  for (int i = 0; i < vertices; ++i) {
    const ComplexMatrix rho = state_of(pb, v.col(i));
    for (int mu = 0; mu < pb.D; ++mu) {
      const ComplexMatrix& g = pb.basis->generators[mu];
      lin[mu] = rho * g + g * rho - g;
    }
    int k = 0;
    for (int p = 0; p < pb.D; ++p) {
      for (int q = p + 1; q < pb.D; ++q, ++k) {
        const ComplexMatrix d = 0.5 * (v(q, i) * lin[p] - v(p, i) * lin[q]);
        flatten_hermitian(d, col.data());
        J.block(i * per, k, per, 1) = col;
      }
    }
  }
  return J;
}

RealMatrix cayley_step(const RealVector& delta, int D) {
  RealMatrix A = RealMatrix::Zero(D, D);
  int k = 0;
  for (int p = 0; p < D; ++p) {
    for (int q = p + 1; q < D; ++q, ++k) {
      A(p, q) = delta[k];
      A(q, p) = -delta[k];
    }
  }
  const RealMatrix I = RealMatrix::Identity(D, D);
  return (I - 0.5 * A).partialPivLu().solve(I + 0.5 * A);
}

RealMatrix nearest_rotation(const RealMatrix& R) {
  Eigen::JacobiSVD<RealMatrix> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void eigen_summary(const Problem& pb, const RealMatrix& R, double& positivity, double& mass) {
  positivity = 0.0;
  mass = 0.0;
  const RealMatrix v = R * pb.reference;
  for (int i = 0; i < pb.N * pb.N; ++i) {
    const RealVector ev = linalg::eigvalsh(state_of(pb, v.col(i)));
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (ev[k] < 0.0) {
        positivity = std::max(positivity, -ev[k]);
        mass += ev[k] * ev[k];
      }
    }
  }
}

RealMatrix starting_rotation(int D, std::uint64_t seed, int restart) {
  if (restart == 0) return RealMatrix::Identity(D, D);
  RealMatrix R = linalg::random_orthogonal(D, seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(restart));
  if (R.determinant() < 0.0) R.col(0) *= -1.0;
  return R;
}

/// Levenberg-Marquardt on the idempotency residual rho_i^2 - rho_i.
Attempt run_restart(const Problem& pb, std::uint64_t seed, int restart, const SimplexSearchOptions& opts) {
  RealMatrix R = starting_rotation(pb.D, seed, restart);
  RealVector h = residual(pb, R);
  double cost = h.squaredNorm();
  double mu = 1e-3;
  double checkpoint = cost;
  for (int it = 0; it < opts.iterations && cost > 1e-30; ++it) {
    const RealMatrix J = jacobian(pb, R);
    const RealMatrix H = J.transpose() * J;
    const RealVector g = J.transpose() * h;
    bool accepted = false;
    while (!accepted && mu < 1e12 && it < opts.iterations) {
      RealMatrix damped = H;
      damped.diagonal().array() += mu;
      const RealVector delta = -damped.ldlt().solve(g);
      RealMatrix trial = cayley_step(delta, pb.D) * R;
      const RealVector ht = residual(pb, trial);
      const double ct = ht.squaredNorm();
      if (ct < cost) {
        R = std::move(trial);
        h = ht;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
      } else {
        mu *= 4.0;
        ++it;
      }
    }
    if (!accepted) break;
    if (it % 100 == 99) {
      // A stalled restart sits in a local minimum; leave it to the next one.
      if (cost > 1e-12 && cost > 0.999 * checkpoint) break;
      checkpoint = cost;
    }
  }
  Attempt a;
  a.rotation = nearest_rotation(R);
  double mass = 0.0;
  eigen_summary(pb, a.rotation, a.positivity, mass);
  a.success = a.positivity <= opts.positivity_target;
  return a;
}

PureSimplex finish(const Problem& pb, const RealMatrix& R, int restart) {
  PureSimplex out;
  out.dim = pb.N;
  out.restart = restart;
  const int D = pb.D;
  RealMatrix lift = RealMatrix::Identity(D + 1, D + 1);
  lift.topLeftCorner(D, D) = R;
  out.q = lift * reference_simplex_frame(pb.N);
  const RealMatrix v = R * pb.reference;
  for (int i = 0; i < pb.N * pb.N; ++i) out.vertices.emplace_back(pb.N, v.col(i));
  eigen_summary(pb, R, out.positivity_residual, out.negative_mass);
  return out;
}

[[noreturn]] void fail(int N, double best, const SimplexSearchOptions& opts) {
  std::ostringstream os;
  os << "no pure simplex for N = " << N << " after " << opts.restarts << " restarts; best positivity residual "
     << best;
  throw Error(ErrorCode::SearchFailed, os.str());
}

void check_dim(int N) {
  if (N < 2) throw Error(ErrorCode::DimensionTooSmall, "pure simplex needs N >= 2");
}

using CacheKey = std::tuple<int, std::uint64_t, int, int, double>;

struct Cache {
  std::mutex mutex;
  std::map<CacheKey, std::unique_ptr<const PureSimplex>> entries;
};

Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace

RealMatrix reference_simplex_frame(int N) {
  check_dim(N);
  const int dim = N * N;
  const RealMatrix uniform = RealMatrix::Constant(1, dim, 1.0 / N);
  return linalg::complete_orthonormal(uniform, dim);
}

const PureSimplex& pure_simplex(int N, std::uint64_t seed, const SimplexSearchOptions& opts) {
  check_dim(N);
  const CacheKey key{N, seed, opts.restarts, opts.iterations, opts.positivity_target};
  Cache& c = cache();
  {
    std::lock_guard lock(c.mutex);
    if (const auto it = c.entries.find(key); it != c.entries.end()) return *it->second;
  }

  const Problem pb = make_problem(N);
  const int chunk = std::max(1, omp_get_max_threads());
  double best = INFINITY;
  std::unique_ptr<PureSimplex> found;
  for (int start = 0; start < opts.restarts && !found; start += chunk) {
    const int stop = std::min(opts.restarts, start + chunk);
    std::vector<Attempt> attempts(stop - start);
#pragma omp parallel for schedule(dynamic)
    for (int k = start; k < stop; ++k) attempts[k - start] = run_restart(pb, seed, k, opts);
    for (int k = start; k < stop; ++k) {
      const Attempt& a = attempts[k - start];
      best = std::min(best, a.positivity);
      if (a.success) {
        found = std::make_unique<PureSimplex>(finish(pb, a.rotation, k));
        break;
      }
    }
  }
  if (!found) fail(N, best, opts);

  std::lock_guard lock(c.mutex);
  auto& slot = c.entries[key];
  if (!slot) slot = std::move(found);
  return *slot;
}

namespace serial {

PureSimplex pure_simplex(int N, std::uint64_t seed, const SimplexSearchOptions& opts) {
  check_dim(N);
  const Problem pb = make_problem(N);
  double best = INFINITY;
  for (int k = 0; k < opts.restarts; ++k) {
    const Attempt a = run_restart(pb, seed, k, opts);
    best = std::min(best, a.positivity);
    if (a.success) return finish(pb, a.rotation, k);
  }
  fail(N, best, opts);
}

}  // namespace serial

}  // namespace sephorn::decompose
