#include "sephorn/su_basis.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace sephorn {
namespace {

GeneratorBasis build_basis(int N) {
  GeneratorBasis basis;
  basis.dim = N;
  const Complex i_unit(0.0, 1.0);
  for (int j = 0; j < N; ++j) {
    for (int k = j + 1; k < N; ++k) {
      ComplexMatrix g = ComplexMatrix::Zero(N, N);
      g(j, k) = 1.0;
      g(k, j) = 1.0;
      basis.generators.push_back(std::move(g));
      basis.kinds.push_back(GeneratorKind::SymmetricOffDiagonal);
    }
  }
  for (int j = 0; j < N; ++j) {
    for (int k = j + 1; k < N; ++k) {
      ComplexMatrix g = ComplexMatrix::Zero(N, N);
      g(j, k) = -i_unit;
      g(k, j) = i_unit;
      basis.generators.push_back(std::move(g));
      basis.kinds.push_back(GeneratorKind::AntisymmetricOffDiagonal);
    }
  }
  for (int l = 1; l < N; ++l) {
    ComplexMatrix g = ComplexMatrix::Zero(N, N);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) g(j, j) = scale;
    g(l, l) = -scale * l;
    basis.generators.push_back(std::move(g));
    basis.kinds.push_back(GeneratorKind::Diagonal);
  }
  return basis;
}

}  // namespace

GeneratorBasis generators(int N) {
  if (N < 2) {
    throw Error(ErrorCode::DimensionTooSmall, "SU(N) generators need N >= 2, got " + std::to_string(N));
  }
  return shared_basis(N);
}

const GeneratorBasis& shared_basis(int N) {
  if (N < 1) {
    throw Error(ErrorCode::DimensionTooSmall, "dimension must be positive, got " + std::to_string(N));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GeneratorBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_unique<const GeneratorBasis>(build_basis(N));
  return *slot;
}

std::vector<int> antisymmetric_indices(const GeneratorBasis& basis) {
  std::vector<int> out;
  for (int mu = 0; mu < basis.size(); ++mu) {
    if (basis.kinds[mu] == GeneratorKind::AntisymmetricOffDiagonal) out.push_back(mu);
  }
  return out;
}

double DTensor::operator()(int a, int b, int c) const {
  const auto it = entries.find({a, b, c});
  return it == entries.end() ? 0.0 : it->second;
}

double DTensor::contract(const RealVector& x, const RealVector& y, const RealVector& z) const {
  double sum = 0.0;
  for (const auto& [key, value] : entries) sum += value * x[key[0]] * y[key[1]] * z[key[2]];
  return sum;
}

DTensor d_tensor(const GeneratorBasis& basis) {
  DTensor d;
  d.dim = basis.dim;
  const int n = basis.size();
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const ComplexMatrix anti =
          basis.generators[a] * basis.generators[b] + basis.generators[b] * basis.generators[a];
      for (int c = b; c < n; ++c) {
        const double value = 0.25 * (anti * basis.generators[c]).trace().real();
        if (std::abs(value) < 1e-14) continue;
        const std::array<std::array<int, 3>, 6> perms{{
            {a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
        for (const auto& key : perms) d.entries[key] = value;
      }
    }
  }
  return d;
}

}  // namespace sephorn
