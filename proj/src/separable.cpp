#include "sephorn/separable.hpp"

#include <algorithm>
#include <cmath>

namespace sephorn {

BipartiteDecomposed decomposition_state(const SeparableDecomposition& dec) {
  const int da = dec.dim_a * dec.dim_a - 1;
  const int db = dec.dim_b * dec.dim_b - 1;
  BipartiteDecomposed d;
  d.dim_a = dec.dim_a;
  d.dim_b = dec.dim_b;
  d.a = BlochVector::zero(dec.dim_a);
  d.b = BlochVector::zero(dec.dim_b);
  d.corr = RealMatrix::Zero(da, db);
  for (const auto& e : dec.entries) {
    d.a.components += e.p * e.r.components;
    d.b.components += e.p * e.s.components;
    d.corr += e.p * e.r.components * e.s.components.transpose();
  }
  return d;
}

VerifyReport verify_decomposition(const SeparableDecomposition& dec, const BipartiteDecomposed& d,
                                  const VerifyTolerances& tol) {
  VerifyReport report;
  if (dec.dim_a != d.dim_a || dec.dim_b != d.dim_b || dec.entries.empty()) {
    report.max_residual = INFINITY;
    return report;
  }
  const int da = d.dim_a * d.dim_a - 1;
  const int db = d.dim_b * d.dim_b - 1;
  double total = 0.0;
  report.min_probability = INFINITY;
  report.min_local_eigenvalue = INFINITY;
  for (const auto& e : dec.entries) {
    if (e.r.dim != d.dim_a || e.s.dim != d.dim_b || e.r.components.size() != da ||
        e.s.components.size() != db || !std::isfinite(e.p)) {
      report.max_residual = INFINITY;
      return report;
    }
    total += e.p;
    report.min_probability = std::min(report.min_probability, e.p);
    report.min_local_eigenvalue =
        std::min({report.min_local_eigenvalue, min_eigenvalue(e.r), min_eigenvalue(e.s)});
  }
  report.probability_defect = std::abs(total - 1.0);

  const BipartiteDecomposed rebuilt = decomposition_state(dec);
  double residual = 0.0;
  if (da > 0) residual = std::max(residual, (rebuilt.a.components - d.a.components).cwiseAbs().maxCoeff());
  if (db > 0) residual = std::max(residual, (rebuilt.b.components - d.b.components).cwiseAbs().maxCoeff());
  if (da > 0 && db > 0) residual = std::max(residual, (rebuilt.corr - d.corr).cwiseAbs().maxCoeff());
  report.max_residual = residual;

  report.valid = report.probability_defect <= tol.probability && report.min_probability > 0.0 &&
                 report.max_residual <= tol.residual && report.min_local_eigenvalue >= -tol.psd;
  return report;
}

SeparableDecomposition map_decomposition(const SeparableDecomposition& dec, const ComplexMatrix& map_a,
                                         const ComplexMatrix& map_b) {
  if (map_a.cols() != dec.dim_a || map_b.cols() != dec.dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "local maps do not match the decomposition dimensions");
  }
  SeparableDecomposition out;
  out.dim_a = static_cast<int>(map_a.rows());
  out.dim_b = static_cast<int>(map_b.rows());
  double total = 0.0;
  auto push = [](const ComplexMatrix& f, const BlochVector& v, double& weight) {
    ComplexMatrix rho = f * from_bloch(v) * f.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    const double tr = rho.trace().real();
    weight = tr;
    return to_bloch(rho / tr);
  };
  for (const auto& e : dec.entries) {
    double wa = 0.0;
    double wb = 0.0;
    ProductTerm t;
    t.r = push(map_a, e.r, wa);
    t.s = push(map_b, e.s, wb);
    t.p = e.p * wa * wb;
    total += t.p;
    out.entries.push_back(std::move(t));
  }
  for (auto& e : out.entries) e.p /= total;
  return out;
}

}  // namespace sephorn
