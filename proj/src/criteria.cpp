#include "sephorn/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <omp.h>

#include "sephorn/horn.hpp"

namespace sephorn::criteria {
namespace {

CriterionResult make_result(std::string name, double value, double bound, double slack, bool necessary) {
  CriterionResult c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.margin = value - bound;
  c.passed = c.margin <= slack;
  c.necessary = necessary;
  return c;
}

void require_normal(const BipartiteDecomposed& d, const Tolerances& tol) {
  if (d.a.norm() >= tol.normal || d.b.norm() >= tol.normal) {
    std::ostringstream os;
    os << "marginal Bloch vectors |a| = " << d.a.norm() << ", |b| = " << d.b.norm() << " exceed " << tol.normal;
    throw Error(ErrorCode::NotNormalForm, os.str());
  }
}

double sufficient_bound(int N, int M) { return 2.0 / std::sqrt(static_cast<double>(N) * M * (N - 1) * (M - 1)); }

/// Carries the shared state of one analysis.
struct Pipeline {
  const BipartiteDecomposed& original;
  const Tolerances& tol;
  Verdict verdict;
  std::optional<SeparableDecomposition> candidate;
  std::string candidate_source;

  void record(CriterionResult c) { verdict.trail.push_back(std::move(c)); }

  /// Keeps the first candidate that verifies against the original state.
  void offer(const SeparableDecomposition& dec, const ComplexMatrix& map_a, const ComplexMatrix& map_b,
             const std::string& source) {
    if (candidate) return;
    SeparableDecomposition pulled = map_decomposition(dec, map_a, map_b);
    const VerifyReport report = verify_decomposition(pulled, original, tol.verify);
    CriterionResult c = make_result("verify:" + source, report.max_residual, tol.verify.residual, 0.0, false);
    c.passed = report.valid;
    std::ostringstream os;
    os << pulled.size() << " components, probability defect " << report.probability_defect
       << ", min local eigenvalue " << report.min_local_eigenvalue;
    c.detail = os.str();
    record(c);
    if (report.valid) {
      candidate = std::move(pulled);
      candidate_source = source;
    }
  }

  void finish() {
    const CriterionResult* violation = nullptr;
    for (const auto& c : verdict.trail) {
      if (c.necessary && !c.passed && (!violation || c.margin > violation->margin)) violation = &c;
    }
    if (violation && candidate) {
      CriterionResult conflict;
      conflict.name = "conflict";
      conflict.detail = violation->name + " failed while a decomposition from " + candidate_source + " verified";
      record(conflict);
      verdict.status = Status::Inconclusive;
      verdict.evidence = verdict.trail;
    } else if (violation) {
      verdict.status = Status::Entangled;
      verdict.evidence = *violation;
    } else if (candidate) {
      verdict.status = Status::Separable;
      verdict.evidence = std::move(*candidate);
    } else {
      verdict.status = Status::Inconclusive;
      verdict.evidence = verdict.trail;
    }
  }
};

ComplexMatrix pull_map(const ComplexMatrix& isometry, const ComplexMatrix& filter) {
  return isometry * filter.inverse();
}

/// Mixed-marginal construction on an arbitrary (not necessarily normal)
/// representative, mapped back through `map_a`, `map_b`.
void try_mixing(Pipeline& pl, const BipartiteDecomposed& state, const ComplexMatrix& map_a,
                const ComplexMatrix& map_b, const std::string& source) {
  if (state.dim_a < 2 || state.dim_b < 2) return;
  if (auto dec = decompose::corollary2_with_marginals(state)) pl.offer(*dec, map_a, map_b, source);
}

void horn_diagnostic(Pipeline& pl, const BipartiteDecomposed& z) {
  const int N = z.dim_a;
  const int M = z.dim_b;
  const decompose::FactorizationFrame frame = decompose::make_frame(z.corr);
  const int L = frame.L;
  if (L < 2 || L > pl.tol.horn_max_L) return;
  const double ratio = radii(N).outer / radii(M).outer;
  const RealVector alpha = (frame.tau * ratio).cwiseSqrt();
  const RealVector beta = (frame.tau / ratio).cwiseSqrt();
  const horn::ProductReport report = horn::check_product_inequalities(frame.tau, alpha, beta);
  CriterionResult c;
  c.name = "horn_diagnostic";
  c.passed = report.feasible && report.determinant_holds;
  c.value = report.worst_margin;
  c.margin = std::isfinite(report.worst_margin) ? -report.worst_margin : 0.0;
  std::ostringstream os;
  os << "L = " << L << ", diagonal split alpha_i beta_i = tau_i, " << report.violated.size()
     << " violated inequalities, norm budget " << alpha.squaredNorm() << " of " << radii(N).outer * radii(N).outer;
  c.detail = os.str();
  pl.record(c);
}

void family_attempts(Pipeline& pl, const BipartiteDecomposed& z, const ComplexMatrix& map_a,
                     const ComplexMatrix& map_b) {
  const int N = z.dim_a;
  if (N != z.dim_b || z.corr.rows() == 0) return;
  const int D = static_cast<int>(z.corr.rows());
  const double n = N;
  RealVector sign = RealVector::Ones(D);
  for (int k : antisymmetric_indices(shared_basis(N))) sign[k] = -1.0;

  auto matches = [&](const RealVector& diag, double c) {
    const RealMatrix target = (c * diag).asDiagonal();
    return (z.corr - target).cwiseAbs().maxCoeff() <= pl.tol.family * std::max(1.0, std::abs(c));
  };

  const double c_w = z.corr.trace() / D;
  const double c_i = z.corr.diagonal().dot(sign) / D;
  std::optional<decompose::FamilyOutcome> outcome;
  std::string family;
  double parameter = 0.0;
  try {
    if (matches(RealVector::Ones(D), c_w)) {
      family = "werner_family";
      parameter = (c_w * n * (n * n - 1.0) / 2.0 + 1.0) / n;
      if (parameter >= -1.0 - 1e-12 && parameter <= 1.0 + 1e-12) {
        outcome = decompose::werner_decompose(N, std::clamp(parameter, -1.0, 1.0), pl.tol.seed);
      }
    } else if (matches(sign, c_i)) {
      family = "isotropic_family";
      parameter = c_i * n / 2.0;
      outcome = decompose::isotropic_decompose(N, parameter, pl.tol.seed);
    }
  } catch (const Error& e) {
    CriterionResult c;
    c.name = family;
    c.detail = e.what();
    pl.record(c);
    return;
  }
  if (!outcome) return;

  CriterionResult c;
  c.name = family;
  std::ostringstream os;
  os << (family == "werner_family" ? "phi = " : "p = ") << parameter << "; " << outcome->note;
  c.detail = os.str();
  c.value = parameter;
  switch (outcome->kind) {
    case decompose::FamilyOutcome::Kind::Entangled:
      c.necessary = true;
      c.bound = family == "werner_family" ? 0.0 : 1.0 / (n + 1.0);
      c.margin = family == "werner_family" ? -parameter : parameter - c.bound;
      c.passed = false;
      pl.record(c);
      break;
    case decompose::FamilyOutcome::Kind::Decomposed:
      c.passed = true;
      pl.record(c);
      pl.offer(*outcome->decomposition, map_a, map_b, family);
      break;
    case decompose::FamilyOutcome::Kind::NotDecomposedHere:
      pl.record(c);
      break;
  }
}

/// Two-qubit rule on a normal-form state.
void qubit_stage(Pipeline& pl, const BipartiteDecomposed& z, const ComplexMatrix& map_a,
                 const ComplexMatrix& map_b) {
  pl.record(necessary_kyfan(z, pl.tol));
  const double kf = kyfan_norm(z.corr);
  CriterionResult c = make_result("two_qubit", kf, 1.0, pl.tol.kyfan_slack, true);
  c.detail = "sum of singular values in normal form";
  pl.record(c);
  if (!c.passed) return;
  if (auto dec = decompose::corollary2_with_marginals(z)) {
    pl.offer(*dec, map_a, map_b, "two_qubit");
  } else {
    BipartiteDecomposed centred = z;
    centred.a = BlochVector::zero(2);
    centred.b = BlochVector::zero(2);
    pl.offer(decompose::corollary2_construct(decompose::make_frame(centred.corr), 2, 2), map_a, map_b,
             "two_qubit");
  }
}

void general_stage(Pipeline& pl, const BipartiteDecomposed& z, const ComplexMatrix& map_a,
                   const ComplexMatrix& map_b) {
  pl.record(necessary_kyfan(z, pl.tol));
  SufficientResult suff = sufficient_kyfan(z, pl.tol);
  pl.record(suff.criterion);
  if (suff.decomposition) pl.offer(*suff.decomposition, map_a, map_b, "kyfan_sufficient");
  if (!pl.candidate) family_attempts(pl, z, map_a, map_b);
  if (!pl.candidate) horn_diagnostic(pl, z);
}

Verdict run(const BipartiteDecomposed& d, const Tolerances& tol, bool qubits_only) {
  Pipeline pl{d, tol, {}, std::nullopt, {}};
  pl.record(ppt_check(d, tol));

  const SupportProjection sp = project_to_support_detailed(d);
  const int n = sp.state.dim_a;
  const int m = sp.state.dim_b;
  if (n == 1 || m == 1) {
    CriterionResult c;
    c.name = "trivial_factor";
    c.passed = true;
    c.detail = "a pure marginal forces a product state";
    pl.record(c);
    SeparableDecomposition dec;
    dec.dim_a = d.dim_a;
    dec.dim_b = d.dim_b;
    dec.entries.push_back({1.0, d.a, d.b});
    pl.offer(dec, ComplexMatrix::Identity(d.dim_a, d.dim_a), ComplexMatrix::Identity(d.dim_b, d.dim_b),
             "trivial_factor");
    pl.verdict.normal_form_converged = true;
    pl.finish();
    return std::move(pl.verdict);
  }

  const NormalFormResult nf = normal_form(sp.state, tol.normal_form_max_iter, tol.normal_form_tol);
  pl.verdict.normal_form_converged = nf.converged;
  pl.verdict.normal_form_iterations = nf.iterations;
  {
    const double defect = std::max(nf.state.a.norm(), nf.state.b.norm());
    CriterionResult c = make_result("normal_form", defect, tol.normal_form_tol, 0.0, false);
    c.passed = nf.converged;
    c.detail = std::to_string(nf.iterations) + " iterations";
    pl.record(c);
  }
  const ComplexMatrix map_a = pull_map(sp.isometry_a, nf.filter_a);
  const ComplexMatrix map_b = pull_map(sp.isometry_b, nf.filter_b);

  if (nf.converged) {
    if (n == 2 && m == 2) {
      qubit_stage(pl, nf.state, map_a, map_b);
    } else if (!qubits_only) {
      general_stage(pl, nf.state, map_a, map_b);
    }
  } else {
    try_mixing(pl, nf.state, map_a, map_b, "marginal_mixing");
    try_mixing(pl, sp.state, sp.isometry_a, sp.isometry_b, "marginal_mixing_unfiltered");
  }
  pl.finish();
  return std::move(pl.verdict);
}

template <typename Fn>
BatchItem guarded(Fn&& fn) {
  BatchItem item;
  try {
    item.verdict = fn();
  } catch (const Error& e) {
    item.error = e.code();
    item.message = e.what();
  }
  return item;
}

}  // namespace

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Separable:
      return "Separable";
    case Status::Entangled:
      return "Entangled";
    case Status::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Tolerances Tolerances::from_env() {
  Tolerances t;
  if (const char* env = std::getenv("SEP_HORN_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v >= 0.0) t.psd = v;
  }
  return t;
}

double kyfan_norm(const RealMatrix& corr) {
  if (corr.size() == 0) return 0.0;
  return linalg::singular_values(corr).sum();
}

CriterionResult necessary_kyfan(const BipartiteDecomposed& d, const Tolerances& tol) {
  require_normal(d, tol);
  const double ra = radii(d.dim_a).outer;
  const double rb = radii(d.dim_b).outer;
  CriterionResult c = make_result("kyfan_necessary", kyfan_norm(d.corr), ra * rb, tol.kyfan_slack, true);
  c.detail = "Ky Fan norm against the product of outer radii";
  return c;
}

SufficientResult sufficient_kyfan(const BipartiteDecomposed& d, const Tolerances& tol) {
  require_normal(d, tol);
  SufficientResult out;
  out.criterion = make_result("kyfan_sufficient", kyfan_norm(d.corr), sufficient_bound(d.dim_a, d.dim_b),
                              tol.kyfan_slack, false);
  out.criterion.detail = "Ky Fan norm against the inner-ball bound";
  if (!out.criterion.passed) return out;
  out.decomposition = decompose::corollary2_with_marginals(d);
  if (!out.decomposition) {
    out.decomposition = decompose::corollary2_construct(decompose::make_frame(d.corr), d.dim_a, d.dim_b);
  }
  return out;
}

CriterionResult ppt_check(const BipartiteDecomposed& d, const Tolerances& tol) {
  const double lowest = linalg::eigvalsh(compose_state(partial_transpose(d))).minCoeff();
  CriterionResult c = make_result("ppt", -lowest, tol.psd, 0.0, true);
  c.detail = "minimum eigenvalue of the partial transpose " + std::to_string(lowest);
  return c;
}

Verdict two_qubit_decide(const BipartiteDecomposed& d, const Tolerances& tol) {
  if (d.dim_a != 2 || d.dim_b != 2) {
    throw Error(ErrorCode::DimensionMismatch, "two_qubit_decide needs a 2 x 2 state");
  }
  return run(d, tol, true);
}

Verdict analyze(const BipartiteDecomposed& d, const Tolerances& tol) { return run(d, tol, false); }

Verdict analyze(const ComplexMatrix& rho, int N, int M, const Tolerances& tol) {
  return analyze(decompose_state(rho, N, M), tol);
}

std::vector<BatchItem> analyze_batch(const std::vector<ComplexMatrix>& states, int N, int M,
                                     const Tolerances& tol) {
  std::vector<BatchItem> out(states.size());
  const auto count = static_cast<std::ptrdiff_t>(states.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = guarded([&] { return analyze(states[i], N, M, tol); });
  }
  return out;
}

namespace serial {

std::vector<BatchItem> analyze_batch(const std::vector<ComplexMatrix>& states, int N, int M,
                                     const Tolerances& tol) {
  std::vector<BatchItem> out;
  out.reserve(states.size());
  for (const auto& rho : states) out.push_back(guarded([&] { return analyze(rho, N, M, tol); }));
  return out;
}

}  // namespace serial

}  // namespace sephorn::criteria
