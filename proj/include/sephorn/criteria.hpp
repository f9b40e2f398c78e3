#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sephorn/decompose.hpp"
#include "sephorn/separable.hpp"

namespace sephorn::criteria {

enum class Status { Separable, Entangled, Inconclusive };

std::string_view to_string(Status s) noexcept;

/// Outcome of one test. `margin` is the signed excess over the criterion's
/// bound: margin <= 0 means the tested condition holds, margin > 0 means it
/// is violated by that amount.
struct CriterionResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  /// Failing it certifies entanglement (as opposed to a sufficient test).
  bool necessary = false;
  std::string detail;
};

using Evidence = std::variant<SeparableDecomposition, CriterionResult, std::vector<CriterionResult>>;

struct Verdict {
  Status status = Status::Inconclusive;
  /// Decomposition when Separable, the violated criterion when Entangled,
  /// the full list otherwise.
  Evidence evidence = std::vector<CriterionResult>{};
  /// Every criterion evaluated, in evaluation order.
  std::vector<CriterionResult> trail;
  bool normal_form_converged = false;
  int normal_form_iterations = 0;

  const SeparableDecomposition* decomposition() const { return std::get_if<SeparableDecomposition>(&evidence); }
  const CriterionResult* violated() const { return std::get_if<CriterionResult>(&evidence); }
};

struct Tolerances {
  double psd = kPsdTol;
  double kyfan_slack = 1e-9;
  /// |a|, |b| below this count as normal form.
  double normal = 1e-8;
  double normal_form_tol = kNormalFormTol;
  int normal_form_max_iter = kNormalFormMaxIter;
  double family = 1e-9;
  VerifyTolerances verify{};
  std::uint64_t seed = 0;
  /// Largest L for which the Horn diagnostic is evaluated.
  int horn_max_L = 9;

  /// Defaults with SEP_HORN_TOL (if set and numeric) replacing psd.
  static Tolerances from_env();
};

double kyfan_norm(const RealMatrix& corr);

/// ||corr||_KF <= sqrt(R_A^2 R_B^2) with the outer radii. Throws
/// NotNormalForm if |a| or |b| >= tol.normal.
CriterionResult necessary_kyfan(const BipartiteDecomposed& d, const Tolerances& tol = {});

struct SufficientResult {
  CriterionResult criterion;
  std::optional<SeparableDecomposition> decomposition;
};

/// ||corr||_KF <= 2/sqrt(NM(N-1)(M-1)); builds the explicit decomposition
/// when it holds. Throws NotNormalForm.
SufficientResult sufficient_kyfan(const BipartiteDecomposed& d, const Tolerances& tol = {});

/// min eig of the partial transpose >= -tol.psd.
CriterionResult ppt_check(const BipartiteDecomposed& d, const Tolerances& tol = {});

/// Exact decision for two qubits: filter to normal form, then Separable iff
/// the Ky Fan norm is at most 1. Throws DimensionMismatch unless 2 x 2.
Verdict two_qubit_decide(const BipartiteDecomposed& d, const Tolerances& tol = {});

/// Full pipeline. Soundness: Separable only with a decomposition verified
/// against `d` itself, Entangled only through a violated necessary test.
Verdict analyze(const BipartiteDecomposed& d, const Tolerances& tol = {});
Verdict analyze(const ComplexMatrix& rho, int N, int M, const Tolerances& tol = {});

struct BatchItem {
  std::optional<Verdict> verdict;
  std::optional<ErrorCode> error;
  std::string message;
};

/// Independent analyses in parallel; failures are captured per item.
std::vector<BatchItem> analyze_batch(const std::vector<ComplexMatrix>& states, int N, int M,
                                     const Tolerances& tol = {});

namespace serial {

std::vector<BatchItem> analyze_batch(const std::vector<ComplexMatrix>& states, int N, int M,
                                     const Tolerances& tol = {});

}  // namespace serial

}  // namespace sephorn::criteria
