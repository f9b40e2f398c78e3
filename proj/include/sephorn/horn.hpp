#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include "sephorn/linalg.hpp"

namespace sephorn::horn {

/// Strictly increasing, 1-based indices.
using IndexSet = std::vector<int>;

struct IndexTriple {
  IndexSet I;
  IndexSet J;
  IndexSet K;

  auto operator<=>(const IndexTriple&) const = default;
};

/// T_r^n, lexicographically ordered by (I, J, K).
struct TripleSet {
  int n = 0;
  int r = 0;
  std::vector<IndexTriple> triples;
};

inline constexpr int kMaxN = 16;
inline constexpr double kSlack = 1e-9;

/// (i_r - r, i_{r-1} - (r-1), ..., i_1 - 1), weakly decreasing.
std::vector<int> partition_of(const IndexSet& I);

/// Horn's inductive procedure. Results are memoized; concurrent callers are
/// safe. Throws BadCardinality unless 1 <= r < n, CapExceeded for n > 16.
const TripleSet& triple_set(int n, int r);

/// T_r^n for r = 1 .. n-1.
std::vector<TripleSet> all_triples(int n);

/// Checks one candidate against every (F, G, H) in T_p^r, p < r. `lower`
/// must hold T_p^r at index p - 1.
bool admissible(const IndexTriple& t, const std::vector<const TripleSet*>& lower);

/// "r I:{i1,i2} J:{...} K:{...}"
std::string format_triple(const IndexTriple& t);
void write_triple_set(std::ostream& os, const TripleSet& set);

struct ProductReport {
  bool feasible = true;
  /// min over inequalities of log(rhs) - log(lhs); +inf when nothing binds.
  double worst_margin = INFINITY;
  std::vector<IndexTriple> violated;
  /// Full-determinant relation prod tau = prod alpha*beta. Checked as an
  /// equality when every value is strictly positive, otherwise as the
  /// one-sided bound prod tau <= prod alpha*beta.
  bool determinant_is_equality = false;
  bool determinant_holds = true;
  double determinant_log_gap = 0.0;
};

/// Evaluates prod_K tau <= prod_I alpha * prod_J beta for every triple of
/// T_r^L, r < L, in the log domain (log 0 = -inf). Sequences must share
/// length L, be non-negative and non-increasing. Parallel over triples.
ProductReport check_product_inequalities(const RealVector& tau, const RealVector& alpha,
                                         const RealVector& beta, double slack = kSlack);

/// True iff the inequalities hold and the determinant relation holds.
bool theorem2_feasible(const RealVector& tau, const RealVector& alpha, const RealVector& beta,
                       double slack = kSlack);

struct AdditiveReport {
  bool feasible = true;
  double worst_margin = INFINITY;
  bool trace_holds = true;
  std::vector<IndexTriple> violated;
};

/// Additive (eigenvalue) form: sum_K gamma <= sum_I alpha + sum_J beta for
/// all triples, and equality of the full sums. Inputs descending.
AdditiveReport check_additive_inequalities(const RealVector& gamma, const RealVector& alpha,
                                           const RealVector& beta, double slack = kSlack);

namespace serial {

/// Reference enumeration: single-threaded, uncached, no pruning.
TripleSet triple_set(int n, int r);

ProductReport check_product_inequalities(const RealVector& tau, const RealVector& alpha,
                                         const RealVector& beta, double slack = kSlack);

}  // namespace serial

}  // namespace sephorn::horn
