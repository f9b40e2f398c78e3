#include "sephorn/horn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

#include <omp.h>

namespace sephorn::horn {
namespace {

void check_cardinality(int n, int r) {
  if (n > kMaxN) {
    throw Error(ErrorCode::CapExceeded,
                "triple sets are capped at n <= " + std::to_string(kMaxN) + ", got n = " + std::to_string(n));
  }
  if (r < 1 || r >= n) {
    throw Error(ErrorCode::BadCardinality,
                "need 1 <= r < n, got n = " + std::to_string(n) + ", r = " + std::to_string(r));
  }
}

std::vector<IndexSet> combinations(int n, int r) {
  std::vector<IndexSet> out;
  IndexSet current(r);
  std::iota(current.begin(), current.end(), 1);
  for (;;) {
    out.push_back(current);
    int pos = r - 1;
    while (pos >= 0 && current[pos] == n - r + pos + 1) --pos;
    if (pos < 0) break;
    ++current[pos];
    for (int q = pos + 1; q < r; ++q) current[q] = current[q - 1] + 1;
  }
  return out;
}

int sum_of(const IndexSet& s) { return std::accumulate(s.begin(), s.end(), 0); }

std::vector<const IndexTriple*> flatten(const std::vector<TripleSet>& sets) {
  std::vector<const IndexTriple*> flat;
  for (const auto& set : sets)
    for (const auto& t : set.triples) flat.push_back(&t);
  return flat;
}

double log_sum(const RealVector& v, const IndexSet& idx) {
  double s = 0.0;
  for (int i : idx) s += std::log(v[i - 1]);
  return s;
}

/// log(rhs) - log(lhs) with the conventions of log 0 = -inf.
double log_margin(double lhs, double rhs) {
  if (lhs == -INFINITY) return INFINITY;
  if (rhs == -INFINITY) return -INFINITY;
  return rhs - lhs;
}

void validate_sequences(const RealVector& tau, const RealVector& alpha, const RealVector& beta) {
  if (tau.size() != alpha.size() || tau.size() != beta.size()) {
    throw Error(ErrorCode::LengthMismatch, "tau, alpha, beta must share a length");
  }
  for (const RealVector* v : {&tau, &alpha, &beta}) {
    const double scale = v->size() ? std::max(1.0, v->cwiseAbs().maxCoeff()) : 1.0;
    for (Eigen::Index i = 0; i < v->size(); ++i) {
      if (!((*v)[i] >= 0.0)) throw Error(ErrorCode::NotSorted, "sequences must be non-negative");
      if (i > 0 && (*v)[i] > (*v)[i - 1] + 1e-12 * scale) {
        throw Error(ErrorCode::NotSorted, "sequences must be non-increasing");
      }
    }
  }
}

void fill_determinant(ProductReport& report, const RealVector& tau, const RealVector& alpha,
                      const RealVector& beta, double slack) {
  const bool positive = (tau.array() > 0.0).all() && (alpha.array() > 0.0).all() && (beta.array() > 0.0).all();
  double lt = 0.0;
  double lab = 0.0;
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    lt += std::log(tau[i]);
    lab += std::log(alpha[i]) + std::log(beta[i]);
  }
  report.determinant_is_equality = positive;
  if (positive) {
    report.determinant_log_gap = lab - lt;
    report.determinant_holds = std::abs(lab - lt) <= slack * std::max<double>(1.0, tau.size());
  } else {
    report.determinant_log_gap = log_margin(lt, lab);
    report.determinant_holds = report.determinant_log_gap >= -slack;
  }
}

struct Memo {
  std::mutex mutex;
  std::map<std::pair<int, int>, std::unique_ptr<const TripleSet>> sets;
};

Memo& memo() {
  static Memo m;
  return m;
}

}  // namespace

std::vector<int> partition_of(const IndexSet& I) {
  const int r = static_cast<int>(I.size());
  std::vector<int> out(r);
  for (int q = 0; q < r; ++q) out[q] = I[r - 1 - q] - (r - q);
  return out;
}

bool admissible(const IndexTriple& t, const std::vector<const TripleSet*>& lower) {
  for (std::size_t idx = 0; idx < lower.size(); ++idx) {
    const int p = static_cast<int>(idx) + 1;
    const int offset = p * (p + 1) / 2;
    for (const IndexTriple& fgh : lower[idx]->triples) {
      int lhs = 0;
      for (int f : fgh.I) lhs += t.I[f - 1];
      for (int g : fgh.J) lhs += t.J[g - 1];
      int rhs = offset;
      for (int h : fgh.K) rhs += t.K[h - 1];
      if (lhs > rhs) return false;
    }
  }
  return true;
}

const TripleSet& triple_set(int n, int r) {
  check_cardinality(n, r);
  Memo& m = memo();
  {
    std::lock_guard lock(m.mutex);
    const auto it = m.sets.find({n, r});
    if (it != m.sets.end()) return *it->second;
  }

  std::vector<const TripleSet*> lower;
  for (int p = 1; p < r; ++p) lower.push_back(&triple_set(r, p));

  const std::vector<IndexSet> subsets = combinations(n, r);
  std::map<int, std::vector<const IndexSet*>> by_sum;
  for (const auto& s : subsets) by_sum[sum_of(s)].push_back(&s);
  const int offset = r * (r + 1) / 2;

  std::vector<std::vector<IndexTriple>> per_i(subsets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(subsets.size()); ++ii) {
    const IndexSet& I = subsets[ii];
    const int si = sum_of(I);
    for (const IndexSet& J : subsets) {
      const auto bucket = by_sum.find(si + sum_of(J) - offset);
      if (bucket == by_sum.end()) continue;
      for (const IndexSet* K : bucket->second) {
        IndexTriple t{I, J, *K};
        if (admissible(t, lower)) per_i[ii].push_back(std::move(t));
      }
    }
  }

  auto set = std::make_unique<TripleSet>();
  set->n = n;
  set->r = r;
  for (auto& chunk : per_i)
    for (auto& t : chunk) set->triples.push_back(std::move(t));

  std::lock_guard lock(m.mutex);
  auto& slot = m.sets[{n, r}];
  if (!slot) slot = std::move(set);
  return *slot;
}

std::vector<TripleSet> all_triples(int n) {
  if (n < 2) throw Error(ErrorCode::BadCardinality, "all_triples needs n >= 2");
  std::vector<TripleSet> out;
  for (int r = 1; r < n; ++r) out.push_back(triple_set(n, r));
  return out;
}

std::string format_triple(const IndexTriple& t) {
  std::ostringstream os;
  auto put = [&os](const char* label, const IndexSet& s) {
    os << ' ' << label << ":{";
    for (std::size_t q = 0; q < s.size(); ++q) os << (q ? "," : "") << s[q];
    os << '}';
  };
  os << t.I.size();
  put("I", t.I);
  put("J", t.J);
  put("K", t.K);
  return os.str();
}

void write_triple_set(std::ostream& os, const TripleSet& set) {
  for (const auto& t : set.triples) os << format_triple(t) << '\n';
}

ProductReport check_product_inequalities(const RealVector& tau, const RealVector& alpha,
                                         const RealVector& beta, double slack) {
  validate_sequences(tau, alpha, beta);
  ProductReport report;
  const int L = static_cast<int>(tau.size());
  fill_determinant(report, tau, alpha, beta, slack);
  if (L < 2) return report;

  const std::vector<TripleSet> sets = all_triples(L);
  const std::vector<const IndexTriple*> flat = flatten(sets);
  const auto count = static_cast<std::ptrdiff_t>(flat.size());

  std::vector<char> bad(flat.size(), 0);
  double worst = INFINITY;
#pragma omp parallel for reduction(min : worst)
  for (std::ptrdiff_t q = 0; q < count; ++q) {
    const IndexTriple& t = *flat[q];
    const double margin = log_margin(log_sum(tau, t.K), log_sum(alpha, t.I) + log_sum(beta, t.J));
    worst = std::min(worst, margin);
    if (margin < -slack) bad[q] = 1;
  }
  report.worst_margin = worst;
  for (std::ptrdiff_t q = 0; q < count; ++q) {
    if (bad[q]) report.violated.push_back(*flat[q]);
  }
  report.feasible = report.violated.empty();
  return report;
}

bool theorem2_feasible(const RealVector& tau, const RealVector& alpha, const RealVector& beta, double slack) {
  const ProductReport report = check_product_inequalities(tau, alpha, beta, slack);
  return report.feasible && report.determinant_holds;
}

AdditiveReport check_additive_inequalities(const RealVector& gamma, const RealVector& alpha,
                                           const RealVector& beta, double slack) {
  if (gamma.size() != alpha.size() || gamma.size() != beta.size()) {
    throw Error(ErrorCode::LengthMismatch, "gamma, alpha, beta must share a length");
  }
  AdditiveReport report;
  const double scale = 1.0 + gamma.cwiseAbs().sum() + alpha.cwiseAbs().sum() + beta.cwiseAbs().sum();
  report.trace_holds = std::abs(gamma.sum() - alpha.sum() - beta.sum()) <= slack * scale;
  const int n = static_cast<int>(gamma.size());
  if (n < 2) return report;
  for (const auto& set : all_triples(n)) {
    for (const auto& t : set.triples) {
      double lhs = 0.0;
      double rhs = 0.0;
      for (int k : t.K) lhs += gamma[k - 1];
      for (int i : t.I) rhs += alpha[i - 1];
      for (int j : t.J) rhs += beta[j - 1];
      report.worst_margin = std::min(report.worst_margin, rhs - lhs);
      if (rhs - lhs < -slack * scale) report.violated.push_back(t);
    }
  }
  report.feasible = report.violated.empty();
  return report;
}

namespace serial {

namespace {

TripleSet build(int n, int r, std::map<std::pair<int, int>, TripleSet>& cache) {
  if (const auto it = cache.find({n, r}); it != cache.end()) return it->second;
  std::vector<TripleSet> lower_sets;
  for (int p = 1; p < r; ++p) lower_sets.push_back(build(r, p, cache));
  std::vector<const TripleSet*> lower;
  for (const auto& s : lower_sets) lower.push_back(&s);

  TripleSet out;
  out.n = n;
  out.r = r;
  const std::vector<IndexSet> subsets = combinations(n, r);
  const int offset = r * (r + 1) / 2;
  for (const auto& I : subsets)
    for (const auto& J : subsets)
      for (const auto& K : subsets) {
        if (sum_of(I) + sum_of(J) != sum_of(K) + offset) continue;
        IndexTriple t{I, J, K};
        if (admissible(t, lower)) out.triples.push_back(std::move(t));
      }
  cache[{n, r}] = out;
  return out;
}

}  // namespace

TripleSet triple_set(int n, int r) {
  check_cardinality(n, r);
  std::map<std::pair<int, int>, TripleSet> cache;
  return build(n, r, cache);
}

ProductReport check_product_inequalities(const RealVector& tau, const RealVector& alpha,
                                         const RealVector& beta, double slack) {
  validate_sequences(tau, alpha, beta);
  ProductReport report;
  const int L = static_cast<int>(tau.size());
  fill_determinant(report, tau, alpha, beta, slack);
  for (int r = 1; r < L; ++r) {
    for (const auto& t : serial::triple_set(L, r).triples) {
      const double margin = log_margin(log_sum(tau, t.K), log_sum(alpha, t.I) + log_sum(beta, t.J));
      report.worst_margin = std::min(report.worst_margin, margin);
      if (margin < -slack) report.violated.push_back(t);
    }
  }
  report.feasible = report.violated.empty();
  return report;
}

}  // namespace serial

}  // namespace sephorn::horn
