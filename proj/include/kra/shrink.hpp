#pragma once

// Delta-debugging style reduction of formulas that trip a predicate.

#include <functional>
#include <map>
#include <vector>

#include "kra/cnf.hpp"
#include "kra/decision.hpp"
#include "kra/error.hpp"
#include "kra/oracle.hpp"

namespace kra {

using FormulaPredicate = std::function<bool(const Formula&)>;

/// Renumbers the variables that occur in f to 1..k, preserving their order.
inline Formula compact_variables(const Formula& f) {
  std::map<Var, Var> rename;
  for (const Clause& c : f.clauses)
    for (Literal l : c) rename.emplace(l.var(), 0);
  Var next = 0;
  for (auto& [from, to] : rename) to = ++next;
  Formula out;
  out.n = next;
  for (const Clause& c : f.clauses) {
    std::array<Literal, 3> lits{};
    for (std::size_t i = 0; i < c.width(); ++i) lits[i] = Literal(rename.at(c[i].var()), c[i].positive());
    out.clauses.push_back(Clause::from_sorted(std::span<const Literal>(lits.data(), c.width())));
  }
  return out;
}

namespace detail {

inline Formula without_range(const Formula& f, std::size_t begin, std::size_t end) {
  Formula out;
  out.n = f.n;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i < begin || i >= end) out.clauses.push_back(f.clauses[i]);
  }
  return out;
}

// Chunked removal, halving the chunk size down to single clauses; the final
// single-clause sweeps repeat until nothing can be removed.
inline Formula remove_clauses(Formula f, const FormulaPredicate& pred) {
  std::size_t chunk = std::max<std::size_t>(1, f.clauses.size() / 2);
  while (true) {
    bool changed = false;
    for (std::size_t start = 0; start < f.clauses.size();) {
      Formula candidate = without_range(f, start, std::min(start + chunk, f.clauses.size()));
      if (pred(candidate)) {
        f = std::move(candidate);
        changed = true;
      } else {
        start += chunk;
      }
    }
    if (chunk > 1) {
      chunk /= 2;
    } else if (!changed) {
      return f;
    }
  }
}

}  // namespace detail

/// Reduces f while pred keeps holding: removes clauses, then compacts the
/// variable numbering. The result is 1-minimal: dropping any single clause
/// falsifies pred.
inline Formula shrink(const Formula& f, const FormulaPredicate& pred) {
  if (!pred(f)) throw Error(ErrorCode::PredicateNotSatisfied, "predicate does not hold on the input");
  Formula cur = detail::remove_clauses(f, pred);
  Formula compact = compact_variables(cur);
  if (compact.n != cur.n && pred(compact)) cur = detail::remove_clauses(std::move(compact), pred);
  return cur;
}

enum class ShrinkPredicate { Unknown, Disagree };

inline bool kra_unknown(const Formula& f, const SolveConfig& cfg) {
  return std::holds_alternative<Unknown>(decide(f, cfg).verdict);
}

/// KRA's verdict differs from the oracle's; UNKNOWN counts as a disagreement.
inline bool kra_disagrees(const Formula& f, const SolveConfig& cfg) {
  const Verdict v = decide(f, cfg).verdict;
  if (std::holds_alternative<Unknown>(v)) return true;
  const bool oracle_sat = f.n <= kBruteForceLimit ? brute_force(f).satisfiable : dpll(f).satisfiable;
  return std::holds_alternative<Sat>(v) != oracle_sat;
}

inline FormulaPredicate make_predicate(ShrinkPredicate p, const SolveConfig& cfg) {
  if (p == ShrinkPredicate::Unknown) return [cfg](const Formula& f) { return kra_unknown(f, cfg); };
  return [cfg](const Formula& f) { return kra_disagrees(f, cfg); };
}

}  // namespace kra
