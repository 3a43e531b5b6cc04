#pragma once

// Decision procedure on top of the rejection engine. UNSAT when every cube
// of some COVA set (the 8 sign patterns over a variable triple) is rejected;
// otherwise one surviving cube per triple is chosen and their union is
// checked against the formula. Nothing unverified is reported as SAT.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "kra/cnf.hpp"
#include "kra/engine.hpp"

namespace kra {

struct CovaStatus {
  VarTriple triple;
  std::vector<Cube> survivors;
};

enum class ExtractionOrder {
  FirstOccurrence,  // clause order of first occurrence, then lexicographic
  Lexicographic,
};

struct SolveConfig {
  EngineConfig engine;
  bool all_triples = false;
  ExtractionOrder extraction_order = ExtractionOrder::FirstOccurrence;
};

using UnsatWitness = std::variant<VarTriple, EmptyCube>;

struct Unsat {
  UnsatWitness witness;
  std::vector<Derivation> proof;
};

struct Sat {
  Assignment assignment;
};

enum class UnknownReason { ExtractionConflict, VerificationFailed, IterationCap };

constexpr std::string_view to_string(UnknownReason r) {
  switch (r) {
    case UnknownReason::ExtractionConflict: return "ExtractionConflict";
    case UnknownReason::VerificationFailed: return "VerificationFailed";
    case UnknownReason::IterationCap: return "IterationCap";
  }
  return "?";
}

struct Unknown {
  UnknownReason reason;
  std::optional<VarTriple> triple;  // offending triple for ExtractionConflict
};

using Verdict = std::variant<Unsat, Sat, Unknown>;

struct ExtractionConflict {
  VarTriple triple;
};

/// Cube `c` is rejected directly, or through a stored width-1/2 sub-cube.
inline bool rejected_or_subsumed(const RejectionStore& store, const Cube& c) {
  if (store.contains(c)) return true;
  for (std::size_t k = 1; k <= 2 && k < c.width(); ++k) {
    for (const Cube& sub : sub_cubes(c, k)) {
      if (store.contains(sub)) return true;
    }
  }
  return false;
}

inline CovaStatus cova_status(const RejectionStore& store, const VarTriple& t) {
  CovaStatus st{t, {}};
  for (const Cube& member : cova_set(t)) {
    if (!rejected_or_subsumed(store, member)) st.survivors.push_back(member);
  }
  return st;
}

inline std::vector<VarTriple> extraction_triples(const RejectionStore& store, const SolveConfig& cfg) {
  std::vector<VarTriple> order = store.universe().triples();
  if (cfg.extraction_order == ExtractionOrder::Lexicographic) std::sort(order.begin(), order.end());
  return order;
}

/// First triple with no survivors, else the empty cube if it was derived.
inline std::optional<UnsatWitness> check_unsat(const RejectionStore& store, const SolveConfig& cfg) {
  for (const VarTriple& t : extraction_triples(store, cfg)) {
    if (cova_status(store, t).survivors.empty()) return t;
  }
  if (store.empty_derived()) return EmptyCube{};
  return std::nullopt;
}

/// Greedy union of survivors: per triple, commit the first survivor that
/// agrees with what is already committed. Uncommitted variables are false.
inline std::variant<Assignment, ExtractionConflict> extract_assignment(const RejectionStore& store, const Formula& f,
                                                                       const SolveConfig& cfg) {
  // 0 = free, 1 = true, 2 = false
  std::vector<std::uint8_t> committed(f.n + 1, 0);
  for (const VarTriple& t : extraction_triples(store, cfg)) {
    const CovaStatus st = cova_status(store, t);
    auto consistent = [&](const Cube& c) {
      return std::all_of(c.begin(), c.end(), [&](Literal l) {
        auto v = committed[l.var()];
        return v == 0 || (v == 1) == l.positive();
      });
    };
    auto pick = std::find_if(st.survivors.begin(), st.survivors.end(), consistent);
    if (pick == st.survivors.end()) return ExtractionConflict{t};
    for (Literal l : *pick) committed[l.var()] = l.positive() ? 1 : 2;
  }
  Assignment a(f.n);
  for (Var v = 1; v <= f.n; ++v) a.set(v, committed[v] == 1);
  return a;
}

namespace detail {

inline void add_ancestry(const RejectionStore& store, DerivationId root, std::set<DerivationId>& out) {
  std::vector<DerivationId> todo{root};
  while (!todo.empty()) {
    DerivationId id = todo.back();
    todo.pop_back();
    if (!out.insert(id).second) continue;
    for (DerivationId p : store.derivation(id).parents) todo.push_back(p);
  }
}

}  // namespace detail

/// Derivations needed to justify the witness, in log order.
inline std::vector<Derivation> proof_slice(const RejectionStore& store, const UnsatWitness& witness) {
  std::set<DerivationId> ids;
  if (std::holds_alternative<EmptyCube>(witness)) {
    if (auto e = store.empty_id()) detail::add_ancestry(store, *e, ids);
  } else {
    for (const Cube& member : cova_set(std::get<VarTriple>(witness))) {
      std::optional<DerivationId> why = store.find(member);
      for (std::size_t k = 1; k <= 2 && !why; ++k) {
        for (const Cube& sub : sub_cubes(member, k)) {
          if ((why = store.find(sub))) break;
        }
      }
      if (why) detail::add_ancestry(store, *why, ids);
    }
  }
  std::vector<Derivation> out;
  for (DerivationId id : ids) out.push_back(store.derivation(id));
  return out;
}

struct Decision {
  Verdict verdict;
  FixpointReport report;
  RejectionStore store;
  /// COVA exhaustion was already visible among the seeds.
  bool decided_at_seed = false;
};

inline Decision decide(const Formula& f, const SolveConfig& cfg = {}) {
  Decision out{Unknown{UnknownReason::IterationCap, std::nullopt}, {}, seed_rejections(f, cfg.all_triples), false};
  RejectionStore& store = out.store;

  if (auto w = check_unsat(store, cfg)) {
    out.decided_at_seed = true;
    out.report.seeds = store.seed_count();
    out.report.reached_fixpoint = store.worklist_empty();
    out.verdict = Unsat{*w, proof_slice(store, *w)};
    return out;
  }

  // The COVA test runs on every iteration, so stop at the first exhausted set.
  EngineConfig engine = cfg.engine;
  engine.stop_on_cova_exhaustion = true;
  try {
    out.report = fixpoint(store, engine);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IterationCapExceeded) throw;
    out.report.seeds = store.seed_count();
    out.report.iterations = store.pops();
    return out;
  }

  if (auto w = check_unsat(store, cfg)) {
    out.verdict = Unsat{*w, proof_slice(store, *w)};
    return out;
  }
  auto extracted = extract_assignment(store, f, cfg);
  if (auto* conflict = std::get_if<ExtractionConflict>(&extracted)) {
    out.verdict = Unknown{UnknownReason::ExtractionConflict, conflict->triple};
    return out;
  }
  Assignment& a = std::get<Assignment>(extracted);
  if (!evaluate(f, a)) {
    out.verdict = Unknown{UnknownReason::VerificationFailed, std::nullopt};
    return out;
  }
  out.verdict = Sat{std::move(a)};
  return out;
}

}  // namespace kra
