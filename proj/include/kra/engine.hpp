#pragma once

// Rejection engine: leveled store of rejected cubes (conjunctions no model
// of the formula extends), the rejection rules, and the saturation loop.
//
// Every two-premise rule is one width-bounded resolution step on cubes:
// two rejected cubes that clash on exactly one variable yield the rejected
// union of their remaining literals. classify_rule recovers the rule label
// (2-2CI, 3-3CII, ...) from the premise and conclusion widths. The
// one-premise rules 1-3I and 2-3II are subsumption into width-3 cubes over
// the store's triple universe.

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "kra/cnf.hpp"
#include "kra/error.hpp"
#include "kra/random.hpp"

namespace kra {

enum class RuleId : std::uint8_t {
  Seed,
  R22CI,
  R33CII,
  R13I,
  R23II,
  R23CDD,
  R24CIDD,
  R33CID,
  R34CIID,
  R44CIII,
  R33CDD,
  EmptyResolvent,
};

inline constexpr std::array<RuleId, 12> kAllRules = {
    RuleId::Seed,    RuleId::R22CI,   RuleId::R33CII,  RuleId::R13I,    RuleId::R23II,  RuleId::R23CDD,
    RuleId::R24CIDD, RuleId::R33CID,  RuleId::R34CIID, RuleId::R44CIII, RuleId::R33CDD, RuleId::EmptyResolvent,
};

constexpr std::string_view to_string(RuleId r) {
  switch (r) {
    case RuleId::Seed: return "SEED";
    case RuleId::R22CI: return "R22CI";
    case RuleId::R33CII: return "R33CII";
    case RuleId::R13I: return "R13I";
    case RuleId::R23II: return "R23II";
    case RuleId::R23CDD: return "R23CDD";
    case RuleId::R24CIDD: return "R24CIDD";
    case RuleId::R33CID: return "R33CID";
    case RuleId::R34CIID: return "R34CIID";
    case RuleId::R44CIII: return "R44CIII";
    case RuleId::R33CDD: return "R33CDD";
    case RuleId::EmptyResolvent: return "EMPTY_RESOLVENT";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_string(std::string_view s) {
  for (RuleId r : kAllRules) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

using DerivationId = std::uint32_t;

/// One rejection step. A width-0 conclusion is the empty cube.
struct Derivation {
  DerivationId id = 0;
  Cube conclusion;
  RuleId rule = RuleId::Seed;
  std::vector<DerivationId> parents;
  std::optional<std::size_t> source_clause;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

// ---------------------------------------------------------------------------
// Derivation log text format:
//   <id> <rule> <conclusion-lits> 0 [p <parent-id> ...] [c <clause-index>]

inline void write_derivation(std::ostream& out, const Derivation& d) {
  out << d.id << ' ' << to_string(d.rule);
  for (Literal l : d.conclusion) out << ' ' << l.to_dimacs();
  out << " 0";
  if (!d.parents.empty()) {
    out << " p";
    for (DerivationId p : d.parents) out << ' ' << p;
  }
  if (d.source_clause) out << " c " << *d.source_clause;
  out << '\n';
}

inline void write_log(std::ostream& out, std::span<const Derivation> log) {
  for (const Derivation& d : log) write_derivation(out, d);
}

inline std::string format_log(std::span<const Derivation> log) {
  std::ostringstream out;
  write_log(out, log);
  return out.str();
}

inline Derivation parse_derivation(std::string_view line) {
  std::istringstream in{std::string(line)};
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::SyntaxError, "derivation '" + std::string(line) + "': " + why);
  };
  Derivation d;
  long long id = -1;
  std::string rule;
  if (!(in >> id >> rule) || id < 0) throw fail("expected '<id> <rule>'");
  d.id = static_cast<DerivationId>(id);
  auto r = rule_from_string(rule);
  if (!r) throw fail("unknown rule " + rule);
  d.rule = *r;
  std::vector<Literal> lits;
  int lit = 0;
  while (true) {
    if (!(in >> lit)) throw fail("unterminated conclusion");
    if (lit == 0) break;
    lits.push_back(Literal::from_dimacs(lit));
  }
  if (lits.size() > 4) throw fail("conclusion wider than 4");
  d.conclusion = lits.empty() ? Cube{} : canonicalize_cube(lits);
  std::string tag;
  while (in >> tag) {
    if (tag == "p") {
      long long p;
      while (in >> p) d.parents.push_back(static_cast<DerivationId>(p));
      in.clear();
    } else if (tag == "c") {
      long long c;
      if (!(in >> c) || c < 0) throw fail("bad clause index");
      d.source_clause = static_cast<std::size_t>(c);
    } else {
      throw fail("unexpected token " + tag);
    }
  }
  return d;
}

inline std::vector<Derivation> parse_log(std::istream& in) {
  std::vector<Derivation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    out.push_back(parse_derivation(line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolution on cubes

struct EmptyCube {
  friend bool operator==(EmptyCube, EmptyCube) = default;
};
struct NotApplicable {
  friend bool operator==(NotApplicable, NotApplicable) = default;
};

using ResolveResult = std::variant<Cube, EmptyCube, NotApplicable>;

/// If c1 and c2 clash on exactly one variable, the union of the rest (shared
/// literals merged). NotApplicable on zero or several clashes, or when the
/// union is wider than max_width.
inline ResolveResult resolve_rejected(const Cube& c1, const Cube& c2, std::size_t max_width = 4) {
  std::array<Literal, 8> out{};
  std::size_t n = 0;
  std::size_t clashes = 0;
  std::size_t i = 0, j = 0;
  while (i < c1.width() && j < c2.width()) {
    Literal a = c1[i], b = c2[j];
    if (a.var() < b.var()) {
      out[n++] = a;
      ++i;
    } else if (b.var() < a.var()) {
      out[n++] = b;
      ++j;
    } else {
      if (a == b) {
        out[n++] = a;
      } else if (++clashes > 1) {
        return NotApplicable{};
      }
      ++i;
      ++j;
    }
  }
  for (; i < c1.width(); ++i) out[n++] = c1[i];
  for (; j < c2.width(); ++j) out[n++] = c2[j];
  if (clashes != 1 || n > max_width || n > Cube::capacity) return NotApplicable{};
  if (n == 0) return EmptyCube{};
  return Cube::from_sorted(std::span<const Literal>(out.data(), n));
}

struct RuleClass {
  RuleId id = RuleId::R22CI;
  /// The premise/conclusion shape matches the rule's exact pattern. False for
  /// resolution steps the rule table has no entry for (unit premises, or a
  /// conclusion width other than the rule's), which are filed under the
  /// nearest label.
  bool exact = true;
};

/// Label for a resolution step, from the unordered premise widths and the
/// conclusion width.
inline RuleClass classify_rule(std::size_t w1, std::size_t w2, std::size_t wc) {
  if (w1 > w2) std::swap(w1, w2);
  if (wc == 0) return {RuleId::EmptyResolvent, true};
  if (w1 == 1) {
    static constexpr std::array<RuleId, 5> nearest = {RuleId::EmptyResolvent, RuleId::R22CI, RuleId::R33CII,
                                                      RuleId::R33CID, RuleId::R33CDD};
    return {nearest.at(wc), false};
  }
  if (w1 == 2 && w2 == 2) return {RuleId::R22CI, wc == 1};
  if (w1 == 3 && w2 == 3) {
    if (wc == 2) return {RuleId::R33CII, true};
    if (wc == 3) return {RuleId::R33CID, true};
    return {RuleId::R33CDD, wc == 4};
  }
  if (w1 == 2 && w2 == 3) return {RuleId::R23CDD, wc == 3};
  if (w1 == 2 && w2 == 4) return {RuleId::R24CIDD, wc == 3};
  if (w1 == 3 && w2 == 4) return {RuleId::R34CIID, wc == 3};
  return {RuleId::R44CIII, wc == 3};
}

inline RuleClass classify_rule(const Cube& c1, const Cube& c2, const Cube& conclusion) {
  return classify_rule(c1.width(), c2.width(), conclusion.width());
}

/// Two width-4 premises only ever conclude a width-3 cube (the 4-4CIII shape).
inline bool admissible_resolution(std::size_t w1, std::size_t w2, std::size_t wc) {
  return !(w1 == 4 && w2 == 4 && wc > 3);
}

// ---------------------------------------------------------------------------
// Triple universe

/// Variable triples the subsumption rules and COVA checks range over: the
/// triples of the formula's width-3 clauses in first-occurrence order,
/// optionally followed by every other triple in lexicographic order.
class TripleUniverse {
 public:
  TripleUniverse() = default;

  static TripleUniverse from_formula(const Formula& f, bool all_triples) {
    TripleUniverse u;
    u.by_var_.resize(f.n + 1);
    for (const Clause& c : f.clauses) {
      if (c.width() == 3) u.push(triple_of(c));
    }
    if (all_triples) {
      for (Var a = 1; a <= f.n; ++a)
        for (Var b = a + 1; b <= f.n; ++b)
          for (Var c = b + 1; c <= f.n; ++c) u.push(VarTriple(a, b, c));
    }
    return u;
  }

  const std::vector<VarTriple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool contains(const VarTriple& t) const { return lookup_.count(key(t)) != 0; }
  std::optional<std::uint32_t> index_of(const VarTriple& t) const {
    auto it = lookup_.find(key(t));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Indices into triples() of the triples containing v, ascending.
  std::span<const std::uint32_t> containing(Var v) const {
    if (v >= by_var_.size()) return {};
    return by_var_[v];
  }

 private:
  static std::uint64_t key(const VarTriple& t) {
    return (std::uint64_t{t[0]} << 42) ^ (std::uint64_t{t[1]} << 21) ^ t[2];
  }

  void push(const VarTriple& t) {
    auto idx = static_cast<std::uint32_t>(triples_.size());
    if (!lookup_.emplace(key(t), idx).second) return;
    triples_.push_back(t);
    for (Var v : t.vars()) by_var_[v].push_back(idx);
  }

  std::vector<VarTriple> triples_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
  std::vector<std::vector<std::uint32_t>> by_var_;
};

/// Members of cova_set(t) that contain c (a cube over t's variables), one
/// bit per cova_set position.
inline std::uint8_t cova_members_containing(const VarTriple& t, const Cube& c) {
  std::uint8_t mask = 0;
  for (unsigned pattern = 0; pattern < 8; ++pattern) {
    bool all = true;
    for (Literal l : c) {
      unsigned pos = l.var() == t[0] ? 0 : l.var() == t[1] ? 1 : 2;
      bool negative = (pattern >> (2 - pos)) & 1u;
      all &= negative != l.positive();
    }
    if (all) mask |= static_cast<std::uint8_t>(1u << pattern);
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Store

enum class WorklistOrder { Fifo, Lifo };

struct EngineConfig {
  std::size_t max_width = 4;
  /// Max worklist pops; nullopt means the default bound for n.
  std::optional<std::uint64_t> iteration_cap;
  bool eager_subsumption = true;
  WorklistOrder order = WorklistOrder::Fifo;
  bool stop_on_empty = true;
  /// Also stop as soon as every member of some universe COVA set is rejected.
  bool stop_on_cova_exhaustion = false;

  void validate() const {
    if (max_width != 3 && max_width != 4) throw Error(ErrorCode::InvalidParams, "max_width must be 3 or 4");
  }
};

/// 2n + 4*C(n,2) + 8*C(n,3) + 16*C(n,4): the number of distinct cubes of
/// width 1..4 over n variables.
inline std::uint64_t cube_space_bound(Var n) {
  return 2ull * n + 4 * choose(n, 2) + 8 * choose(n, 3) + 16 * choose(n, 4);
}

class RejectionStore {
 public:
  using Bucket = std::array<std::vector<DerivationId>, 4>;  // by width 1..4

  RejectionStore() = default;
  RejectionStore(Var n, TripleUniverse universe)
      : n_(n), universe_(std::move(universe)), index_(2 * (n + 1)), cova_mask_(universe_.size(), 0) {}

  Var num_vars() const { return n_; }
  const TripleUniverse& universe() const { return universe_; }
  const std::vector<Derivation>& log() const { return log_; }
  const Derivation& derivation(DerivationId id) const { return log_.at(id); }

  bool contains(const Cube& c) const { return ids_.count(c) != 0; }
  std::optional<DerivationId> find(const Cube& c) const {
    auto it = ids_.find(c);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  /// Derivation ids of stored cubes of the given width (1..4), in insertion order.
  std::span<const DerivationId> level(std::size_t width) const { return levels_.at(width - 1); }
  std::vector<Cube> level_cubes(std::size_t width) const {
    std::vector<Cube> out;
    for (DerivationId id : level(width)) out.push_back(log_[id].conclusion);
    return out;
  }
  std::size_t size() const { return ids_.size(); }
  std::size_t seed_count() const { return seeds_; }

  bool empty_derived() const { return empty_id_.has_value(); }
  std::optional<DerivationId> empty_id() const { return empty_id_; }

  /// Stored cubes of the given width containing `l`, in insertion order.
  const std::vector<DerivationId>& with_literal(Literal l, std::size_t width) const {
    return index_.at(l.code())[width - 1];
  }
  /// Stored cubes of width 3 or 4 containing both literals, in insertion order.
  const std::vector<DerivationId>* with_pair(Literal a, Literal b, std::size_t width) const {
    auto it = pairs_.find(pair_key(a, b));
    return it == pairs_.end() ? nullptr : &it->second[width - 3];
  }

  /// Rejected members of cova_set(universe().triples()[i]), directly or via a
  /// width-1/2 sub-cube, as a bit per cova_set position.
  std::uint8_t cova_mask(std::size_t triple_index) const { return cova_mask_.at(triple_index); }
  /// First universe triple (in time) whose COVA set became fully rejected.
  std::optional<std::uint32_t> exhausted_triple() const { return exhausted_; }

  bool worklist_empty() const { return worklist_.empty(); }
  std::uint64_t pops() const { return pops_; }

  /// Records a new rejection. Returns its id, or nullopt if already stored.
  std::optional<DerivationId> add(const Cube& c, RuleId rule, std::vector<DerivationId> parents,
                                  std::optional<std::size_t> source_clause = std::nullopt) {
    const auto id = static_cast<DerivationId>(log_.size());
    if (c.is_empty()) {
      if (empty_id_) return std::nullopt;
      empty_id_ = id;
    } else {
      if (!ids_.emplace(c, id).second) return std::nullopt;
      const std::size_t w = c.width();
      levels_[w - 1].push_back(id);
      for (Literal l : c) index_.at(l.code())[w - 1].push_back(id);
      if (w >= 3) {
        for (std::size_t i = 0; i < w; ++i)
          for (std::size_t j = i + 1; j < w; ++j) pairs_[pair_key(c[i], c[j])][w - 3].push_back(id);
      }
      mark_cova(c);
      worklist_.push_back(id);
    }
    if (rule == RuleId::Seed) ++seeds_;
    log_.push_back(Derivation{id, c, rule, std::move(parents), source_clause});
    return id;
  }

  std::optional<DerivationId> pop(WorklistOrder order) {
    if (worklist_.empty()) return std::nullopt;
    ++pops_;
    DerivationId id;
    if (order == WorklistOrder::Fifo) {
      id = worklist_.front();
      worklist_.pop_front();
    } else {
      id = worklist_.back();
      worklist_.pop_back();
    }
    return id;
  }

 private:
  static std::uint64_t pair_key(Literal a, Literal b) {
    if (b < a) std::swap(a, b);
    return (std::uint64_t{a.code()} << 32) | b.code();
  }

  void mark_cova(const Cube& c) {
    auto mark = [&](std::uint32_t ti) {
      cova_mask_[ti] |= cova_members_containing(universe_.triples()[ti], c);
      if (cova_mask_[ti] == 0xFF && !exhausted_) exhausted_ = ti;
    };
    if (c.width() == 3) {
      if (auto ti = universe_.index_of(triple_of(c))) mark(*ti);
    } else if (c.width() <= 2) {
      for (std::uint32_t ti : universe_.containing(c[0].var())) {
        if (c.width() == 1 || universe_.triples()[ti].contains(c[1].var())) mark(ti);
      }
    }
  }

  Var n_ = 0;
  TripleUniverse universe_;
  std::unordered_map<Cube, DerivationId, CubeHash> ids_;
  std::array<std::vector<DerivationId>, 4> levels_;
  std::vector<Bucket> index_;
  std::unordered_map<std::uint64_t, std::array<std::vector<DerivationId>, 2>> pairs_;
  std::vector<std::uint8_t> cova_mask_;
  std::optional<std::uint32_t> exhausted_;
  std::deque<DerivationId> worklist_;
  std::vector<Derivation> log_;
  std::optional<DerivationId> empty_id_;
  std::size_t seeds_ = 0;
  std::uint64_t pops_ = 0;
};

/// Stores the complement of every clause as a SEED rejection.
inline RejectionStore seed_rejections(const Formula& f, bool all_triples = false) {
  RejectionStore store(f.n, TripleUniverse::from_formula(f, all_triples));
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    store.add(complement_cube(f.clauses[i]), RuleId::Seed, {}, i);
  }
  return store;
}

/// Rules 1-3I / 2-3II: rejects every width-3 superset of a stored width-1 or
/// width-2 cube over the universe triples containing it. Returns the cubes
/// newly added.
inline std::vector<Cube> subsumption_closure(RejectionStore& store, const Cube& newly) {
  std::vector<Cube> added;
  if (newly.width() == 0 || newly.width() > 2) return added;
  auto parent = store.find(newly);
  if (!parent) return added;
  const RuleId rule = newly.width() == 1 ? RuleId::R13I : RuleId::R23II;
  const auto& triples = store.universe().triples();

  for (std::uint32_t ti : store.universe().containing(newly[0].var())) {
    const VarTriple& t = triples[ti];
    if (newly.width() == 2 && !t.contains(newly[1].var())) continue;
    for (const Cube& member : cova_set(t)) {
      if (!newly.subset_of(member) || store.contains(member)) continue;
      store.add(member, rule, {*parent});
      added.push_back(member);
    }
  }
  return added;
}

namespace detail {

// Outcome of trying one premise pair: false means stop the step (the empty
// cube was derived and the config says to stop).
inline bool try_pair(RejectionStore& store, const EngineConfig& cfg, DerivationId cid, const Cube& c,
                     DerivationId did, std::size_t& added) {
  const Cube d = store.derivation(did).conclusion;
  ResolveResult r = resolve_rejected(c, d, cfg.max_width);
  if (std::holds_alternative<NotApplicable>(r)) return true;
  const DerivationId lo = std::min(cid, did), hi = std::max(cid, did);
  if (std::holds_alternative<EmptyCube>(r)) {
    if (store.add(Cube{}, RuleId::EmptyResolvent, {lo, hi})) ++added;
    return !cfg.stop_on_empty;
  }
  const Cube& conclusion = std::get<Cube>(r);
  if (!admissible_resolution(c.width(), d.width(), conclusion.width())) return true;
  if (store.contains(conclusion)) return true;
  store.add(conclusion, classify_rule(c, d, conclusion).id, {lo, hi});
  ++added;
  return true;
}

}  // namespace detail

/// Pops one cube and fires every rule it participates in against the store.
/// Returns the number of new rejections.
///
/// Partners are the stored cubes containing the complement of one of its
/// literals. A premise pair of widths (w, wd) only fits the width cap when
/// the premises share at least (w - 1) + (wd - 1) - max_width literals
/// besides the pivot; when that is positive the partners come from the
/// literal-pair index instead of the single-literal one.
inline std::size_t step(RejectionStore& store, const EngineConfig& cfg) {
  const std::uint64_t cap = cfg.iteration_cap.value_or(cube_space_bound(store.num_vars()));
  if (store.pops() >= cap) {
    throw Error(ErrorCode::IterationCapExceeded, "worklist pops reached cap " + std::to_string(cap));
  }
  auto popped = store.pop(cfg.order);
  if (!popped) return 0;
  const DerivationId cid = *popped;
  const Cube c = store.derivation(cid).conclusion;
  const std::size_t w = c.width();
  std::size_t added = 0;

  for (Literal l : c) {
    const Literal pivot = ~l;
    for (std::size_t wd = 1; wd <= cfg.max_width; ++wd) {
      const long need_shared = static_cast<long>(w + wd) - 2 - static_cast<long>(cfg.max_width);
      if (need_shared <= 0) {
        // Snapshot the size: cubes added now meet c when they are popped.
        const std::size_t count = store.with_literal(pivot, wd).size();
        for (std::size_t k = 0; k < count; ++k) {
          if (!detail::try_pair(store, cfg, cid, c, store.with_literal(pivot, wd)[k], added)) return added;
        }
      } else if (w == 4 && wd == 4) {
        // Only the 4-4CIII shape is admissible: the partner is c with l flipped.
        std::array<Literal, 4> flipped{};
        std::copy(c.begin(), c.end(), flipped.begin());
        *std::find(flipped.begin(), flipped.end(), l) = pivot;
        if (auto did = store.find(Cube::from_sorted(flipped))) {
          if (!detail::try_pair(store, cfg, cid, c, *did, added)) return added;
        }
      } else {
        for (Literal a : c) {
          if (a == l) continue;
          const auto* bucket = store.with_pair(pivot, a, wd);
          if (!bucket) continue;
          const std::size_t count = bucket->size();
          for (std::size_t k = 0; k < count; ++k) {
            const DerivationId did = (*store.with_pair(pivot, a, wd))[k];
            // Visit each partner once: via the first literal of c it shares.
            const Cube& d = store.derivation(did).conclusion;
            const Literal first_shared = *std::find_if(c.begin(), c.end(), [&](Literal x) { return x != l && d.contains(x); });
            if (first_shared != a) continue;
            if (!detail::try_pair(store, cfg, cid, c, did, added)) return added;
          }
        }
      }
    }
  }
  if (cfg.eager_subsumption && w <= 2) added += subsumption_closure(store, c).size();
  return added;
}

struct FixpointReport {
  std::uint64_t iterations = 0;
  std::size_t seeds = 0;
  /// New (non-seed) cubes per width 1..4. The empty-cube record is counted
  /// in firings_per_rule only.
  std::array<std::size_t, 4> additions_per_level{};
  std::map<RuleId, std::size_t> firings_per_rule;
  /// Resolution steps whose shape has no exact rule-table entry.
  std::size_t inexact_label_firings = 0;
  bool reached_fixpoint = false;
  bool empty_derived = false;
  std::chrono::nanoseconds wall_time{0};

  std::size_t total_additions() const {
    std::size_t s = 0;
    for (auto a : additions_per_level) s += a;
    return s;
  }
};

/// Runs step() until the worklist drains, the empty cube is derived (when
/// cfg.stop_on_empty), or the iteration cap trips.
inline FixpointReport fixpoint(RejectionStore& store, const EngineConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t log_start = store.log().size();
  const std::uint64_t pops_start = store.pops();

  while (!store.worklist_empty()) {
    if (cfg.stop_on_empty && store.empty_derived()) break;
    if (cfg.stop_on_cova_exhaustion && store.exhausted_triple()) break;
    step(store, cfg);
  }

  FixpointReport rep;
  rep.iterations = store.pops() - pops_start;
  rep.seeds = store.seed_count();
  for (std::size_t i = log_start; i < store.log().size(); ++i) {
    const Derivation& d = store.log()[i];
    if (d.rule == RuleId::Seed) continue;
    ++rep.firings_per_rule[d.rule];
    if (d.conclusion.width() > 0) ++rep.additions_per_level[d.conclusion.width() - 1];
    if (d.parents.size() == 2) {
      const Cube& a = store.derivation(d.parents[0]).conclusion;
      const Cube& b = store.derivation(d.parents[1]).conclusion;
      if (!classify_rule(a, b, d.conclusion).exact) ++rep.inexact_label_firings;
    }
  }
  rep.reached_fixpoint = store.worklist_empty();
  rep.empty_derived = store.empty_derived();
  rep.wall_time = std::chrono::steady_clock::now() - start;
  return rep;
}

inline const std::vector<Derivation>& derivation_log(const RejectionStore& store) { return store.log(); }

}  // namespace kra
