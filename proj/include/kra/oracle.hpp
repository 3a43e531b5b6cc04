#pragma once

// Ground truth for small instances: exhaustive enumeration, a plain DPLL
// cross-check, cube soundness, and an independent derivation-log checker.
// Nothing in here calls into the rejection engine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "kra/cnf.hpp"
#include "kra/engine.hpp"
#include "kra/error.hpp"

namespace kra {

struct OracleResult {
  bool satisfiable = false;
  std::optional<Assignment> model;
  std::uint64_t assignments_tried = 0;
};

inline constexpr Var kBruteForceLimit = 20;

namespace detail {

// Assignments are bitmasks where var v sits at bit (n - v): counting upward
// enumerates (x1, ..., xn) lexicographically with false before true.
struct MaskClause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

inline std::uint64_t var_bit(Var n, Var v) { return std::uint64_t{1} << (n - v); }

inline std::vector<MaskClause> mask_clauses(const Formula& f) {
  std::vector<MaskClause> out;
  for (const Clause& c : f.clauses) {
    MaskClause mc;
    for (Literal l : c) (l.positive() ? mc.pos : mc.neg) |= var_bit(f.n, l.var());
    out.push_back(mc);
  }
  return out;
}

inline bool mask_satisfies(std::span<const MaskClause> clauses, std::uint64_t a) {
  for (const MaskClause& c : clauses) {
    if (((a & c.pos) | (~a & c.neg)) == 0) return false;
  }
  return true;
}

inline Assignment mask_to_assignment(Var n, std::uint64_t a) {
  Assignment out(n);
  for (Var v = 1; v <= n; ++v) out.set(v, (a & var_bit(n, v)) != 0);
  return out;
}

inline void check_limit(const Formula& f, Var limit) {
  if (f.n > limit || f.n > 62) {
    throw Error(ErrorCode::TooLarge, "n=" + std::to_string(f.n) + " exceeds enumeration limit " + std::to_string(limit));
  }
}

}  // namespace detail

/// Enumerates all 2^n assignments in lexicographic order; the first model wins.
inline OracleResult brute_force(const Formula& f, Var limit = kBruteForceLimit) {
  detail::check_limit(f, limit);
  const auto clauses = detail::mask_clauses(f);
  const std::uint64_t total = std::uint64_t{1} << f.n;
  OracleResult r;
  for (std::uint64_t a = 0; a < total; ++a) {
    ++r.assignments_tried;
    if (detail::mask_satisfies(clauses, a)) {
      r.satisfiable = true;
      r.model = detail::mask_to_assignment(f.n, a);
      return r;
    }
  }
  return r;
}

/// Unit propagation plus branching on the lowest unassigned variable, true first.
inline OracleResult dpll(const Formula& f) {
  OracleResult r;
  // 0 = unassigned, 1 = true, 2 = false
  std::vector<std::uint8_t> val(f.n + 1, 0);
  std::vector<Var> trail;

  auto lit_value = [&](Literal l) -> int {
    auto v = val[l.var()];
    if (v == 0) return 0;
    return ((v == 1) == l.positive()) ? 1 : -1;
  };
  auto assign = [&](Literal l) {
    val[l.var()] = l.positive() ? 1 : 2;
    trail.push_back(l.var());
  };
  // false on conflict
  auto propagate = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Clause& c : f.clauses) {
        int free = 0;
        Literal last;
        bool sat = false;
        for (Literal l : c) {
          int v = lit_value(l);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++free;
            last = l;
          }
        }
        if (sat) continue;
        if (free == 0) return false;
        if (free == 1) {
          assign(last);
          changed = true;
        }
      }
    }
    return true;
  };
  auto undo_to = [&](std::size_t mark) {
    while (trail.size() > mark) {
      val[trail.back()] = 0;
      trail.pop_back();
    }
  };

  auto search = [&](auto&& self) -> bool {
    ++r.assignments_tried;
    if (!propagate()) return false;
    Var branch = 0;
    for (Var v = 1; v <= f.n; ++v) {
      if (val[v] == 0) {
        branch = v;
        break;
      }
    }
    if (branch == 0) return true;
    for (bool polarity : {true, false}) {
      const std::size_t mark = trail.size();
      assign(Literal(branch, polarity));
      if (self(self)) return true;
      undo_to(mark);
    }
    return false;
  };

  if (search(search)) {
    r.satisfiable = true;
    Assignment a(f.n);
    for (Var v = 1; v <= f.n; ++v) a.set(v, val[v] == 1);
    r.model = a;
  }
  return r;
}

/// True iff no model of f extends c, by enumerating every completion of c.
inline bool cube_sound(const Formula& f, const Cube& c, Var limit = kBruteForceLimit) {
  detail::check_limit(f, limit);
  const auto clauses = detail::mask_clauses(f);
  std::uint64_t fixed_mask = 0, fixed_val = 0;
  for (Literal l : c) {
    fixed_mask |= detail::var_bit(f.n, l.var());
    if (l.positive()) fixed_val |= detail::var_bit(f.n, l.var());
  }
  const std::uint64_t free_mask = ((std::uint64_t{1} << f.n) - 1) & ~fixed_mask;
  // Walk the subsets of free_mask.
  std::uint64_t sub = 0;
  do {
    if (detail::mask_satisfies(clauses, sub | fixed_val)) return false;
    sub = (sub - free_mask) & free_mask;
  } while (sub != 0);
  return true;
}

/// All models of f, enumerated once, for checking many cubes against the
/// same formula.
class ModelSet {
 public:
  explicit ModelSet(const Formula& f, Var limit = kBruteForceLimit) : n_(f.n) {
    detail::check_limit(f, limit);
    const auto clauses = detail::mask_clauses(f);
    const std::uint64_t total = std::uint64_t{1} << f.n;
    for (std::uint64_t a = 0; a < total; ++a) {
      if (detail::mask_satisfies(clauses, a)) models_.push_back(a);
    }
  }

  std::size_t size() const { return models_.size(); }

  /// Same answer as cube_sound(f, c).
  bool sound(const Cube& c) const {
    std::uint64_t mask = 0, want = 0;
    for (Literal l : c) {
      mask |= detail::var_bit(n_, l.var());
      if (l.positive()) want |= detail::var_bit(n_, l.var());
    }
    return std::none_of(models_.begin(), models_.end(), [&](std::uint64_t a) { return (a & mask) == want; });
  }

 private:
  Var n_;
  std::vector<std::uint64_t> models_;
};

// ---------------------------------------------------------------------------
// Derivation checking

struct CheckReport {
  std::size_t steps_checked = 0;
  std::optional<DerivationId> first_invalid;
  std::string reason;
  bool seeds_matched = true;

  bool valid() const { return !first_invalid && seeds_matched; }
};

namespace detail {

using LitSet = std::set<int>;

inline LitSet negated(const Cube& c) {
  LitSet out;
  for (Literal l : c) out.insert(-l.to_dimacs());
  return out;
}

inline const char* expected_label(std::size_t w1, std::size_t w2, std::size_t wc) {
  if (w1 > w2) std::swap(w1, w2);
  if (wc == 0) return "EMPTY_RESOLVENT";
  if (w1 == 1) {
    static const char* nearest[] = {"", "R22CI", "R33CII", "R33CID", "R33CDD"};
    return nearest[wc];
  }
  static const std::map<std::pair<std::size_t, std::size_t>, const char*> by_width = {
      {{2, 2}, "R22CI"},   {{2, 3}, "R23CDD"},  {{2, 4}, "R24CIDD"},
      {{3, 4}, "R34CIID"}, {{4, 4}, "R44CIII"},
  };
  if (w1 == 3 && w2 == 3) return wc == 2 ? "R33CII" : wc == 3 ? "R33CID" : "R33CDD";
  return by_width.at({w1, w2});
}

}  // namespace detail

/// Replays a derivation list against f without using the engine. Seeds must
/// be clause complements, two-parent steps single-pivot resolutions of their
/// parents (viewed as clauses), one-parent steps width-3 supersets over the
/// triple universe, and every parent must appear earlier in the list.
inline CheckReport check_derivation(const Formula& f, std::span<const Derivation> log, bool all_triples = false) {
  CheckReport rep;
  std::set<std::tuple<Var, Var, Var>> universe;
  for (const Clause& c : f.clauses) {
    if (c.width() == 3) universe.emplace(c[0].var(), c[1].var(), c[2].var());
  }
  auto in_universe = [&](const Cube& c) {
    return all_triples || universe.count({c[0].var(), c[1].var(), c[2].var()}) != 0;
  };

  std::map<DerivationId, const Derivation*> seen;
  std::set<std::vector<int>> conclusions;
  bool empty_seen = false;
  std::optional<DerivationId> last_id;

  for (const Derivation& d : log) {
    ++rep.steps_checked;
    auto invalid = [&](const std::string& why) {
      rep.first_invalid = d.id;
      rep.reason = why;
      if (d.rule == RuleId::Seed) rep.seeds_matched = false;
      return rep;
    };

    if (last_id && d.id <= *last_id) return invalid("ids not increasing");
    last_id = d.id;
    const Cube& c = d.conclusion;
    if (c.width() > 4) return invalid("conclusion too wide");
    for (std::size_t i = 1; i < c.width(); ++i) {
      if (c[i - 1].var() >= c[i].var()) return invalid("conclusion not canonical");
    }
    if (c.width() == 0) {
      if (empty_seen) return invalid("empty cube derived twice");
      empty_seen = true;
    } else if (!conclusions.insert(c.to_dimacs()).second) {
      return invalid("conclusion derived twice");
    }
    std::vector<const Derivation*> parents;
    for (DerivationId p : d.parents) {
      auto it = seen.find(p);
      if (p >= d.id || it == seen.end()) return invalid("parent does not precede step");
      parents.push_back(it->second);
    }

    if (d.rule == RuleId::Seed) {
      if (!parents.empty() || !d.source_clause || *d.source_clause >= f.m()) return invalid("malformed seed");
      std::set<int> clause;
      for (Literal l : f.clauses[*d.source_clause]) clause.insert(l.to_dimacs());
      if (clause != detail::negated(c)) return invalid("seed is not the clause complement");
    } else if (d.rule == RuleId::R13I || d.rule == RuleId::R23II) {
      if (parents.size() != 1 || d.source_clause) return invalid("malformed subsumption");
      const Cube& p = parents[0]->conclusion;
      const std::size_t want = d.rule == RuleId::R13I ? 1 : 2;
      if (p.width() != want || c.width() != 3) return invalid("subsumption widths");
      if (!std::includes(c.begin(), c.end(), p.begin(), p.end())) return invalid("not a superset");
      if (!in_universe(c)) return invalid("triple outside universe");
    } else {
      if (parents.size() != 2 || parents[0] == parents[1] || d.source_clause) return invalid("malformed resolution");
      const Cube& a = parents[0]->conclusion;
      const Cube& b = parents[1]->conclusion;
      const detail::LitSet ca = detail::negated(a), cb = detail::negated(b);
      std::vector<int> pivots;
      for (int x : ca) {
        if (cb.count(-x)) pivots.push_back(x);
      }
      if (pivots.size() != 1) return invalid("parents do not clash on exactly one variable");
      detail::LitSet resolvent;
      for (int x : ca) {
        if (x != pivots[0]) resolvent.insert(x);
      }
      for (int x : cb) {
        if (x != -pivots[0]) resolvent.insert(x);
      }
      if (resolvent != detail::negated(c)) return invalid("conclusion is not the resolvent");
      if (a.width() == 4 && b.width() == 4 && c.width() > 3) return invalid("4-4 step wider than 3");
      if (to_string(d.rule) != detail::expected_label(a.width(), b.width(), c.width())) {
        return invalid("rule label does not match premise shape");
      }
    }
    seen.emplace(d.id, &d);
  }
  return rep;
}

}  // namespace kra
