#pragma once

// CNF data model: literals, clauses, cubes, formulas, assignments and the
// COVA/complement constructions that the rejection engine works on.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kra/error.hpp"

namespace kra {

using Var = std::uint32_t;

/// A variable with a polarity. Encoded as 2*var + (negative ? 1 : 0), so the
/// natural order on codes sorts by variable first, positive before negative.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(Var var, bool positive) : code_(2 * var + (positive ? 0u : 1u)) {}

  static Literal from_dimacs(int lit) {
    if (lit == 0) throw Error(ErrorCode::SyntaxError, "literal 0 is not a literal");
    return Literal(static_cast<Var>(std::abs(lit)), lit > 0);
  }
  static constexpr Literal from_code(std::uint32_t code) {
    Literal l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool positive() const { return (code_ & 1u) == 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr int to_dimacs() const {
    return positive() ? static_cast<int>(var()) : -static_cast<int>(var());
  }

  constexpr Literal operator~() const { return from_code(code_ ^ 1u); }

  constexpr auto operator<=>(const Literal&) const = default;

  friend std::ostream& operator<<(std::ostream& os, Literal l) { return os << l.to_dimacs(); }

 private:
  std::uint32_t code_ = 0;
};

namespace detail {

// Fixed-capacity sorted literal set. Callers guarantee the invariants (sorted
// by var, distinct vars) through the checked factories below.
template <std::size_t Cap, class Tag>
class LitArray {
 public:
  static constexpr std::size_t capacity = Cap;

  constexpr LitArray() = default;

  static LitArray from_sorted(std::span<const Literal> lits) {
    LitArray a;
    a.size_ = static_cast<std::uint8_t>(lits.size());
    std::copy(lits.begin(), lits.end(), a.lits_.begin());
    return a;
  }

  std::size_t width() const { return size_; }
  bool is_empty() const { return size_ == 0; }
  std::span<const Literal> literals() const { return {lits_.data(), size_}; }
  const Literal* begin() const { return lits_.data(); }
  const Literal* end() const { return lits_.data() + size_; }
  Literal operator[](std::size_t i) const { return lits_[i]; }

  bool contains(Literal l) const { return std::find(begin(), end(), l) != end(); }
  bool contains_var(Var v) const {
    return std::any_of(begin(), end(), [v](Literal l) { return l.var() == v; });
  }

  /// Every literal of this set also occurs in `other`.
  template <std::size_t C2, class T2>
  bool subset_of(const LitArray<C2, T2>& other) const {
    return std::includes(other.begin(), other.end(), begin(), end());
  }

  std::vector<int> to_dimacs() const {
    std::vector<int> out;
    for (Literal l : literals()) out.push_back(l.to_dimacs());
    return out;
  }

  friend bool operator==(const LitArray& a, const LitArray& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend auto operator<=>(const LitArray& a, const LitArray& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const LitArray& a) {
    os << '{';
    for (std::size_t i = 0; i < a.size_; ++i) os << (i ? "," : "") << (a.lits_[i].positive() ? "+" : "") << a.lits_[i];
    return os << '}';
  }

 private:
  std::array<Literal, Cap> lits_{};
  std::uint8_t size_ = 0;
};

struct ClauseTag {};
struct CubeTag {};

}  // namespace detail

/// Disjunction of 1..3 literals over distinct variables, sorted by variable.
using Clause = detail::LitArray<3, detail::ClauseTag>;

/// Conjunction of 1..4 literals over distinct variables, sorted by variable.
/// Width 0 is reserved for the empty cube (a global contradiction marker).
using Cube = detail::LitArray<4, detail::CubeTag>;

struct CubeHash {
  std::size_t operator()(const Cube& c) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ c.width();
    for (Literal l : c) {
      h ^= l.code() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Three distinct variables in ascending order; indexes one COVA set.
class VarTriple {
 public:
  constexpr VarTriple() = default;
  VarTriple(Var a, Var b, Var c) : vars_{a, b, c} {
    if (!(0 < a && a < b && b < c)) {
      throw Error(ErrorCode::InvalidParams, "triple must be strictly increasing positive vars");
    }
  }

  Var operator[](std::size_t i) const { return vars_[i]; }
  const std::array<Var, 3>& vars() const { return vars_; }
  bool contains(Var v) const { return vars_[0] == v || vars_[1] == v || vars_[2] == v; }

  constexpr auto operator<=>(const VarTriple&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const VarTriple& t) {
    return os << '(' << t.vars_[0] << ',' << t.vars_[1] << ',' << t.vars_[2] << ')';
  }

 private:
  std::array<Var, 3> vars_{};
};

struct Formula {
  Var n = 0;
  std::vector<Clause> clauses;

  std::size_t m() const { return clauses.size(); }
  friend bool operator==(const Formula&, const Formula&) = default;
};

/// Total truth assignment over variables 1..n (index 0 unused).
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(Var n, bool fill = false) : values_(n + 1, fill) {}

  Var n() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }
  bool operator[](Var v) const { return values_.at(v); }
  void set(Var v, bool value) { values_.at(v) = value; }
  bool satisfies(Literal l) const { return values_.at(l.var()) == l.positive(); }

  /// DIMACS model literals: v for true, -v for false.
  std::vector<int> to_dimacs() const {
    std::vector<int> out;
    for (Var v = 1; v <= n(); ++v) out.push_back(values_[v] ? static_cast<int>(v) : -static_cast<int>(v));
    return out;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<bool> values_;
};

// ---------------------------------------------------------------------------
// Operations

namespace detail {

// Sorts and dedups; returns false on a complementary pair.
template <class Out>
bool sort_unique(std::span<const Literal> in, Out& out) {
  out.assign(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].var() == out[i - 1].var()) return false;
  }
  return true;
}

}  // namespace detail

inline Cube canonicalize_cube(std::span<const Literal> lits) {
  std::vector<Literal> sorted;
  if (!detail::sort_unique(lits, sorted)) {
    throw Error(ErrorCode::ComplementaryPair, "cube contains x and ~x");
  }
  if (sorted.empty() || sorted.size() > 4) {
    throw Error(ErrorCode::WidthOutOfRange, "cube width " + std::to_string(sorted.size()));
  }
  return Cube::from_sorted(sorted);
}

inline Cube canonicalize_cube(std::initializer_list<int> dimacs) {
  std::vector<Literal> lits;
  for (int d : dimacs) lits.push_back(Literal::from_dimacs(d));
  return canonicalize_cube(lits);
}

struct Tautology {
  friend bool operator==(Tautology, Tautology) = default;
};

using NormalizedClause = std::variant<Clause, Tautology>;

/// Dedups and sorts a raw clause. Complementary pairs make it a tautology.
inline NormalizedClause normalize_clause(std::span<const Literal> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyClause, "clause has no literals");
  std::vector<Literal> sorted;
  if (!detail::sort_unique(raw, sorted)) return Tautology{};
  if (sorted.size() > 3) {
    throw Error(ErrorCode::WidthOutOfRange, "clause over " + std::to_string(sorted.size()) + " variables");
  }
  return Clause::from_sorted(sorted);
}

inline Clause make_clause(std::initializer_list<int> dimacs) {
  std::vector<Literal> lits;
  for (int d : dimacs) lits.push_back(Literal::from_dimacs(d));
  auto r = normalize_clause(lits);
  if (std::holds_alternative<Tautology>(r)) throw Error(ErrorCode::ComplementaryPair, "tautological clause");
  return std::get<Clause>(r);
}

/// Builds a formula, dropping duplicate clauses (first occurrence kept).
inline Formula make_formula(Var n, std::vector<Clause> clauses) {
  Formula f;
  f.n = n;
  for (const Clause& c : clauses) {
    for (Literal l : c) {
      if (l.var() > n) throw Error(ErrorCode::VarOutOfRange, "variable " + std::to_string(l.var()));
    }
    if (std::find(f.clauses.begin(), f.clauses.end(), c) == f.clauses.end()) f.clauses.push_back(c);
  }
  return f;
}

inline Formula make_formula(Var n, std::initializer_list<std::initializer_list<int>> clauses) {
  std::vector<Clause> cs;
  for (auto c : clauses) cs.push_back(make_clause(c));
  return make_formula(n, std::move(cs));
}

/// The unique cube over the clause's variables that falsifies it.
inline Cube complement_cube(const Clause& c) {
  std::array<Literal, 3> neg{};
  for (std::size_t i = 0; i < c.width(); ++i) neg[i] = ~c[i];
  return Cube::from_sorted(std::span<const Literal>(neg.data(), c.width()));
}

/// The clause whose only falsifying pattern is `c`.
inline Clause complement_clause(const Cube& c) {
  std::array<Literal, 4> neg{};
  for (std::size_t i = 0; i < c.width(); ++i) neg[i] = ~c[i];
  return Clause::from_sorted(std::span<const Literal>(neg.data(), c.width()));
}

/// The 8 width-3 cubes over `t`. Sign bit i (MSB = first var) set means
/// negative, so the order runs from all-positive to all-negative.
inline std::array<Cube, 8> cova_set(const VarTriple& t) {
  std::array<Cube, 8> out;
  for (unsigned pattern = 0; pattern < 8; ++pattern) {
    std::array<Literal, 3> lits{};
    for (unsigned i = 0; i < 3; ++i) {
      bool negative = (pattern >> (2 - i)) & 1u;
      lits[i] = Literal(t[i], !negative);
    }
    out[pattern] = Cube::from_sorted(lits);
  }
  return out;
}

/// All width-k sub-cubes of `c`, in lexicographic order of positions.
inline std::vector<Cube> sub_cubes(const Cube& c, std::size_t k) {
  std::vector<Cube> out;
  const std::size_t w = c.width();
  if (k == 0 || k >= w) return out;
  for (unsigned mask = 0; mask < (1u << w); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    std::array<Literal, 4> lits{};
    std::size_t j = 0;
    for (std::size_t i = 0; i < w; ++i) {
      if (mask & (1u << i)) lits[j++] = c[i];
    }
    out.push_back(Cube::from_sorted(std::span<const Literal>(lits.data(), k)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline VarTriple triple_of(const Clause& c) { return VarTriple(c[0].var(), c[1].var(), c[2].var()); }
inline VarTriple triple_of(const Cube& c) { return VarTriple(c[0].var(), c[1].var(), c[2].var()); }

inline bool evaluate(const Clause& c, const Assignment& a) {
  return std::any_of(c.begin(), c.end(), [&](Literal l) { return a.satisfies(l); });
}

inline bool evaluate(const Formula& f, const Assignment& a) {
  return std::all_of(f.clauses.begin(), f.clauses.end(), [&](const Clause& c) { return evaluate(c, a); });
}

/// Assignment `a` agrees with every literal of `c`.
inline bool extends(const Assignment& a, const Cube& c) {
  return std::all_of(c.begin(), c.end(), [&](Literal l) { return a.satisfies(l); });
}

}  // namespace kra

template <>
struct std::hash<kra::Cube> : kra::CubeHash {};
