#pragma once

#include <cstdint>
#include <random>
#include <unordered_set>

#include "kra/cnf.hpp"

namespace kra {

namespace detail {

// Unbiased draw in [0, bound) straight from the engine output, so instances
// are identical across standard library implementations.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Derives an independent per-item seed from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return detail::splitmix64(detail::splitmix64(base) ^ index);
}

/// Uniform random 3-CNF: each clause over 3 distinct uniform variables with
/// uniform signs. Duplicates are redrawn so exactly m distinct clauses remain.
inline Formula random_formula(Var n, std::size_t m, std::uint64_t seed) {
  if (n < 3) throw Error(ErrorCode::InvalidParams, "random_formula needs n >= 3");
  if (m > 8 * choose(n, 3)) throw Error(ErrorCode::InvalidParams, "m exceeds the number of distinct 3-clauses");

  std::mt19937_64 rng(seed);
  Formula f;
  f.n = n;
  std::unordered_set<Cube> seen;  // keyed by the clause's literal pattern
  while (f.clauses.size() < m) {
    std::array<Literal, 3> lits{};
    for (std::size_t i = 0; i < 3;) {
      Var v = static_cast<Var>(detail::uniform_below(rng, n) + 1);
      bool dup = false;
      for (std::size_t j = 0; j < i; ++j) dup |= lits[j].var() == v;
      if (dup) continue;
      lits[i++] = Literal(v, detail::uniform_below(rng, 2) == 0);
    }
    std::sort(lits.begin(), lits.end());
    Clause c = Clause::from_sorted(lits);
    if (seen.insert(Cube::from_sorted(c.literals())).second) f.clauses.push_back(c);
  }
  return f;
}

}  // namespace kra
