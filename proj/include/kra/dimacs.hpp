#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kra/cnf.hpp"
#include "kra/error.hpp"

namespace kra {

/// Side information from parsing that does not change the formula.
struct DimacsStats {
  std::size_t declared_clauses = 0;
  std::size_t read_clauses = 0;
  std::size_t tautologies_dropped = 0;
  std::size_t duplicates_dropped = 0;
  bool clause_count_mismatch = false;
};

namespace detail {

inline long long parse_int_token(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": bad token '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

/// Reads a DIMACS CNF instance. Clauses may span lines; tautologies are
/// dropped; a header/body clause count mismatch is recorded in `stats` only.
inline Formula parse_dimacs(std::istream& in, DimacsStats* stats = nullptr) {
  DimacsStats local;
  DimacsStats& st = stats ? *stats : local;
  st = DimacsStats{};

  std::optional<Var> n;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;
  std::string line;
  std::size_t lineno = 0;

  auto finish_clause = [&]() {
    ++st.read_clauses;
    auto normalized = normalize_clause(pending);
    pending.clear();
    if (std::holds_alternative<Tautology>(normalized)) {
      ++st.tautologies_dropped;
      return;
    }
    clauses.push_back(std::get<Clause>(normalized));
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "%") break;  // SATLIB trailer
    if (tok == "p") {
      if (n) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": duplicate header");
      std::string fmt, vars, count, extra;
      if (!(tokens >> fmt >> vars >> count) || fmt != "cnf" || (tokens >> extra)) {
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": expected 'p cnf <vars> <clauses>'");
      }
      long long nv = detail::parse_int_token(vars, lineno);
      long long nc = detail::parse_int_token(count, lineno);
      if (nv < 0 || nc < 0 || nv > (1ll << 30)) {
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": header counts out of range");
      }
      n = static_cast<Var>(nv);
      st.declared_clauses = static_cast<std::size_t>(nc);
      continue;
    }
    if (!n) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": clause before header");
    do {
      long long v = detail::parse_int_token(tok, lineno);
      if (v == 0) {
        finish_clause();
        continue;
      }
      long long mag = v < 0 ? -v : v;
      if (mag > static_cast<long long>(*n)) {
        throw Error(ErrorCode::VarOutOfRange,
                    "line " + std::to_string(lineno) + ": literal " + std::string(tok) + " exceeds n=" + std::to_string(*n));
      }
      pending.push_back(Literal::from_dimacs(static_cast<int>(v)));
    } while (tokens >> tok);
  }
  if (!n) throw Error(ErrorCode::SyntaxError, "missing 'p cnf' header");
  if (!pending.empty()) finish_clause();  // tolerate a missing final 0

  Formula f = make_formula(*n, clauses);
  st.duplicates_dropped = clauses.size() - f.clauses.size();
  st.clause_count_mismatch = st.read_clauses != st.declared_clauses;
  return f;
}

inline Formula parse_dimacs(std::string_view text, DimacsStats* stats = nullptr) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in, stats);
}

inline void write_dimacs(std::ostream& out, const Formula& f) {
  out << "p cnf " << f.n << ' ' << f.m() << '\n';
  for (const Clause& c : f.clauses) {
    for (Literal l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

inline std::string write_dimacs(const Formula& f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

}  // namespace kra
