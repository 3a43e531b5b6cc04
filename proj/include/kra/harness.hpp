#pragma once

// Experiment harness behind the kra-sat CLI: single-file solving with solver
// exit codes, instance generation, KRA-vs-oracle comparison runs, and
// counterexample archiving.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "kra/cnf.hpp"
#include "kra/decision.hpp"
#include "kra/dimacs.hpp"
#include "kra/engine.hpp"
#include "kra/oracle.hpp"
#include "kra/random.hpp"
#include "kra/shrink.hpp"

namespace kra::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline constexpr int kExitSat = 10;
inline constexpr int kExitUnsat = 20;
inline constexpr int kExitUnknown = 0;
inline constexpr int kExitError = 1;

inline Formula read_dimacs_file(const fs::path& path, DimacsStats* stats = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_dimacs(in, stats);
}

inline void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

inline json report_to_json(const FixpointReport& r, bool timing) {
  json j;
  j["iterations"] = r.iterations;
  j["seeds"] = r.seeds;
  j["additions_per_level"] = r.additions_per_level;
  json rules = json::object();
  for (RuleId id : kAllRules) {
    if (id == RuleId::Seed) continue;
    auto it = r.firings_per_rule.find(id);
    rules[std::string(to_string(id))] = it == r.firings_per_rule.end() ? 0 : it->second;
  }
  j["firings_per_rule"] = rules;
  j["inexact_label_firings"] = r.inexact_label_firings;
  j["reached_fixpoint"] = r.reached_fixpoint;
  j["empty_derived"] = r.empty_derived;
  if (timing) j["wall_time_ms"] = std::chrono::duration<double, std::milli>(r.wall_time).count();
  return j;
}

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
  SolveConfig config;
  std::optional<fs::path> proof_path;
  std::optional<fs::path> stats_path;
  bool verify_oracle = false;
  bool timing = false;
};

inline void print_model(std::ostream& out, const Assignment& a) {
  out << 'v';
  for (int lit : a.to_dimacs()) out << ' ' << lit;
  out << " 0\n";
}

/// Solves one DIMACS file, printing "s ..." / "v ..." lines to out and
/// diagnostics to err. Returns the process exit code.
inline int run_solve(const fs::path& path, const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  Formula f;
  DimacsStats stats;
  try {
    f = read_dimacs_file(path, &stats);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyClause) {
      out << "c input contains an empty clause\ns UNSATISFIABLE\n";
      return kExitUnsat;
    }
    err << "kra-sat: " << e.what() << '\n';
    return kExitError;
  }

  try {
    out << "c kra-sat n=" << f.n << " m=" << f.m() << '\n';
    if (stats.tautologies_dropped) out << "c dropped " << stats.tautologies_dropped << " tautological clauses\n";
    if (stats.clause_count_mismatch) {
      out << "c warning: header declares " << stats.declared_clauses << " clauses, read " << stats.read_clauses << '\n';
    }

    Decision d = decide(f, opt.config);
    const FixpointReport& rep = d.report;
    out << "c fixpoint iterations=" << rep.iterations << " stored=" << d.store.size()
        << " empty=" << (rep.empty_derived ? 1 : 0) << " at_seed=" << (d.decided_at_seed ? 1 : 0) << '\n';

    int code = kExitUnknown;
    std::vector<Derivation> proof;
    if (auto* u = std::get_if<Unsat>(&d.verdict)) {
      if (auto* t = std::get_if<VarTriple>(&u->witness)) {
        out << "c witness: all 8 cubes over triple " << (*t)[0] << ' ' << (*t)[1] << ' ' << (*t)[2] << " rejected\n";
      } else {
        out << "c witness: empty cube derived\n";
      }
      out << "s UNSATISFIABLE\n";
      proof = u->proof;
      code = kExitUnsat;
    } else if (auto* s = std::get_if<Sat>(&d.verdict)) {
      out << "s SATISFIABLE\n";
      print_model(out, s->assignment);
      proof = d.store.log();
      code = kExitSat;
    } else {
      const auto& unk = std::get<Unknown>(d.verdict);
      out << "s UNKNOWN\n";
      out << "c reason: " << to_string(unk.reason);
      if (unk.triple) out << " at triple " << (*unk.triple)[0] << ' ' << (*unk.triple)[1] << ' ' << (*unk.triple)[2];
      out << '\n';
      proof = d.store.log();
    }

    if (opt.verify_oracle) {
      if (f.n > kBruteForceLimit) {
        out << "c oracle: skipped, n exceeds " << kBruteForceLimit << '\n';
      } else {
        const bool sat = brute_force(f).satisfiable;
        const bool agree = code == kExitUnknown ? false : (code == kExitSat) == sat;
        out << "c oracle: " << (sat ? "SATISFIABLE" : "UNSATISFIABLE") << (agree ? " (agrees)" : " (disagrees)")
            << '\n';
      }
    }
    if (opt.proof_path) write_text_file(*opt.proof_path, format_log(proof));
    if (opt.stats_path) write_text_file(*opt.stats_path, report_to_json(rep, opt.timing).dump(2) + "\n");
    return code;
  } catch (const std::exception& e) {
    err << "kra-sat: " << e.what() << '\n';
    return kExitError;
  }
}

// ---------------------------------------------------------------------------
// gen

inline std::string instance_name(std::uint64_t seed, std::size_t index) {
  return std::to_string(seed) + "-" + std::to_string(index) + ".cnf";
}

/// Writes count random 3-CNF files named <seed>-<index>.cnf. Returns the paths.
inline std::vector<fs::path> generate_files(Var n, std::size_t m, std::size_t count, std::uint64_t seed,
                                            const fs::path& out_dir) {
  std::vector<fs::path> paths;
  for (std::size_t i = 0; i < count; ++i) {
    fs::path p = out_dir / instance_name(seed, i);
    write_text_file(p, write_dimacs(random_formula(n, m, derive_seed(seed, i))));
    paths.push_back(p);
  }
  return paths;
}

/// Clause count for a clause/variable ratio, clamped to what random_formula accepts.
inline std::size_t clauses_for_ratio(Var n, double ratio) {
  auto m = static_cast<std::size_t>(std::llround(ratio * n));
  return std::clamp<std::size_t>(m, 1, 8 * choose(n, 3));
}

// ---------------------------------------------------------------------------
// compare

struct RunConfig {
  std::uint64_t seed = 1;
  Var n_min = 5;
  Var n_max = 14;
  double ratio_min = 3.0;
  double ratio_max = 6.0;
  std::size_t count = 1000;
  SolveConfig solve;
  unsigned workers = 1;
  bool timing = false;
  /// Shrink and archive every UNKNOWN instance here when set.
  std::optional<fs::path> archive_dir;

  void validate() const {
    if (n_min < 3 || n_min > n_max) throw Error(ErrorCode::InvalidParams, "need 3 <= n_min <= n_max");
    if (!(ratio_min > 0) || ratio_min > ratio_max) throw Error(ErrorCode::InvalidParams, "need 0 < ratio_min <= ratio_max");
    if (count == 0) throw Error(ErrorCode::InvalidParams, "count must be positive");
    if (workers == 0) throw Error(ErrorCode::InvalidParams, "workers must be positive");
    solve.engine.validate();
  }
};

struct Instance {
  std::string id;
  Formula formula;
};

/// The i-th instance of a run: n and m/n drawn uniformly from the ranges.
inline Instance make_instance(const RunConfig& cfg, std::size_t index) {
  std::mt19937_64 rng(derive_seed(cfg.seed, index));
  const Var n = cfg.n_min + static_cast<Var>(detail::uniform_below(rng, cfg.n_max - cfg.n_min + 1));
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double ratio = cfg.ratio_min + (cfg.ratio_max - cfg.ratio_min) * u;
  const std::uint64_t formula_seed = rng();
  return {std::to_string(cfg.seed) + "-" + std::to_string(index),
          random_formula(n, clauses_for_ratio(n, ratio), formula_seed)};
}

struct ComparisonRecord {
  std::string instance_id;
  Var n = 0;
  std::size_t m = 0;
  std::string kra_verdict;  // SAT, UNSAT, UNKNOWN-conflict, UNKNOWN-other
  std::string unknown_reason;
  std::string oracle_verdict;  // SAT, UNSAT
  bool agree = false;
  bool soundness_violation = false;
  std::size_t unsound_cubes = 0;
  bool soundness_checked = false;
  std::size_t stored_cubes = 0;
  std::uint64_t fixpoint_iterations = 0;
  std::size_t additions = 0;
  std::uint64_t addition_bound = 0;
  bool iteration_cap_hit = false;
  bool decided_at_seed = false;
  bool log_valid = false;
  bool proof_valid = true;  // only meaningful for UNSAT
  std::map<RuleId, std::size_t> rule_firings;
  double kra_ms = 0;
  double oracle_ms = 0;
  std::string archived;  // shrunk witness path for UNKNOWN instances
  std::size_t shrunk_m = 0;
};

inline std::string verdict_label(const Verdict& v) {
  if (std::holds_alternative<Sat>(v)) return "SAT";
  if (std::holds_alternative<Unsat>(v)) return "UNSAT";
  return std::get<Unknown>(v).reason == UnknownReason::ExtractionConflict ? "UNKNOWN-conflict" : "UNKNOWN-other";
}

/// Runs KRA and the oracle on one instance and cross-checks everything the
/// engine stored.
inline ComparisonRecord compare_instance(const Instance& inst, const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const Formula& f = inst.formula;
  ComparisonRecord r;
  r.instance_id = inst.id;
  r.n = f.n;
  r.m = f.m();

  auto t0 = clock::now();
  Decision d = decide(f, cfg.solve);
  r.kra_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  r.kra_verdict = verdict_label(d.verdict);
  if (auto* u = std::get_if<Unknown>(&d.verdict)) {
    r.unknown_reason = std::string(to_string(u->reason));
    r.iteration_cap_hit = u->reason == UnknownReason::IterationCap;
  }
  r.stored_cubes = d.store.size();
  r.fixpoint_iterations = d.report.iterations;
  r.additions = d.report.total_additions();
  r.addition_bound = cube_space_bound(f.n);
  r.decided_at_seed = d.decided_at_seed;
  r.rule_firings = d.report.firings_per_rule;

  t0 = clock::now();
  const bool oracle_sat = f.n <= kBruteForceLimit ? brute_force(f).satisfiable : dpll(f).satisfiable;
  r.oracle_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  r.oracle_verdict = oracle_sat ? "SAT" : "UNSAT";
  r.agree = r.kra_verdict == r.oracle_verdict;

  if (f.n <= 18) {
    r.soundness_checked = true;
    const ModelSet models(f);
    for (const Derivation& der : d.store.log()) {
      if (der.conclusion.is_empty() ? models.size() != 0 : !models.sound(der.conclusion)) ++r.unsound_cubes;
    }
  }
  const bool wrong_unsat = r.kra_verdict == "UNSAT" && oracle_sat;
  bool wrong_sat = false;
  if (auto* s = std::get_if<Sat>(&d.verdict)) wrong_sat = !evaluate(f, s->assignment);
  r.soundness_violation = wrong_unsat || wrong_sat || r.unsound_cubes > 0;

  r.log_valid = check_derivation(f, d.store.log(), cfg.solve.all_triples).valid();
  if (auto* u = std::get_if<Unsat>(&d.verdict)) r.proof_valid = check_derivation(f, u->proof, cfg.solve.all_triples).valid();
  return r;
}

struct RunSummary {
  std::vector<ComparisonRecord> records;
  json summary;
};

inline std::string firings_field(const std::map<RuleId, std::size_t>& firings) {
  std::string out;
  for (auto [rule, count] : firings) {
    if (!out.empty()) out += ';';
    out += std::string(to_string(rule)) + "=" + std::to_string(count);
  }
  return out;
}

inline constexpr const char* kCsvSchema = "# kra-sat compare csv v1";

inline std::string records_to_csv(const std::vector<ComparisonRecord>& records, bool timing) {
  std::ostringstream out;
  out << kCsvSchema << '\n';
  out << "instance_id,n,m,kra_verdict,oracle_verdict,agree,soundness_violation,unsound_cubes,stored_cubes,"
         "fixpoint_iterations,additions,addition_bound,decided_at_seed,log_valid,proof_valid,rule_firings";
  if (timing) out << ",kra_ms,oracle_ms";
  out << '\n';
  for (const auto& r : records) {
    out << r.instance_id << ',' << r.n << ',' << r.m << ',' << r.kra_verdict << ',' << r.oracle_verdict << ','
        << r.agree << ',' << r.soundness_violation << ',' << r.unsound_cubes << ',' << r.stored_cubes << ','
        << r.fixpoint_iterations << ',' << r.additions << ',' << r.addition_bound << ',' << r.decided_at_seed << ','
        << r.log_valid << ',' << r.proof_valid << ',' << firings_field(r.rule_firings);
    if (timing) out << ',' << std::fixed << std::setprecision(3) << r.kra_ms << ',' << r.oracle_ms;
    out << '\n';
  }
  return out.str();
}

inline json summarize(const std::vector<ComparisonRecord>& records) {
  std::size_t agree = 0, unknown = 0, conflict = 0, violations = 0, unsound = 0, bad_logs = 0, bad_proofs = 0,
              over_bound = 0, cap_hits = 0, at_seed = 0;
  std::map<std::string, std::size_t> kra, oracle;
  std::map<RuleId, std::size_t> firings;
  json archived = json::array();
  for (const auto& r : records) {
    agree += r.agree;
    unknown += r.kra_verdict.starts_with("UNKNOWN");
    conflict += r.kra_verdict == "UNKNOWN-conflict";
    violations += r.soundness_violation;
    unsound += r.unsound_cubes;
    bad_logs += !r.log_valid;
    bad_proofs += !r.proof_valid;
    over_bound += r.additions > r.addition_bound;
    cap_hits += r.iteration_cap_hit;
    at_seed += r.decided_at_seed;
    ++kra[r.kra_verdict];
    ++oracle[r.oracle_verdict];
    for (auto [rule, c] : r.rule_firings) firings[rule] += c;
    if (!r.archived.empty()) {
      archived.push_back({{"instance_id", r.instance_id}, {"m", r.m}, {"shrunk", r.archived}, {"shrunk_m", r.shrunk_m}});
    }
  }
  const double total = static_cast<double>(records.size());
  json j;
  j["schema"] = "kra-sat compare summary v1";
  j["instances"] = records.size();
  j["agreement"] = agree;
  j["agreement_rate"] = total ? agree / total : 0.0;
  j["unknown"] = unknown;
  j["unknown_rate"] = total ? unknown / total : 0.0;
  j["unknown_conflict"] = conflict;
  j["kra_verdicts"] = kra;
  j["oracle_verdicts"] = oracle;
  j["soundness_violations"] = violations;
  j["unsound_cubes"] = unsound;
  j["invalid_logs"] = bad_logs;
  j["invalid_proofs"] = bad_proofs;
  j["additions_over_bound"] = over_bound;
  j["iteration_cap_hits"] = cap_hits;
  j["decided_at_seed"] = at_seed;
  json rules = json::object();
  for (auto [rule, c] : firings) rules[std::string(to_string(rule))] = c;
  j["firings_per_rule"] = rules;
  j["archived_unknowns"] = archived;
  return j;
}

/// Runs cfg.count instances. Records come back in instance order whatever
/// the worker count, so the CSV bytes depend only on cfg.
inline RunSummary run_compare(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ComparisonRecord> records(cfg.count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&]() {
    try {
      for (std::size_t i = next++; i < cfg.count; i = next++) {
        Instance inst = make_instance(cfg, i);
        ComparisonRecord rec = compare_instance(inst, cfg);
        if (cfg.archive_dir && rec.kra_verdict.starts_with("UNKNOWN")) {
          Formula small = shrink(inst.formula, make_predicate(ShrinkPredicate::Unknown, cfg.solve));
          write_text_file(*cfg.archive_dir / (inst.id + ".cnf"), write_dimacs(inst.formula));
          fs::path shrunk = *cfg.archive_dir / (inst.id + ".min.cnf");
          write_text_file(shrunk, write_dimacs(small));
          rec.archived = shrunk.filename().string();
          rec.shrunk_m = small.m();
        }
        records[i] = std::move(rec);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = cfg.count;
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < cfg.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  json summary = summarize(records);
  return {std::move(records), std::move(summary)};
}

}  // namespace kra::harness
