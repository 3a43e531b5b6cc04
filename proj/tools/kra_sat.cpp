#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kra/harness.hpp"

namespace fs = std::filesystem;
using namespace kra;

namespace {

void add_engine_flags(CLI::App* cmd, SolveConfig& cfg, std::size_t& max_width) {
  cmd->add_option("--max-width", max_width, "Widest rejected cube the engine derives")
      ->check(CLI::IsMember({3, 4}))
      ->default_val(4);
  cmd->add_flag("--all-triples", cfg.all_triples, "Use every variable triple, not only clause triples");
}

struct SweepSpec {
  double lo = 0, hi = 0, step = 0;
};

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec s;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> s.lo >> c1 >> s.hi >> c2 >> s.step) || c1 != ':' || c2 != ':' || s.step <= 0 || s.lo > s.hi) {
    throw CLI::ValidationError("--ratio-sweep", "expected lo:hi:step");
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kra-sat: knowledge-recognition 3-SAT decision with oracle cross-checks"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Decide one DIMACS CNF file");
  std::string solve_path;
  harness::SolveOptions solve_opt;
  std::size_t solve_width = 4;
  std::string proof_path, stats_path;
  solve->add_option("file", solve_path, "DIMACS CNF input")->required();
  solve->add_option("--proof", proof_path, "Write the derivation log (UNSAT: proof slice)");
  solve->add_option("--stats", stats_path, "Write fixpoint statistics as JSON");
  solve->add_flag("--verify-oracle", solve_opt.verify_oracle, "Cross-check against brute force (n <= 20)");
  solve->add_flag("--timing", solve_opt.timing, "Include wall time in --stats output");
  add_engine_flags(solve, solve_opt.config, solve_width);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate random 3-CNF instances");
  Var gen_n = 10;
  std::size_t gen_m = 43, gen_count = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = ".", gen_sweep;
  gen->add_option("--n", gen_n, "Variables")->required()->check(CLI::Range(3u, 1u << 20));
  gen->add_option("--m", gen_m, "Clauses");
  gen->add_option("--ratio-sweep", gen_sweep, "lo:hi:step; one sub-directory per m/n ratio instead of --m");
  gen->add_option("--count", gen_count, "Instances (per ratio)")->default_val(1);
  gen->add_option("--seed", gen_seed, "Base seed")->default_val(1);
  gen->add_option("--out-dir", gen_out, "Output directory")->default_val(".");

  // compare
  auto* compare = app.add_subcommand("compare", "Run KRA against the oracle on a random ensemble");
  harness::RunConfig run;
  std::size_t cmp_width = 4;
  std::string csv_path = "compare.csv", summary_path = "summary.json", archive;
  compare->add_option("--seed", run.seed, "Base seed")->default_val(1);
  compare->add_option("--n-min", run.n_min)->default_val(5);
  compare->add_option("--n-max", run.n_max)->default_val(14);
  compare->add_option("--ratio-min", run.ratio_min)->default_val(3.0);
  compare->add_option("--ratio-max", run.ratio_max)->default_val(6.0);
  compare->add_option("--count", run.count)->default_val(1000);
  compare->add_option("--workers", run.workers)->default_val(1);
  compare->add_option("--csv", csv_path, "Per-instance records")->default_val("compare.csv");
  compare->add_option("--summary", summary_path, "Summary JSON")->default_val("summary.json");
  compare->add_option("--archive", archive, "Shrink and archive UNKNOWN instances into this directory");
  compare->add_flag("--timing", run.timing, "Add timing columns (output no longer byte-reproducible)");
  add_engine_flags(compare, run.solve, cmp_width);

  // shrink
  auto* shrink_cmd = app.add_subcommand("shrink", "Minimize an instance on which KRA is UNKNOWN or disagrees");
  std::string shrink_in, shrink_out, predicate = "unknown";
  SolveConfig shrink_cfg;
  std::size_t shrink_width = 4;
  shrink_cmd->add_option("file", shrink_in, "DIMACS CNF input")->required();
  shrink_cmd->add_option("--predicate", predicate)->check(CLI::IsMember({"unknown", "disagree"}))->default_val("unknown");
  shrink_cmd->add_option("--out", shrink_out, "Output file (default: stdout)");
  add_engine_flags(shrink_cmd, shrink_cfg, shrink_width);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      solve_opt.config.engine.max_width = solve_width;
      if (!proof_path.empty()) solve_opt.proof_path = proof_path;
      if (!stats_path.empty()) solve_opt.stats_path = stats_path;
      return harness::run_solve(solve_path, solve_opt, std::cout, std::cerr);
    }

    if (*gen) {
      if (gen_sweep.empty()) {
        for (const auto& p : harness::generate_files(gen_n, gen_m, gen_count, gen_seed, gen_out)) {
          std::cout << p.string() << '\n';
        }
      } else {
        const SweepSpec s = parse_sweep(gen_sweep);
        for (double r = s.lo; r <= s.hi + 1e-9; r += s.step) {
          char dir[32];
          std::snprintf(dir, sizeof dir, "ratio-%.2f", r);
          for (const auto& p : harness::generate_files(gen_n, harness::clauses_for_ratio(gen_n, r), gen_count,
                                                       gen_seed, fs::path(gen_out) / dir)) {
            std::cout << p.string() << '\n';
          }
        }
      }
      return 0;
    }

    if (*compare) {
      run.solve.engine.max_width = cmp_width;
      if (!archive.empty()) run.archive_dir = archive;
      harness::RunSummary res = harness::run_compare(run);
      harness::write_text_file(csv_path, harness::records_to_csv(res.records, run.timing));
      harness::write_text_file(summary_path, res.summary.dump(2) + "\n");
      std::cout << "instances " << res.records.size() << ", agreement " << res.summary["agreement"] << ", unknown "
                << res.summary["unknown"] << ", soundness violations " << res.summary["soundness_violations"] << '\n';
      return res.summary["soundness_violations"] == 0 ? 0 : 2;
    }

    if (*shrink_cmd) {
      shrink_cfg.engine.max_width = shrink_width;
      const Formula f = harness::read_dimacs_file(shrink_in);
      const auto which = predicate == "unknown" ? ShrinkPredicate::Unknown : ShrinkPredicate::Disagree;
      const Formula small = shrink(f, make_predicate(which, shrink_cfg));
      std::cerr << "shrunk " << f.m() << " -> " << small.m() << " clauses, " << f.n << " -> " << small.n
                << " variables\n";
      if (shrink_out.empty()) {
        write_dimacs(std::cout, small);
      } else {
        harness::write_text_file(shrink_out, write_dimacs(small));
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "kra-sat: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
