#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "kra/decision.hpp"
#include "kra/engine.hpp"
#include "kra/random.hpp"
#include "test_util.hpp"

namespace kra {
namespace {

using testing::all_patterns_formula;
using testing::worked_example;

Cube cube(std::initializer_list<int> lits) { return canonicalize_cube(lits); }

EngineConfig full_closure(WorklistOrder order = WorklistOrder::Fifo) {
  EngineConfig cfg;
  cfg.order = order;
  cfg.stop_on_empty = false;
  return cfg;
}

// ---------------------------------------------------------------------------
// resolve_rejected / classify_rule

TEST(Resolve, TwoTwoToUnit) {
  EXPECT_EQ(resolve_rejected(cube({1, 2}), cube({1, -2})), ResolveResult(cube({1})));
  EXPECT_EQ(classify_rule(cube({1, 2}), cube({1, -2}), cube({1})).id, RuleId::R22CI);
}

TEST(Resolve, ThreeThreeToPair) {
  EXPECT_EQ(resolve_rejected(cube({-1, -2, -3}), cube({-1, -2, 3})), ResolveResult(cube({-1, -2})));
  EXPECT_EQ(classify_rule(cube({-1, -2, -3}), cube({-1, -2, 3}), cube({-1, -2})).id, RuleId::R33CII);
}

TEST(Resolve, SeveralClashesNotApplicable) {
  EXPECT_TRUE(std::holds_alternative<NotApplicable>(resolve_rejected(cube({1, 2, 3}), cube({-1, -2, -3}))));
  EXPECT_TRUE(std::holds_alternative<NotApplicable>(resolve_rejected(cube({1, 2}), cube({1, 2}))));
}

TEST(Resolve, ThreeThreeToFourRespectsWidthCap) {
  EXPECT_EQ(resolve_rejected(cube({1, 2, 3}), cube({4, 5, -3}), 4), ResolveResult(cube({1, 2, 4, 5})));
  EXPECT_TRUE(std::holds_alternative<NotApplicable>(resolve_rejected(cube({1, 2, 3}), cube({4, 5, -3}), 3)));
  const RuleClass rc = classify_rule(cube({1, 2, 3}), cube({4, 5, -3}), cube({1, 2, 4, 5}));
  EXPECT_EQ(rc.id, RuleId::R33CDD);
  EXPECT_TRUE(rc.exact);
}

TEST(Resolve, UnitClashIsEmpty) {
  EXPECT_TRUE(std::holds_alternative<EmptyCube>(resolve_rejected(cube({1}), cube({-1}))));
  EXPECT_EQ(classify_rule(1, 1, 0).id, RuleId::EmptyResolvent);
}

TEST(ClassifyRule, ExactTable) {
  struct Row {
    std::size_t w1, w2, wc;
    RuleId id;
  };
  for (const Row& r : {Row{2, 2, 1, RuleId::R22CI}, Row{3, 3, 2, RuleId::R33CII}, Row{2, 3, 3, RuleId::R23CDD},
                       Row{4, 2, 3, RuleId::R24CIDD}, Row{3, 3, 3, RuleId::R33CID}, Row{3, 4, 3, RuleId::R34CIID},
                       Row{4, 4, 3, RuleId::R44CIII}, Row{3, 3, 4, RuleId::R33CDD}}) {
    const RuleClass rc = classify_rule(r.w1, r.w2, r.wc);
    EXPECT_EQ(rc.id, r.id) << r.w1 << "," << r.w2 << "->" << r.wc;
    EXPECT_TRUE(rc.exact);
  }
}

TEST(ClassifyRule, UnitPartnersAreInexact) {
  EXPECT_FALSE(classify_rule(1, 3, 2).exact);
  EXPECT_FALSE(classify_rule(2, 3, 2).exact);
  EXPECT_FALSE(classify_rule(2, 2, 2).exact);
}

TEST(AdmissibleResolution, FourFourOnlyToThree) {
  EXPECT_TRUE(admissible_resolution(4, 4, 3));
  EXPECT_FALSE(admissible_resolution(4, 4, 4));
  EXPECT_TRUE(admissible_resolution(3, 4, 4));
}

// ---------------------------------------------------------------------------
// seeding, subsumption, step

TEST(Seed, WorkedExampleSeedsAreClauseComplements) {
  const RejectionStore store = seed_rejections(worked_example());
  const auto cubes = store.level_cubes(3);
  const std::set<Cube> level3(cubes.begin(), cubes.end());
  const std::set<Cube> expected = {cube({-1, -2, -3}), cube({-1, -2, 3}), cube({-1, -2, -4}), cube({-1, 4, 5}),
                                   cube({-2, 3, -5})};
  EXPECT_EQ(level3, expected);
  EXPECT_EQ(store.seed_count(), 5u);
  EXPECT_EQ(derivation_log(store).size(), 5u);
  for (const Derivation& d : derivation_log(store)) EXPECT_EQ(d.rule, RuleId::Seed);
}

TEST(Seed, UnitClause) {
  const RejectionStore store = seed_rejections(make_formula(1, {{1}}));
  EXPECT_EQ(store.level_cubes(1), std::vector<Cube>{cube({-1})});
}

TEST(Seed, DuplicateClausesStoreOnce) {
  Formula f{3, {make_clause({1, 2, 3}), make_clause({1, 2, 3})}};
  const RejectionStore store = seed_rejections(f);
  EXPECT_EQ(store.size(), 1u);
  EXPECT_EQ(store.log().size(), 1u);
}

TEST(Subsumption, PairOverUniverseTriple) {
  RejectionStore store(4, TripleUniverse::from_formula(make_formula(4, {{1, 2, 4}}), false));
  store.add(cube({-1, -2}), RuleId::R33CII, {});
  const auto added = subsumption_closure(store, cube({-1, -2}));
  EXPECT_EQ(std::set<Cube>(added.begin(), added.end()), (std::set<Cube>{cube({-1, -2, 4}), cube({-1, -2, -4})}));
  for (const Cube& c : added) EXPECT_EQ(store.derivation(*store.find(c)).rule, RuleId::R23II);
}

TEST(Subsumption, UnitGivesFourSupersets) {
  RejectionStore store(3, TripleUniverse::from_formula(make_formula(3, {{1, 2, 3}}), false));
  store.add(cube({1}), RuleId::R22CI, {});
  const auto added = subsumption_closure(store, cube({1}));
  ASSERT_EQ(added.size(), 4u);
  for (const Cube& c : added) {
    EXPECT_TRUE(c.contains(Literal::from_dimacs(1)));
    EXPECT_EQ(store.derivation(*store.find(c)).rule, RuleId::R13I);
  }
}

TEST(Subsumption, WidthThreeIsIgnored) {
  RejectionStore store = seed_rejections(worked_example());
  EXPECT_TRUE(subsumption_closure(store, cube({-1, -2, -3})).empty());
}

TEST(Step, WorkedExampleFirstPopResolvesToPair) {
  RejectionStore store = seed_rejections(worked_example());
  EngineConfig cfg;
  EXPECT_GT(step(store, cfg), 0u);
  auto id = store.find(cube({-1, -2}));
  ASSERT_TRUE(id.has_value());
  const Derivation& d = store.derivation(*id);
  EXPECT_EQ(d.rule, RuleId::R33CII);
  EXPECT_EQ(d.parents, (std::vector<DerivationId>{0, 1}));
}

TEST(Step, ComplementaryUnitsGiveEmpty) {
  RejectionStore store = seed_rejections(make_formula(1, {{1}, {-1}}));
  step(store, EngineConfig{});
  EXPECT_TRUE(store.empty_derived());
  EXPECT_EQ(store.log().back().rule, RuleId::EmptyResolvent);
}

TEST(Step, NoPartnerNoAdditions) {
  RejectionStore store = seed_rejections(make_formula(6, {{1, 2, 3}, {4, 5, 6}}));
  EXPECT_EQ(step(store, EngineConfig{}), 0u);
}

TEST(Step, IterationCap) {
  RejectionStore store = seed_rejections(worked_example());
  EngineConfig cfg;
  cfg.iteration_cap = 1;
  step(store, cfg);
  try {
    step(store, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IterationCapExceeded);
  }
}

// ---------------------------------------------------------------------------
// fixpoint

TEST(Fixpoint, WorkedExampleNoExhaustedTriple) {
  const Formula f = worked_example();
  RejectionStore store = seed_rejections(f);
  const FixpointReport rep = fixpoint(store, EngineConfig{});
  EXPECT_TRUE(rep.reached_fixpoint);
  EXPECT_FALSE(rep.empty_derived);
  for (const VarTriple& t : store.universe().triples()) EXPECT_FALSE(cova_status(store, t).survivors.empty());

  const auto models = testing::truth_table_models(f);
  for (const Derivation& d : store.log()) EXPECT_TRUE(testing::truth_table_cube_sound(models, d.conclusion.to_dimacs()));
}

TEST(Fixpoint, AllPatternsDerivesUnitsThenEmpty) {
  RejectionStore store = seed_rejections(all_patterns_formula());
  EXPECT_TRUE(store.exhausted_triple().has_value());
  const FixpointReport rep = fixpoint(store, EngineConfig{});
  EXPECT_TRUE(rep.empty_derived);
  EXPECT_EQ(store.log().back().rule, RuleId::EmptyResolvent);
  const auto units = store.level_cubes(1);
  EXPECT_NE(std::find(units.begin(), units.end(), cube({1})), units.end());
  EXPECT_NE(std::find(units.begin(), units.end(), cube({-1})), units.end());
  EXPECT_TRUE(testing::truth_table_models(all_patterns_formula()).empty());
}

TEST(Fixpoint, EmptyFormula) {
  RejectionStore store = seed_rejections(Formula{4, {}});
  const FixpointReport rep = fixpoint(store, EngineConfig{});
  EXPECT_TRUE(rep.reached_fixpoint);
  EXPECT_EQ(rep.iterations, 0u);
}

TEST(Fixpoint, ReportCountsMatchLog) {
  RejectionStore store = seed_rejections(random_formula(9, 40, 3));
  const FixpointReport rep = fixpoint(store, full_closure());
  std::size_t fired = 0;
  for (auto [rule, c] : rep.firings_per_rule) fired += c;
  EXPECT_EQ(fired + rep.seeds, store.log().size());
  EXPECT_EQ(rep.total_additions() + rep.seeds, store.size());
}

TEST(Fixpoint, InvalidMaxWidth) {
  RejectionStore store = seed_rejections(worked_example());
  EngineConfig cfg;
  cfg.max_width = 5;
  EXPECT_THROW(fixpoint(store, cfg), Error);
}

// ---------------------------------------------------------------------------
// log format

TEST(DerivationLog, TextFormat) {
  RejectionStore store = seed_rejections(make_formula(2, {{1, -2}, {1, 2}}));
  fixpoint(store, EngineConfig{});
  const std::string text = format_log(store.log());
  EXPECT_EQ(text.substr(0, text.find('\n', text.find('\n') + 1) + 1), "0 SEED -1 2 0 c 0\n1 SEED -1 -2 0 c 1\n");
  EXPECT_NE(text.find("R22CI -1 0 p 0 1\n"), std::string::npos);
}

TEST(DerivationLog, EmptyRecordFormat) {
  RejectionStore store = seed_rejections(make_formula(1, {{1}, {-1}}));
  fixpoint(store, EngineConfig{});
  EXPECT_EQ(format_log(store.log()), "0 SEED -1 0 c 0\n1 SEED 1 0 c 1\n2 EMPTY_RESOLVENT 0 p 0 1\n");
}

TEST(DerivationLog, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RejectionStore store = seed_rejections(random_formula(8, 35, seed));
    fixpoint(store, full_closure());
    std::istringstream in(format_log(store.log()));
    EXPECT_EQ(parse_log(in), store.log());
  }
}

TEST(DerivationLog, ParseErrors) {
  EXPECT_THROW(parse_derivation("x SEED 1 0"), Error);
  EXPECT_THROW(parse_derivation("0 NOPE 1 0"), Error);
  EXPECT_THROW(parse_derivation("0 SEED 1 2"), Error);
}

// ---------------------------------------------------------------------------
// properties over random formulas

struct Sample {
  std::uint64_t seed;
  Formula f;
};

std::vector<Sample> samples(std::size_t count, Var n_lo, Var n_hi) {
  std::vector<Sample> out;
  for (std::uint64_t s = 0; s < count; ++s) {
    const Var n = n_lo + static_cast<Var>(s % (n_hi - n_lo + 1));
    const std::size_t m = std::min<std::size_t>(8 * choose(n, 3), static_cast<std::size_t>(n * (3.0 + (s % 7) * 0.5)));
    out.push_back({s, random_formula(n, m, 1000 + s)});
  }
  return out;
}

TEST(EngineProperties, EveryStoredCubeIsSoundAgainstTruthTable) {
  for (const auto& [seed, f] : samples(60, 4, 11)) {
    RejectionStore store = seed_rejections(f);
    fixpoint(store, full_closure());
    const auto models = testing::truth_table_models(f);
    for (const Derivation& d : store.log()) {
      if (d.conclusion.is_empty()) {
        EXPECT_TRUE(models.empty()) << "seed " << seed;
      } else {
        EXPECT_TRUE(testing::truth_table_cube_sound(models, d.conclusion.to_dimacs()))
            << "seed " << seed << " cube " << d.conclusion;
      }
    }
  }
}

TEST(EngineProperties, ResolutionAndSubsumptionCorrespondence) {
  for (const auto& [seed, f] : samples(40, 5, 12)) {
    RejectionStore store = seed_rejections(f);
    fixpoint(store, full_closure());
    for (const Derivation& d : store.log()) {
      if (d.parents.size() == 2) {
        // As clauses: negate everything and resolve on the unique pivot.
        std::set<int> a, b, concl;
        for (int x : store.derivation(d.parents[0]).conclusion.to_dimacs()) a.insert(-x);
        for (int x : store.derivation(d.parents[1]).conclusion.to_dimacs()) b.insert(-x);
        for (int x : d.conclusion.to_dimacs()) concl.insert(-x);
        std::vector<int> pivots;
        for (int x : a)
          if (b.count(-x)) pivots.push_back(x);
        ASSERT_EQ(pivots.size(), 1u);
        std::set<int> resolvent;
        for (int x : a)
          if (x != pivots[0]) resolvent.insert(x);
        for (int x : b)
          if (x != -pivots[0]) resolvent.insert(x);
        EXPECT_EQ(resolvent, concl);
      } else if (d.parents.size() == 1) {
        const Cube& p = store.derivation(d.parents[0]).conclusion;
        EXPECT_TRUE(p.subset_of(d.conclusion));
        EXPECT_GT(d.conclusion.width(), p.width());
      } else {
        EXPECT_EQ(d.rule, RuleId::Seed);
      }
    }
  }
}

TEST(EngineProperties, IdsIncreaseAndParentsPrecede) {
  for (const auto& [seed, f] : samples(30, 5, 12)) {
    RejectionStore store = seed_rejections(f);
    fixpoint(store, full_closure());
    for (std::size_t i = 0; i < store.log().size(); ++i) {
      const Derivation& d = store.log()[i];
      EXPECT_EQ(d.id, i);
      for (DerivationId p : d.parents) EXPECT_LT(p, d.id);
    }
  }
}

TEST(EngineProperties, AdditionsWithinBoundAndWidthCap) {
  for (const auto& [seed, f] : samples(40, 5, 12)) {
    for (std::size_t w : {3u, 4u}) {
      EngineConfig cfg = full_closure();
      cfg.max_width = w;
      RejectionStore store = seed_rejections(f);
      const FixpointReport rep = fixpoint(store, cfg);
      EXPECT_LE(rep.total_additions(), cube_space_bound(f.n));
      for (const Derivation& d : store.log()) EXPECT_LE(d.conclusion.width(), w);
    }
  }
}

TEST(EngineProperties, Deterministic) {
  for (const auto& [seed, f] : samples(10, 6, 12)) {
    RejectionStore a = seed_rejections(f), b = seed_rejections(f);
    fixpoint(a, full_closure());
    fixpoint(b, full_closure());
    EXPECT_EQ(format_log(a.log()), format_log(b.log()));
  }
}

TEST(EngineProperties, FinalSetIndependentOfWorklistOrder) {
  for (const auto& [seed, f] : samples(40, 5, 12)) {
    RejectionStore fifo = seed_rejections(f), lifo = seed_rejections(f);
    fixpoint(fifo, full_closure(WorklistOrder::Fifo));
    fixpoint(lifo, full_closure(WorklistOrder::Lifo));
    for (std::size_t w = 1; w <= 4; ++w) {
      auto x = fifo.level_cubes(w), y = lifo.level_cubes(w);
      EXPECT_EQ(std::set<Cube>(x.begin(), x.end()), std::set<Cube>(y.begin(), y.end())) << "seed " << seed;
    }
    EXPECT_EQ(fifo.empty_derived(), lifo.empty_derived());
  }
}

TEST(EngineProperties, CovaTrackerMatchesStatus) {
  for (const auto& [seed, f] : samples(40, 4, 10)) {
    RejectionStore store = seed_rejections(f);
    fixpoint(store, full_closure());
    const auto& triples = store.universe().triples();
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const std::size_t survivors = cova_status(store, triples[i]).survivors.size();
      EXPECT_EQ(8 - std::popcount(store.cova_mask(i)), static_cast<int>(survivors));
    }
    const bool any_exhausted = std::any_of(triples.begin(), triples.end(), [&](const VarTriple& t) {
      return cova_status(store, t).survivors.empty();
    });
    EXPECT_EQ(store.exhausted_triple().has_value(), any_exhausted);
  }
}

TEST(TripleUniverse, FirstOccurrenceAndAllTriples) {
  const Formula f = make_formula(4, {{2, 3, 4}, {1}, {1, 2, 3}, {-2, 3, -4}});
  const TripleUniverse u = TripleUniverse::from_formula(f, false);
  EXPECT_EQ(u.triples(), (std::vector<VarTriple>{VarTriple(2, 3, 4), VarTriple(1, 2, 3)}));
  const TripleUniverse all = TripleUniverse::from_formula(f, true);
  EXPECT_EQ(all.size(), 4u);
  EXPECT_EQ(all.triples()[0], VarTriple(2, 3, 4));
}

}  // namespace
}  // namespace kra
