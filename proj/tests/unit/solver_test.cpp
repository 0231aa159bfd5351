#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "corpus.hpp"
#include "eqqcsp/error.hpp"
#include "eqqcsp/qecnf.hpp"
#include "eqqcsp/solver.hpp"
#include "oracles.hpp"

using namespace eqqcsp;

namespace {

Outcome expected(const QEFormula& f) {
  return oracle::qcsp_truth(f) ? Outcome::True : Outcome::False;
}

std::vector<SolverOptions> variants() {
  std::vector<SolverOptions> out;
  for (int bits = 0; bits < 16; ++bits) {
    SolverOptions o;
    o.memoize = bits & 1;
    o.full_kernel_memo = bits & 2;
    o.horn_fast_path = bits & 4;
    o.relax_prune = bits & 8;
    out.push_back(o);
  }
  SolverOptions w;
  w.workers = 4;
  out.push_back(w);
  return out;
}

}  // namespace

TEST(Solver, SmallExamples) {
  EXPECT_TRUE(decide(parse_qecnf("qecnf 2\nforall 1\nexists 2\nc 1=2\n")).is_true());
  EXPECT_TRUE(decide(parse_qecnf("qecnf 2\nexists 1\nforall 2\nc 1=2\n")).is_false());
  EXPECT_TRUE(decide(parse_qecnf("qecnf 2\nforall 1 2\nc 1!=2\n")).is_false());
  EXPECT_TRUE(decide(parse_qecnf("qecnf 0\n")).is_true());
  EXPECT_TRUE(decide(parse_qecnf("qecnf 1\nexists 1\nc 1!=1\n")).is_false());
}

TEST(Solver, ExhaustiveFamilyMatchesOracle) {
  for (const QEFormula& f : corpus::exhaustive_small()) {
    Outcome want = expected(f);
    ASSERT_EQ(decide(f).value, want) << print_qecnf(f);
    ASSERT_EQ(decide_naive(f).value, want) << print_qecnf(f);
  }
}

TEST(Solver, FuzzAllOptionVariantsAgree) {
  std::mt19937_64 rng(42);
  auto opts = variants();
  for (int i = 0; i < 200; ++i) {
    QEFormula f = corpus::fuzz_sentence(rng, 6);
    Outcome want = expected(f);
    for (const SolverOptions& o : opts) {
      ASSERT_EQ(decide(f, o).value, want) << print_qecnf(f);
    }
  }
}

TEST(Solver, FreeVariablesMatchOracle) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    QEFormula s = corpus::fuzz_sentence(rng, 5);
    if (s.num_vars < 3) continue;
    QEFormula f = s;
    f.free_count = 2;
    f.prefix.clear();
    for (const Binding& b : s.prefix)
      if (b.v > 2) f.prefix.push_back(b);
    for (const Partition& p : {Partition{0, 0}, Partition{0, 1}}) {
      bool want = oracle::qcsp_truth(f, p.rgs());
      EXPECT_EQ(decide(f, p).is_true(), want);
      EXPECT_EQ(decide_naive(f, p).is_true(), want);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Solver, NaiveCap) {
  QEFormula f;
  f.num_vars = 9;
  for (Var v = 1; v <= 9; ++v) f.prefix.push_back({Quantifier::Exists, v});
  EXPECT_THROW(decide_naive(f), CapExceeded);
  EXPECT_TRUE(decide(f).is_true());
}

TEST(Solver, BudgetExhaustionCarriesNoVerdict) {
  QEFormula f;
  f.num_vars = 8;
  for (Var v = 1; v <= 8; ++v) f.prefix.push_back({v % 2 ? Quantifier::Forall : Quantifier::Exists, v});
  for (Var v = 4; v <= 8; v += 2) f.matrix.push_back(*Clause::make(std::vector{Literal::neq(v, v - 1), Literal::eq(1, v)}));
  SolverOptions o;
  o.node_budget = 3;
  o.memoize = false;
  EXPECT_EQ(decide(f, o).value, Outcome::BudgetExhausted);
  o.node_budget = 0;
  EXPECT_NE(decide(f, o).value, Outcome::BudgetExhausted);
}

TEST(Solver, NodeBudgetFromEnvironment) {
  ::setenv("EQQCSP_NODE_BUDGET", "17", 1);
  EXPECT_EQ(options_from_env().node_budget, 17u);
  ::unsetenv("EQQCSP_NODE_BUDGET");
  EXPECT_EQ(options_from_env().node_budget, kDefaultNodeBudget);
}

TEST(Solver, StrategiesReplayOnTrueSentences) {
  int strategies = 0;
  for (const QEFormula& f : corpus::exhaustive_small()) {
    if (!decide(f).is_true()) {
      EXPECT_THROW(extract_strategy(f), Error);
      continue;
    }
    Strategy s = extract_strategy(f);
    EXPECT_EQ(replay_strategy(f, s), std::nullopt) << print_qecnf(f);
    ++strategies;
  }
  EXPECT_GT(strategies, 100);
}

TEST(Solver, ReplayFindsLosingPlay) {
  QEFormula f = parse_qecnf("qecnf 2\nforall 1\nexists 2\nc 1!=2\n");
  Strategy s = extract_strategy(f);
  EXPECT_EQ(replay_strategy(f, s), std::nullopt);
  for (auto& [kernel, choice] : s.choices[2]) choice = 0;  // join x's class
  EXPECT_NE(replay_strategy(f, s), std::nullopt);
}

TEST(Horn, SaturationClosesEqualities) {
  std::vector<Clause> cs{unit_eq(1, 2), implication(1, 2, 3, 4), implication(3, 4, 4, 5)};
  HornResult r = horn_saturate(cs, 5);
  ASSERT_TRUE(r.consistent);
  EXPECT_EQ(r.kernel, (Partition{0, 0, 1, 1, 1}));
}

TEST(Horn, FixedClassesConflict) {
  std::vector<Clause> cs{implication(1, 2, 3, 4)};
  HornResult r = horn_saturate(cs, 4, Partition{0, 0, 1, 2});
  EXPECT_FALSE(r.consistent);
  EXPECT_EQ(r.witness, 0u);
  EXPECT_TRUE(horn_saturate(cs, 4, Partition{0, 1, 2, 3}).consistent);
}

TEST(Horn, NegativeClauseRefutes) {
  std::vector<Clause> cs{unit_eq(1, 2), *Clause::make(std::vector{Literal::neq(1, 2)})};
  EXPECT_FALSE(horn_saturate(cs, 2).consistent);
}

TEST(Horn, RejectsNonHorn) {
  std::vector<Clause> cs{*Clause::make(std::vector{Literal::eq(1, 2), Literal::eq(3, 4)})};
  EXPECT_THROW(horn_saturate(cs, 4), ShapeError);
}
