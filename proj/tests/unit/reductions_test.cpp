#include <gtest/gtest.h>

#include <algorithm>

#include "corpus.hpp"
#include "eqqcsp/error.hpp"
#include "eqqcsp/qecnf.hpp"
#include "eqqcsp/reductions.hpp"
#include "eqqcsp/relation.hpp"
#include "eqqcsp/solver.hpp"
#include "eqqcsp/transform.hpp"
#include "oracles.hpp"

using namespace eqqcsp;

namespace {

bool all_horn(const QEFormula& f) {
  for (const Clause& c : f.matrix)
    if (!c.is_horn()) return false;
  return true;
}

}  // namespace

TEST(QbfReduction, ShapeAndReport) {
  QBF phi{1, {{1, -2, 2}}, {1, 2}};
  Reduction r = qbf_to_qcsp_I(phi);
  EXPECT_TRUE(r.formula.is_sentence());
  EXPECT_TRUE(all_horn(r.formula));
  for (const Clause& c : r.formula.matrix) EXPECT_EQ(c.size(), 2u);
  ASSERT_NE(r.report.find("t"), nullptr);
  ASSERT_NE(r.report.find("z"), nullptr);
  EXPECT_EQ(r.formula.prefix.front().q, Quantifier::Forall);
  EXPECT_EQ(r.formula.prefix.back().q, Quantifier::Exists);
  Var z = r.report.find("z")->v;
  auto zb = std::find_if(r.formula.prefix.begin(), r.formula.prefix.end(),
                         [&](const Binding& b) { return b.v == z; });
  ASSERT_NE(zb, r.formula.prefix.end());
  EXPECT_EQ(zb->q, Quantifier::Exists);
  // Only existential path vertices follow z.
  for (auto it = zb; it != r.formula.prefix.end(); ++it) EXPECT_EQ(it->q, Quantifier::Exists);
  EXPECT_NE(r.report.to_text().find("reduction qsat"), std::string::npos);
}

TEST(QbfReduction, OneBlockFamilyMatchesBruteForce) {
  for (const QBF& phi : corpus::qbf_family_n1()) {
    bool want = oracle::qbf_truth(phi);
    EXPECT_EQ(qbf_truth(phi), want);
    EXPECT_EQ(decide(qbf_to_qcsp_I(phi).formula).is_true(), want);
    EXPECT_EQ(decide(qbf_to_qcsp_I_existential_tf(phi).formula).is_true(), want);
  }
}

TEST(QbfReduction, TwoBlockFamilyMatchesBruteForce) {
  auto family = corpus::qbf_family_n2();
  ASSERT_GE(family.size(), 200u);
  for (const QBF& phi : family) {
    EXPECT_EQ(decide(qbf_to_qcsp_I(phi).formula).is_true(), oracle::qbf_truth(phi));
  }
}

TEST(QbfReduction, RejectsOutOfRangeLiteral) {
  QBF phi{1, {{1, 3, 2}}, {1, 2}};
  EXPECT_THROW(qbf_to_qcsp_I(phi), ShapeError);
}

TEST(Monotone, PaddingReachesTwoOfEach) {
  bool degenerate = false;
  MonotoneCNF phi{2, {{1, 2, 2}}, {}};
  MonotoneCNF p = pad_monotone(phi, &degenerate);
  EXPECT_TRUE(degenerate);
  EXPECT_GE(p.negative.size(), 2u);
  EXPECT_GE(p.positive.size(), 2u);
  EXPECT_EQ(monotone_satisfiable(p), monotone_satisfiable(phi));
}

TEST(Monotone, ReductionIsHornPiTwo) {
  MonotoneCNF phi{3, {{1, 2, 3}, {1, 1, 2}}, {{1, 2, 3}, {3, 3, 3}}};
  QEFormula f = mon3sat_to_pi2(phi).formula;
  AlternationProfile p = alternation_profile(f);
  ASSERT_EQ(p.k, 2);
  EXPECT_EQ(p.leading, Quantifier::Forall);
  EXPECT_TRUE(all_horn(f));
}

TEST(Monotone, FamilySampleMatchesBruteForce) {
  auto family = corpus::monotone_family();
  for (std::size_t i = 0; i < family.size(); i += 37) {
    const MonotoneCNF& phi = family[i];
    bool sat = oracle::monotone_sat(phi);
    EXPECT_EQ(monotone_satisfiable(phi), sat);
    EXPECT_EQ(decide(mon3sat_to_pi2(phi).formula).is_true(), !sat);
  }
}

TEST(OrChain, DefinesTheDisjunction) {
  std::vector<std::vector<Predicate>> cases{
      {{1, 2, true}},
      {{1, 2, false}},
      {{1, 2, true}, {3, 4, true}},
      {{1, 2, false}, {2, 3, true}},
      {{1, 2, false}, {3, 4, false}, {1, 4, true}},
  };
  for (const auto& preds : cases) {
    int arity = 0;
    std::vector<Literal> lits;
    for (const Predicate& p : preds) {
      arity = std::max({arity, p.a, p.b});
      lits.push_back(p.equal ? Literal::eq(p.a, p.b) : Literal::neq(p.a, p.b));
    }
    QEFormula f = or_chain_formula(arity, preds);
    std::vector<Clause> want{*Clause::make(lits)};
    EXPECT_EQ(relation_from_formula(f), relation_of_clauses(want, arity));
    EXPECT_EQ(oracle::relation_of(f), relation_of_clauses(want, arity));
  }
  FormulaBuilder b(2);
  EXPECT_THROW(or_chain(b, {}, "x"), std::invalid_argument);
}

TEST(Nae, GadgetMatchesTruthTable) {
  QEFormula g = nae_gadget_formula();
  ASSERT_EQ(g.free_count, 6);
  // Pair encoding: v=v' means true. Check all 8 encodings, each over every
  // kernel of the six free variables that realises it.
  Relation rel = relation_from_formula(g);
  EXPECT_EQ(rel, oracle::existential_relation_of(g));
  for_each_partition(6, [&](const Partition& p) {
    bool a = p.same_block(0, 1), b = p.same_block(2, 3), c = p.same_block(4, 5);
    EXPECT_EQ(rel.contains(p), oracle::nae(a, b, c)) << p.to_string();
  });
}

TEST(Nae, CnfHasNoTautologies) {
  for (const auto& clause : nae_cnf(1, 2, 3, 4, 5, 6)) {
    EXPECT_FALSE(clause.empty());
    for (std::size_t i = 0; i < clause.size(); ++i)
      for (std::size_t j = i + 1; j < clause.size(); ++j)
        EXPECT_FALSE(clause[i].a == clause[j].a && clause[i].b == clause[j].b);
  }
  FormulaBuilder b(5);
  EXPECT_THROW(nae_gadget(b, 1, 2, 3, 4, 5, 5, "n"), std::invalid_argument);
}

TEST(Qnae, FamilyMatchesBruteForce) {
  for (const QNAEInstance& inst : corpus::qnae_family()) {
    bool want = oracle::qnae_truth(inst);
    EXPECT_EQ(qnae_truth(inst), want);
    int k = std::max(2, pi_level(inst));
    EXPECT_EQ(decide(qnae_to_qcsp(inst, k).formula).is_true(), want);
  }
}

TEST(Qnae, LevelCheck) {
  QNAEInstance inst;
  inst.n = 3;
  inst.prefix = {{Quantifier::Forall, 1}, {Quantifier::Exists, 2}, {Quantifier::Forall, 3}};
  inst.constraints = {{1, 2, 3}};
  EXPECT_EQ(pi_level(inst), 3);
  EXPECT_THROW(qnae_to_qcsp(inst, 2), ShapeError);
  EXPECT_NO_THROW(qnae_to_qcsp(inst, 3));
}

TEST(Bcsp, ReductionMatchesBruteForce) {
  // Every instance over 3 variables with at most 2 constraints.
  std::vector<BoolCSP::Constraint> pool;
  for (int x = 1; x <= 3; ++x)
    for (int y = 1; y <= 3; ++y) {
      if (x != y) pool.push_back({BoolCSP::Neq, {x, y, 0}});
      for (int z = 1; z <= 3; ++z) pool.push_back({BoolCSP::Disj, {x, y, z}});
    }
  int sat = 0, unsat = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); j += 3) {
      BoolCSP inst{3, {pool[i], pool[j]}};
      bool want = oracle::bcsp_sat(inst);
      EXPECT_EQ(boolcsp_satisfiable(inst), want);
      EXPECT_EQ(decide(boolcsp_to_pi2_disj(inst).formula).is_true(), want);
      (want ? sat : unsat)++;
    }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(BooleanEvaluators, CapIsEnforced) {
  QBF phi;
  phi.n = 11;
  phi.clauses = {{1, 2, 3}};
  EXPECT_THROW(qbf_truth(phi), CapExceeded);
}
