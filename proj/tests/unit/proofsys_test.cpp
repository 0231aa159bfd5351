#include <gtest/gtest.h>

#include "eqqcsp/error.hpp"
#include "eqqcsp/proofsys.hpp"
#include "eqqcsp/qecnf.hpp"
#include "eqqcsp/solver.hpp"

using namespace eqqcsp;

namespace {

using J = Justification;

Equality eq(Var a, Var b) { return Equality::of(a, b); }

QEFormula with_free(std::string_view qecnf, int free_count) {
  QEFormula f = parse_qecnf(qecnf);
  f.free_count = free_count;
  std::erase_if(f.prefix, [&](const Binding& b) { return b.v <= free_count; });
  f.validate();
  return f;
}

// Free 1..3, then k layers (exists, forall) of one variable each, empty core.
LayeredFormula transitivity_formula(int k) {
  QEFormula f;
  f.free_count = 3;
  f.num_vars = 3 + 2 * k;
  for (int i = 0; i < k; ++i) {
    f.prefix.push_back({Quantifier::Exists, 4 + 2 * i});
    f.prefix.push_back({Quantifier::Forall, 5 + 2 * i});
  }
  return layer_formula(f);
}

Subproof transitivity_proof(int level) {
  Subproof s;
  if (level == 0) {
    s.zero = ZeroProof{{{eq(1, 2), {J::Hyp}}, {eq(2, 3), {J::Hyp}}, {eq(1, 3), {J::Trans, 1, 2}}}};
  } else {
    auto k = std::make_shared<KProof>();
    k->steps.push_back({eq(1, 3), {}, transitivity_proof(level - 1)});
    s.k = k;
  }
  return s;
}

// exists x1 forall u1 exists x2 with units u1=x2, x2=x1.
LayeredFormula false_sigma3() {
  return layer_formula(parse_qecnf("qecnf 3\nexists 1\nforall 2\nexists 3\nc 2=3\nc 1=3\n"));
}

KProof contradiction(std::vector<std::pair<Var, Var>> uassign) {
  ZeroProof z{{{eq(2, 3), {J::Unit}}, {eq(1, 3), {J::Unit}}, {eq(1, 2), {J::Trans, 1, 2}}}};
  KProof p;
  p.mode = KProof::Contradiction;
  p.steps.push_back({eq(1, 2), std::move(uassign), {z, nullptr}});
  return p;
}

}  // namespace

TEST(Layering, SplitsPrefixIntoLayersAndCore) {
  LayeredFormula lf = layer_formula(parse_qecnf("qecnf 3\nexists 1\nforall 2\nexists 3\nc 1!=2 2=3\n"));
  EXPECT_EQ(lf.k(), 1);
  EXPECT_EQ(lf.layers[0].exists, (std::vector<Var>{1}));
  EXPECT_EQ(lf.layers[0].forall, (std::vector<Var>{2}));
  EXPECT_EQ(lf.core, (std::vector<Var>{3}));
  ASSERT_EQ(lf.implications.size(), 1u);
  EXPECT_EQ(lf.implications[0].first, eq(1, 2));
  EXPECT_EQ(lf.free_at(1), (std::vector<Var>{1, 2}));

  LayeredFormula flat = layer_formula(parse_qecnf("qecnf 2\nexists 1 2\nc 1=2\n"));
  EXPECT_EQ(flat.k(), 0);
  EXPECT_EQ(flat.core, (std::vector<Var>{1, 2}));
  EXPECT_EQ(flat.units, (std::vector<Equality>{eq(1, 2)}));

  LayeredFormula lead = layer_formula(parse_qecnf("qecnf 2\nforall 1\nexists 2\n"));
  EXPECT_EQ(lead.k(), 1);
  EXPECT_TRUE(lead.layers[0].exists.empty());
}

TEST(Layering, RejectsClausesOutsideTheLanguage) {
  try {
    layer_formula(parse_qecnf("qecnf 4\nexists 1 2 3 4\nc 1=2 3=4\n"));
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("1=2 | 3=4"), std::string::npos);
  }
  EXPECT_FALSE(is_gamma_clause(*Clause::make(std::vector{Literal::neq(1, 2)})));
  EXPECT_TRUE(is_gamma_clause(implication(1, 2, 3, 4)));
  EXPECT_TRUE(is_gamma_clause(unit_eq(1, 2)));
}

TEST(ZeroProofs, TransitivityThroughTheCore) {
  LayeredFormula lf = layer_formula(with_free("qecnf 3\nexists 1 2 3\nc 1=3\nc 3=2\n", 2));
  ZeroProof p{{{eq(1, 3), {J::Unit}}, {eq(2, 3), {J::Unit}}, {eq(1, 2), {J::Trans, 1, 2}}}};
  VerifyResult r = verify_zero_proof(lf, {}, p, eq(1, 2));
  EXPECT_TRUE(r) << r.reason;
  EXPECT_EQ(r.steps_checked, proof_steps(p));

  p.steps[2].why = {J::Trans, 3, 2};
  r = verify_zero_proof(lf, {}, p, eq(1, 2));
  EXPECT_FALSE(r);
  EXPECT_NE(r.reason.find("step 3"), std::string::npos);
}

TEST(ZeroProofs, ImplicationNeedsEarlierPremise) {
  LayeredFormula lf = layer_formula(with_free("qecnf 3\nexists 1 2 3\nc 1!=3 3=2\nc 1=3\n", 2));
  ZeroProof good{{{eq(1, 3), {J::Unit}}, {eq(2, 3), {J::Impl, 1}}, {eq(1, 2), {J::Trans, 1, 2}}}};
  EXPECT_TRUE(verify_zero_proof(lf, {}, good, eq(1, 2)));
  ZeroProof forward{{{eq(2, 3), {J::Impl, 2}}, {eq(1, 3), {J::Unit}}, {eq(1, 2), {J::Trans, 1, 2}}}};
  EXPECT_FALSE(verify_zero_proof(lf, {}, forward, eq(1, 2)));
}

TEST(ZeroProofs, RejectsRepeatsWrongTargetsAndUnknownHypotheses) {
  LayeredFormula lf = layer_formula(with_free("qecnf 3\nexists 1 2 3\nc 1=3\n", 2));
  std::vector<Equality> E{eq(1, 2)};
  ZeroProof rep{{{eq(1, 3), {J::Unit}}, {eq(1, 3), {J::Unit}}}};
  EXPECT_FALSE(verify_zero_proof(lf, {}, rep));
  ZeroProof hyp{{{eq(1, 2), {J::Hyp}}}};
  EXPECT_TRUE(verify_zero_proof(lf, E, hyp, eq(1, 2)));
  EXPECT_FALSE(verify_zero_proof(lf, {}, hyp, eq(1, 2)));
  ZeroProof inner{{{eq(1, 3), {J::Unit}}}};
  EXPECT_FALSE(verify_zero_proof(lf, {}, inner));  // 3 is not free
  EXPECT_FALSE(verify_zero_proof(lf, E, hyp, eq(1, 3)));
}

TEST(KProofs, TransitivityAtEveryLevel) {
  std::vector<Equality> E{eq(1, 2), eq(2, 3)};
  for (int k = 0; k <= 3; ++k) {
    LayeredFormula lf = transitivity_formula(k);
    ASSERT_EQ(lf.k(), k);
    Subproof s = transitivity_proof(k);
    VerifyResult r = s.zero ? verify_zero_proof(lf, E, *s.zero, eq(1, 3))
                            : verify_k_proof(lf, E, *s.k, eq(1, 3));
    EXPECT_TRUE(r) << "k=" << k << ": " << r.reason;
    std::vector<Equality> half{eq(1, 2)};
    EXPECT_FALSE(s.zero ? verify_zero_proof(lf, half, *s.zero) : verify_k_proof(lf, half, *s.k));
  }
}

TEST(KProofs, UniversalAssignmentMustPointBackwards) {
  // free 1, exists 2, forall 3 4, empty core.
  LayeredFormula lf = layer_formula(with_free("qecnf 4\nexists 1 2\nforall 3 4\n", 1));
  KProof later;
  later.mode = KProof::Contradiction;
  later.steps.push_back({std::nullopt, {{3, 4}}, {ZeroProof{}, nullptr}});
  VerifyResult r = verify_k_contradiction(lf, {}, later);
  EXPECT_FALSE(r);
  EXPECT_NE(r.reason.find("does not precede"), std::string::npos) << r.reason;

  KProof dup = later;
  dup.steps[0].uassign = {{4, 1}, {4, 3}};
  r = verify_k_contradiction(lf, {}, dup);
  EXPECT_FALSE(r);
  EXPECT_NE(r.reason.find("assigned twice"), std::string::npos) << r.reason;
}

TEST(KProofs, StepCannotCiteALaterStep) {
  LayeredFormula lf = transitivity_formula(1);
  std::vector<Equality> E{eq(1, 2)};
  KProof p;
  ZeroProof uses_later{{{eq(2, 3), {J::Hyp}}, {eq(1, 2), {J::Hyp}}, {eq(1, 3), {J::Trans, 1, 2}}}};
  ZeroProof plain{{{eq(2, 3), {J::Hyp}}}};
  p.steps.push_back({eq(1, 3), {}, {uses_later, nullptr}});
  p.steps.push_back({eq(2, 3), {}, {plain, nullptr}});
  VerifyResult r = verify_k_proof(lf, E, p);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.reason.rfind("step 1", 0), 0u) << r.reason;
}

TEST(Contradictions, TerminalUniversalEquality) {
  LayeredFormula lf = false_sigma3();
  KProof p = contradiction({});
  VerifyResult r = verify_k_contradiction(lf, {}, p);
  EXPECT_TRUE(r) << r.reason;
  EXPECT_EQ(r.steps_checked, proof_steps(p));
  EXPECT_TRUE(decide(parse_qecnf("qecnf 3\nexists 1\nforall 2\nexists 3\nc 2=3\nc 1=3\n")).is_false());

  EXPECT_FALSE(verify_k_contradiction(lf, {}, contradiction({{2, 1}})));
}

TEST(Contradictions, FailingSubproofAndZeroLevel) {
  LayeredFormula lf = false_sigma3();
  KProof p = contradiction({});
  p.steps[0].sub.zero->steps[2].why = {J::Trans, 1, 1};
  EXPECT_FALSE(verify_k_contradiction(lf, {}, p));

  KProof bot;
  bot.mode = KProof::Contradiction;
  bot.steps.push_back({std::nullopt, {}, {ZeroProof{}, nullptr}});
  EXPECT_FALSE(verify_k_contradiction(lf, {}, bot));  // no 0-level contradiction
  EXPECT_FALSE(verify_k_contradiction(transitivity_formula(0), {}, contradiction({})));
}

TEST(SizeAudit, BoundsAndCosts) {
  EXPECT_EQ(size_bound(6, 1), 777600u);
  EXPECT_EQ(size_bound(2, 0), 80u);
  EXPECT_EQ(size_bound(100, 20), UINT64_MAX);
  EXPECT_EQ(equality_cost(6), 9u);  // ceil(2 log2 6) = 6
  EXPECT_EQ(equality_cost(2), 5u);
  EXPECT_EQ(equality_cost(4), 7u);

  KProof p = contradiction({});
  SizeAudit a = size_audit(p, 3, 1);
  EXPECT_TRUE(a.within);
  EXPECT_EQ(a.bound, size_bound(3, 1));
  EXPECT_GT(a.symbols, 0u);
  SizeAudit z = size_audit(*p.steps[0].sub.zero, 3);
  EXPECT_LT(z.symbols, a.symbols);
}

TEST(ProofText, RoundTrip) {
  KProof p = contradiction({{2, 1}});
  std::string text = print_proof(p);
  ParsedProof back = parse_proof(text);
  ASSERT_TRUE(back.k);
  EXPECT_EQ(print_proof(*back.k), text);

  Subproof deep = transitivity_proof(3);
  std::string t3 = print_proof(*deep.k);
  EXPECT_EQ(print_proof(*parse_proof(t3).k), t3);

  ZeroProof z = *transitivity_proof(0).zero;
  ParsedProof zb = parse_proof("; comment\n" + print_proof(z));
  ASSERT_TRUE(zb.zero);
  EXPECT_EQ(print_proof(*zb.zero), print_proof(z));
}

TEST(ProofText, ErrorsCarryPositions) {
  try {
    parse_proof("(zeroproof\n  (step (eq 1 1) (hyp)))\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 9u);
  }
  EXPECT_THROW(parse_proof(""), ParseError);
  EXPECT_THROW(parse_proof("(zeroproof"), ParseError);
  EXPECT_THROW(parse_proof("(kproof maybe)"), ParseError);
  EXPECT_THROW(parse_proof("(zeroproof (step (eq 1 2) (magic)))"), ParseError);
  EXPECT_THROW(parse_proof("(zeroproof) extra"), ParseError);
}
