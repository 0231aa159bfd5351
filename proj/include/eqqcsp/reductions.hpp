#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqqcsp/formula.hpp"

namespace eqqcsp {

// ---------------------------------------------------------------------------
// Provenance

struct GadgetRole {
  Var v = 0;
  std::string name;
  std::string role;
};

/// Which gadget each generated variable belongs to. One "role" line per
/// variable plus free-form "note" lines.
struct GadgetReport {
  std::vector<GadgetRole> roles;
  std::vector<std::string> notes;

  const GadgetRole* find(Var v) const;
  const GadgetRole* find(std::string_view name) const;
  std::string to_text() const;
};

/// Accumulates variables and clauses. Variables added with vertex() are
/// quantified existentially after everything else when build() is called.
class FormulaBuilder {
 public:
  /// Variables 1..free_count are free (used for pp-definitions).
  explicit FormulaBuilder(int free_count = 0);

  Var add(Quantifier q, std::string name, std::string role);
  Var vertex(std::string name, std::string role);

  /// Names a free variable; free variables are created by the constructor.
  void name_free(Var v, std::string name, std::string role);

  /// Appends a clause; literals over a single variable are simplified and a
  /// tautology is dropped. Returns whether a clause was appended.
  bool clause(std::span<const Clause::RawLiteral> lits);
  bool clause(std::initializer_list<Clause::RawLiteral> lits);
  /// Edge a --label--> b, i.e. the clause (a != label or label = b).
  bool edge(Var a, Var label, Var b);

  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  std::size_t clause_count() const { return matrix_.size(); }
  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return matrix_; }

  QEFormula build() const;
  const GadgetReport& report() const { return report_; }

 private:
  Var fresh(std::string name, std::string role);

  int free_count_;
  int num_vars_;
  std::vector<Binding> prefix_;
  std::vector<Var> innermost_;
  std::vector<Clause> matrix_;
  std::map<Var, std::string> names_;
  GadgetReport report_;
};

/// Range of clauses and the fresh vertices one gadget added to a builder.
struct GadgetPart {
  std::size_t first_clause = 0;
  std::size_t num_clauses = 0;
  std::vector<Var> vertices;
};

// ---------------------------------------------------------------------------
// Quantified 3-SAT to QCSP over I(x,z,y) = (x=z -> z=y)

/// exists x1 forall y1 ... exists xn forall yn, 3-literal clauses.
/// Boolean variable 2i-1 is x_i, 2i is y_i; literals are signed.
struct QBF {
  int n = 0;
  std::vector<std::array<int, 3>> clauses;
  /// Index in the source file for each of the 2n variables, 0 for padding.
  std::vector<int> source;
};

/// Labelled variables of the I-reduction. d is only used by the variant with
/// existential t and f.
struct QbfVars {
  Var t = 0, f = 0, z = 0, d = 0;
  std::vector<Var> x0, x1, y0, y1;  // index 1..n; slot 0 unused
};

/// Allocates t, f and the x/y pairs with the prefix
/// forall t f, (exists x_i^0, forall x_i^1 y_i^0 y_i^1)*, exists z.
/// With existential_tf the head is exists t f, forall d and the clause
/// (t != f or f = d) is added.
QbfVars declare_qbf_vars(FormulaBuilder& b, int n, bool existential_tf = false);

/// C_i for i in 0..n.
GadgetPart build_chain_gadget(FormulaBuilder& b, const QbfVars& v, int i, int n);

/// One path t -> p1 -> p2 -> z per clause.
GadgetPart build_clause_paths(FormulaBuilder& b, const QbfVars& v,
                              std::span<const std::array<int, 3>> clauses);

struct Reduction {
  QEFormula formula;
  GadgetReport report;
};

Reduction qbf_to_qcsp_I(const QBF& phi);
/// Variant with t, f existential, kept apart by forall d (t != f or f = d).
Reduction qbf_to_qcsp_I_existential_tf(const QBF& phi);

// ---------------------------------------------------------------------------
// Monotone 3-SAT complement to Pi_2 over I

struct MonotoneCNF {
  int n = 0;
  std::vector<std::array<int, 3>> negative;  // variables of (!a | !b | !c)
  std::vector<std::array<int, 3>> positive;  // variables of (a | b | c)
};

/// Brings l and m up to 2 by duplicating clauses; an empty polarity class is
/// filled with clauses over a fresh variable. Sets *degenerate in that case.
MonotoneCNF pad_monotone(const MonotoneCNF& phi, bool* degenerate = nullptr);

/// True output iff phi is unsatisfiable. Pads first.
Reduction mon3sat_to_pi2(const MonotoneCNF& phi);

// ---------------------------------------------------------------------------
// Disjunction gadgets over {!=, x=y | u=v}

struct Predicate {
  Var a = 0;
  Var b = 0;
  bool equal = true;
};

/// Appends clauses whose existential closure over the new auxiliaries is the
/// disjunction of the predicates. Throws on an empty list.
GadgetPart or_chain(FormulaBuilder& b, std::span<const Predicate> preds,
                    const std::string& tag);

/// The same gadget as a formula with free variables 1..arity.
QEFormula or_chain_formula(int arity, std::span<const Predicate> preds);

/// CNF of not-all-equal over the pair encoding v=v' <-> true, with tautologies
/// dropped, duplicates and subsumed clauses removed.
std::vector<std::vector<Predicate>> nae_cnf(Var x, Var xp, Var y, Var yp, Var z,
                                            Var zp);

/// Adds the NAE gadget; requires six distinct variables.
GadgetPart nae_gadget(FormulaBuilder& b, Var x, Var xp, Var y, Var yp, Var z,
                      Var zp, const std::string& tag);

/// nae_gadget as a formula with free variables 1..6 = x x' y y' z z'.
QEFormula nae_gadget_formula();

struct QNAEInstance {
  int n = 0;
  std::vector<Binding> prefix;  // over 1..n, every variable once
  std::vector<std::array<int, 3>> constraints;
};

/// Blocks counted as if the prefix started with forall.
int pi_level(const QNAEInstance& inst);

/// Throws ShapeError if the instance does not fit Pi_k.
Reduction qnae_to_qcsp(const QNAEInstance& inst, int k);

// ---------------------------------------------------------------------------
// Boolean CSP over {!=, x=y | y=z} to Pi_2 over the disjunction

struct BoolCSP {
  enum Kind { Neq, Disj };
  struct Constraint {
    Kind kind;
    std::array<int, 3> v;  // Neq uses v[0], v[1]
  };
  int n = 0;
  std::vector<Constraint> constraints;
};

Reduction boolcsp_to_pi2_disj(const BoolCSP& inst);

// ---------------------------------------------------------------------------
// Boolean reference evaluators (brute force, for --check)

inline constexpr int kBooleanCheckCap = 20;

/// Truth of the QBF; throws CapExceeded above kBooleanCheckCap variables.
bool qbf_truth(const QBF& phi);
bool monotone_satisfiable(const MonotoneCNF& phi);
bool qnae_truth(const QNAEInstance& inst);
bool boolcsp_satisfiable(const BoolCSP& inst);

// ---------------------------------------------------------------------------
// Input formats

/// QDIMACS subset: "p cnf V C", "a"/"e" lines, 0-terminated clauses.
/// Unquantified variables go to an outermost exists block; padding variables
/// restore strict exists/forall alternation; clauses with 1 or 2 literals
/// repeat their last literal.
QBF parse_qdimacs(std::string_view text);

/// DIMACS CNF whose clauses are all-positive or all-negative.
MonotoneCNF parse_monotone_dimacs(std::string_view text);

/// Optional "qnae N" header, "a"/"e" prefix lines, "nae a b c" lines.
QNAEInstance parse_qnae(std::string_view text);

/// "bcsp N" header, "neq x y" and "disj x y z" lines.
BoolCSP parse_bcsp(std::string_view text);

}  // namespace eqqcsp
