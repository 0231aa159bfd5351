#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqqcsp/partition.hpp"

namespace eqqcsp {

/// 1-based variable index.
using Var = int;

/// Unordered pair of distinct variables, stored with a < b.
struct Atom {
  Var a = 0;
  Var b = 0;

  /// Orders the pair; requires x != y.
  static Atom of(Var x, Var y);

  bool involves(Var v) const { return a == v || b == v; }
  auto operator<=>(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  static Literal eq(Var x, Var y) { return {Atom::of(x, y), true}; }
  static Literal neq(Var x, Var y) { return {Atom::of(x, y), false}; }

  Literal negated() const { return {atom, !positive}; }
  auto operator<=>(const Literal&) const = default;
};

/// Disjunction of literals, sorted and duplicate-free. An empty clause is
/// unsatisfiable; it only arises when every literal simplified to false.
class Clause {
 public:
  Clause() = default;

  /// Builds a clause from raw (x, y, positive) triples, simplifying x=x to
  /// true and x!=x to false. Returns nullopt when the clause is a tautology
  /// (a true literal, or both polarities of one atom).
  struct RawLiteral {
    Var x;
    Var y;
    bool positive;
  };
  static std::optional<Clause> make(std::span<const RawLiteral> raw);
  static std::optional<Clause> make(std::vector<Literal> lits);

  const std::vector<Literal>& literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }

  int positive_count() const;
  bool is_horn() const { return positive_count() <= 1; }
  bool is_all_positive() const;
  bool is_all_negative() const;
  Var max_var() const;

  auto operator<=>(const Clause&) const = default;

 private:
  std::vector<Literal> lits_;
};

/// Shorthand for tests and generators: unit equality x=y.
Clause unit_eq(Var x, Var y);
/// Shorthand: the clause (x!=y or u=v), i.e. x=y -> u=v.
Clause implication(Var x, Var y, Var u, Var v);

enum class Quantifier { Forall, Exists };

struct Binding {
  Quantifier q;
  Var v;
  auto operator<=>(const Binding&) const = default;
};

/// Prenex sentence (or, with free_count > 0, a formula whose free variables
/// are exactly 1..free_count) with a CNF matrix over equality atoms.
///
/// Variables are dense 1..num_vars. Every variable above free_count occurs
/// exactly once in the prefix. The matrix is an ordered clause list; clause
/// order is preserved through printing and parsing.
struct QEFormula {
  int num_vars = 0;
  int free_count = 0;
  std::vector<Binding> prefix;
  std::vector<Clause> matrix;
  std::map<Var, std::string> names;

  bool is_sentence() const { return free_count == 0; }

  /// Free variables in ascending order followed by the prefix order.
  std::vector<Var> variable_order() const;

  /// Name from the symbol table, or the decimal index.
  std::string name_of(Var v) const;

  /// Throws ShapeError when the invariants above do not hold.
  void validate() const;

  bool operator==(const QEFormula&) const = default;
};

/// True iff every clause has a literal satisfied by the kernel. The kernel
/// is indexed by variable - 1. Throws std::out_of_range when a clause
/// mentions a variable beyond the kernel.
bool eval_matrix(std::span<const Clause> matrix, const Partition& kernel);

std::string to_string(const Literal& lit);
std::string to_string(const Clause& clause);
const char* to_string(Quantifier q);

}  // namespace eqqcsp
