#include "eqqcsp/formula.hpp"

#include <algorithm>
#include <stdexcept>

#include "eqqcsp/error.hpp"

namespace eqqcsp {

Atom Atom::of(Var x, Var y) {
  if (x == y) throw std::invalid_argument("atom over a single variable");
  return x < y ? Atom{x, y} : Atom{y, x};
}

std::optional<Clause> Clause::make(std::span<const RawLiteral> raw) {
  std::vector<Literal> lits;
  lits.reserve(raw.size());
  for (const RawLiteral& r : raw) {
    if (r.x == r.y) {
      if (r.positive) return std::nullopt;  // x=x
      continue;                             // x!=x
    }
    lits.push_back({Atom::of(r.x, r.y), r.positive});
  }
  return make(std::move(lits));
}

std::optional<Clause> Clause::make(std::vector<Literal> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].atom == lits[i - 1].atom) return std::nullopt;
  }
  Clause c;
  c.lits_ = std::move(lits);
  return c;
}

int Clause::positive_count() const {
  return static_cast<int>(std::count_if(
      lits_.begin(), lits_.end(), [](const Literal& l) { return l.positive; }));
}

bool Clause::is_all_positive() const {
  return std::all_of(lits_.begin(), lits_.end(),
                     [](const Literal& l) { return l.positive; });
}

bool Clause::is_all_negative() const {
  return std::none_of(lits_.begin(), lits_.end(),
                      [](const Literal& l) { return l.positive; });
}

Var Clause::max_var() const {
  Var m = 0;
  for (const Literal& l : lits_) m = std::max(m, l.atom.b);
  return m;
}

Clause unit_eq(Var x, Var y) { return *Clause::make({Literal::eq(x, y)}); }

Clause implication(Var x, Var y, Var u, Var v) {
  auto c = Clause::make({Literal::neq(x, y), Literal::eq(u, v)});
  if (!c) throw std::invalid_argument("implication is a tautology");
  return *c;
}

std::vector<Var> QEFormula::variable_order() const {
  std::vector<Var> order;
  order.reserve(num_vars);
  for (Var v = 1; v <= free_count; ++v) order.push_back(v);
  for (const Binding& b : prefix) order.push_back(b.v);
  return order;
}

std::string QEFormula::name_of(Var v) const {
  auto it = names.find(v);
  return it == names.end() ? std::to_string(v) : it->second;
}

void QEFormula::validate() const {
  if (num_vars < 0 || free_count < 0 || free_count > num_vars) {
    throw ShapeError("inconsistent variable counts");
  }
  std::vector<char> bound(num_vars + 1, 0);
  for (const Binding& b : prefix) {
    if (b.v <= free_count || b.v > num_vars) {
      throw ShapeError("prefix variable " + std::to_string(b.v) +
                       " out of range");
    }
    if (bound[b.v]) {
      throw ShapeError("variable " + std::to_string(b.v) +
                       " quantified twice");
    }
    bound[b.v] = 1;
  }
  for (Var v = free_count + 1; v <= num_vars; ++v) {
    if (!bound[v]) {
      throw ShapeError("variable " + std::to_string(v) + " is not quantified");
    }
  }
  for (const Clause& c : matrix) {
    if (c.max_var() > num_vars) {
      throw ShapeError("clause mentions undeclared variable " +
                       std::to_string(c.max_var()));
    }
  }
}

bool eval_matrix(std::span<const Clause> matrix, const Partition& kernel) {
  for (const Clause& c : matrix) {
    if (static_cast<std::size_t>(c.max_var()) > kernel.size()) {
      throw std::out_of_range("variable " + std::to_string(c.max_var()) +
                              " outside kernel of size " +
                              std::to_string(kernel.size()));
    }
  }
  for (const Clause& c : matrix) {
    bool sat = false;
    for (const Literal& l : c.literals()) {
      bool equal = kernel.same_block(l.atom.a - 1, l.atom.b - 1);
      if (equal == l.positive) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::string to_string(const Literal& lit) {
  return std::to_string(lit.atom.a) + (lit.positive ? "=" : "!=") +
         std::to_string(lit.atom.b);
}

std::string to_string(const Clause& clause) {
  std::string out = "(";
  for (std::size_t i = 0; i < clause.size(); ++i) {
    if (i) out += " | ";
    out += to_string(clause.literals()[i]);
  }
  return out + ")";
}

const char* to_string(Quantifier q) {
  return q == Quantifier::Forall ? "forall" : "exists";
}

}  // namespace eqqcsp
