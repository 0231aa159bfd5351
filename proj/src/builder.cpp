#include <algorithm>

#include "eqqcsp/reductions.hpp"

namespace eqqcsp {

const GadgetRole* GadgetReport::find(Var v) const {
  for (const GadgetRole& r : roles) {
    if (r.v == v) return &r;
  }
  return nullptr;
}

const GadgetRole* GadgetReport::find(std::string_view name) const {
  for (const GadgetRole& r : roles) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::string GadgetReport::to_text() const {
  std::string out;
  for (const std::string& n : notes) out += "note " + n + "\n";
  for (const GadgetRole& r : roles) {
    out += "role " + std::to_string(r.v) + " " + r.name + " " + r.role + "\n";
  }
  return out;
}

FormulaBuilder::FormulaBuilder(int free_count)
    : free_count_(free_count), num_vars_(free_count) {}

Var FormulaBuilder::fresh(std::string name, std::string role) {
  Var v = ++num_vars_;
  names_[v] = name;
  report_.roles.push_back({v, std::move(name), std::move(role)});
  return v;
}

Var FormulaBuilder::add(Quantifier q, std::string name, std::string role) {
  Var v = fresh(std::move(name), std::move(role));
  prefix_.push_back({q, v});
  return v;
}

Var FormulaBuilder::vertex(std::string name, std::string role) {
  Var v = fresh(std::move(name), std::move(role));
  innermost_.push_back(v);
  return v;
}

void FormulaBuilder::name_free(Var v, std::string name, std::string role) {
  names_[v] = name;
  report_.roles.push_back({v, std::move(name), std::move(role)});
}

bool FormulaBuilder::clause(std::span<const Clause::RawLiteral> lits) {
  auto c = Clause::make(lits);
  if (!c) return false;
  matrix_.push_back(std::move(*c));
  return true;
}

bool FormulaBuilder::clause(std::initializer_list<Clause::RawLiteral> lits) {
  return clause(std::span<const Clause::RawLiteral>(lits.begin(), lits.size()));
}

bool FormulaBuilder::edge(Var a, Var label, Var b) {
  return clause({{a, label, false}, {label, b, true}});
}

QEFormula FormulaBuilder::build() const {
  QEFormula f;
  f.num_vars = num_vars_;
  f.free_count = free_count_;
  f.prefix = prefix_;
  for (Var v : innermost_) f.prefix.push_back({Quantifier::Exists, v});
  f.matrix = matrix_;
  f.names = names_;
  return f;
}

}  // namespace eqqcsp
