#include "eqqcsp/relation.hpp"

#include <algorithm>

#include "eqqcsp/error.hpp"
#include "eqqcsp/solver.hpp"

namespace eqqcsp {

Relation::Relation(int arity, std::vector<Partition> kernels)
    : arity_(arity), kernels_(std::move(kernels)) {
  for (const Partition& p : kernels_) {
    if (static_cast<int>(p.size()) != arity_) {
      throw std::invalid_argument("kernel " + p.to_string() +
                                  " does not match arity " +
                                  std::to_string(arity_));
    }
  }
  std::sort(kernels_.begin(), kernels_.end());
  kernels_.erase(std::unique(kernels_.begin(), kernels_.end()), kernels_.end());
}

bool Relation::contains(const Partition& p) const {
  return std::binary_search(kernels_.begin(), kernels_.end(), p);
}

Relation relation_from_formula(const QEFormula& f, const SolverOptions& opts,
                               int cap) {
  std::vector<Partition> kernels;
  for (const Partition& p : enumerate_partitions(f.free_count, cap)) {
    TruthValue t = decide(f, p, opts);
    if (t.value == Outcome::BudgetExhausted) {
      throw BudgetExhausted("node budget exhausted at kernel " + p.to_string());
    }
    if (t.is_true()) kernels.push_back(p);
  }
  return Relation(f.free_count, std::move(kernels));
}

Relation relation_from_formula(const QEFormula& f, int cap) {
  return relation_from_formula(f, SolverOptions{}, cap);
}

Relation relation_of_clauses(std::span<const Clause> clauses, int arity,
                             int cap) {
  std::vector<Partition> kernels;
  for (const Partition& p : enumerate_partitions(arity, cap)) {
    if (eval_matrix(clauses, p)) kernels.push_back(p);
  }
  return Relation(arity, std::move(kernels));
}

}  // namespace eqqcsp
