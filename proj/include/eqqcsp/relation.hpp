#pragma once

#include <vector>

#include "eqqcsp/formula.hpp"
#include "eqqcsp/partition.hpp"

namespace eqqcsp {

struct SolverOptions;

/// An equality relation of arity m, represented by the set of kernels of its
/// tuples. Kernels are kept sorted and unique.
class Relation {
 public:
  Relation() = default;
  Relation(int arity, std::vector<Partition> kernels);

  int arity() const { return arity_; }
  const std::vector<Partition>& kernels() const { return kernels_; }
  std::size_t size() const { return kernels_.size(); }
  bool contains(const Partition& p) const;

  bool operator==(const Relation&) const = default;

 private:
  int arity_ = 0;
  std::vector<Partition> kernels_;
};

/// The relation defined by f over its free variables 1..free_count: a kernel
/// belongs to it iff f is true with the free variables fixed to any
/// assignment with that kernel. Uses the game solver as the oracle.
Relation relation_from_formula(const QEFormula& f, const SolverOptions& opts,
                               int cap = kDefaultPartitionCap);
Relation relation_from_formula(const QEFormula& f,
                               int cap = kDefaultPartitionCap);

/// Kernels of [arity] satisfying every clause (no quantifiers involved).
Relation relation_of_clauses(std::span<const Clause> clauses, int arity,
                             int cap = kDefaultPartitionCap);

}  // namespace eqqcsp
