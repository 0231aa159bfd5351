#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqqcsp/formula.hpp"
#include "eqqcsp/partition.hpp"

namespace eqqcsp {

enum class Outcome { True, False, BudgetExhausted };

const char* to_string(Outcome o);

struct SolverStats {
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t horn_leaves = 0;
  std::uint64_t relax_prunes = 0;
};

struct TruthValue {
  Outcome value = Outcome::False;
  SolverStats stats;

  bool is_true() const { return value == Outcome::True; }
  bool is_false() const { return value == Outcome::False; }
};

inline constexpr std::uint64_t kDefaultNodeBudget = 200'000'000;

struct SolverOptions {
  int workers = 1;
  /// Search nodes allowed before giving up; 0 means unlimited.
  std::uint64_t node_budget = kDefaultNodeBudget;
  bool memoize = true;
  /// Memo key over every assigned variable instead of only the ones some
  /// pending clause still mentions.
  bool full_kernel_memo = false;
  bool horn_fast_path = true;
  /// With a Horn residual and universals left, treat them as existential;
  /// an inconsistent closure refutes the node.
  bool relax_prune = true;
};

/// Applies EQQCSP_NODE_BUDGET from the environment, if set.
SolverOptions options_from_env(SolverOptions base = {});

/// Reference evaluator: every variable ranges over {0..n-1}. Throws
/// CapExceeded when the formula has more than `cap` variables.
TruthValue decide_naive(const QEFormula& f, int cap = kDefaultPartitionCap);

/// Same, with free variables 1..free_count fixed to the classes of `free`.
TruthValue decide_naive(const QEFormula& f, const Partition& free,
                        int cap = kDefaultPartitionCap);

/// Class-choice game search over the prefix.
TruthValue decide(const QEFormula& f, const SolverOptions& opts = {});

/// Same, with the free variables fixed to the classes of `free`.
TruthValue decide(const QEFormula& f, const Partition& free,
                  const SolverOptions& opts = {});

/// Existential moves: for each existential variable, the class it joins as a
/// function of the kernel of all earlier variables (prefix order). A choice
/// of kFresh opens a new class.
struct Strategy {
  static constexpr int kFresh = -1;
  std::vector<Var> order;
  std::map<Var, std::map<Partition, int>> choices;

  std::size_t size() const;
};

/// Throws Error when the sentence is false.
Strategy extract_strategy(const QEFormula& f, const SolverOptions& opts = {});

/// Plays the strategy against every canonical universal play. Returns the
/// first losing play (kernel over all variables) or nullopt if it wins.
std::optional<Partition> replay_strategy(const QEFormula& f, const Strategy& s);

/// Result of equality-closure saturation.
struct HornResult {
  bool consistent = true;
  /// Closure kernel over all variables; unforced classes stay apart.
  Partition kernel;
  /// Index of a clause that fired into a contradiction, if any.
  std::optional<std::size_t> witness;
  std::string reason;
};

/// Closure of the forced equalities of Horn clauses over variables
/// 1..num_vars. fixed[v-1] is a class label or -1 when v is unconstrained;
/// variables with different labels must stay apart. Throws ShapeError on a
/// non-Horn clause.
HornResult horn_saturate(std::span<const Clause> clauses, int num_vars,
                         const std::vector<int>& fixed);

/// Convenience: the first fixed.size() variables are fixed to that kernel.
HornResult horn_saturate(std::span<const Clause> clauses, int num_vars,
                         const Partition& fixed = {});

}  // namespace eqqcsp
