#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqqcsp/formula.hpp"
#include "eqqcsp/partition.hpp"
#include "eqqcsp/solver.hpp"

namespace eqqcsp {

/// Equalities are unordered variable pairs.
using Equality = Atom;

/// One (exists X, forall U) pair of blocks.
struct Layer {
  std::vector<Var> exists;
  std::vector<Var> forall;
};

/// A formula over {x=y -> u=v, x=y} viewed as
/// exists X1 forall U1 ... exists Xk forall Uk exists Xcore. constraints.
/// Either block of a layer may be empty, and so may the core.
struct LayeredFormula {
  int num_vars = 0;
  std::vector<Var> free;  // 1..free_count
  std::vector<Layer> layers;
  std::vector<Var> core;
  std::vector<Equality> units;
  std::vector<std::pair<Equality, Equality>> implications;  // premise, conclusion

  int k() const { return static_cast<int>(layers.size()); }

  /// Variables free at level j (0 = outermost, k = core): the free
  /// variables followed by every block of layers 0..j-1, in prefix order.
  std::vector<Var> free_at(int level) const;
  /// Existential block of level j (the core for j = k).
  const std::vector<Var>& exists_at(int level) const;
};

/// True for unit positive clauses and (x != y or u = v).
bool is_gamma_clause(const Clause& c);

/// Throws ShapeError naming the first clause outside the language.
LayeredFormula layer_formula(const QEFormula& f);

struct Justification {
  enum Kind { Hyp, Trans, Unit, Impl };
  Kind kind = Hyp;
  int i = 0;  // 1-based step references
  int j = 0;
};

struct ZeroStep {
  Equality eq;
  Justification why;
};

struct ZeroProof {
  std::vector<ZeroStep> steps;
};

struct KProof;

/// Exactly one member is set: zero at the core level, k above it.
struct Subproof {
  std::optional<ZeroProof> zero;
  std::shared_ptr<const KProof> k;
};

struct KStep {
  std::optional<Equality> eq;                 // nullopt is the bottom marker
  std::vector<std::pair<Var, Var>> uassign;   // (u, z)
  Subproof sub;
};

struct KProof {
  enum Mode { Equality, Contradiction };
  Mode mode = Equality;
  std::vector<KStep> steps;
};

struct VerifyResult {
  bool ok = true;
  std::string reason;  // "step 2 > step 1: ..." path to the failing step
  std::uint64_t steps_checked = 0;

  explicit operator bool() const { return ok; }
};

/// Checks a 0-proof in the core of lf from hypotheses E over free_at(k()).
/// With a target, the last equality must equal it.
VerifyResult verify_zero_proof(const LayeredFormula& lf,
                               std::span<const Equality> E, const ZeroProof& p,
                               std::optional<Equality> target = std::nullopt);

/// Checks a k-proof of an equality at level 0 of lf (k = lf.k()).
VerifyResult verify_k_proof(const LayeredFormula& lf,
                            std::span<const Equality> E, const KProof& p,
                            std::optional<Equality> target = std::nullopt);

/// Checks a k-proof of a contradiction at level 0 of lf; needs lf.k() >= 1.
VerifyResult verify_k_contradiction(const LayeredFormula& lf,
                                    std::span<const Equality> E,
                                    const KProof& p);

/// Number of steps over all nesting levels.
std::uint64_t proof_steps(const ZeroProof& p);
std::uint64_t proof_steps(const KProof& p);

struct SearchLimits {
  int max_universal_block = 10;
  std::uint64_t max_evaluations = 5'000'000;
};

/// Outcome of proof search from hypotheses E at level 0.
struct SearchOutcome {
  enum Kind { Holds, Derived, Refuted } kind = Holds;
  /// Derived: an equality over the outer free variables not implied by E.
  std::optional<Equality> derived;
  /// Derived or Refuted (Refuted needs lf.k() >= 1). At k = 0 a derived
  /// equality comes with a 0-proof instead.
  std::optional<KProof> proof;
  std::optional<ZeroProof> zero_proof;
  /// Holds: kernel of the satisfying assignment of free_at(0) + exists_at(0).
  std::optional<Partition> witness;
  std::uint64_t evaluations = 0;
};

/// Saturation search. Throws CapExceeded when a universal block is larger
/// than the limit and BudgetExhausted when evaluations run out.
SearchOutcome saturate_search(const LayeredFormula& lf,
                              std::span<const Equality> E,
                              const SearchLimits& limits = {});

/// Searches for a proof of `target` from E, ignoring other consequences.
/// kind is Derived with a proof when found, Refuted when E is contradictory,
/// Holds otherwise.
SearchOutcome prove_equality(const LayeredFormula& lf,
                             std::span<const Equality> E, Equality target,
                             const SearchLimits& limits = {});

struct SigmaResult {
  TruthValue value;
  std::optional<KProof> certificate;  // set when FALSE
  std::optional<Partition> witness;   // set when TRUE
};

/// Decides a sentence over {x=y -> u=v, x=y} by proof search; a FALSE
/// verdict carries a contradiction proof.
SigmaResult decide_sigma(const QEFormula& f, const SearchLimits& limits = {});

struct SizeAudit {
  std::uint64_t symbols = 0;
  std::uint64_t bound = 0;
  bool within = false;
};

/// Symbols of the proof under the fixed encoding: each equality costs
/// ceil(2 log2 l) + 3, each k-step adds 3 for framing. bound is
/// 10^(k+1) * l^(2k+3), saturating at UINT64_MAX.
SizeAudit size_audit(const ZeroProof& p, int l);
SizeAudit size_audit(const KProof& p, int l, int k);
std::uint64_t equality_cost(int l);
std::uint64_t size_bound(int l, int k);

/// S-expression certificates, one step per line.
std::string print_proof(const ZeroProof& p);
std::string print_proof(const KProof& p);

/// Either kind of proof as read from text.
struct ParsedProof {
  std::optional<ZeroProof> zero;
  std::optional<KProof> k;
};
ParsedProof parse_proof(std::string_view text);

}  // namespace eqqcsp
