#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqqcsp/formula.hpp"
#include "eqqcsp/relation.hpp"

namespace eqqcsp {

enum class Shape { Negative, Positive, Horn };

const char* to_string(Shape s);

inline constexpr int kClassifyArityCap = 6;

/// Every clause of the shape over atoms on [arity] that all kernels of r
/// satisfy. Negative: unit positive clauses and nonempty all-negative
/// clauses. Positive: nonempty all-positive clauses. Horn: nonempty clauses
/// with at most one positive literal. Tautologies are not generated.
std::vector<Clause> implied_clauses(const Relation& r, Shape shape,
                                    int cap = kClassifyArityCap);

/// Kernels of [arity] satisfying every clause.
Relation closure_relation(std::span<const Clause> clauses, int arity,
                          int cap = kClassifyArityCap);

struct ShapeCheck {
  bool definable = false;
  /// Subsumption-minimal implied clauses, pruned to an irredundant
  /// definition of r when definable.
  std::vector<Clause> witness;
  /// A kernel in the closure but not in r, when not definable.
  std::optional<Partition> separator;
};

struct FragmentReport {
  int arity = 0;
  ShapeCheck negative, positive, horn;

  bool is_negative() const { return negative.definable; }
  bool is_positive() const { return positive.definable; }
  bool is_horn() const { return horn.definable; }
  const ShapeCheck& get(Shape s) const;
  std::string to_text() const;
};

FragmentReport fragment_report(const Relation& r, int cap = kClassifyArityCap);

enum class ClassifyMode { Full, PiK };

struct Verdict {
  ClassifyMode mode = ClassifyMode::Full;
  int k = 0;  // PiK only
  std::string cls;
};

/// Table lookup on the language-wide flags (every relation negative, ...).
/// PiK needs k >= 2; throws ShapeError otherwise.
Verdict verdict_from_flags(bool all_negative, bool all_positive, bool all_horn,
                           ClassifyMode mode, int k = 0);

Verdict classify_language(std::span<const Relation> relations, ClassifyMode mode,
                          int k = 0, int cap = kClassifyArityCap);

/// Same, reusing reports already computed for the relations.
Verdict classify_reports(std::span<const FragmentReport> reports, ClassifyMode mode,
                         int k = 0);

}  // namespace eqqcsp
