#pragma once

#include <optional>
#include <vector>

#include "eqqcsp/formula.hpp"

namespace eqqcsp {

struct AlternationProfile {
  std::vector<Quantifier> blocks;    // quantifier of each maximal block
  std::vector<int> block_sizes;
  int k = 0;                         // number of blocks
  std::optional<Quantifier> leading;

  /// "forall,exists" style rendering; empty prefix gives "".
  std::string to_string() const;
};

AlternationProfile alternation_profile(const QEFormula& f);

/// Inserts unused variables (named d1, d2, ...) so the prefix becomes
/// exists,forall,exists,forall,... with single-variable blocks, ending in
/// forall. Requires a sentence.
QEFormula pad_to_sigma_shape(const QEFormula& f);

inline constexpr int kDefaultZetaCap = 4;

/// Pi_2 sentence equivalent to f, built from (2n)^n renamed copies of the
/// matrix. f must be exists y1 forall x1 ... exists yn forall xn with single
/// variable blocks. Throws ShapeError on other prefixes and CapExceeded when
/// n > cap unless `force`.
QEFormula zeta_pi2(const QEFormula& f, bool force = false,
                   int cap = kDefaultZetaCap);

}  // namespace eqqcsp
