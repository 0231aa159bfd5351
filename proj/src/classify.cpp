#include "eqqcsp/classify.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "eqqcsp/error.hpp"
#include "eqqcsp/qecnf.hpp"

namespace eqqcsp {
namespace {

// Atoms over [m] indexed 0..m(m-1)/2-1; a clause is a pair of atom masks.
struct Atoms {
  std::vector<Atom> list;
  explicit Atoms(int m) {
    for (Var a = 1; a <= m; ++a)
      for (Var b = a + 1; b <= m; ++b) list.push_back({a, b});
  }
  int size() const { return static_cast<int>(list.size()); }

  // Bit i set iff atom i holds under kernel p.
  std::uint32_t holds(const Partition& p) const {
    std::uint32_t mask = 0;
    for (int i = 0; i < size(); ++i) {
      if (p.same_block(list[i].a - 1, list[i].b - 1)) mask |= 1u << i;
    }
    return mask;
  }

  Clause clause(std::uint32_t pos, std::uint32_t neg) const {
    std::vector<Literal> lits;
    for (int i = 0; i < size(); ++i) {
      if (pos >> i & 1) lits.push_back({list[i], true});
      if (neg >> i & 1) lits.push_back({list[i], false});
    }
    return *Clause::make(std::move(lits));
  }
};

struct MaskClause {
  std::uint32_t pos = 0, neg = 0;
};

bool satisfies(std::uint32_t holds, const MaskClause& c) {
  return (c.pos & holds) != 0 || (c.neg & ~holds) != 0;
}

void check_cap(int arity, int cap) {
  if (arity > cap) {
    throw CapExceeded("arity " + std::to_string(arity) + " exceeds the classifier cap of " +
                      std::to_string(cap));
  }
}

std::vector<MaskClause> implied_masks(const Relation& r, Shape shape, const Atoms& atoms) {
  std::vector<std::uint32_t> rows;
  for (const Partition& p : r.kernels()) rows.push_back(atoms.holds(p));
  const int n = atoms.size();
  const std::uint32_t all = n == 0 ? 0 : (n >= 32 ? ~0u : (1u << n) - 1);
  std::vector<MaskClause> out;
  auto keep = [&](MaskClause c) {
    for (std::uint32_t h : rows) {
      if (!satisfies(h, c)) return;
    }
    out.push_back(c);
  };
  auto each_subset = [&](std::uint32_t universe, bool nonempty, auto fn) {
    // Ascending subsets of `universe`.
    std::uint32_t s = 0;
    do {
      if (s != 0 || !nonempty) fn(s);
      s = (s - universe) & universe;
    } while (s != 0);
  };
  switch (shape) {
    case Shape::Positive:
      each_subset(all, true, [&](std::uint32_t s) { keep({s, 0}); });
      break;
    case Shape::Negative:
      for (int i = 0; i < n; ++i) keep({1u << i, 0});
      each_subset(all, true, [&](std::uint32_t s) { keep({0, s}); });
      break;
    case Shape::Horn:
      each_subset(all, true, [&](std::uint32_t s) { keep({0, s}); });
      for (int i = 0; i < n; ++i) {
        each_subset(all & ~(1u << i), false,
                    [&](std::uint32_t s) { keep({1u << i, s}); });
      }
      break;
  }
  return out;
}

std::vector<MaskClause> minimal(std::vector<MaskClause> cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const MaskClause& a, const MaskClause& b) {
    return std::popcount(a.pos) + std::popcount(a.neg) <
           std::popcount(b.pos) + std::popcount(b.neg);
  });
  std::vector<MaskClause> kept;
  for (const MaskClause& c : cs) {
    bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const MaskClause& k) {
      return (k.pos & ~c.pos) == 0 && (k.neg & ~c.neg) == 0;
    });
    if (!subsumed) kept.push_back(c);
  }
  return kept;
}

std::vector<Clause> to_clauses(const std::vector<MaskClause>& cs, const Atoms& atoms) {
  std::vector<Clause> out;
  for (const MaskClause& c : cs) out.push_back(atoms.clause(c.pos, c.neg));
  std::sort(out.begin(), out.end());
  return out;
}

ShapeCheck check_shape(const Relation& r, Shape shape, const Atoms& atoms) {
  std::vector<MaskClause> implied = minimal(implied_masks(r, shape, atoms));
  ShapeCheck out;
  out.definable = true;
  for_each_partition(r.arity(), [&](const Partition& p) {
    if (!out.definable) return;
    std::uint32_t h = atoms.holds(p);
    bool in_closure = std::all_of(implied.begin(), implied.end(),
                                  [&](const MaskClause& c) { return satisfies(h, c); });
    if (in_closure && !r.contains(p)) {
      out.definable = false;
      out.separator = p;
    }
  });
  if (out.definable) {
    // Drop clauses the rest already force, longest first.
    std::vector<std::uint32_t> rows;
    for_each_partition(r.arity(), [&](const Partition& p) { rows.push_back(atoms.holds(p)); });
    auto closure_size = [&](const std::vector<MaskClause>& cs) {
      return std::count_if(rows.begin(), rows.end(), [&](std::uint32_t h) {
        return std::all_of(cs.begin(), cs.end(),
                           [&](const MaskClause& c) { return satisfies(h, c); });
      });
    };
    const auto target = static_cast<std::ptrdiff_t>(r.size());
    for (std::size_t i = implied.size(); i-- > 0;) {
      std::vector<MaskClause> rest = implied;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (closure_size(rest) == target) implied = std::move(rest);
    }
  }
  out.witness = to_clauses(implied, atoms);
  return out;
}

}  // namespace

const char* to_string(Shape s) {
  switch (s) {
    case Shape::Negative: return "negative";
    case Shape::Positive: return "positive";
    case Shape::Horn: return "horn";
  }
  return "?";
}

std::vector<Clause> implied_clauses(const Relation& r, Shape shape, int cap) {
  check_cap(r.arity(), cap);
  Atoms atoms(r.arity());
  return to_clauses(implied_masks(r, shape, atoms), atoms);
}

Relation closure_relation(std::span<const Clause> clauses, int arity, int cap) {
  check_cap(arity, cap);
  return relation_of_clauses(clauses, arity, cap);
}

const ShapeCheck& FragmentReport::get(Shape s) const {
  switch (s) {
    case Shape::Negative: return negative;
    case Shape::Positive: return positive;
    case Shape::Horn: break;
  }
  return horn;
}

std::string FragmentReport::to_text() const {
  std::string out;
  for (Shape s : {Shape::Negative, Shape::Positive, Shape::Horn}) {
    const ShapeCheck& c = get(s);
    out += std::string(to_string(s)) + " " + (c.definable ? "yes" : "no") + "\n";
    if (c.definable) {
      for (const Clause& cl : c.witness) out += "  " + clause_line(cl) + "\n";
    } else if (c.separator) {
      out += "  separator p";
      for (int v : c.separator->rgs()) out += " " + std::to_string(v);
      out += "\n";
    }
  }
  return out;
}

FragmentReport fragment_report(const Relation& r, int cap) {
  check_cap(r.arity(), cap);
  Atoms atoms(r.arity());
  FragmentReport rep;
  rep.arity = r.arity();
  rep.negative = check_shape(r, Shape::Negative, atoms);
  rep.positive = check_shape(r, Shape::Positive, atoms);
  rep.horn = check_shape(r, Shape::Horn, atoms);
  return rep;
}

Verdict verdict_from_flags(bool all_negative, bool all_positive, bool all_horn,
                           ClassifyMode mode, int k) {
  Verdict v;
  v.mode = mode;
  if (mode == ClassifyMode::PiK) {
    if (k < 2) throw ShapeError("Pi_k classification needs k >= 2");
    v.k = k;
  }
  if (all_negative) {
    v.cls = "Logspace";
  } else if (all_positive) {
    v.cls = "NP-complete";
  } else if (mode == ClassifyMode::Full) {
    v.cls = "PSpace-complete";
  } else if (all_horn) {
    v.cls = "Co-NP-complete";
  } else {
    v.cls = "Pi_" + std::to_string(k - 2) + "^P-hard (lower bound)";
  }
  return v;
}

Verdict classify_reports(std::span<const FragmentReport> reports, ClassifyMode mode, int k) {
  bool neg = true, pos = true, horn = true;
  for (const FragmentReport& r : reports) {
    neg = neg && r.is_negative();
    pos = pos && r.is_positive();
    horn = horn && r.is_horn();
  }
  return verdict_from_flags(neg, pos, horn, mode, k);
}

Verdict classify_language(std::span<const Relation> relations, ClassifyMode mode, int k,
                          int cap) {
  std::vector<FragmentReport> reports;
  for (const Relation& r : relations) reports.push_back(fragment_report(r, cap));
  return classify_reports(reports, mode, k);
}

}  // namespace eqqcsp
