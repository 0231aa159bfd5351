#include <unordered_map>

#include "closure.hpp"
#include "eqqcsp/error.hpp"
#include "eqqcsp/solver.hpp"

namespace eqqcsp {

HornResult horn_saturate(std::span<const Clause> clauses, int num_vars,
                         const std::vector<int>& fixed) {
  if (static_cast<int>(fixed.size()) > num_vars) {
    throw std::invalid_argument("fixed labels exceed variable count");
  }
  detail::LabelledUnionFind uf(num_vars);
  std::unordered_map<int, int> first_with_label;
  for (int i = 0; i < static_cast<int>(fixed.size()); ++i) {
    if (fixed[i] < 0) continue;
    auto [it, fresh] = first_with_label.emplace(fixed[i], i);
    if (fresh) {
      uf.set_label(i, fixed[i]);
    } else {
      uf.unite(it->second, i);
    }
  }

  std::vector<detail::PosLit> lits;
  std::vector<std::size_t> starts{0};
  for (const Clause& c : clauses) {
    if (!c.is_horn()) {
      throw ShapeError("horn_saturate: clause " + to_string(c) + " is not Horn");
    }
    if (c.max_var() > num_vars) {
      throw std::out_of_range("clause variable beyond num_vars");
    }
    for (const Literal& l : c.literals()) {
      lits.push_back({l.atom.a - 1, l.atom.b - 1, l.positive});
    }
    starts.push_back(lits.size());
  }

  HornResult out;
  auto sat = detail::saturate(uf, lits, starts);
  if (!sat.consistent) {
    out.consistent = false;
    out.witness = static_cast<std::size_t>(sat.witness);
    out.reason = sat.reason;
    return out;
  }
  std::vector<int> roots(num_vars);
  for (int v = 0; v < num_vars; ++v) roots[v] = uf.find(v);
  out.kernel = Partition::kernel_of(std::span<const int>(roots));
  return out;
}

HornResult horn_saturate(std::span<const Clause> clauses, int num_vars,
                         const Partition& fixed) {
  return horn_saturate(clauses, num_vars, fixed.rgs());
}

}  // namespace eqqcsp
