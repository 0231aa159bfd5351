#pragma once

// Union-find with class labels, shared by the solver fast path, horn_saturate
// and the classifier.

#include <numeric>
#include <string>
#include <vector>

namespace eqqcsp::detail {

struct PosLit {
  int a;
  int b;
  bool positive;
};

class LabelledUnionFind {
 public:
  explicit LabelledUnionFind(int n) : parent_(n), label_(n, -1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool same(int a, int b) { return find(a) == find(b); }

  // False when the two classes carry different labels.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (label_[a] >= 0 && label_[b] >= 0 && label_[a] != label_[b]) return false;
    if (label_[a] < 0) label_[a] = label_[b];
    parent_[b] = a;
    return true;
  }

  void set_label(int x, int l) { label_[find(x)] = l; }
  int label(int x) { return label_[find(x)]; }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> label_;
};

struct SaturationOutcome {
  bool consistent = true;
  int witness = -1;
  std::string reason;
};

// Horn clauses as literal runs lits[starts[i]..starts[i+1]). Every clause
// must have at most one positive literal. Merges uf until fixpoint.
inline SaturationOutcome saturate(LabelledUnionFind& uf,
                                  const std::vector<PosLit>& lits,
                                  const std::vector<std::size_t>& starts) {
  const std::size_t m = starts.empty() ? 0 : starts.size() - 1;
  std::vector<char> done(m, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < m; ++c) {
      if (done[c]) continue;
      const PosLit* pos = nullptr;
      bool premises = true;
      for (std::size_t i = starts[c]; i < starts[c + 1]; ++i) {
        const PosLit& l = lits[i];
        if (l.positive) {
          pos = &l;
        } else if (!uf.same(l.a, l.b)) {
          premises = false;
          break;
        }
      }
      if (!premises) continue;
      done[c] = 1;
      if (!pos) {
        return {false, static_cast<int>(c), "all-negative clause falsified"};
      }
      if (uf.same(pos->a, pos->b)) continue;
      if (!uf.unite(pos->a, pos->b)) {
        return {false, static_cast<int>(c), "forced equality merges fixed classes"};
      }
      changed = true;
    }
  }
  return {};
}

}  // namespace eqqcsp::detail
