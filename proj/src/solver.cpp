#include "eqqcsp/solver.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "closure.hpp"
#include "eqqcsp/error.hpp"

namespace eqqcsp {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::True: return "TRUE";
    case Outcome::False: return "FALSE";
    case Outcome::BudgetExhausted: return "BUDGET";
  }
  return "?";
}

SolverOptions options_from_env(SolverOptions base) {
  if (const char* env = std::getenv("EQQCSP_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw Error(std::string("EQQCSP_NODE_BUDGET is not a number: ") + env);
    }
    base.node_budget = v;
  }
  return base;
}

std::size_t Strategy::size() const {
  std::size_t n = 0;
  for (const auto& [v, m] : choices) n += m.size();
  return n;
}

namespace {

using detail::PosLit;

// The formula rewritten over prefix positions: position p holds the p-th
// variable of variable_order().
struct Compiled {
  int n = 0;
  int free = 0;
  std::vector<Var> var_at;
  std::vector<int> pos_of;  // by variable
  std::vector<Quantifier> q;
  std::vector<PosLit> lits;
  std::vector<int> lit_clause;
  std::vector<int> lit_ready;  // position at which the literal is decided
  std::vector<std::size_t> starts;
  std::vector<std::vector<int>> lits_at;
  std::vector<std::vector<int>> complete_at;
  std::vector<char> all_exists_from;
  bool has_empty = false;

  std::size_t num_clauses() const { return starts.size() - 1; }
};

Compiled compile(const QEFormula& f) {
  f.validate();
  Compiled c;
  c.n = f.num_vars;
  c.free = f.free_count;
  c.var_at = f.variable_order();
  c.pos_of.assign(c.n + 1, -1);
  for (int p = 0; p < c.n; ++p) c.pos_of[c.var_at[p]] = p;
  c.q.assign(c.n, Quantifier::Exists);
  for (const Binding& b : f.prefix) c.q[c.pos_of[b.v]] = b.q;

  c.lits_at.resize(c.n);
  c.complete_at.resize(c.n);
  c.starts.push_back(0);
  for (const Clause& cl : f.matrix) {
    int id = static_cast<int>(c.starts.size()) - 1;
    int last = -1;
    for (const Literal& l : cl.literals()) {
      int a = c.pos_of[l.atom.a], b = c.pos_of[l.atom.b];
      int ready = std::max(a, b);
      c.lit_ready.push_back(ready);
      c.lit_clause.push_back(id);
      c.lits_at[ready].push_back(static_cast<int>(c.lits.size()));
      c.lits.push_back({a, b, l.positive});
      last = std::max(last, ready);
    }
    if (last < 0) {
      c.has_empty = true;
    } else {
      c.complete_at[last].push_back(id);
    }
    c.starts.push_back(c.lits.size());
  }
  c.all_exists_from.assign(c.n + 1, 1);
  for (int p = c.n - 1; p >= 0; --p) {
    c.all_exists_from[p] =
        c.all_exists_from[p + 1] && (p < c.free || c.q[p] == Quantifier::Exists);
  }
  return c;
}

struct BudgetHit {};

constexpr std::size_t kMemoLimit = 2'000'000;

struct Shared {
  const Compiled& c;
  SolverOptions opts;
  std::mutex mu;
  std::unordered_map<std::string, bool> memo;
  std::atomic<std::uint64_t> nodes{0}, memo_hits{0}, horn{0}, relax{0};

  Shared(const Compiled& c, const SolverOptions& o) : c(c), opts(o) {}

  SolverStats stats() const {
    return {nodes.load(), memo_hits.load(), horn.load(), relax.load()};
  }
};

class Search {
 public:
  explicit Search(Shared& sh)
      : sh_(sh),
        c_(sh.c),
        cls_(c_.n, -1),
        blocks_(c_.n + 1, 0),
        mark_(c_.n, 0),
        sat_(c_.num_clauses(), 0),
        unsat_(static_cast<int>(c_.num_clauses())) {}

  int n() const { return c_.n; }
  int blocks(int p) const { return blocks_[p]; }
  int unsat() const { return unsat_; }
  const std::vector<int>& classes() const { return cls_; }

  // Places position p in class k (k == blocks(p) opens a new class). Returns
  // false when a clause became fully assigned and false.
  bool assign(int p, int k) {
    mark_[p] = undo_.size();
    cls_[p] = k;
    blocks_[p + 1] = std::max(blocks_[p], k + 1);
    for (int id : c_.lits_at[p]) {
      int cl = c_.lit_clause[id];
      if (sat_[cl]) continue;
      const PosLit& l = c_.lits[id];
      if ((cls_[l.a] == cls_[l.b]) == l.positive) {
        sat_[cl] = 1;
        undo_.push_back(cl);
        --unsat_;
      }
    }
    for (int cl : c_.complete_at[p]) {
      if (!sat_[cl]) return false;
    }
    return true;
  }

  void unassign(int p) {
    while (undo_.size() > mark_[p]) {
      sat_[undo_.back()] = 0;
      undo_.pop_back();
      ++unsat_;
    }
    cls_[p] = -1;
  }

  // Game value of the position where 0..p-1 are assigned.
  bool value(int p) {
    std::uint64_t visited = ++sh_.nodes;
    if (sh_.opts.node_budget && visited > sh_.opts.node_budget) throw BudgetHit{};
    if (unsat_ == 0) return true;
    if (p == c_.n) return false;

    if (auto quick = horn_check(p)) return *quick;

    std::string key;
    if (sh_.opts.memoize) {
      key = memo_key(p);
      std::lock_guard lock(sh_.mu);
      auto it = sh_.memo.find(key);
      if (it != sh_.memo.end()) {
        ++sh_.memo_hits;
        return it->second;
      }
    }

    const bool exists = c_.q[p] == Quantifier::Exists;
    bool result = !exists;
    for (int k = 0; k <= blocks_[p]; ++k) {
      bool child = assign(p, k) && value(p + 1);
      unassign(p);
      if (child == exists) {
        result = exists;
        break;
      }
    }

    if (sh_.opts.memoize) {
      std::lock_guard lock(sh_.mu);
      if (sh_.memo.size() < kMemoLimit) sh_.memo[key] = result;
    }
    return result;
  }

 private:
  std::optional<bool> horn_check(int p) {
    const bool all_exists = c_.all_exists_from[p];
    if (all_exists ? !sh_.opts.horn_fast_path : !sh_.opts.relax_prune) {
      return std::nullopt;
    }
    res_lits_.clear();
    res_starts_.assign(1, 0);
    for (std::size_t cl = 0; cl < c_.num_clauses(); ++cl) {
      if (sat_[cl]) continue;
      int positives = 0;
      for (std::size_t i = c_.starts[cl]; i < c_.starts[cl + 1]; ++i) {
        if (c_.lit_ready[i] < p) continue;  // decided, and false
        if (c_.lits[i].positive && ++positives > 1) return std::nullopt;
        res_lits_.push_back(c_.lits[i]);
      }
      res_starts_.push_back(res_lits_.size());
    }
    detail::LabelledUnionFind uf(c_.n);
    first_of_class_.assign(blocks_[p], -1);
    for (int i = 0; i < p; ++i) {
      int& first = first_of_class_[cls_[i]];
      if (first < 0) {
        first = i;
        uf.set_label(i, cls_[i]);
      } else {
        uf.unite(first, i);
      }
    }
    if (!detail::saturate(uf, res_lits_, res_starts_).consistent) {
      ++(all_exists ? sh_.horn : sh_.relax);
      return false;
    }
    if (all_exists) {
      ++sh_.horn;
      return true;
    }
    return std::nullopt;
  }

  static void put(std::string& key, int v) {
    char buf[sizeof v];
    std::memcpy(buf, &v, sizeof v);
    key.append(buf, sizeof v);
  }

  std::string memo_key(int p) {
    std::string key;
    put(key, p);
    if (sh_.opts.full_kernel_memo) {
      for (int i = 0; i < p; ++i) put(key, cls_[i]);
      return key;
    }
    // Pending clauses plus the classes of assigned variables they still
    // mention. A class no pending literal can see behaves like a fresh one.
    live_.assign(p, 0);
    std::uint64_t word = 0;
    int bit = 0;
    for (std::size_t cl = 0; cl < c_.num_clauses(); ++cl) {
      if (!sat_[cl]) {
        word |= std::uint64_t{1} << bit;
        for (std::size_t i = c_.starts[cl]; i < c_.starts[cl + 1]; ++i) {
          if (c_.lit_ready[i] < p) continue;
          if (c_.lits[i].a < p) live_[c_.lits[i].a] = 1;
          if (c_.lits[i].b < p) live_[c_.lits[i].b] = 1;
        }
      }
      if (++bit == 64) {
        key.append(reinterpret_cast<const char*>(&word), sizeof word);
        word = 0;
        bit = 0;
      }
    }
    if (bit) key.append(reinterpret_cast<const char*>(&word), sizeof word);
    relabel_.assign(blocks_[p], -1);
    int next = 0;
    for (int i = 0; i < p; ++i) {
      if (!live_[i]) continue;
      int& r = relabel_[cls_[i]];
      if (r < 0) r = next++;
      put(key, r);
    }
    return key;
  }

  Shared& sh_;
  const Compiled& c_;
  std::vector<int> cls_;
  std::vector<int> blocks_;
  std::vector<std::size_t> mark_;
  std::vector<char> sat_;
  int unsat_;
  std::vector<int> undo_;
  // scratch
  std::vector<PosLit> res_lits_;
  std::vector<std::size_t> res_starts_;
  std::vector<int> first_of_class_;
  std::vector<char> live_;
  std::vector<int> relabel_;
};

// Top of the game tree expanded to a fixed depth; leaves are searched
// independently and folded back in child order.
struct Frontier {
  struct Node {
    enum Kind { Const, Leaf, Inner } kind;
    bool value = false;
    int leaf = -1;
    bool exists = false;
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> leaves;  // class prefixes

  int build(Search& s, int p, int depth) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back({});
    if (s.unsat() == 0 || p == s.n()) {
      nodes[id].kind = Node::Const;
      nodes[id].value = s.unsat() == 0;
      return id;
    }
    if (depth == 0) {
      nodes[id].kind = Node::Leaf;
      nodes[id].leaf = static_cast<int>(leaves.size());
      leaves.emplace_back(s.classes().begin(), s.classes().begin() + p);
      return id;
    }
    nodes[id].kind = Node::Inner;
    for (int k = 0; k <= s.blocks(p); ++k) {
      int child;
      if (s.assign(p, k)) {
        child = build(s, p + 1, depth - 1);
      } else {
        child = static_cast<int>(nodes.size());
        nodes.push_back({Node::Const, false, -1, false, {}});
      }
      s.unassign(p);
      nodes[id].children.push_back(child);
    }
    return id;
  }

  bool fold(int id, const std::vector<char>& leaf_values, const Compiled& c,
            int p) const {
    const Node& node = nodes[id];
    if (node.kind == Node::Const) return node.value;
    if (node.kind == Node::Leaf) return leaf_values[node.leaf];
    bool exists = c.q[p] == Quantifier::Exists;
    for (int child : node.children) {
      if (fold(child, leaf_values, c, p + 1) == exists) return exists;
    }
    return !exists;
  }
};

bool parallel_value(Shared& sh, Search& root, int start) {
  const int workers = sh.opts.workers;
  const int remaining = sh.c.n - start;
  Frontier fr;
  for (int depth = 1;; ++depth) {
    fr = Frontier{};
    fr.build(root, start, depth);
    if (fr.leaves.size() >= static_cast<std::size_t>(4 * workers) ||
        depth >= remaining) {
      break;
    }
  }
  std::vector<char> values(fr.leaves.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> exhausted{false};
  auto work = [&] {
    Search s(sh);
    for (std::size_t i = next++; i < fr.leaves.size() && !exhausted;
         i = next++) {
      const std::vector<int>& prefix = fr.leaves[i];
      int p = static_cast<int>(prefix.size());
      for (int j = 0; j < p; ++j) s.assign(j, prefix[j]);
      try {
        values[i] = s.value(p);
      } catch (const BudgetHit&) {
        exhausted = true;
      }
      for (int j = p - 1; j >= 0; --j) s.unassign(j);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (exhausted) throw BudgetHit{};
  return fr.fold(0, values, sh.c, start);
}

// Fixes positions 0..free-1 to the classes of `kernel`; false on violation.
bool assign_free(Search& s, const Compiled& c, const Partition& kernel) {
  if (static_cast<int>(kernel.size()) != c.free) {
    throw std::invalid_argument("free kernel has size " +
                                std::to_string(kernel.size()) + ", expected " +
                                std::to_string(c.free));
  }
  bool ok = true;
  for (int p = 0; p < c.free && ok; ++p) ok = s.assign(p, kernel[p]);
  return ok;
}

TruthValue run(const QEFormula& f, const Partition& free,
               const SolverOptions& opts) {
  Compiled c = compile(f);
  Shared sh(c, opts);
  TruthValue out;
  if (c.has_empty) {
    out.value = Outcome::False;
    return out;
  }
  Search s(sh);
  try {
    bool v = false;
    if (assign_free(s, c, free)) {
      v = opts.workers > 1 && c.free < c.n ? parallel_value(sh, s, c.free)
                                           : s.value(c.free);
    }
    out.value = v ? Outcome::True : Outcome::False;
  } catch (const BudgetHit&) {
    out.value = Outcome::BudgetExhausted;
  }
  out.stats = sh.stats();
  return out;
}

struct Naive {
  const QEFormula& f;
  std::vector<Var> order;
  std::vector<Quantifier> q;
  std::vector<std::uint64_t> vals;  // by variable - 1
  std::uint64_t nodes = 0;

  bool eval(std::size_t i) {
    ++nodes;
    if (i == order.size()) {
      return eval_matrix(f.matrix, kernel_of(std::span<const std::uint64_t>(vals)));
    }
    const bool exists = q[i] == Quantifier::Exists;
    const std::uint64_t domain = static_cast<std::uint64_t>(f.num_vars);
    for (std::uint64_t d = 0; d < domain; ++d) {
      vals[order[i] - 1] = d;
      if (eval(i + 1) == exists) return exists;
    }
    return !exists;
  }
};

TruthValue naive(const QEFormula& f, const Partition& free, int cap) {
  f.validate();
  if (f.num_vars > cap) {
    throw CapExceeded("formula has " + std::to_string(f.num_vars) +
                      " variables, naive cap is " + std::to_string(cap));
  }
  if (static_cast<int>(free.size()) != f.free_count) {
    throw std::invalid_argument("free kernel size mismatch");
  }
  Naive nv{f, {}, {}, std::vector<std::uint64_t>(f.num_vars, 0)};
  for (int v = 1; v <= f.free_count; ++v) {
    nv.vals[v - 1] = static_cast<std::uint64_t>(free[v - 1]);
  }
  for (const Binding& b : f.prefix) {
    nv.order.push_back(b.v);
    nv.q.push_back(b.q);
  }
  TruthValue out;
  out.value = nv.eval(0) ? Outcome::True : Outcome::False;
  out.stats.nodes = nv.nodes;
  return out;
}

Partition kernel_by_variable(const Compiled& c, const std::vector<int>& cls) {
  std::vector<int> labels(c.n);
  for (int p = 0; p < c.n; ++p) labels[c.var_at[p] - 1] = cls[p];
  return Partition::kernel_of(std::span<const int>(labels));
}

}  // namespace

TruthValue decide_naive(const QEFormula& f, int cap) {
  return naive(f, Partition(), cap);
}

TruthValue decide_naive(const QEFormula& f, const Partition& free, int cap) {
  return naive(f, free, cap);
}

TruthValue decide(const QEFormula& f, const SolverOptions& opts) {
  return run(f, Partition(), opts);
}

TruthValue decide(const QEFormula& f, const Partition& free,
                  const SolverOptions& opts) {
  return run(f, free, opts);
}

Strategy extract_strategy(const QEFormula& f, const SolverOptions& opts) {
  if (!f.is_sentence()) throw Error("extract_strategy needs a sentence");
  Compiled c = compile(f);
  SolverOptions seq = opts;
  seq.workers = 1;
  Shared sh(c, seq);
  Search s(sh);
  Strategy st;
  st.order = c.var_at;

  std::function<void(int)> walk = [&](int p) {
    if (p == c.n) return;
    std::vector<int> prefix(s.classes().begin(), s.classes().begin() + p);
    if (c.q[p] == Quantifier::Exists) {
      for (int k = 0; k <= s.blocks(p); ++k) {
        if (s.assign(p, k) && s.value(p + 1)) {
          st.choices[c.var_at[p]][Partition(prefix)] =
              k == s.blocks(p) ? Strategy::kFresh : k;
          walk(p + 1);
          s.unassign(p);
          return;
        }
        s.unassign(p);
      }
      throw Error("extract_strategy: no winning move");
    }
    for (int k = 0; k <= s.blocks(p); ++k) {
      s.assign(p, k);
      walk(p + 1);
      s.unassign(p);
    }
  };

  try {
    if (c.has_empty || !s.value(0)) {
      throw Error("extract_strategy: sentence is false");
    }
    walk(0);
  } catch (const BudgetHit&) {
    throw BudgetExhausted("extract_strategy: node budget exhausted");
  }
  return st;
}

std::optional<Partition> replay_strategy(const QEFormula& f, const Strategy& st) {
  Compiled c = compile(f);
  std::vector<int> cls(c.n, -1);
  std::optional<Partition> losing;

  std::function<bool(int, int)> play = [&](int p, int blocks) -> bool {
    if (p == c.n) {
      Partition k = kernel_by_variable(c, cls);
      if (!eval_matrix(f.matrix, k)) {
        losing = k;
        return false;
      }
      return true;
    }
    if (c.q[p] == Quantifier::Exists) {
      Partition prefix(std::vector<int>(cls.begin(), cls.begin() + p));
      int choice = -2;
      if (auto v = st.choices.find(c.var_at[p]); v != st.choices.end()) {
        if (auto it = v->second.find(prefix); it != v->second.end()) {
          choice = it->second;
        }
      }
      if (choice == Strategy::kFresh) choice = blocks;
      if (choice < 0 || choice > blocks) {
        losing = prefix;
        return false;
      }
      cls[p] = choice;
      return play(p + 1, std::max(blocks, choice + 1));
    }
    for (int k = 0; k <= blocks; ++k) {
      cls[p] = k;
      if (!play(p + 1, std::max(blocks, k + 1))) return false;
    }
    return true;
  };

  if (play(0, 0)) return std::nullopt;
  return losing;
}

}  // namespace eqqcsp
