#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "eqqcsp/error.hpp"
#include "eqqcsp/proofsys.hpp"

namespace eqqcsp {
namespace {

// Variables of one level in tuple order: F (free here), X, then U.
struct Scope {
  std::vector<Var> order;
  std::vector<int> pos;  // var -> index in order, -1 outside
  int nF = 0;
  int nFX = 0;

  bool in_fx(Var v) const { return pos[v] >= 0 && pos[v] < nFX; }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // Root is the smaller index so roots are first appearances.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

struct Result {
  SearchOutcome::Kind kind = SearchOutcome::Holds;
  Var p = 0, q = 0;  // Derived: p precedes q in the level's order
  Subproof proof;
  std::vector<int> witness;  // Holds: class labels over F ++ X
};

class Search {
 public:
  Search(const LayeredFormula& lf, const SearchLimits& limits) : lf_(lf), limits_(limits) {
    for (const Layer& layer : lf.layers) {
      if (static_cast<int>(layer.forall.size()) > limits.max_universal_block) {
        throw CapExceeded("universal block of " + std::to_string(layer.forall.size()) +
                          " variables exceeds the limit of " +
                          std::to_string(limits.max_universal_block));
      }
    }
    for (int j = 0; j <= lf.k(); ++j) {
      Scope s;
      s.order = lf.free_at(j);
      s.nF = static_cast<int>(s.order.size());
      const auto& X = lf.exists_at(j);
      s.order.insert(s.order.end(), X.begin(), X.end());
      s.nFX = static_cast<int>(s.order.size());
      if (j < lf.k()) {
        s.order.insert(s.order.end(), lf.layers[j].forall.begin(),
                       lf.layers[j].forall.end());
      }
      s.pos.assign(lf.num_vars + 1, -1);
      for (std::size_t i = 0; i < s.order.size(); ++i) s.pos[s.order[i]] = static_cast<int>(i);
      scopes_.push_back(std::move(s));
    }
  }

  Result solve(int level, const std::vector<Equality>& H, std::optional<Equality> target) {
    return level == lf_.k() ? solve_core(H, target) : solve_layer(level, H, target);
  }

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  // Representative (first in order) of each free variable under H.
  std::vector<int> hyp_reps(const Scope& s, const std::vector<Equality>& H) {
    UnionFind uf(s.nF);
    for (const Equality& e : H) uf.unite(s.pos[e.a], s.pos[e.b]);
    std::vector<int> rep(s.nF);
    for (int i = 0; i < s.nF; ++i) rep[i] = uf.find(i);
    return rep;
  }

  // First pair of distinct hypothesis classes (by representative) that
  // `same` reports as merged.
  template <typename Same>
  static std::optional<std::pair<int, int>> violation(const std::vector<int>& rep,
                                                      Same same) {
    for (int a = 0; a < static_cast<int>(rep.size()); ++a) {
      if (rep[a] != a) continue;
      for (int b = a + 1; b < static_cast<int>(rep.size()); ++b) {
        if (rep[b] == b && same(a, b)) return std::pair{a, b};
      }
    }
    return std::nullopt;
  }

  static std::vector<int> labels(int n, UnionFind& uf) {
    std::vector<int> out(n), id(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
      int r = uf.find(i);
      if (id[r] < 0) id[r] = next++;
      out[i] = id[r];
    }
    return out;
  }

  // ---- core: closure under the four 0-proof rules, every merged pair
  // ---- recorded as its own step so any of them can be extracted.
  Result solve_core(const std::vector<Equality>& H, std::optional<Equality> target) {
    const Scope& s = scopes_[lf_.k()];
    const int n = s.nFX;
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) members[i] = {i};
    std::vector<ZeroStep> steps;
    std::map<Equality, int> step_of;  // 1-based
    auto eq = [&](int i, int j) { return Equality::of(s.order[i], s.order[j]); };
    auto record = [&](Equality e, Justification why) {
      steps.push_back({e, why});
      step_of[e] = static_cast<int>(steps.size());
    };
    auto trans = [&](int i, int j) {
      return Justification{Justification::Trans, i, j};
    };
    auto add = [&](Equality e, Justification why) {
      int a = s.pos[e.a], b = s.pos[e.b];
      if (comp[a] == comp[b]) return;
      record(e, why);
      const int s0 = step_of[e];
      std::vector<int> A = members[comp[a]], B = members[comp[b]];
      for (int x : A) {
        if (x != a) record(eq(x, b), trans(step_of[eq(x, a)], s0));
      }
      for (int y : B) {
        if (y == b) continue;
        for (int x : A) record(eq(x, y), trans(step_of[eq(x, b)], step_of[eq(b, y)]));
      }
      int keep = comp[a], gone = comp[b];
      for (int y : members[gone]) comp[y] = keep;
      members[keep].insert(members[keep].end(), members[gone].begin(), members[gone].end());
      members[gone].clear();
    };

    for (const Equality& e : H) add(e, {Justification::Hyp});
    for (const Equality& e : lf_.units) add(e, {Justification::Unit});
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [pre, con] : lf_.implications) {
        if (comp[s.pos[pre.a]] == comp[s.pos[pre.b]] &&
            comp[s.pos[con.a]] != comp[s.pos[con.b]]) {
          add(con, {Justification::Impl, step_of[pre]});
          changed = true;
        }
      }
    }

    auto extract = [&](Equality goal) {
      std::vector<char> need(steps.size() + 1, 0);
      std::vector<int> stack{step_of[goal]};
      while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        if (need[i]) continue;
        need[i] = 1;
        const Justification& w = steps[i - 1].why;
        if (w.kind == Justification::Trans) {
          stack.push_back(w.i);
          stack.push_back(w.j);
        } else if (w.kind == Justification::Impl) {
          stack.push_back(w.i);
        }
      }
      std::vector<int> renum(steps.size() + 1, 0);
      ZeroProof p;
      for (std::size_t i = 1; i <= steps.size(); ++i) {
        if (!need[i]) continue;
        ZeroStep st = steps[i - 1];
        if (st.why.i) st.why.i = renum[st.why.i];
        if (st.why.j) st.why.j = renum[st.why.j];
        p.steps.push_back(st);
        renum[i] = static_cast<int>(p.steps.size());
      }
      return p;
    };

    Result r;
    std::optional<std::pair<int, int>> hit;
    if (target) {
      if (comp[s.pos[target->a]] == comp[s.pos[target->b]]) {
        hit = std::minmax(s.pos[target->a], s.pos[target->b]);
      }
    } else {
      hit = violation(hyp_reps(s, H), [&](int a, int b) { return comp[a] == comp[b]; });
    }
    if (hit) {
      r.kind = SearchOutcome::Derived;
      r.p = s.order[hit->first];
      r.q = s.order[hit->second];
      r.proof.zero = extract(Equality::of(r.p, r.q));
      return r;
    }
    std::vector<int> id(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
      if (id[comp[i]] < 0) id[comp[i]] = next++;
      r.witness.push_back(id[comp[i]]);
    }
    return r;
  }

  // ---- proofs by transitivity through the levels below `level`.

  Subproof hyp_sub(int level, Equality e) {
    Subproof sp;
    if (level == lf_.k()) {
      sp.zero = ZeroProof{{{e, {Justification::Hyp}}}};
    } else {
      auto k = std::make_shared<KProof>();
      k->steps.push_back({e, {}, hyp_sub(level + 1, e)});
      sp.k = std::move(k);
    }
    return sp;
  }

  Subproof trans_sub(int level, Var a, Var b, Var c) {
    Subproof sp;
    Equality ac = Equality::of(a, c);
    if (level == lf_.k()) {
      sp.zero = ZeroProof{{{Equality::of(a, b), {Justification::Hyp}},
                           {Equality::of(b, c), {Justification::Hyp}},
                           {ac, {Justification::Trans, 1, 2}}}};
    } else {
      auto k = std::make_shared<KProof>();
      k->steps.push_back({ac, {}, trans_sub(level + 1, a, b, c)});
      sp.k = std::move(k);
    }
    return sp;
  }

  // Extends P so that its last step is p=q, using a shortest path through
  // hypotheses and steps of P.
  void chain(int level, const std::vector<Equality>& H, std::vector<KStep>& P, Var p, Var q) {
    const Scope& s = scopes_[level];
    const int n = s.nFX;
    std::vector<std::vector<int>> adj(n);
    std::map<Equality, int> step_index;
    auto link = [&](const Equality& e) {
      adj[s.pos[e.a]].push_back(s.pos[e.b]);
      adj[s.pos[e.b]].push_back(s.pos[e.a]);
    };
    for (const Equality& e : H) link(e);
    for (std::size_t i = 0; i < P.size(); ++i) {
      link(*P[i].eq);
      step_index[*P[i].eq] = static_cast<int>(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<int> from(n, -1);
    std::deque<int> queue{s.pos[p]};
    from[s.pos[p]] = s.pos[p];
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int y : adj[x]) {
        if (from[y] < 0) {
          from[y] = x;
          queue.push_back(y);
        }
      }
    }
    std::vector<Var> path;
    for (int x = s.pos[q]; x != s.pos[p]; x = from[x]) path.push_back(s.order[x]);
    path.push_back(p);
    std::reverse(path.begin(), path.end());

    if (path.size() == 2) {
      Equality e = Equality::of(p, q);
      if (auto it = step_index.find(e); it != step_index.end()) {
        P.resize(it->second + 1);
      } else {
        P.push_back({e, {}, hyp_sub(level + 1, e)});
      }
      return;
    }
    for (std::size_t t = 2; t < path.size(); ++t) {
      P.push_back({Equality::of(path[0], path[t]), {},
                   trans_sub(level + 1, path[0], path[t - 1], path[t])});
    }
  }

  static Subproof wrap(std::vector<KStep> steps, KProof::Mode mode) {
    auto k = std::make_shared<KProof>();
    k->mode = mode;
    k->steps = std::move(steps);
    Subproof sp;
    sp.k = std::move(k);
    return sp;
  }

  // ---- one (exists X, forall U) layer.
  Result solve_layer(int level, const std::vector<Equality>& H,
                     std::optional<Equality> target) {
    const Scope& s = scopes_[level];
    const int nFX = s.nFX;
    const int nU = static_cast<int>(s.order.size()) - nFX;
    const std::vector<int> rep = hyp_reps(s, H);
    UnionFind uf(nFX);
    for (const Equality& e : H) uf.unite(s.pos[e.a], s.pos[e.b]);
    std::vector<KStep> P;

    auto derived = [&](Var p, Var q) {
      chain(level, H, P, p, q);
      Result r;
      r.kind = SearchOutcome::Derived;
      r.p = p;
      r.q = q;
      r.proof = wrap(std::move(P), KProof::Equality);
      return r;
    };
    auto refuted = [&] {
      Result r;
      r.kind = SearchOutcome::Refuted;
      r.proof = wrap(std::move(P), KProof::Contradiction);
      return r;
    };

    while (true) {
      if (target && uf.find(s.pos[target->a]) == uf.find(s.pos[target->b])) {
        auto [a, b] = std::minmax(s.pos[target->a], s.pos[target->b]);
        return derived(s.order[a], s.order[b]);
      }
      const std::vector<int> b = labels(nFX, uf);
      const int B = nFX == 0 ? 0 : *std::max_element(b.begin(), b.end()) + 1;

      // Canonical evaluations of U in lexicographic order.
      std::vector<int> c(nU, 0);
      std::vector<int> top(nU + 1, B);  // top[i] = number of values before u_i
      bool progressed = false;
      std::optional<Result> done;
      auto evaluate = [&] {
        if (++evaluations_ > limits_.max_evaluations) {
          throw BudgetExhausted("proof search exceeded " +
                                std::to_string(limits_.max_evaluations) + " evaluations");
        }
        KStep step;
        std::vector<int> tuple = b;
        for (int i = 0; i < nU; ++i) {
          auto it = std::find(tuple.begin(), tuple.end(), c[i]);
          if (it != tuple.end()) {
            step.uassign.push_back({s.order[nFX + i], s.order[it - tuple.begin()]});
          }
          tuple.push_back(c[i]);
        }
        std::vector<Equality> Hs = H;
        for (const KStep& st : P) Hs.push_back(*st.eq);
        for (const auto& [u, z] : step.uassign) Hs.push_back(Equality::of(u, z));

        Result sub = solve(level + 1, Hs, std::nullopt);
        if (sub.kind == SearchOutcome::Holds) return;
        step.sub = std::move(sub.proof);
        if (sub.kind == SearchOutcome::Refuted) {
          P.push_back(std::move(step));
          done = refuted();
          return;
        }
        step.eq = Equality::of(sub.p, sub.q);
        P.push_back(std::move(step));
        if (s.pos[sub.q] >= nFX) {
          done = refuted();
          return;
        }
        uf.unite(s.pos[sub.p], s.pos[sub.q]);
        progressed = true;
        if (!target) {
          auto v = violation(rep, [&](int x, int y) { return uf.find(x) == uf.find(y); });
          if (v) done = derived(s.order[v->first], s.order[v->second]);
        }
      };
      // Odometer over restricted-growth extensions.
      int i = 0;
      if (nU == 0) {
        evaluate();
      } else {
        c[0] = 0;
        while (i >= 0 && !done && !progressed) {
          if (c[i] > top[i]) {
            --i;
            if (i >= 0) ++c[i];
            continue;
          }
          top[i + 1] = std::max(top[i], c[i] + 1);
          if (i + 1 == nU) {
            evaluate();
            ++c[i];
          } else {
            ++i;
            c[i] = 0;
          }
        }
      }
      if (done) return std::move(*done);
      if (!progressed) break;
    }
    Result r;
    r.witness = labels(nFX, uf);
    return r;
  }

  const LayeredFormula& lf_;
  SearchLimits limits_;
  std::vector<Scope> scopes_;
  std::uint64_t evaluations_ = 0;
};

void check_hypotheses(const LayeredFormula& lf, std::span<const Equality> E) {
  for (const Equality& e : E) {
    for (Var v : {e.a, e.b}) {
      if (v < 1 || v > static_cast<int>(lf.free.size())) {
        throw ShapeError("hypothesis mentions " + std::to_string(v) +
                         ", which is not a free variable");
      }
    }
  }
}

SearchOutcome to_outcome(const LayeredFormula& lf, Result r, std::uint64_t evals) {
  SearchOutcome out;
  out.kind = r.kind;
  out.evaluations = evals;
  if (r.kind == SearchOutcome::Holds) {
    out.witness = Partition(std::move(r.witness));
    return out;
  }
  if (r.kind == SearchOutcome::Derived) out.derived = Equality::of(r.p, r.q);
  if (lf.k() == 0) {
    out.zero_proof = std::move(r.proof.zero);
  } else {
    out.proof = *r.proof.k;
  }
  return out;
}

}  // namespace

SearchOutcome saturate_search(const LayeredFormula& lf, std::span<const Equality> E,
                              const SearchLimits& limits) {
  check_hypotheses(lf, E);
  Search search(lf, limits);
  Result r = search.solve(0, {E.begin(), E.end()}, std::nullopt);
  return to_outcome(lf, std::move(r), search.evaluations());
}

SearchOutcome prove_equality(const LayeredFormula& lf, std::span<const Equality> E,
                             Equality target, const SearchLimits& limits) {
  check_hypotheses(lf, E);
  check_hypotheses(lf, std::span<const Equality>(&target, 1));
  Search search(lf, limits);
  Result r = search.solve(0, {E.begin(), E.end()}, target);
  return to_outcome(lf, std::move(r), search.evaluations());
}

SigmaResult decide_sigma(const QEFormula& f, const SearchLimits& limits) {
  if (!f.is_sentence()) throw ShapeError("decide_sigma needs a sentence");
  LayeredFormula lf = layer_formula(f);
  SearchOutcome out = saturate_search(lf, {}, limits);
  SigmaResult res;
  res.value.stats.nodes = out.evaluations;
  if (out.kind == SearchOutcome::Refuted) {
    res.value.value = Outcome::False;
    res.certificate = std::move(out.proof);
  } else {
    res.value.value = Outcome::True;
    res.witness = std::move(out.witness);
  }
  return res;
}

}  // namespace eqqcsp
