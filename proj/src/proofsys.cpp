#include "eqqcsp/proofsys.hpp"

#include <bit>
#include <limits>
#include <map>
#include <set>

#include "eqqcsp/error.hpp"

namespace eqqcsp {

std::vector<Var> LayeredFormula::free_at(int level) const {
  std::vector<Var> out = free;
  for (int j = 0; j < level && j < k(); ++j) {
    out.insert(out.end(), layers[j].exists.begin(), layers[j].exists.end());
    out.insert(out.end(), layers[j].forall.begin(), layers[j].forall.end());
  }
  return out;
}

const std::vector<Var>& LayeredFormula::exists_at(int level) const {
  return level < k() ? layers[level].exists : core;
}

bool is_gamma_clause(const Clause& c) {
  if (c.size() == 1) return c.literals()[0].positive;
  return c.size() == 2 && c.positive_count() == 1;
}

LayeredFormula layer_formula(const QEFormula& f) {
  f.validate();
  LayeredFormula lf;
  lf.num_vars = f.num_vars;
  for (Var v = 1; v <= f.free_count; ++v) lf.free.push_back(v);

  std::vector<std::pair<Quantifier, std::vector<Var>>> blocks;
  for (const Binding& b : f.prefix) {
    if (blocks.empty() || blocks.back().first != b.q) blocks.push_back({b.q, {}});
    blocks.back().second.push_back(b.v);
  }
  std::size_t i = 0;
  while (i < blocks.size()) {
    Layer layer;
    if (blocks[i].first == Quantifier::Exists) layer.exists = blocks[i++].second;
    if (i == blocks.size()) {
      lf.core = std::move(layer.exists);
      break;
    }
    layer.forall = blocks[i++].second;
    lf.layers.push_back(std::move(layer));
  }

  for (const Clause& c : f.matrix) {
    if (!is_gamma_clause(c)) {
      throw ShapeError("clause " + to_string(c) +
                       " is neither a unit equality nor an implication x=y -> u=v");
    }
    const auto& lits = c.literals();
    if (lits.size() == 1) {
      lf.units.push_back(lits[0].atom);
    } else {
      const Literal& pre = lits[0].positive ? lits[1] : lits[0];
      const Literal& con = lits[0].positive ? lits[0] : lits[1];
      lf.implications.push_back({pre.atom, con.atom});
    }
  }
  return lf;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

std::string eq_text(const Equality& e) {
  return std::to_string(e.a) + "=" + std::to_string(e.b);
}

class Verifier {
 public:
  Verifier(const LayeredFormula& lf, std::span<const Equality> E) : lf_(lf) {
    for (const Equality& e : E) ++hyps_[e];
    units_.insert(lf.units.begin(), lf.units.end());
    impls_.insert(lf.implications.begin(), lf.implications.end());
    for (int j = 0; j <= lf.k(); ++j) {
      Scope s;
      s.pos.assign(lf.num_vars + 1, -1);
      std::vector<Var> order = lf.free_at(j);
      s.nF = static_cast<int>(order.size());
      const auto& X = lf.exists_at(j);
      order.insert(order.end(), X.begin(), X.end());
      s.nFX = static_cast<int>(order.size());
      if (j < lf.k()) {
        order.insert(order.end(), lf.layers[j].forall.begin(),
                     lf.layers[j].forall.end());
      }
      for (std::size_t p = 0; p < order.size(); ++p) s.pos[order[p]] = static_cast<int>(p);
      scopes_.push_back(std::move(s));
    }
  }

  VerifyResult run_zero(const ZeroProof& p, std::optional<Equality> target) {
    finish(check_zero(p, target, ""));
    return result_;
  }

  VerifyResult run_k(const KProof& p, KProof::Mode mode,
                     std::optional<Equality> target) {
    if (lf_.k() == 0) {
      finish("formula has no layers; a k-proof needs k >= 1");
    } else if (p.mode != mode) {
      finish(mode == KProof::Equality ? "expected an equality proof"
                                      : "expected a contradiction proof");
    } else {
      finish(check_k(0, p, target, ""));
    }
    return result_;
  }

 private:
  struct Scope {
    std::vector<int> pos;  // var -> index in F ++ X ++ U, -1 out of scope
    int nF = 0;
    int nFX = 0;
  };

  void finish(std::optional<std::string> err) {
    result_.steps_checked = counter_;
    if (err) {
      result_.ok = false;
      result_.reason = *err;
    }
  }

  bool valid_var(Var v) const { return v >= 1 && v <= lf_.num_vars; }
  bool in_fx(const Scope& s, Var v) const {
    return valid_var(v) && s.pos[v] >= 0 && s.pos[v] < s.nFX;
  }
  bool in_f(const Scope& s, Var v) const {
    return valid_var(v) && s.pos[v] >= 0 && s.pos[v] < s.nF;
  }

  static std::string at(const std::string& path, std::size_t i) {
    return path + "step " + std::to_string(i + 1);
  }

  void push(const Equality& e) { ++hyps_[e]; }
  void pop(const Equality& e) {
    auto it = hyps_.find(e);
    if (--it->second == 0) hyps_.erase(it);
  }

  std::optional<std::string> check_zero(const ZeroProof& p,
                                        std::optional<Equality> target,
                                        const std::string& path) {
    const Scope& s = scopes_[lf_.k()];
    std::set<Equality> seen;
    if (p.steps.empty()) return path + "empty 0-proof";
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      ++counter_;
      const ZeroStep& st = p.steps[i];
      const Equality& e = st.eq;
      std::string here = at(path, i) + ": ";
      if (e.a == e.b || !in_fx(s, e.a) || !in_fx(s, e.b)) {
        return here + "equality " + eq_text(e) + " is not over the level's variables";
      }
      if (!seen.insert(e).second) return here + "repeats equality " + eq_text(e);
      const int idx = static_cast<int>(i) + 1;
      auto earlier = [&](int r) { return r >= 1 && r < idx; };
      switch (st.why.kind) {
        case Justification::Hyp:
          if (!hyps_.count(e)) return here + eq_text(e) + " is not a hypothesis";
          break;
        case Justification::Unit:
          if (!units_.count(e)) return here + eq_text(e) + " is not a unit constraint";
          break;
        case Justification::Impl: {
          if (!earlier(st.why.i)) {
            return here + "implication cites step " + std::to_string(st.why.i) +
                   ", which is not earlier";
          }
          const Equality& pre = p.steps[st.why.i - 1].eq;
          if (!impls_.count({pre, e})) {
            return here + "no constraint " + eq_text(pre) + " -> " + eq_text(e);
          }
          break;
        }
        case Justification::Trans: {
          if (!earlier(st.why.i) || !earlier(st.why.j)) {
            return here + "transitivity cites steps " + std::to_string(st.why.i) +
                   "," + std::to_string(st.why.j) + ", which are not both earlier";
          }
          const Equality& x = p.steps[st.why.i - 1].eq;
          const Equality& y = p.steps[st.why.j - 1].eq;
          bool ok = false;
          for (Var m : {x.a, x.b}) {
            if (!y.involves(m)) continue;
            Var l = x.a == m ? x.b : x.a;
            Var r = y.a == m ? y.b : y.a;
            if (l != r && Equality::of(l, r) == e) ok = true;
          }
          if (!ok) {
            return here + eq_text(e) + " does not follow by transitivity from " +
                   eq_text(x) + " and " + eq_text(y);
          }
          break;
        }
      }
    }
    const Equality& last = p.steps.back().eq;
    if (!in_f(s, last.a) || !in_f(s, last.b)) {
      return path + "final equality " + eq_text(last) + " is not over the free variables";
    }
    if (target && last != *target) {
      return path + "final equality " + eq_text(last) + " is not the target " +
             eq_text(*target);
    }
    return std::nullopt;
  }

  std::optional<std::string> check_sub(int level, const Subproof& sub,
                                       KProof::Mode mode, std::optional<Equality> target,
                                       const std::string& path) {
    if (level == lf_.k()) {
      if (mode == KProof::Contradiction) {
        return path + "a contradiction cannot be shown by a 0-proof";
      }
      if (!sub.zero) return path + "expected a 0-proof at the core level";
      return check_zero(*sub.zero, target, path);
    }
    if (!sub.k) return path + "expected a k-proof above the core level";
    if (sub.k->mode != mode) {
      return path + (mode == KProof::Equality ? "expected an equality subproof"
                                              : "expected a contradiction subproof");
    }
    return check_k(level, *sub.k, target, path);
  }

  std::optional<std::string> check_k(int level, const KProof& p,
                                     std::optional<Equality> target,
                                     const std::string& path) {
    const Scope& s = scopes_[level];
    const bool contra = p.mode == KProof::Contradiction;
    if (p.steps.empty()) return path + "empty proof";
    std::set<Equality> seen;
    std::vector<Equality> pushed;
    auto unwind = [&] {
      for (const Equality& e : pushed) pop(e);
    };
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      ++counter_;
      const KStep& st = p.steps[i];
      const bool terminal = contra && i + 1 == p.steps.size();
      const std::string here = at(path, i);
      auto fail = [&](const std::string& msg) {
        unwind();
        return std::optional<std::string>(here + ": " + msg);
      };

      if (!terminal) {
        if (!st.eq) return fail("bottom marker before the terminal step");
        const Equality& e = *st.eq;
        if (e.a == e.b || !in_fx(s, e.a) || !in_fx(s, e.b)) {
          return fail("equality " + eq_text(e) + " is not over the level's variables");
        }
        if (seen.count(e)) return fail("repeats equality " + eq_text(e));
      }

      std::set<Var> lefts;
      for (const auto& [u, z] : st.uassign) {
        if (!valid_var(u) || s.pos[u] < s.nFX) {
          return fail("assignment " + std::to_string(u) + "=" + std::to_string(z) +
                      ": left side is not a universal variable of this level");
        }
        if (!lefts.insert(u).second) {
          return fail("universal " + std::to_string(u) + " assigned twice");
        }
        if (!valid_var(z) || s.pos[z] < 0 || s.pos[z] >= s.pos[u]) {
          return fail("assignment " + std::to_string(u) + "=" + std::to_string(z) +
                      ": right side does not precede the left side");
        }
      }

      std::optional<Equality> sub_target = st.eq;
      KProof::Mode sub_mode = KProof::Equality;
      if (terminal) {
        if (!st.eq) {
          sub_mode = KProof::Contradiction;
        } else {
          const Equality& e = *st.eq;
          if (e.a == e.b || !valid_var(e.a) || !valid_var(e.b) || s.pos[e.a] < 0 ||
              s.pos[e.b] < 0) {
            return fail("terminal equality " + eq_text(e) + " is out of scope");
          }
          Var u = s.pos[e.a] > s.pos[e.b] ? e.a : e.b;
          if (s.pos[u] < s.nFX) {
            return fail("terminal equality " + eq_text(e) +
                        " does not involve a universal of this level");
          }
          if (lefts.count(u)) {
            return fail("terminal universal " + std::to_string(u) +
                        " is already assigned in this step");
          }
        }
      }

      for (const auto& [u, z] : st.uassign) push(Equality::of(u, z));
      auto err = check_sub(level + 1, st.sub, sub_mode, sub_target, here + " > ");
      for (const auto& [u, z] : st.uassign) pop(Equality::of(u, z));
      if (err) {
        unwind();
        return err;
      }
      if (st.eq && !terminal) {
        seen.insert(*st.eq);
        push(*st.eq);
        pushed.push_back(*st.eq);
      }
    }
    unwind();
    if (!contra) {
      const Equality& last = *p.steps.back().eq;
      if (!in_f(s, last.a) || !in_f(s, last.b)) {
        return path + "final equality " + eq_text(last) +
               " is not over the free variables";
      }
      if (target && last != *target) {
        return path + "final equality " + eq_text(last) + " is not the target " +
               eq_text(*target);
      }
    }
    return std::nullopt;
  }

  const LayeredFormula& lf_;
  std::vector<Scope> scopes_;
  std::map<Equality, int> hyps_;
  std::set<Equality> units_;
  std::set<std::pair<Equality, Equality>> impls_;
  std::uint64_t counter_ = 0;
  VerifyResult result_;
};

}  // namespace

VerifyResult verify_zero_proof(const LayeredFormula& lf, std::span<const Equality> E,
                               const ZeroProof& p, std::optional<Equality> target) {
  return Verifier(lf, E).run_zero(p, target);
}

VerifyResult verify_k_proof(const LayeredFormula& lf, std::span<const Equality> E,
                            const KProof& p, std::optional<Equality> target) {
  return Verifier(lf, E).run_k(p, KProof::Equality, target);
}

VerifyResult verify_k_contradiction(const LayeredFormula& lf,
                                    std::span<const Equality> E, const KProof& p) {
  return Verifier(lf, E).run_k(p, KProof::Contradiction, std::nullopt);
}

std::uint64_t proof_steps(const ZeroProof& p) { return p.steps.size(); }

std::uint64_t proof_steps(const KProof& p) {
  std::uint64_t n = 0;
  for (const KStep& st : p.steps) {
    n += 1;
    if (st.sub.zero) n += proof_steps(*st.sub.zero);
    if (st.sub.k) n += proof_steps(*st.sub.k);
  }
  return n;
}

// ---------------------------------------------------------------------------
// Size accounting

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

std::uint64_t symbols(const ZeroProof& p, std::uint64_t ce) {
  return sat_mul(p.steps.size(), ce);
}

std::uint64_t symbols(const KProof& p, std::uint64_t ce) {
  std::uint64_t n = 0;
  for (const KStep& st : p.steps) {
    n = sat_add(n, 3 + (st.eq ? ce : 1));
    n = sat_add(n, sat_mul(st.uassign.size(), ce));
    if (st.sub.zero) n = sat_add(n, symbols(*st.sub.zero, ce));
    if (st.sub.k) n = sat_add(n, symbols(*st.sub.k, ce));
  }
  return n;
}

}  // namespace

std::uint64_t equality_cost(int l) {
  // ceil(2 log2 l) = ceil(log2 l^2)
  std::uint64_t sq = static_cast<std::uint64_t>(l) * static_cast<std::uint64_t>(l);
  std::uint64_t lg = sq <= 1 ? 0 : std::bit_width(sq - 1);
  return lg + 3;
}

std::uint64_t size_bound(int l, int k) {
  std::uint64_t b = 1;
  for (int i = 0; i < k + 1; ++i) b = sat_mul(b, 10);
  for (int i = 0; i < 2 * k + 3; ++i) b = sat_mul(b, static_cast<std::uint64_t>(l));
  return b;
}

SizeAudit size_audit(const ZeroProof& p, int l) {
  SizeAudit a;
  a.symbols = symbols(p, equality_cost(l));
  a.bound = size_bound(l, 0);
  a.within = a.symbols < a.bound;
  return a;
}

SizeAudit size_audit(const KProof& p, int l, int k) {
  SizeAudit a;
  a.symbols = symbols(p, equality_cost(l));
  a.bound = size_bound(l, k);
  a.within = a.symbols < a.bound;
  return a;
}

}  // namespace eqqcsp
