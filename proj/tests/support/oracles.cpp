#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace oracle {

using namespace eqqcsp;

std::vector<std::vector<int>> all_rgs(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int top) {
    if (static_cast<int>(cur.size()) == m) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= top; ++v) {
      cur.push_back(v);
      rec(std::max(top, v + 1));
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

bool clauses_hold(const std::vector<Clause>& matrix, const std::vector<int>& values) {
  for (const Clause& c : matrix) {
    bool sat = false;
    for (const Literal& l : c.literals()) {
      bool eq = values[l.atom.a - 1] == values[l.atom.b - 1];
      if (eq == l.positive) sat = true;
    }
    if (!sat) return false;
  }
  return true;
}

bool qcsp_truth(const QEFormula& f, const std::vector<int>& free_values) {
  const int n = std::max(f.num_vars, 1);
  std::vector<int> values(f.num_vars, 0);
  for (std::size_t i = 0; i < free_values.size(); ++i) values[i] = free_values[i];
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == f.prefix.size()) return clauses_hold(f.matrix, values);
    const Binding& b = f.prefix[i];
    const bool ex = b.q == Quantifier::Exists;
    for (int v = 0; v < n; ++v) {
      values[b.v - 1] = v;
      if (rec(i + 1) == ex) return ex;
    }
    return !ex;
  };
  return rec(0);
}

Relation relation_of(const QEFormula& f) {
  std::vector<Partition> ks;
  for (const auto& rgs : all_rgs(f.free_count)) {
    if (qcsp_truth(f, rgs)) ks.emplace_back(rgs);
  }
  return Relation(f.free_count, ks);
}

Relation existential_relation_of(const QEFormula& f) {
  for (const Binding& b : f.prefix) {
    if (b.q != Quantifier::Exists) throw std::invalid_argument("universal variable in prefix");
  }
  // Clauses become checkable once their last variable in prefix order is set.
  std::vector<int> pos(f.num_vars + 1, -1);
  for (std::size_t i = 0; i < f.prefix.size(); ++i) pos[f.prefix[i].v] = static_cast<int>(i);
  std::vector<std::vector<Clause>> due(f.prefix.size() + 1);
  for (const Clause& c : f.matrix) {
    int last = -1;
    for (const Literal& l : c.literals()) last = std::max({last, pos[l.atom.a], pos[l.atom.b]});
    due[last + 1].push_back(c);
  }
  std::vector<Partition> ks;
  for (const auto& rgs : all_rgs(f.free_count)) {
    std::vector<int> values(f.num_vars, 0);
    int top = 0;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
      values[i] = rgs[i];
      top = std::max(top, rgs[i] + 1);
    }
    std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int used) -> bool {
      if (!clauses_hold(due[i], values)) return false;
      if (i == f.prefix.size()) return true;
      for (int v = 0; v <= used; ++v) {
        values[f.prefix[i].v - 1] = v;
        if (rec(i + 1, std::max(used, v + 1))) return true;
      }
      return false;
    };
    if (rec(0, top)) ks.emplace_back(rgs);
  }
  return Relation(f.free_count, ks);
}

namespace {

// Boolean game over a prefix; val indexed by variable.
bool game(const std::vector<std::pair<bool, int>>& prefix, std::size_t i, std::vector<int>& val,
          const std::function<bool()>& matrix) {
  if (i == prefix.size()) return matrix();
  auto [ex, v] = prefix[i];
  for (int bit = 0; bit < 2; ++bit) {
    val[v] = bit;
    if (game(prefix, i + 1, val, matrix) == ex) return ex;
  }
  return !ex;
}

}  // namespace

bool qbf_truth(const QBF& phi) {
  std::vector<std::pair<bool, int>> prefix;
  for (int i = 1; i <= phi.n; ++i) {
    prefix.push_back({true, 2 * i - 1});
    prefix.push_back({false, 2 * i});
  }
  std::vector<int> val(2 * phi.n + 1, 0);
  return game(prefix, 0, val, [&] {
    for (const auto& c : phi.clauses) {
      bool sat = false;
      for (int lit : c) sat = sat || (lit > 0 ? val[lit] == 1 : val[-lit] == 0);
      if (!sat) return false;
    }
    return true;
  });
}

bool monotone_sat(const MonotoneCNF& phi) {
  for (int mask = 0; mask < (1 << phi.n); ++mask) {
    auto bit = [&](int v) { return (mask >> (v - 1) & 1) == 1; };
    bool ok = true;
    for (const auto& c : phi.negative) ok = ok && !(bit(c[0]) && bit(c[1]) && bit(c[2]));
    for (const auto& c : phi.positive) ok = ok && (bit(c[0]) || bit(c[1]) || bit(c[2]));
    if (ok) return true;
  }
  return false;
}

bool qnae_truth(const QNAEInstance& inst) {
  std::vector<std::pair<bool, int>> prefix;
  for (const Binding& b : inst.prefix) prefix.push_back({b.q == Quantifier::Exists, b.v});
  std::vector<int> val(inst.n + 1, 0);
  return game(prefix, 0, val, [&] {
    for (const auto& c : inst.constraints) {
      if (!nae(val[c[0]], val[c[1]], val[c[2]])) return false;
    }
    return true;
  });
}

bool bcsp_sat(const BoolCSP& inst) {
  for (int mask = 0; mask < (1 << inst.n); ++mask) {
    auto bit = [&](int v) { return mask >> (v - 1) & 1; };
    bool ok = true;
    for (const auto& c : inst.constraints) {
      if (c.kind == BoolCSP::Neq) {
        ok = ok && bit(c.v[0]) != bit(c.v[1]);
      } else {
        ok = ok && (bit(c.v[0]) == bit(c.v[1]) || bit(c.v[1]) == bit(c.v[2]));
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace oracle
