#include <functional>

#include "eqqcsp/error.hpp"
#include "eqqcsp/reductions.hpp"

namespace eqqcsp {
namespace {

void check_cap(int n) {
  if (n > kBooleanCheckCap) {
    throw CapExceeded(std::to_string(n) + " Boolean variables exceed the brute-force cap of " +
                      std::to_string(kBooleanCheckCap));
  }
}

bool lit_true(int lit, const std::vector<char>& val) {
  return lit > 0 ? val[lit] : !val[-lit];
}

// Evaluates a prefix over val[1..n] by recursion on position i.
bool game(const std::vector<Binding>& prefix, std::size_t i, std::vector<char>& val,
          const std::function<bool(const std::vector<char>&)>& matrix) {
  if (i == prefix.size()) return matrix(val);
  const Binding& b = prefix[i];
  bool exists = b.q == Quantifier::Exists;
  for (char bit : {0, 1}) {
    val[b.v] = bit;
    if (game(prefix, i + 1, val, matrix) == exists) return exists;
  }
  return !exists;
}

}  // namespace

bool qbf_truth(const QBF& phi) {
  check_cap(2 * phi.n);
  std::vector<Binding> prefix;
  for (int v = 1; v <= 2 * phi.n; ++v) {
    prefix.push_back({v % 2 ? Quantifier::Exists : Quantifier::Forall, v});
  }
  std::vector<char> val(2 * phi.n + 1, 0);
  return game(prefix, 0, val, [&](const std::vector<char>& x) {
    for (const auto& c : phi.clauses) {
      if (!lit_true(c[0], x) && !lit_true(c[1], x) && !lit_true(c[2], x)) return false;
    }
    return true;
  });
}

bool monotone_satisfiable(const MonotoneCNF& phi) {
  check_cap(phi.n);
  std::vector<Binding> prefix;
  for (int v = 1; v <= phi.n; ++v) prefix.push_back({Quantifier::Exists, v});
  std::vector<char> val(phi.n + 1, 0);
  return game(prefix, 0, val, [&](const std::vector<char>& x) {
    for (const auto& c : phi.negative) {
      if (x[c[0]] && x[c[1]] && x[c[2]]) return false;
    }
    for (const auto& c : phi.positive) {
      if (!x[c[0]] && !x[c[1]] && !x[c[2]]) return false;
    }
    return true;
  });
}

bool qnae_truth(const QNAEInstance& inst) {
  check_cap(inst.n);
  std::vector<char> val(inst.n + 1, 0);
  return game(inst.prefix, 0, val, [&](const std::vector<char>& x) {
    for (const auto& c : inst.constraints) {
      if (x[c[0]] == x[c[1]] && x[c[1]] == x[c[2]]) return false;
    }
    return true;
  });
}

bool boolcsp_satisfiable(const BoolCSP& inst) {
  check_cap(inst.n);
  std::vector<Binding> prefix;
  for (int v = 1; v <= inst.n; ++v) prefix.push_back({Quantifier::Exists, v});
  std::vector<char> val(inst.n + 1, 0);
  return game(prefix, 0, val, [&](const std::vector<char>& x) {
    for (const auto& c : inst.constraints) {
      const auto& v = c.v;
      bool ok = c.kind == BoolCSP::Neq ? x[v[0]] != x[v[1]]
                                       : (x[v[0]] == x[v[1]] || x[v[1]] == x[v[2]]);
      if (!ok) return false;
    }
    return true;
  });
}

}  // namespace eqqcsp
