#include "eqqcsp/transform.hpp"

#include "eqqcsp/error.hpp"

namespace eqqcsp {

std::string AlternationProfile::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += ',';
    out += eqqcsp::to_string(blocks[i]);
  }
  return out;
}

AlternationProfile alternation_profile(const QEFormula& f) {
  AlternationProfile p;
  for (const Binding& b : f.prefix) {
    if (p.blocks.empty() || p.blocks.back() != b.q) {
      p.blocks.push_back(b.q);
      p.block_sizes.push_back(0);
    }
    ++p.block_sizes.back();
  }
  p.k = static_cast<int>(p.blocks.size());
  if (!p.blocks.empty()) p.leading = p.blocks.front();
  return p;
}

QEFormula pad_to_sigma_shape(const QEFormula& f) {
  if (!f.is_sentence()) throw ShapeError("pad_to_sigma_shape needs a sentence");
  QEFormula out = f;
  out.prefix.clear();
  int dummies = 0;
  auto add_dummy = [&](Quantifier q) {
    Var v = ++out.num_vars;
    out.prefix.push_back({q, v});
    out.names[v] = "d" + std::to_string(++dummies);
  };
  Quantifier expected = Quantifier::Exists;
  auto flip = [](Quantifier q) {
    return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
  };
  for (const Binding& b : f.prefix) {
    if (b.q != expected) add_dummy(expected);
    out.prefix.push_back(b);
    expected = flip(b.q);
  }
  if (expected == Quantifier::Forall) add_dummy(Quantifier::Forall);
  return out;
}

namespace {

std::string tuple_suffix(const std::vector<int>& a, int len) {
  std::string s = "^";
  for (int j = 0; j < len; ++j) {
    if (j) s += ',';
    s += std::to_string(a[j]);
  }
  return s;
}

// Advances a in [1..base]^len lexicographically; false after the last tuple.
bool next_tuple(std::vector<int>& a, int base) {
  for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j) {
    if (a[j] < base) {
      ++a[j];
      return true;
    }
    a[j] = 1;
  }
  return false;
}

}  // namespace

QEFormula zeta_pi2(const QEFormula& f, bool force, int cap) {
  f.validate();
  if (!f.is_sentence()) throw ShapeError("zeta_pi2 needs a sentence");
  if (f.prefix.size() % 2 != 0) {
    throw ShapeError("zeta_pi2: prefix must alternate exists/forall in pairs");
  }
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    Quantifier want = i % 2 == 0 ? Quantifier::Exists : Quantifier::Forall;
    if (f.prefix[i].q != want) {
      throw ShapeError("zeta_pi2: prefix must be exists y1 forall x1 ... "
                       "exists yn forall xn (pad it first)");
    }
  }
  const int n = static_cast<int>(f.prefix.size() / 2);
  if (n > cap && !force) {
    throw CapExceeded("zeta_pi2: n = " + std::to_string(n) + " exceeds cap " +
                      std::to_string(cap) + " (use force)");
  }
  const int base = 2 * n;

  // power[i] = base^i
  std::vector<long long> power(n + 1, 1);
  for (int i = 1; i <= n; ++i) {
    power[i] = power[i - 1] * base;
    if (power[i] > (1LL << 26)) throw CapExceeded("zeta_pi2: output too large");
  }

  QEFormula out;
  // x_i copies: base^i of them; y_i copies: base^(i-1).
  std::vector<Var> x_first(n + 1), y_first(n + 1);
  Var next = 1;
  for (int i = 1; i <= n; ++i) {
    x_first[i] = next;
    next += static_cast<Var>(power[i]);
  }
  for (int i = 1; i <= n; ++i) {
    y_first[i] = next;
    next += static_cast<Var>(power[i - 1]);
  }
  out.num_vars = next - 1;

  for (int i = 1; i <= n; ++i) {
    std::vector<int> a(i, 1);
    Var v = x_first[i];
    do {
      out.prefix.push_back({Quantifier::Forall, v});
      out.names[v] = "x" + std::to_string(i) + tuple_suffix(a, i);
      ++v;
    } while (next_tuple(a, base));
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<int> a(i - 1, 1);
    Var v = y_first[i];
    do {
      out.prefix.push_back({Quantifier::Exists, v});
      out.names[v] = i == 1 ? "y1" : "y" + std::to_string(i) + tuple_suffix(a, i - 1);
      ++v;
    } while (next_tuple(a, base));
  }

  // Original variable -> (is_x, i).
  std::vector<std::pair<bool, int>> role(f.num_vars + 1);
  for (int i = 1; i <= n; ++i) {
    role[f.prefix[2 * (i - 1)].v] = {false, i};
    role[f.prefix[2 * i - 1].v] = {true, i};
  }

  std::vector<int> a(n, 1);
  std::vector<Var> rename(f.num_vars + 1);
  do {
    for (Var v = 1; v <= f.num_vars; ++v) {
      auto [is_x, i] = role[v];
      int len = is_x ? i : i - 1;
      long long rank = 0;
      for (int j = 0; j < len; ++j) rank = rank * base + (a[j] - 1);
      rename[v] = static_cast<Var>((is_x ? x_first[i] : y_first[i]) + rank);
    }
    for (const Clause& c : f.matrix) {
      std::vector<Literal> lits;
      for (const Literal& l : c.literals()) {
        lits.push_back({Atom::of(rename[l.atom.a], rename[l.atom.b]), l.positive});
      }
      out.matrix.push_back(*Clause::make(std::move(lits)));
    }
  } while (next_tuple(a, base));
  return out;
}

}  // namespace eqqcsp
