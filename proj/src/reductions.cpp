#include "eqqcsp/reductions.hpp"

#include <algorithm>
#include <set>

#include "eqqcsp/error.hpp"
#include "eqqcsp/transform.hpp"

namespace eqqcsp {
namespace {

std::string str(int i) { return std::to_string(i); }

void check_qbf(const QBF& phi) {
  if (phi.n < 1) throw ShapeError("QBF needs at least one exists/forall block");
  for (const auto& c : phi.clauses) {
    for (int lit : c) {
      if (lit == 0 || std::abs(lit) > 2 * phi.n) {
        throw ShapeError("QBF literal " + str(lit) + " out of range");
      }
    }
  }
}

GadgetPart finish(const FormulaBuilder& b, GadgetPart part) {
  part.num_clauses = b.clause_count() - part.first_clause;
  return part;
}

}  // namespace

QbfVars declare_qbf_vars(FormulaBuilder& b, int n, bool existential_tf) {
  QbfVars v;
  const Quantifier head = existential_tf ? Quantifier::Exists : Quantifier::Forall;
  v.t = b.add(head, "t", "encodes true");
  v.f = b.add(head, "f", "encodes false");
  if (existential_tf) {
    v.d = b.add(Quantifier::Forall, "d", "witness keeping t and f apart");
    b.edge(v.t, v.f, v.d);
  }
  v.x0.assign(n + 1, 0);
  v.x1.assign(n + 1, 0);
  v.y0.assign(n + 1, 0);
  v.y1.assign(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    std::string x = "x" + str(i), y = "y" + str(i);
    v.x0[i] = b.add(Quantifier::Exists, x + "^0", x + " is 0 iff equal to t");
    v.x1[i] = b.add(Quantifier::Forall, x + "^1", x + " is 1 iff equal to t");
    v.y0[i] = b.add(Quantifier::Forall, y + "^0", y + " is 0 iff equal to t");
    v.y1[i] = b.add(Quantifier::Forall, y + "^1", y + " is 1 iff equal to t");
  }
  v.z = b.add(Quantifier::Exists, "z", "end of every clause path");
  return v;
}

GadgetPart build_chain_gadget(FormulaBuilder& b, const QbfVars& v, int i, int n) {
  if (i < 0 || i > n) throw std::invalid_argument("chain gadget index out of range");
  GadgetPart part;
  part.first_clause = b.clause_count();
  const std::string tag = "C" + str(i);
  const std::string role = "C_" + str(i);
  const int first_y = std::max(i, 1);
  const int left = (n - first_y + 1) + (n - i);

  int made = 0;
  auto left_vertex = [&] {
    ++made;
    std::string desc = made == left ? role + " meeting vertex"
                                    : role + " chain vertex " + str(made);
    Var w = b.vertex(tag + ".a" + str(made), desc);
    part.vertices.push_back(w);
    return w;
  };

  Var cur = i == 0 ? v.f : v.x0[i];
  for (int j = first_y; j <= n; ++j) {
    Var next = left_vertex();
    b.edge(cur, v.y1[j], next);
    b.edge(cur, v.y0[j], next);
    cur = next;
  }
  for (int j = i + 1; j <= n; ++j) {
    Var next = left_vertex();
    b.edge(cur, v.x1[j], next);
    cur = next;
  }
  const Var meeting = cur;

  Var r = v.t;
  for (int j = i + 1; j <= n; ++j) {
    Var next = b.vertex(tag + ".b" + str(j - i), role + " t-path vertex " + str(j - i));
    part.vertices.push_back(next);
    b.edge(r, v.x0[j], next);
    r = next;
  }
  b.edge(r, v.z, meeting);
  return finish(b, std::move(part));
}

GadgetPart build_clause_paths(FormulaBuilder& b, const QbfVars& v,
                              std::span<const std::array<int, 3>> clauses) {
  GadgetPart part;
  part.first_clause = b.clause_count();
  auto label = [&](int lit) {
    int u = std::abs(lit);
    int i = (u + 1) / 2;
    bool is_x = u % 2 == 1;
    if (lit > 0) return is_x ? v.x0[i] : v.y0[i];
    return is_x ? v.x1[i] : v.y1[i];
  };
  int h = 0;
  for (const auto& c : clauses) {
    ++h;
    std::string tag = "F" + str(h);
    Var p1 = b.vertex(tag + ".p1", "F path clause " + str(h) + " vertex 1");
    Var p2 = b.vertex(tag + ".p2", "F path clause " + str(h) + " vertex 2");
    part.vertices.push_back(p1);
    part.vertices.push_back(p2);
    b.edge(v.t, label(c[0]), p1);
    b.edge(p1, label(c[1]), p2);
    b.edge(p2, label(c[2]), v.z);
  }
  return finish(b, std::move(part));
}

namespace {

Reduction qbf_reduction(const QBF& phi, bool existential_tf) {
  check_qbf(phi);
  FormulaBuilder b;
  QbfVars v = declare_qbf_vars(b, phi.n, existential_tf);
  for (int i = 0; i <= phi.n; ++i) build_chain_gadget(b, v, i, phi.n);
  build_clause_paths(b, v, phi.clauses);
  b.note(std::string("reduction ") + (existential_tf ? "qsat-tf" : "qsat"));
  b.note("blocks " + str(phi.n) + " clauses " + str(static_cast<int>(phi.clauses.size())));
  for (int u = 1; u <= 2 * phi.n; ++u) {
    int src = u - 1 < static_cast<int>(phi.source.size()) ? phi.source[u - 1] : u;
    std::string name = (u % 2 ? "x" : "y") + str((u + 1) / 2);
    b.note(name + (src ? " is input variable " + str(src) : " is padding"));
  }
  return {b.build(), b.report()};
}

}  // namespace

Reduction qbf_to_qcsp_I(const QBF& phi) { return qbf_reduction(phi, false); }

Reduction qbf_to_qcsp_I_existential_tf(const QBF& phi) {
  return qbf_reduction(phi, true);
}

MonotoneCNF pad_monotone(const MonotoneCNF& phi, bool* degenerate) {
  MonotoneCNF out = phi;
  bool degen = false;
  auto fill = [&](std::vector<std::array<int, 3>>& cls) {
    if (cls.empty()) {
      int w = ++out.n;
      cls.push_back({w, w, w});
      degen = true;
    }
    while (cls.size() < 2) cls.push_back(cls.front());
  };
  fill(out.negative);
  fill(out.positive);
  if (degenerate) *degenerate = degen;
  return out;
}

Reduction mon3sat_to_pi2(const MonotoneCNF& input) {
  for (const auto* cls : {&input.negative, &input.positive}) {
    for (const auto& c : *cls) {
      for (int u : c) {
        if (u < 1 || u > input.n) throw ShapeError("MON-3-SAT variable out of range");
      }
    }
  }
  bool degenerate = false;
  MonotoneCNF phi = pad_monotone(input, &degenerate);
  const int l = static_cast<int>(phi.negative.size());
  const int m = static_cast<int>(phi.positive.size());

  FormulaBuilder b;
  Var b0 = b.add(Quantifier::Forall, "b0", "value 0");
  Var b1 = b.add(Quantifier::Forall, "b1", "value 1");
  std::vector<Var> v(phi.n + 1);
  for (int i = 1; i <= phi.n; ++i) {
    v[i] = b.add(Quantifier::Forall, "v" + str(i),
                 i > input.n ? "padding variable" : "input variable " + str(i));
  }
  std::vector<Var> N(l + 1), Np(l + 1), P(m + 1), Pp(m + 1);
  for (int h = 1; h <= l; ++h) {
    N[h] = b.add(Quantifier::Exists, "N" + str(h), "negative clause " + str(h));
  }
  for (int h = 2; h <= l; ++h) {
    Np[h] = b.add(Quantifier::Exists, "N'" + str(h), "negative chain " + str(h));
  }
  for (int h = 1; h <= m; ++h) {
    P[h] = b.add(Quantifier::Exists, "P" + str(h), "positive clause " + str(h));
  }
  for (int h = 2; h <= m; ++h) {
    Pp[h] = b.add(Quantifier::Exists, "P'" + str(h), "positive chain " + str(h));
  }

  for (int h = 1; h <= l; ++h) {
    for (int u : phi.negative[h - 1]) b.edge(v[u], b0, N[h]);
  }
  for (int h = 1; h <= m; ++h) {
    for (int u : phi.positive[h - 1]) b.edge(v[u], b1, P[h]);
  }
  b.edge(N[1], N[2], Np[2]);
  for (int h = 3; h <= l; ++h) b.edge(Np[h - 1], N[h], Np[h]);
  b.edge(P[1], P[2], Pp[2]);
  for (int h = 3; h <= m; ++h) b.edge(Pp[h - 1], P[h], Pp[h]);
  b.clause({{Np[l], Pp[m], true}});

  b.note("reduction mon3sat");
  b.note("negative " + str(l) + " positive " + str(m));
  if (degenerate) b.note("degenerate: a polarity class was empty and was padded");
  return {b.build(), b.report()};
}

GadgetPart or_chain(FormulaBuilder& b, std::span<const Predicate> preds,
                    const std::string& tag) {
  if (preds.empty()) throw std::invalid_argument("or_chain needs a predicate");
  GadgetPart part;
  part.first_clause = b.clause_count();
  const int m = static_cast<int>(preds.size());
  std::vector<Var> y(m + 2);
  for (int i = 1; i <= m + 1; ++i) {
    y[i] = b.vertex(tag + ".y" + str(i), tag + " chain link " + str(i));
    part.vertices.push_back(y[i]);
  }
  for (int i = 1; i <= m; ++i) {
    const Predicate& p = preds[i - 1];
    if (p.equal) {
      b.clause({{p.a, p.b, true}, {y[i], y[i + 1], true}});
    } else {
      // a != b  ~>  exists w (a = w or ...) and b != w
      Var w = b.vertex(tag + ".w" + str(i), tag + " disequality helper " + str(i));
      part.vertices.push_back(w);
      b.clause({{p.a, w, true}, {y[i], y[i + 1], true}});
      b.clause({{p.b, w, false}});
    }
  }
  b.clause({{y[1], y[m + 1], false}});
  return finish(b, std::move(part));
}

QEFormula or_chain_formula(int arity, std::span<const Predicate> preds) {
  FormulaBuilder b(arity);
  or_chain(b, preds, "or");
  return b.build();
}

std::vector<std::vector<Predicate>> nae_cnf(Var x, Var xp, Var y, Var yp, Var z,
                                            Var zp) {
  // Literal = (pair, equal). Terms of the DNF, one per NAE-satisfying
  // encoding other than all-true and all-false.
  using Lit = std::pair<int, bool>;
  std::vector<std::array<Lit, 3>> terms;
  for (int mask = 1; mask < 7; ++mask) {
    std::array<Lit, 3> t;
    for (int k = 0; k < 3; ++k) t[k] = {k, ((mask >> (2 - k)) & 1) == 0};
    terms.push_back(t);
  }
  // The DNF order: TTF, TFT, TFF, FTT, FTF, FFT.
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    for (int k = 0; k < 3; ++k) {
      if (a[k].second != b[k].second) return a[k].second > b[k].second;
    }
    return false;
  });

  std::set<std::vector<Lit>> clauses;
  std::array<int, 6> pick{};
  while (true) {
    std::vector<Lit> c;
    for (int t = 0; t < 6; ++t) c.push_back(terms[t][pick[t]]);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool taut = false;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (c[i].first == c[i - 1].first) taut = true;
    }
    if (!taut) clauses.insert(c);
    int t = 5;
    while (t >= 0 && pick[t] == 2) pick[t--] = 0;
    if (t < 0) break;
    ++pick[t];
  }

  std::vector<std::vector<Lit>> kept;
  for (const auto& c : clauses) {
    bool subsumed = false;
    for (const auto& d : clauses) {
      if (d != c && std::includes(c.begin(), c.end(), d.begin(), d.end())) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) kept.push_back(c);
  }

  const std::array<std::pair<Var, Var>, 3> pairs{{{x, xp}, {y, yp}, {z, zp}}};
  std::vector<std::vector<Predicate>> out;
  for (const auto& c : kept) {
    std::vector<Predicate> preds;
    for (auto [k, eq] : c) preds.push_back({pairs[k].first, pairs[k].second, eq});
    out.push_back(std::move(preds));
  }
  return out;
}

namespace {

GadgetPart nae_core(FormulaBuilder& b, Var x, Var xp, Var y, Var yp, Var z,
                    Var zp, const std::string& tag) {
  GadgetPart part;
  part.first_clause = b.clause_count();
  int k = 0;
  for (const auto& preds : nae_cnf(x, xp, y, yp, z, zp)) {
    GadgetPart sub = or_chain(b, preds, tag + "." + str(++k));
    part.vertices.insert(part.vertices.end(), sub.vertices.begin(),
                         sub.vertices.end());
  }
  return finish(b, std::move(part));
}

}  // namespace

GadgetPart nae_gadget(FormulaBuilder& b, Var x, Var xp, Var y, Var yp, Var z,
                      Var zp, const std::string& tag) {
  std::set<Var> distinct{x, xp, y, yp, z, zp};
  if (distinct.size() != 6) {
    throw std::invalid_argument("nae_gadget needs six distinct variables");
  }
  return nae_core(b, x, xp, y, yp, z, zp, tag);
}

QEFormula nae_gadget_formula() {
  FormulaBuilder b(6);
  nae_gadget(b, 1, 2, 3, 4, 5, 6, "nae");
  return b.build();
}

int pi_level(const QNAEInstance& inst) {
  QEFormula f;
  f.prefix = inst.prefix;
  AlternationProfile p = alternation_profile(f);
  return p.k + (p.leading == Quantifier::Exists ? 1 : 0);
}

Reduction qnae_to_qcsp(const QNAEInstance& inst, int k) {
  std::vector<char> seen(inst.n + 1, 0);
  for (const Binding& bd : inst.prefix) {
    if (bd.v < 1 || bd.v > inst.n || seen[bd.v]) {
      throw ShapeError("QNAE prefix must quantify each variable once");
    }
    seen[bd.v] = 1;
  }
  if (inst.prefix.size() != static_cast<std::size_t>(inst.n)) {
    throw ShapeError("QNAE prefix must quantify every variable");
  }
  if (pi_level(inst) > k) {
    throw ShapeError("QNAE instance has Pi level " + str(pi_level(inst)) +
                     ", above target " + str(k));
  }
  FormulaBuilder b;
  std::vector<Var> v(inst.n + 1), vp(inst.n + 1);
  for (const Binding& bd : inst.prefix) {
    std::string name = "v" + str(bd.v);
    v[bd.v] = b.add(bd.q, name, "variable " + str(bd.v) + ", true iff equal to partner");
    vp[bd.v] = b.add(bd.q, name + "'", "partner of variable " + str(bd.v));
  }
  int h = 0;
  for (const auto& c : inst.constraints) {
    ++h;
    for (int u : c) {
      if (u < 1 || u > inst.n) throw ShapeError("NAE variable out of range");
    }
    nae_core(b, v[c[0]], vp[c[0]], v[c[1]], vp[c[1]], v[c[2]], vp[c[2]],
             "nae" + str(h));
  }
  b.note("reduction qnae");
  b.note("target pi " + str(k) + " input level " + str(pi_level(inst)));
  return {b.build(), b.report()};
}

Reduction boolcsp_to_pi2_disj(const BoolCSP& inst) {
  FormulaBuilder b;
  Var b0 = b.add(Quantifier::Forall, "b0", "constant 0");
  Var b1 = b.add(Quantifier::Forall, "b1", "constant 1");
  std::vector<Var> v(inst.n + 1);
  for (int i = 1; i <= inst.n; ++i) {
    v[i] = b.add(Quantifier::Exists, "v" + str(i), "CSP variable " + str(i));
  }
  auto var = [&](int u) {
    if (u < 1 || u > inst.n) throw ShapeError("CSP variable " + str(u) + " out of range");
    return v[u];
  };
  for (const BoolCSP::Constraint& c : inst.constraints) {
    if (c.kind == BoolCSP::Neq) {
      Var x = var(c.v[0]), y = var(c.v[1]);
      b.clause({{x, b0, true}, {x, b1, true}});
      b.clause({{x, b0, true}, {y, b0, true}});
      b.clause({{y, b1, true}, {x, b1, true}});
      b.clause({{y, b1, true}, {y, b0, true}});
    } else if (c.kind == BoolCSP::Disj) {
      b.clause({{var(c.v[0]), var(c.v[1]), true}, {var(c.v[1]), var(c.v[2]), true}});
    } else {
      throw ShapeError("unsupported Boolean constraint");
    }
  }
  for (int i = 1; i <= inst.n; ++i) b.clause({{v[i], b0, true}, {v[i], b1, true}});
  b.note("reduction bcsp");
  return {b.build(), b.report()};
}

}  // namespace eqqcsp
