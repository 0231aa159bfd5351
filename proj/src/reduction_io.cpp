#include <algorithm>

#include "eqqcsp/error.hpp"
#include "eqqcsp/reductions.hpp"
#include "text.hpp"

namespace eqqcsp {
namespace {

using detail::Reader;
using detail::to_int;
using detail::Token;

int number(const Reader& r, const Token& t) {
  auto v = to_int(t.text);
  if (!v) r.fail("expected a number, got '" + std::string(t.text) + "'", t.column);
  return *v;
}

int variable(const Reader& r, const Token& t, int n) {
  int v = number(r, t);
  if (v < 1 || v > n) {
    r.fail("variable " + std::to_string(v) + " out of range 1.." + std::to_string(n),
           t.column);
  }
  return v;
}

// "p cnf V C"; returns V.
int dimacs_header(Reader& r) {
  std::vector<Token> toks;
  if (!r.next(toks)) throw ParseError("empty input", r.line(), 1);
  if (toks.size() != 4 || toks[0].text != "p" || toks[1].text != "cnf") {
    r.fail("expected 'p cnf <vars> <clauses>'", toks[0].column);
  }
  int v = number(r, toks[2]);
  int c = number(r, toks[3]);
  if (v < 0 || c < 0) r.fail("negative count in header", toks[2].column);
  return v;
}

// Collects 0-terminated literal lists, possibly spanning lines. `on_clause`
// receives the literals and the column of the terminating 0.
template <typename F>
void dimacs_clause_tokens(Reader& r, const std::vector<Token>& toks, int n,
                          std::vector<int>& pending, F on_clause) {
  for (const Token& t : toks) {
    int lit = number(r, t);
    if (lit == 0) {
      on_clause(pending, t.column);
      pending.clear();
      continue;
    }
    if (std::abs(lit) > n) {
      r.fail("literal " + std::to_string(lit) + " out of range", t.column);
    }
    pending.push_back(lit);
  }
}

std::array<int, 3> pad3(const Reader& r, const std::vector<int>& lits, int column) {
  if (lits.empty()) r.fail("empty clause", column);
  if (lits.size() > 3) r.fail("clause has more than 3 literals", column);
  std::array<int, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = lits[std::min(i, lits.size() - 1)];
  return out;
}

}  // namespace

QBF parse_qdimacs(std::string_view text) {
  Reader r(text, nullptr, "c");
  const int nv = dimacs_header(r);
  std::vector<Binding> declared;
  std::vector<char> bound(nv + 1, 0);
  std::vector<std::vector<int>> raw;
  std::vector<int> pending;
  std::vector<int> columns, lines;
  std::vector<Token> toks;
  bool in_clauses = false;
  while (r.next(toks)) {
    std::string_view kw = toks[0].text;
    if (kw == "a" || kw == "e") {
      if (in_clauses) r.fail("quantifier line after clauses", toks[0].column);
      Quantifier q = kw == "a" ? Quantifier::Forall : Quantifier::Exists;
      bool terminated = false;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (terminated) r.fail("tokens after terminating 0", toks[i].column);
        int v = number(r, toks[i]);
        if (v == 0) {
          terminated = true;
          continue;
        }
        v = variable(r, toks[i], nv);
        if (bound[v]) r.fail("variable " + std::to_string(v) + " quantified twice",
                             toks[i].column);
        bound[v] = 1;
        declared.push_back({q, v});
      }
      if (!terminated) r.fail("quantifier line must end with 0", toks.back().column);
      continue;
    }
    in_clauses = true;
    dimacs_clause_tokens(r, toks, nv, pending, [&](const std::vector<int>& lits, int col) {
      raw.push_back(lits);
      columns.push_back(col);
      lines.push_back(r.line());
    });
  }
  if (!pending.empty()) throw ParseError("last clause is not 0-terminated", r.line(), 1);

  // Free variables form an outermost existential block.
  std::vector<Binding> prefix;
  for (int v = 1; v <= nv; ++v) {
    if (!bound[v]) prefix.push_back({Quantifier::Exists, v});
  }
  prefix.insert(prefix.end(), declared.begin(), declared.end());

  QBF phi;
  std::vector<int> map(nv + 1, 0);
  Quantifier expected = Quantifier::Exists;
  auto flip = [&] {
    expected = expected == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
  };
  for (const Binding& b : prefix) {
    if (b.q != expected) {
      phi.source.push_back(0);
      flip();
    }
    phi.source.push_back(b.v);
    map[b.v] = static_cast<int>(phi.source.size());
    flip();
  }
  if (expected == Quantifier::Forall) phi.source.push_back(0);
  if (phi.source.empty()) phi.source = {0, 0};
  phi.n = static_cast<int>(phi.source.size()) / 2;

  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<int> lits;
    for (int lit : raw[i]) lits.push_back(lit > 0 ? map[lit] : -map[-lit]);
    if (lits.empty()) {
      throw ParseError("empty clause", lines[i], columns[i]);
    }
    if (lits.size() > 3) {
      throw ParseError("clause has more than 3 literals", lines[i], columns[i]);
    }
    std::array<int, 3> c{};
    for (std::size_t k = 0; k < 3; ++k) c[k] = lits[std::min(k, lits.size() - 1)];
    phi.clauses.push_back(c);
  }
  return phi;
}

MonotoneCNF parse_monotone_dimacs(std::string_view text) {
  Reader r(text, nullptr, "c");
  MonotoneCNF phi;
  phi.n = dimacs_header(r);
  std::vector<int> pending;
  std::vector<Token> toks;
  while (r.next(toks)) {
    dimacs_clause_tokens(r, toks, phi.n, pending, [&](const std::vector<int>& lits, int col) {
      std::array<int, 3> c = pad3(r, lits, col);
      bool pos = c[0] > 0;
      for (int lit : c) {
        if ((lit > 0) != pos) r.fail("clause of mixed polarity", col);
      }
      for (int& lit : c) lit = std::abs(lit);
      (pos ? phi.positive : phi.negative).push_back(c);
    });
  }
  if (!pending.empty()) throw ParseError("last clause is not 0-terminated", r.line(), 1);
  return phi;
}

QNAEInstance parse_qnae(std::string_view text) {
  Reader r(text);
  QNAEInstance inst;
  int declared_n = -1;
  std::vector<Binding> prefix;
  std::vector<Token> toks;
  bool first = true;
  int max_var = 0;
  while (r.next(toks)) {
    std::string_view kw = toks[0].text;
    if (kw == "qnae") {
      if (!first || toks.size() != 2) r.fail("'qnae N' must be the first line", toks[0].column);
      declared_n = number(r, toks[1]);
      if (declared_n < 0) r.fail("negative variable count", toks[1].column);
    } else if (kw == "a" || kw == "e") {
      Quantifier q = kw == "a" ? Quantifier::Forall : Quantifier::Exists;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        int v = number(r, toks[i]);
        if (v == 0 && i + 1 == toks.size()) break;
        v = variable(r, toks[i], declared_n >= 0 ? declared_n : 1 << 20);
        max_var = std::max(max_var, v);
        if (std::any_of(prefix.begin(), prefix.end(),
                        [&](const Binding& b) { return b.v == v; })) {
          r.fail("variable " + std::to_string(v) + " quantified twice", toks[i].column);
        }
        prefix.push_back({q, v});
      }
    } else if (kw == "nae") {
      if (toks.size() != 4) r.fail("nae takes three variables", toks[0].column);
      std::array<int, 3> c{};
      for (int k = 0; k < 3; ++k) {
        c[k] = variable(r, toks[k + 1], declared_n >= 0 ? declared_n : 1 << 20);
        max_var = std::max(max_var, c[k]);
      }
      inst.constraints.push_back(c);
    } else {
      r.fail("unknown line kind '" + std::string(kw) + "'", toks[0].column);
    }
    first = false;
  }
  inst.n = declared_n >= 0 ? declared_n : max_var;
  std::vector<char> bound(inst.n + 1, 0);
  for (const Binding& b : prefix) bound[b.v] = 1;
  for (int v = 1; v <= inst.n; ++v) {
    if (!bound[v]) inst.prefix.push_back({Quantifier::Exists, v});
  }
  inst.prefix.insert(inst.prefix.end(), prefix.begin(), prefix.end());
  return inst;
}

BoolCSP parse_bcsp(std::string_view text) {
  Reader r(text);
  std::vector<Token> toks;
  if (!r.next(toks) || toks[0].text != "bcsp" || toks.size() != 2) {
    throw ParseError("expected 'bcsp N' header", r.line(), 1);
  }
  BoolCSP inst;
  inst.n = number(r, toks[1]);
  if (inst.n < 0) r.fail("negative variable count", toks[1].column);
  while (r.next(toks)) {
    std::string_view kw = toks[0].text;
    BoolCSP::Constraint c{};
    std::size_t arity;
    if (kw == "neq") {
      c.kind = BoolCSP::Neq;
      arity = 2;
    } else if (kw == "disj") {
      c.kind = BoolCSP::Disj;
      arity = 3;
    } else {
      r.fail("unsupported constraint '" + std::string(kw) + "'", toks[0].column);
    }
    if (toks.size() != arity + 1) {
      r.fail(std::string(kw) + " takes " + std::to_string(arity) + " variables",
             toks[0].column);
    }
    for (std::size_t k = 0; k < arity; ++k) c.v[k] = variable(r, toks[k + 1], inst.n);
    inst.constraints.push_back(c);
  }
  return inst;
}

}  // namespace eqqcsp
