#include "eqqcsp/qecnf.hpp"

#include <charconv>
#include <optional>

#include "eqqcsp/error.hpp"
#include "eqqcsp/solver.hpp"
#include "text.hpp"

namespace eqqcsp {
namespace {

using detail::Reader;
using detail::to_int;
using detail::Token;


// Body of a formula after its header: name, prefix and clause lines.
class BodyParser {
 public:
  BodyParser(Reader& r, QEFormula& f) : r_(r), f_(f), bound_(f.num_vars + 1) {
    for (Var v = 1; v <= f.free_count; ++v) bound_[v] = 1;
  }

  // Returns false if the line is not part of the formula grammar.
  bool accept(const std::vector<Token>& toks) {
    std::string_view kw = toks[0].text;
    if (kw == "name") {
      if (toks.size() < 3) r_.fail("name line needs a variable and a string",
                                   toks[0].column);
      Var v = r_.var(toks[1], f_.num_vars);
      std::string_view rest = r_.line_text().substr(toks[2].column - 1);
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) {
        rest.remove_suffix(1);
      }
      f_.names[v] = std::string(rest);
      return true;
    }
    if (kw == "forall" || kw == "exists") {
      if (seen_clause_) r_.fail("prefix line after clause lines", toks[0].column);
      Quantifier q = kw == "forall" ? Quantifier::Forall : Quantifier::Exists;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        Var v = r_.var(toks[i], f_.num_vars);
        if (v <= f_.free_count) {
          r_.fail("free variable " + std::to_string(v) + " cannot be quantified",
                  toks[i].column);
        }
        if (bound_[v]) {
          r_.fail("duplicate prefix variable " + std::to_string(v),
                  toks[i].column);
        }
        bound_[v] = 1;
        f_.prefix.push_back({q, v});
      }
      return true;
    }
    if (kw == "c") {
      seen_clause_ = true;
      std::vector<Clause::RawLiteral> raw;
      for (std::size_t i = 1; i < toks.size(); ++i) raw.push_back(literal(toks[i]));
      auto c = Clause::make(raw);
      if (c) {
        f_.matrix.push_back(std::move(*c));
      } else {
        r_.warn("tautological clause dropped");
      }
      return true;
    }
    return false;
  }

  void finish() {
    for (Var v = 1; v <= f_.num_vars; ++v) {
      if (!bound_[v]) {
        throw ParseError("variable " + std::to_string(v) + " missing from prefix",
                         r_.line(), 1);
      }
    }
  }

 private:
  Clause::RawLiteral literal(const Token& t) {
    std::string_view s = t.text;
    std::size_t eq = s.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      r_.fail("malformed literal '" + std::string(s) + "'", t.column);
    }
    bool positive = s[eq - 1] != '!';
    std::size_t lhs_end = positive ? eq : eq - 1;
    auto a = to_int(s.substr(0, lhs_end));
    auto b = to_int(s.substr(eq + 1));
    if (!a || !b) r_.fail("malformed literal '" + std::string(s) + "'", t.column);
    for (int v : {*a, *b}) {
      if (v < 1 || v > f_.num_vars) {
        r_.fail("variable " + std::to_string(v) + " out of range 1.." +
                    std::to_string(f_.num_vars),
                t.column);
      }
    }
    return {*a, *b, positive};
  }

  Reader& r_;
  QEFormula& f_;
  std::vector<char> bound_;
  bool seen_clause_ = false;
};

int header(Reader& r, std::string_view keyword) {
  std::vector<Token> toks;
  if (!r.next(toks)) throw ParseError("empty input", r.line(), 1);
  if (toks[0].text != keyword) {
    r.fail("expected '" + std::string(keyword) + "' header", toks[0].column);
  }
  if (toks.size() != 2) r.fail("header takes exactly one count", toks[0].column);
  auto n = to_int(toks[1].text);
  if (!n || *n < 0) r.fail("bad count '" + std::string(toks[1].text) + "'",
                           toks[1].column);
  return *n;
}

void append_prefix(std::string& out, const std::vector<Binding>& prefix) {
  std::size_t i = 0;
  while (i < prefix.size()) {
    Quantifier q = prefix[i].q;
    out += to_string(q);
    while (i < prefix.size() && prefix[i].q == q) {
      out += ' ';
      out += std::to_string(prefix[i].v);
      ++i;
    }
    out += '\n';
  }
}

}  // namespace

QEFormula parse_qecnf(std::string_view text, std::vector<std::string>* warnings) {
  Reader r(text, warnings);
  QEFormula f;
  f.num_vars = header(r, "qecnf");
  BodyParser body(r, f);
  std::vector<Token> toks;
  while (r.next(toks)) {
    if (!body.accept(toks)) {
      r.fail("unknown line kind '" + std::string(toks[0].text) + "'",
             toks[0].column);
    }
  }
  body.finish();
  return f;
}

std::string clause_line(const Clause& c) {
  std::string out = "c";
  for (const Literal& l : c.literals()) {
    out += ' ';
    out += to_string(l);
  }
  return out;
}

std::string print_qecnf(const QEFormula& f) {
  std::string out = "qecnf " + std::to_string(f.num_vars) + "\n";
  for (const auto& [v, name] : f.names) {
    out += "name " + std::to_string(v) + " " + name + "\n";
  }
  append_prefix(out, f.prefix);
  for (const Clause& c : f.matrix) out += clause_line(c) + "\n";
  return out;
}

RelationSource parse_relation_file(std::string_view text,
                                   std::vector<std::string>* warnings) {
  Reader r(text, warnings);
  int arity = header(r, "rel");
  if (arity < 1) throw ParseError("relation arity must be positive", 1, 1);

  std::vector<Token> toks;
  bool any_p = false, any_formula = false;
  // Formula lines may mention auxiliaries above the arity, so the variable
  // range is only known after a first pass.
  int max_var = arity;
  std::vector<Partition> kernels;
  QEFormula f;
  f.free_count = arity;

  // Formula lines are buffered and replayed at their original line numbers.
  struct Pending {
    std::string text;
    int line;
  };
  std::vector<Pending> pending;
  while (r.next(toks)) {
    if (toks[0].text == "p") {
      any_p = true;
      if (any_formula) r.fail("mixed partition and clause lines", toks[0].column);
      if (static_cast<int>(toks.size()) - 1 != arity) {
        r.fail("partition line needs " + std::to_string(arity) + " entries",
               toks[0].column);
      }
      std::vector<int> rgs;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto v = to_int(toks[i].text);
        if (!v) r.fail("bad class index '" + std::string(toks[i].text) + "'",
                       toks[i].column);
        rgs.push_back(*v);
      }
      try {
        kernels.emplace_back(std::move(rgs));
      } catch (const std::invalid_argument&) {
        r.fail("partition line is not a restricted-growth string",
               toks[0].column);
      }
      continue;
    }
    if (any_p) r.fail("mixed partition and clause lines", toks[0].column);
    any_formula = true;
    std::string_view kw = toks[0].text;
    if (kw == "forall" || kw == "exists") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (auto v = to_int(toks[i].text)) max_var = std::max(max_var, *v);
      }
    } else if (kw == "c") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        std::string_view s = toks[i].text;
        std::size_t eq = s.find('=');
        if (eq == std::string_view::npos) continue;
        auto a = to_int(s.substr(0, eq > 0 && s[eq - 1] == '!' ? eq - 1 : eq));
        auto b = to_int(s.substr(eq + 1));
        if (a) max_var = std::max(max_var, *a);
        if (b) max_var = std::max(max_var, *b);
      }
    }
    pending.push_back({std::string(r.line_text()), r.line()});
  }

  if (any_p || !any_formula) return Relation(arity, std::move(kernels));

  std::string replay;
  int at = 1;
  for (const Pending& p : pending) {
    for (; at < p.line; ++at) replay += '\n';
    replay += p.text;
    replay += '\n';
    ++at;
  }
  f.num_vars = max_var;
  Reader rr(replay, warnings);
  BodyParser body(rr, f);
  while (rr.next(toks)) {
    if (!body.accept(toks)) {
      rr.fail("unknown line kind '" + std::string(toks[0].text) + "'",
              toks[0].column);
    }
  }
  body.finish();
  return f;
}

Relation load_relation(const RelationSource& src) {
  if (const auto* r = std::get_if<Relation>(&src)) return *r;
  return relation_from_formula(std::get<QEFormula>(src));
}

std::string print_relation(const Relation& r) {
  std::string out = "rel " + std::to_string(r.arity()) + "\n";
  for (const Partition& p : r.kernels()) {
    out += "p";
    for (int c : p.rgs()) out += " " + std::to_string(c);
    out += "\n";
  }
  return out;
}

}  // namespace eqqcsp
