#include <cctype>
#include <charconv>

#include "eqqcsp/error.hpp"
#include "eqqcsp/proofsys.hpp"

namespace eqqcsp {
namespace {

std::string indent(int depth) { return std::string(2 * depth, ' '); }

std::string eq_sexp(const Equality& e) {
  return "(eq " + std::to_string(e.a) + " " + std::to_string(e.b) + ")";
}

void print_zero(const ZeroProof& p, int depth, std::string& out) {
  out += indent(depth) + "(zeroproof\n";
  for (const ZeroStep& st : p.steps) {
    out += indent(depth + 1) + "(step " + eq_sexp(st.eq) + " ";
    switch (st.why.kind) {
      case Justification::Hyp: out += "(hyp)"; break;
      case Justification::Unit: out += "(unit)"; break;
      case Justification::Impl: out += "(impl " + std::to_string(st.why.i) + ")"; break;
      case Justification::Trans:
        out += "(trans " + std::to_string(st.why.i) + " " + std::to_string(st.why.j) + ")";
        break;
    }
    out += ")\n";
  }
  out += indent(depth) + ")\n";
}

void print_k(const KProof& p, int depth, std::string& out) {
  out += indent(depth) + "(kproof " +
         (p.mode == KProof::Equality ? "equality" : "contradiction") + "\n";
  for (const KStep& st : p.steps) {
    out += indent(depth + 1) + "(step " + (st.eq ? eq_sexp(*st.eq) : "(bot)") + " (uassign";
    for (const auto& [u, z] : st.uassign) {
      out += " (" + std::to_string(u) + " " + std::to_string(z) + ")";
    }
    out += ")\n";
    if (st.sub.zero) print_zero(*st.sub.zero, depth + 2, out);
    if (st.sub.k) print_k(*st.sub.k, depth + 2, out);
    out += indent(depth + 1) + ")\n";
  }
  out += indent(depth) + ")\n";
}

struct Node {
  std::string atom;  // empty for lists
  std::vector<Node> items;
  std::size_t line = 0, column = 0;

  bool is_list() const { return atom.empty(); }
};

class SexpParser {
 public:
  explicit SexpParser(std::string_view text) : text_(text) {}

  Node parse_one() {
    skip();
    if (at_end()) throw ParseError("empty proof", line_, col_);
    Node n = node();
    skip();
    if (!at_end()) throw ParseError("trailing text after the proof", line_, col_);
    return n;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return text_[i_]; }
  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  void skip() {
    while (!at_end()) {
      if (peek() == ';' || peek() == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else {
        break;
      }
    }
  }

  Node node() {
    Node n;
    n.line = line_;
    n.column = col_;
    if (peek() == ')') throw ParseError("unexpected ')'", line_, col_);
    if (peek() == '(') {
      advance();
      while (true) {
        skip();
        if (at_end()) throw ParseError("unclosed '('", n.line, n.column);
        if (peek() == ')') {
          advance();
          return n;
        }
        n.items.push_back(node());
      }
    }
    while (!at_end() && peek() != '(' && peek() != ')' &&
           !std::isspace(static_cast<unsigned char>(peek()))) {
      n.atom += peek();
      advance();
    }
    return n;
  }

  std::string_view text_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
};

[[noreturn]] void fail(const Node& n, const std::string& what) {
  throw ParseError(what, n.line, n.column);
}

bool head_is(const Node& n, std::string_view h) {
  return n.is_list() && !n.items.empty() && n.items[0].atom == h;
}

int number(const Node& n) {
  int v = 0;
  if (n.is_list()) fail(n, "expected a number");
  auto [ptr, ec] = std::from_chars(n.atom.data(), n.atom.data() + n.atom.size(), v);
  if (ec != std::errc() || ptr != n.atom.data() + n.atom.size() || v < 1) {
    fail(n, "expected a positive number, got '" + n.atom + "'");
  }
  return v;
}

Equality equality(const Node& n) {
  if (!head_is(n, "eq") || n.items.size() != 3) fail(n, "expected (eq A B)");
  int a = number(n.items[1]), b = number(n.items[2]);
  if (a == b) fail(n, "equality of a variable with itself");
  return Equality::of(a, b);
}

ZeroProof zero_proof(const Node& n) {
  ZeroProof p;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    const Node& s = n.items[i];
    if (!head_is(s, "step") || s.items.size() != 3) fail(s, "expected (step (eq A B) <just>)");
    ZeroStep st;
    st.eq = equality(s.items[1]);
    const Node& j = s.items[2];
    if (head_is(j, "hyp") && j.items.size() == 1) {
      st.why = {Justification::Hyp};
    } else if (head_is(j, "unit") && j.items.size() == 1) {
      st.why = {Justification::Unit};
    } else if (head_is(j, "impl") && j.items.size() == 2) {
      st.why = {Justification::Impl, number(j.items[1])};
    } else if (head_is(j, "trans") && j.items.size() == 3) {
      st.why = {Justification::Trans, number(j.items[1]), number(j.items[2])};
    } else {
      fail(j, "expected (hyp), (unit), (impl J) or (trans I J)");
    }
    p.steps.push_back(st);
  }
  return p;
}

KProof k_proof(const Node& n) {
  KProof p;
  if (n.items.size() < 2 || n.items[1].is_list()) fail(n, "expected a proof mode");
  if (n.items[1].atom == "equality") {
    p.mode = KProof::Equality;
  } else if (n.items[1].atom == "contradiction") {
    p.mode = KProof::Contradiction;
  } else {
    fail(n.items[1], "unknown mode '" + n.items[1].atom + "'");
  }
  for (std::size_t i = 2; i < n.items.size(); ++i) {
    const Node& s = n.items[i];
    if (!head_is(s, "step") || s.items.size() != 4) {
      fail(s, "expected (step <eq-or-bot> (uassign ...) <subproof>)");
    }
    KStep st;
    if (head_is(s.items[1], "bot") && s.items[1].items.size() == 1) {
      st.eq = std::nullopt;
    } else {
      st.eq = equality(s.items[1]);
    }
    const Node& ua = s.items[2];
    if (!head_is(ua, "uassign")) fail(ua, "expected (uassign (U Z)*)");
    for (std::size_t k = 1; k < ua.items.size(); ++k) {
      const Node& pr = ua.items[k];
      if (!pr.is_list() || pr.items.size() != 2) fail(pr, "expected (U Z)");
      st.uassign.push_back({number(pr.items[0]), number(pr.items[1])});
    }
    const Node& sub = s.items[3];
    if (head_is(sub, "zeroproof")) {
      st.sub.zero = zero_proof(sub);
    } else if (head_is(sub, "kproof")) {
      st.sub.k = std::make_shared<KProof>(k_proof(sub));
    } else {
      fail(sub, "expected a subproof");
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

}  // namespace

std::string print_proof(const ZeroProof& p) {
  std::string out;
  print_zero(p, 0, out);
  return out;
}

std::string print_proof(const KProof& p) {
  std::string out;
  print_k(p, 0, out);
  return out;
}

ParsedProof parse_proof(std::string_view text) {
  Node root = SexpParser(text).parse_one();
  ParsedProof out;
  if (head_is(root, "zeroproof")) {
    out.zero = zero_proof(root);
  } else if (head_is(root, "kproof")) {
    out.k = k_proof(root);
  } else {
    fail(root, "expected (zeroproof ...) or (kproof ...)");
  }
  return out;
}

}  // namespace eqqcsp
