#include "eqqcsp/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "eqqcsp/classify.hpp"
#include "eqqcsp/error.hpp"
#include "eqqcsp/proofsys.hpp"
#include "eqqcsp/qecnf.hpp"
#include "eqqcsp/reductions.hpp"
#include "eqqcsp/solver.hpp"
#include "eqqcsp/transform.hpp"

#ifndef EQQCSP_VERSION
#define EQQCSP_VERSION "dev"
#endif

namespace eqqcsp::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write " + path);
}

std::string header(const std::string& what) {
  return "# eqqcsp " EQQCSP_VERSION " " + what + "\n";
}

Equality parse_equality(const std::string& text) {
  auto eq = text.find('=');
  try {
    if (eq == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    int a = std::stoi(text.substr(0, eq), &used);
    if (used != eq) throw std::invalid_argument(text);
    std::string rest = text.substr(eq + 1);
    int b = std::stoi(rest, &used);
    if (used != rest.size() || a == b || a < 1 || b < 1) throw std::invalid_argument(text);
    return Equality::of(a, b);
  } catch (const std::logic_error&) {
    throw Error("expected an equality A=B of two distinct variables, got '" + text + "'");
  }
}

std::string eq_text(const Equality& e) {
  return std::to_string(e.a) + "=" + std::to_string(e.b);
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

struct Options {
  std::string input;
  std::vector<std::string> inputs;
  std::string output;
  std::string report;
  std::string kind;
  std::string cert;
  std::vector<std::string> hyps;
  std::string target;
  int workers = 1;
  int pi = 0;
  int zeta_cap = kDefaultZetaCap;
  int max_universal = SearchLimits{}.max_universal_block;
  bool witness = false;
  bool naive = false;
  bool check = false;
  bool force = false;
  bool fragments = false;
};

SolverOptions solver_options(const Options& o) {
  SolverOptions s = options_from_env();
  s.workers = o.workers;
  return s;
}

void print_stats(std::ostream& out, const SolverStats& st) {
  out << "nodes " << st.nodes << "\n"
      << "memo_hits " << st.memo_hits << "\n"
      << "horn_leaves " << st.horn_leaves << "\n"
      << "relax_prunes " << st.relax_prunes << "\n";
}

int outcome_code(Outcome o) {
  switch (o) {
    case Outcome::True: return kTrue;
    case Outcome::False: return kFalse;
    case Outcome::BudgetExhausted: break;
  }
  return kBudget;
}

QEFormula load_formula(const std::string& path) {
  return parse_qecnf(read_file(path));
}

// QECNF sentence, or a relation file in clause form (free variables 1..arity).
QEFormula load_formula_or_relation(const std::string& path) {
  std::string text = read_file(path);
  std::istringstream lines(text);
  std::string line, word;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    if (!(ls >> word) || word[0] == '#') continue;
    if (word != "rel") break;
    RelationSource src = parse_relation_file(text);
    if (auto* f = std::get_if<QEFormula>(&src)) return *f;
    throw Error(path + " lists kernels; a clause definition is needed");
  }
  return parse_qecnf(text);
}

// ---------------------------------------------------------------------------

int cmd_solve(const Options& o, std::ostream& out) {
  QEFormula f = load_formula(o.input);
  if (!f.is_sentence()) throw ShapeError("solve needs a sentence; the input has free variables");
  TruthValue tv = o.naive ? decide_naive(f) : decide(f, solver_options(o));
  out << "RESULT " << to_string(tv.value) << "\n";
  print_stats(out, tv.stats);
  if (o.witness && tv.is_true()) {
    Strategy s = extract_strategy(f, solver_options(o));
    out << "strategy " << s.size() << "\n";
    for (Var v : s.order) {
      auto it = s.choices.find(v);
      if (it == s.choices.end()) continue;  // no reachable position
      for (const auto& [kernel, choice] : it->second) {
        out << "move " << v << " " << kernel.to_string() << " "
            << (choice == Strategy::kFresh ? std::string("fresh") : std::to_string(choice))
            << "\n";
      }
    }
  }
  return outcome_code(tv.value);
}

int cmd_classify(const Options& o, std::ostream& out) {
  std::vector<Relation> rels;
  std::vector<FragmentReport> reports;
  for (const std::string& path : o.inputs) {
    rels.push_back(load_relation(parse_relation_file(read_file(path))));
    reports.push_back(fragment_report(rels.back()));
  }
  Verdict full = classify_reports(reports, ClassifyMode::Full);
  std::optional<Verdict> pik;
  if (o.pi) pik = classify_reports(reports, ClassifyMode::PiK, o.pi);
  out << "RESULT " << (pik ? pik->cls : full.cls) << "\n";
  for (std::size_t i = 0; i < rels.size(); ++i) {
    out << "relation " << o.inputs[i] << " arity " << rels[i].arity() << " kernels "
        << rels[i].size() << "\n";
    out << reports[i].to_text();
  }
  out << "verdict full " << full.cls << "\n";
  if (pik) out << "verdict pi_" << o.pi << " " << pik->cls << "\n";
  return kTrue;
}

// Emits a generated formula: to -o with a summary on stdout, or as the
// whole of stdout.
void emit_formula(const Options& o, const QEFormula& f, const std::string& what,
                  std::ostream& out) {
  std::string text = header(what) + print_qecnf(f);
  if (o.output.empty()) {
    out << text;
    return;
  }
  write_file(o.output, text);
  out << "RESULT OK\n"
      << "vars " << f.num_vars << "\n"
      << "clauses " << f.matrix.size() << "\n"
      << "wrote " << o.output << "\n";
}

// Oracle comparison for --check. Messages go to stdout after the summary
// when -o is used, else to stderr so stdout stays a clean file.
int report_check(const Options& o, bool expected, Outcome got, std::ostream& out,
                 std::ostream& err) {
  std::ostream& sink = o.output.empty() ? err : out;
  if (got == Outcome::BudgetExhausted) {
    sink << "check BUDGET\n";
    return kBudget;
  }
  bool agree = (got == Outcome::True) == expected;
  sink << "check oracle " << (expected ? "TRUE" : "FALSE") << " qcsp " << to_string(got)
       << " " << (agree ? "agree" : "DISAGREE") << "\n";
  return agree ? kTrue : kFalse;
}

int cmd_reduce(const Options& o, std::ostream& out, std::ostream& err) {
  std::string text = read_file(o.input);
  Reduction red;
  std::function<bool()> oracle;
  if (o.kind == "qsat" || o.kind == "qsat-tf") {
    QBF phi = parse_qdimacs(text);
    red = o.kind == "qsat" ? qbf_to_qcsp_I(phi) : qbf_to_qcsp_I_existential_tf(phi);
    oracle = [phi] { return qbf_truth(phi); };
  } else if (o.kind == "mon3sat") {
    MonotoneCNF phi = parse_monotone_dimacs(text);
    red = mon3sat_to_pi2(phi);
    oracle = [phi] { return !monotone_satisfiable(phi); };
  } else if (o.kind == "qnae") {
    QNAEInstance inst = parse_qnae(text);
    red = qnae_to_qcsp(inst, o.pi ? o.pi : std::max(2, pi_level(inst)));
    oracle = [inst] { return qnae_truth(inst); };
  } else if (o.kind == "bcsp") {
    BoolCSP inst = parse_bcsp(text);
    red = boolcsp_to_pi2_disj(inst);
    oracle = [inst] { return boolcsp_satisfiable(inst); };
  } else {
    throw Error("unknown reduction '" + o.kind + "'");
  }
  // Run the check before writing anything so a cap error leaves no output.
  std::optional<bool> expected;
  if (o.check) expected = oracle();
  emit_formula(o, red.formula, "reduce " + o.kind, out);
  if (!o.report.empty()) write_file(o.report, red.report.to_text());
  if (!o.check) return kTrue;
  return report_check(o, *expected, decide(red.formula, solver_options(o)).value, out, err);
}

int cmd_normalize(const Options& o, std::ostream& out, std::ostream& err) {
  QEFormula f = load_formula(o.input);
  QEFormula z = zeta_pi2(pad_to_sigma_shape(f), o.force, o.zeta_cap);
  std::optional<Outcome> expected;
  if (o.check) expected = decide(f, solver_options(o)).value;
  emit_formula(o, z, "normalize-pi2", out);
  if (!o.check) return kTrue;
  if (*expected == Outcome::BudgetExhausted) return report_check(o, false, *expected, out, err);
  return report_check(o, *expected == Outcome::True, decide(z, solver_options(o)).value, out,
                      err);
}

std::vector<Equality> hypotheses(const Options& o) {
  std::vector<Equality> E;
  for (const std::string& h : o.hyps) E.push_back(parse_equality(h));
  return E;
}

void print_audit(std::ostream& out, const SizeAudit& a) {
  out << "size " << a.symbols << " bound " << a.bound << " within " << yes_no(a.within)
      << "\n";
}

// Writes a certificate to -o, or after the report on stdout.
void emit_certificate(const Options& o, const std::string& text, std::ostream& out) {
  if (!o.output.empty()) {
    write_file(o.output, text);
    out << "wrote " << o.output << "\n";
  } else {
    out << text;
  }
}

int cmd_proof_search(const Options& o, std::ostream& out) {
  QEFormula f = load_formula_or_relation(o.input);
  LayeredFormula lf = layer_formula(f);
  SearchLimits limits;
  limits.max_universal_block = o.max_universal;
  const std::vector<Equality> E = hypotheses(o);
  const int l = f.num_vars;

  if (f.is_sentence() && E.empty() && o.target.empty()) {
    SigmaResult res = decide_sigma(f, limits);
    out << "RESULT " << to_string(res.value.value) << "\n"
        << "layers " << lf.k() << "\n"
        << "evaluations " << res.value.stats.nodes << "\n";
    int code = outcome_code(res.value.value);
    if (o.check) {
      Outcome want = decide(f, solver_options(o)).value;
      bool agree = want == res.value.value;
      out << "check solver " << to_string(want) << " " << (agree ? "agree" : "DISAGREE")
          << "\n";
      if (!agree) code = want == Outcome::BudgetExhausted ? kBudget : kFalse;
    }
    if (res.certificate) {
      print_audit(out, size_audit(*res.certificate, l, lf.k()));
      emit_certificate(o, print_proof(*res.certificate), out);
    } else if (res.witness) {
      out << "witness " << res.witness->to_string() << "\n";
    }
    return code;
  }

  SearchOutcome so = o.target.empty() ? saturate_search(lf, E, limits)
                                      : prove_equality(lf, E, parse_equality(o.target), limits);
  int code = kFalse;
  switch (so.kind) {
    case SearchOutcome::Holds:
      out << (o.target.empty() ? "RESULT CONSISTENT\n" : "RESULT UNPROVABLE\n");
      code = o.target.empty() ? kTrue : kFalse;
      break;
    case SearchOutcome::Derived:
      out << (o.target.empty() ? "RESULT DERIVED " : "RESULT PROVED ") << eq_text(*so.derived)
          << "\n";
      code = o.target.empty() ? kFalse : kTrue;
      break;
    case SearchOutcome::Refuted:
      out << "RESULT CONTRADICTION\n";
      break;
  }
  out << "layers " << lf.k() << "\n" << "evaluations " << so.evaluations << "\n";
  if (so.witness) out << "witness " << so.witness->to_string() << "\n";
  if (so.proof) {
    print_audit(out, size_audit(*so.proof, l, lf.k()));
    emit_certificate(o, print_proof(*so.proof), out);
  } else if (so.zero_proof) {
    print_audit(out, size_audit(*so.zero_proof, l));
    emit_certificate(o, print_proof(*so.zero_proof), out);
  }
  return code;
}

int cmd_proof_verify(const Options& o, std::ostream& out) {
  QEFormula f = load_formula_or_relation(o.input);
  LayeredFormula lf = layer_formula(f);
  ParsedProof p = parse_proof(read_file(o.cert));
  const std::vector<Equality> E = hypotheses(o);
  std::optional<Equality> target;
  if (!o.target.empty()) target = parse_equality(o.target);

  VerifyResult vr;
  std::optional<SizeAudit> audit;
  if (p.zero) {
    if (lf.k() != 0) {
      vr.ok = false;
      vr.reason = "a 0-proof needs a formula without universal layers";
    } else {
      vr = verify_zero_proof(lf, E, *p.zero, target);
      audit = size_audit(*p.zero, f.num_vars);
    }
  } else if (p.k->mode == KProof::Contradiction) {
    vr = verify_k_contradiction(lf, E, *p.k);
    audit = size_audit(*p.k, f.num_vars, lf.k());
  } else {
    vr = verify_k_proof(lf, E, *p.k, target);
    audit = size_audit(*p.k, f.num_vars, lf.k());
  }
  out << "RESULT " << (vr.ok ? "ACCEPT" : "REJECT") << "\n";
  if (!vr.ok) out << "reason " << vr.reason << "\n";
  out << "steps " << vr.steps_checked << "\n";
  if (vr.ok && audit) print_audit(out, *audit);
  return vr.ok ? kTrue : kFalse;
}

int cmd_relation(const Options& o, std::ostream& out) {
  Relation r = load_relation(parse_relation_file(read_file(o.input)));
  out << "RESULT RELATION arity " << r.arity() << " kernels " << r.size() << "\n";
  out << print_relation(r);
  if (o.fragments) out << fragment_report(r).to_text();
  return kTrue;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantified constraint satisfaction over equality languages", "eqqcsp"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", EQQCSP_VERSION);

  auto add_workers = [&](CLI::App* c) {
    c->add_option("--workers", o.workers, "Solver threads")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Decide a QECNF sentence");
  solve->add_option("input", o.input, "QECNF file")->required();
  solve->add_flag("--witness", o.witness, "Print a winning strategy when TRUE");
  solve->add_flag("--naive", o.naive, "Use the reference evaluator");
  add_workers(solve);

  auto* classify = app.add_subcommand("classify", "Classify an equality language");
  classify->add_option("inputs", o.inputs, "Relation files")->required();
  classify->add_option("--pi", o.pi, "Report the Pi_k verdict for this k")
      ->check(CLI::Range(2, 1000));

  auto* reduce = app.add_subcommand("reduce", "Generate a QCSP instance from a Boolean problem");
  reduce->add_option("kind", o.kind, "qsat, qsat-tf, mon3sat, qnae or bcsp")
      ->required()
      ->check(CLI::IsMember({"qsat", "qsat-tf", "mon3sat", "qnae", "bcsp"}));
  reduce->add_option("input", o.input, "Source instance")->required();
  reduce->add_option("-o,--output", o.output, "Write the QECNF here");
  reduce->add_option("--report", o.report, "Write the gadget report here");
  reduce->add_flag("--check", o.check, "Compare against Boolean brute force");
  reduce->add_option("--pi", o.pi, "Target level for qnae")->check(CLI::Range(2, 1000));
  add_workers(reduce);

  auto* normalize = app.add_subcommand("normalize-pi2", "Rewrite a sentence as Pi_2");
  normalize->add_option("input", o.input, "QECNF sentence")->required();
  normalize->add_option("-o,--output", o.output, "Write the QECNF here");
  normalize->add_flag("--force", o.force, "Ignore the size cap");
  normalize->add_option("--cap", o.zeta_cap, "Largest n without --force")
      ->check(CLI::NonNegativeNumber);
  normalize->add_flag("--check", o.check, "Decide input and output and compare");
  add_workers(normalize);

  auto* search = app.add_subcommand("proof-search", "Search for a certificate");
  search->add_option("input", o.input, "QECNF sentence or clause-form relation file")->required();
  search->add_option("--hyp", o.hyps, "Hypothesis A=B over free variables");
  search->add_option("--target", o.target, "Equality to prove");
  search->add_option("-o,--output", o.output, "Write the certificate here");
  search->add_option("--max-universal", o.max_universal, "Largest universal block")
      ->check(CLI::NonNegativeNumber);
  search->add_flag("--check", o.check, "Compare a sentence verdict with the solver");
  add_workers(search);

  auto* verify = app.add_subcommand("proof-verify", "Check a certificate");
  verify->add_option("input", o.input, "QECNF sentence or clause-form relation file")->required();
  verify->add_option("certificate", o.cert, "Proof file")->required();
  verify->add_option("--hyp", o.hyps, "Hypothesis A=B over free variables");
  verify->add_option("--target", o.target, "Expected final equality");

  auto* relation = app.add_subcommand("relation", "Print the kernels of a relation");
  relation->add_option("input", o.input, "Relation file")->required();
  relation->add_flag("--fragments", o.fragments, "Add the fragment report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out);
    if (classify->parsed()) return cmd_classify(o, out);
    if (reduce->parsed()) return cmd_reduce(o, out, err);
    if (normalize->parsed()) return cmd_normalize(o, out, err);
    if (search->parsed()) return cmd_proof_search(o, out);
    if (verify->parsed()) return cmd_proof_verify(o, out);
    if (relation->parsed()) return cmd_relation(o, out);
  } catch (const BudgetExhausted& e) {
    out << "RESULT BUDGET\n";
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace eqqcsp::cli
