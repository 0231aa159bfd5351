#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqqcsp/cli.hpp"

namespace fs = std::filesystem;
using eqqcsp::cli::run;

namespace {

struct CliRun {
  int code;
  std::string out, err;
  std::string first_line() const { return out.substr(0, out.find('\n')); }
};

CliRun call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(EQQCSP_DATA_DIR) + "/" + rel; }

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("eqqcsp-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SolveTrueAndFalse) {
  CliRun r = call({"solve", data("forall-exists-eq.qecnf")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.first_line(), "RESULT TRUE");
  EXPECT_NE(r.out.find("\nnodes "), std::string::npos);

  TempDir t;
  std::string f = t.write("f.qecnf", "qecnf 2\nexists 1\nforall 2\nc 1=2\n");
  r = call({"solve", f});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.first_line(), "RESULT FALSE");
  EXPECT_EQ(call({"solve", f, "--naive"}).first_line(), "RESULT FALSE");
}

TEST(Cli, SolveWitnessAndWorkersAreStable) {
  CliRun a = call({"solve", data("forall-exists-eq.qecnf"), "--witness"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("\nstrategy "), std::string::npos);
  EXPECT_NE(a.out.find("\nmove "), std::string::npos);
  CliRun b = call({"solve", data("forall-exists-eq.qecnf"), "--workers", "4"});
  EXPECT_EQ(b.first_line(), a.first_line());
}

TEST(Cli, BudgetExitCode) {
  TempDir t;
  std::string f = t.write("f.qecnf",
                          "qecnf 6\nforall 1\nexists 2\nforall 3\nexists 4\nforall 5\nexists 6\n"
                          "c 1!=2 2=3\nc 3!=4 4=5\nc 5!=6 1=6\n");
  ::setenv("EQQCSP_NODE_BUDGET", "2", 1);
  CliRun r = call({"solve", f});
  ::unsetenv("EQQCSP_NODE_BUDGET");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.first_line(), "RESULT BUDGET");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"solve"}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"reduce", "nope", data("mon-sat.cnf")}).code, 2);
  CliRun missing = call({"solve", "/nonexistent/file.qecnf"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);
  TempDir t;
  CliRun bad = call({"solve", t.write("bad.qecnf", "qecnf 2\nexists 1 1\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
  EXPECT_EQ(call({"--version"}).code, 0);
}

TEST(Cli, Classify) {
  CliRun r = call({"classify", data("rels/I.rel"), "--pi", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.first_line(), "RESULT Co-NP-complete");
  EXPECT_NE(r.out.find("verdict full PSpace-complete\n"), std::string::npos);
  EXPECT_EQ(call({"classify", data("rels/negative.rel")}).first_line(), "RESULT Logspace");
  EXPECT_EQ(call({"classify", data("rels/or-eq.rel")}).first_line(), "RESULT NP-complete");
  EXPECT_EQ(call({"classify", data("rels/I.rel"), data("rels/or-eq.rel"), "--pi", "4"})
                .first_line(),
            "RESULT Pi_2^P-hard (lower bound)");
  EXPECT_EQ(call({"classify", data("rels/I.rel"), "--pi", "1"}).code, 2);
}

TEST(Cli, Relation) {
  CliRun r = call({"relation", data("rels/neq.rel")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "RESULT RELATION arity 2 kernels 1\nrel 2\np 0 1\n");
  CliRun k = call({"relation", data("rels/I-kernels.rel"), "--fragments"});
  EXPECT_EQ(k.first_line(), "RESULT RELATION arity 3 kernels 4");
  EXPECT_NE(k.out.find("horn yes"), std::string::npos);
}

TEST(Cli, ReduceChecksAgainstOracle) {
  struct Case {
    std::string kind, file;
  };
  for (const Case& c : {Case{"qsat", "qsat/true.qdimacs"}, Case{"qsat", "qsat/false.qdimacs"},
                        Case{"qsat-tf", "qsat/true.qdimacs"}, Case{"mon3sat", "mon-sat.cnf"},
                        Case{"mon3sat", "mon-unsat.cnf"}, Case{"qnae", "qnae-true.qnae"},
                        Case{"bcsp", "triangle.bcsp"}}) {
    TempDir t;
    CliRun r = call({"reduce", c.kind, data(c.file), "-o", t.file("out.qecnf"), "--report",
                  t.file("report.txt"), "--check"});
    EXPECT_EQ(r.code, 0) << c.kind << " " << c.file << "\n" << r.out << r.err;
    EXPECT_EQ(r.first_line(), "RESULT OK");
    EXPECT_NE(r.out.find(" agree\n"), std::string::npos) << r.out;
    EXPECT_FALSE(slurp(t.file("report.txt")).empty());
    CliRun s = call({"solve", t.file("out.qecnf")});
    EXPECT_NE(s.code, 2);
  }
}

TEST(Cli, ReduceToStdout) {
  CliRun r = call({"reduce", "qsat", data("qsat/true.qdimacs")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.first_line(), "# eqqcsp " EQQCSP_VERSION " reduce qsat");
  EXPECT_NE(r.out.find("\nqecnf "), std::string::npos);
}

TEST(Cli, NormalizePi2) {
  TempDir t;
  std::string f = t.write("f.qecnf", "qecnf 2\nexists 1\nforall 2\nc 1=2\n");
  CliRun r = call({"normalize-pi2", f, "-o", t.file("z.qecnf"), "--check"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("check oracle FALSE qcsp FALSE agree"), std::string::npos) << r.out;
  EXPECT_EQ(call({"solve", t.file("z.qecnf")}).first_line(), "RESULT FALSE");
}

TEST(Cli, NormalizePi2ReportsDisagreement) {
  // exists y forall x (y != x) is false; its image is true, since the
  // existential copy can avoid both universal copies.
  TempDir t;
  std::string f = t.write("f.qecnf", "qecnf 2\nexists 1\nforall 2\nc 1!=2\n");
  CliRun r = call({"normalize-pi2", f, "-o", t.file("z.qecnf"), "--check"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("check oracle FALSE qcsp TRUE DISAGREE"), std::string::npos) << r.out;
}

TEST(Cli, ProofSearchAndVerifyRoundTrip) {
  TempDir t;
  CliRun r = call({"proof-search", data("proofs/false-sigma3.qecnf"), "-o", t.file("p.cert"),
                "--check"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.first_line(), "RESULT FALSE");
  EXPECT_NE(r.out.find("check solver FALSE agree"), std::string::npos);
  EXPECT_NE(r.out.find("within yes"), std::string::npos);

  CliRun v = call({"proof-verify", data("proofs/false-sigma3.qecnf"), t.file("p.cert")});
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_EQ(v.first_line(), "RESULT ACCEPT");

  // A certificate for one sentence does not verify another.
  CliRun w = call({"proof-verify", data("proofs/true-sigma3.qecnf"), t.file("p.cert")});
  EXPECT_EQ(w.code, 1);
  EXPECT_NE(w.out.find("reason "), std::string::npos);

  CliRun tr = call({"proof-search", data("proofs/true-sigma3.qecnf")});
  EXPECT_EQ(tr.code, 0);
  EXPECT_NE(tr.out.find("\nwitness "), std::string::npos);
}

TEST(Cli, TransitivityQueryOnRelationFile) {
  TempDir t;
  std::string rel = data("proofs/trans3.rel");
  CliRun r = call({"proof-search", rel, "--hyp", "1=2", "--hyp", "2=3", "--target", "1=3", "-o",
                t.file("t.cert")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.first_line(), "RESULT PROVED 1=3");
  EXPECT_EQ(call({"proof-verify", rel, t.file("t.cert"), "--hyp", "1=2", "--hyp", "2=3",
                  "--target", "1=3"})
                .code,
            0);
  CliRun rej = call({"proof-verify", rel, t.file("t.cert"), "--hyp", "1=2", "--target", "1=3"});
  EXPECT_EQ(rej.code, 1);
  EXPECT_NE(rej.out.find("is not a hypothesis"), std::string::npos);
  EXPECT_EQ(call({"proof-search", rel, "--hyp", "1=1"}).code, 2);
}

TEST(Cli, MalformedCertificate) {
  TempDir t;
  CliRun r = call({"proof-verify", data("proofs/false-sigma3.qecnf"),
                t.write("bad.cert", "(kproof contradiction\n  (step (eq 1 2)\n")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line "), std::string::npos);
}
