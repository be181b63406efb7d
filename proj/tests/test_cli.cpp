// End-to-end tests driving the spcalc binary. The build passes its path
// in via SPCALC_BIN.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(SPCALC_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/spcalc_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("prove verdicts and exit codes") {
  RunResult d = run("prove --logic rc1 \"<><>p |- <>p\"");
  CHECK(d.status == 0);
  CHECK(starts_with(d.output, "DERIVABLE\n"));
  CHECK(d.output.find("trans [0] :: <><>p |- <>p") != std::string::npos);

  RunResult u = run("prove --logic qrc1 \"A x0. <>P(x0) |- <> A x0. P(x0)\"");
  CHECK(u.status == 1);
  CHECK(starts_with(u.output, "UNDERIVABLE\n"));
  CHECK(u.output.find("\"worlds\"") != std::string::npos);

  RunResult bad = run("prove --logic rc1 \"p |- q &\"");
  CHECK(bad.status == 64);

  RunResult rcw = run("prove --logic rcw \"<1>p & <0>q |- <1>(p & <0>q)\"");
  CHECK(rcw.status == 0);
}

TEST_CASE("underivable countermodels re-verify through check") {
  std::string model = write_temp("cm.json", "");
  RunResult u = run("prove --logic qrc1 --out " + model +
                    " \"A x0. <>P(x0) |- <> A x0. P(x0)\"");
  REQUIRE(u.status == 1);
  RunResult lhs = run("check --model " + model + " --world 0 \"A x0. <>P(x0)\"");
  CHECK(lhs.status == 0);
  CHECK(starts_with(lhs.output, "TRUE"));
  RunResult rhs =
      run("check --model " + model + " --world 0 \"<> A x0. P(x0)\"");
  CHECK(rhs.status == 1);
  CHECK(starts_with(rhs.output, "FALSE"));
}

TEST_CASE("check with assignments and invariant errors") {
  std::string ok = write_temp(
      "m_ok.json",
      R"({"worlds": 2, "R": [[0,1]], "constant": 2,
          "interp": {"P": {"1": [[0]]}}})");
  CHECK(run("check --model " + ok + " --world 0 \"<>P(x0)\" --assign x0=0")
            .status == 0);
  CHECK(run("check --model " + ok + " --world 0 \"<>P(x0)\" --assign x0=1")
            .status == 1);

  std::string bad = write_temp(
      "m_bad.json",
      R"({"worlds": 3, "R": [[0,1],[1,2],[0,2]], "domains": [2,2,2],
          "eta": {"0,1": [0,1], "1,2": [1,0], "0,2": [0,1]},
          "interp": {"P": {"1": [[0]]}}})");
  RunResult r = run("check --model " + bad + " --world 0 \"P(x0)\"");
  CHECK(r.status == 65);
  CHECK(r.output.find("(v)") != std::string::npos);
}

TEST_CASE("realize styles and missing entries") {
  std::string real = write_temp(
      "r.json",
      R"json({"P": {"formula": "(exists w (eq a0 w))", "class": "Sigma1"}})json");
  RunResult f = run("realize --style finitary --realization " + real +
                    " --theory T \"A x0. P(x0) |- <>P(x0)\"");
  CHECK(f.status == 0);
  CHECK(f.output.find("LHS* (forall y0 (exists w (eq y0 w)))") !=
        std::string::npos);
  CHECK(f.output.find("QPL ") != std::string::npos);
  CHECK(f.output.find("CERT ") != std::string::npos);

  RunResult inf = run("realize --style infinitary --realization " + real +
                      " --theory T \"P(x0) |- T\"");
  CHECK(inf.status == 0);
  CHECK(inf.output.find("RL ") != std::string::npos);

  RunResult miss = run("realize --style finitary --realization " + real +
                       " \"Q(x0) |- T\"");
  CHECK(miss.status == 66);
  CHECK(miss.output.find("Q") != std::string::npos);

  std::string model = write_temp(
      "solovay_base.json",
      R"({"worlds": 1, "R": [], "constant": 1, "interp": {"S": {"0": [[0]]}}})");
  RunResult sol = run("realize --style solovay --model " + model +
                      " --theory T \"<>S(x0) |- T\"");
  CHECK(sol.status == 0);
  CHECK(sol.output.find("(mod y0 1)") != std::string::npos);
}

TEST_CASE("classify, rewrite, depth, interpolate") {
  RunResult c = run("classify \"(forall x (exists y (eq x y)))\"");
  CHECK(c.status == 0);
  CHECK(starts_with(c.output, "Pi2"));

  RunResult rw = run(
      "rewrite \"(forall x (not (F x)))\" --rule R-FORALL-NEG --path []");
  CHECK(rw.status == 0);
  CHECK(rw.output.find("(not (exists x (F x)))") != std::string::npos);

  RunResult rwbad = run(
      "rewrite \"(not (not (exists s (forall t (F s t)))))\" --rule R-DN-DELTA");
  CHECK(rwbad.status == 65);
  CHECK(rwbad.output.find("side condition") != std::string::npos);

  RunResult chain = run(
      "rewrite \"(box (named HA) (not (exists x (forall y (le x y)))))\""
      " --goal \"(box (named PA) (not (exists x (forall y (le x y)))))\"");
  CHECK(chain.status == 0);
  CHECK(chain.output.find("STEP 1:") != std::string::npos);
  CHECK(chain.output.find("justification") != std::string::npos);

  RunResult nc = run("rewrite \"(eq x x)\" --goal \"(eq x (num 1))\" --depth 4");
  CHECK(nc.status == 2);

  RunResult dep = run("depth \"<><>p |- <>p\"");
  CHECK(dep.status == 0);
  CHECK(dep.output.find("d(lhs) = 2") != std::string::npos);
  CHECK(dep.output.find("d(rhs) = 1") != std::string::npos);

  RunResult ip = run("interpolate --logic rc1 \"<><>p |- <>p\"");
  CHECK(ip.status == 0);
  CHECK(ip.output.find("<>p") != std::string::npos);
  CHECK(run("interpolate --logic rc1 \"p |- q\"").status == 1);
}

TEST_CASE("json envelope and determinism") {
  RunResult j = run("--format json prove --logic rc1 \"p & q |- q & p\"");
  CHECK(j.status == 0);
  nlohmann::json parsed = nlohmann::json::parse(j.output);
  CHECK(parsed["verdict"] == "DERIVABLE");
  CHECK(parsed["witness"].is_null());
  CHECK(parsed["trace"].is_string());

  RunResult j2 = run("--format json prove --logic qrc1 \"A x0. <>P(x0) |- <> A x0. P(x0)\"");
  CHECK(j2.status == 1);
  nlohmann::json p2 = nlohmann::json::parse(j2.output);
  CHECK(p2["verdict"] == "UNDERIVABLE");
  CHECK(p2["witness"]["worlds"].is_number());

  // Identical invocations produce byte-identical output.
  for (const char* cmd :
       {"prove --logic qrc1 \"A x0. <>P(x0) |- <> A x0. P(x0)\"",
        "realize --style solovay --model /tmp/spcalc_test_solovay_base.json"
        " \"<>S(x0) |- T\""}) {
    RunResult a = run(cmd), b = run(cmd);
    CHECK(a.output == b.output);
    CHECK(a.status == b.status);
  }
}
