// Behavioral contract tests for the qlw binary: text output shapes, the
// 0/1/2 exit-code contract across every subcommand, flag and environment
// handling, record export, and the law-catalogue regression. Golden-file
// byte comparisons live in the acceptance suite.
//
//   qlw_cli_contract <path-to-qlw> <golden-dir> <data-dir>

#include <cstdio>
#include <string>
#include <vector>

#include "qlw/io.hpp"
#include "proc.hpp"

using namespace qlw;

namespace {

std::string g_qlw, g_golden, g_data;
int g_failures = 0;
int g_checks = 0;

void check(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::printf("FAIL: %s\n", what.c_str());
  }
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

proc::Result qlw_run(const std::string& args, const std::string& env = "") {
  return proc::run(env.empty() ? g_qlw + " " + args : env + " " + g_qlw + " " + args);
}

void check_exit(const std::string& args, int code, const std::string& env = "") {
  proc::Result r = qlw_run(args, env);
  check(r.code == code, args + " exited " + std::to_string(r.code) + ", want " +
                            std::to_string(code) +
                            (r.err.empty() ? "" : " [stderr: " + r.err + "]"));
}

// --------------------------------------------------------------------------

void test_parse() {
  proc::Result ok = qlw_run("parse 'A & ~B'");
  check(ok.code == 0, "parse exit");
  check(contains(ok.out, "formula: A & ~B"), "parse echoes the formula");
  check(contains(ok.out, "elementaries: A B"), "parse lists elementaries");
  check(contains(ok.out, "  elementary A"), "parse prints the tree");

  proc::Result err = qlw_run("parse 'A & & B'");
  check(err.code == 2, "syntax error exit");
  check(contains(err.err, "syntax error at 4"), "positioned syntax message");
  check(err.out.empty(), "no stdout on parse failure");

  check_exit("parse ''", 2);
  check_exit("parse '((A)'", 2);
  check_exit("parse 'A &> B' --json", 0);
}

void test_check() {
  proc::Result valid = qlw_run("check 'A -> A'");
  check(valid.code == 0, "valid exit");
  check(contains(valid.out, "status: valid"), "valid text verdict");

  proc::Result invalid = qlw_run("check '(A & (B | C)) -> ((A & B) | (A & C))'");
  check(invalid.code == 1, "countermodel exit");
  check(contains(invalid.out, "countermodel: MO(2) with A -> a B -> b C -> b'"),
        "countermodel text");

  check_exit("check '(A & (B | C)) -> ((A & B) | (A & C))' --family boolean", 0);
  check_exit("check 'A -> A' --family oml", 0);
  check_exit("check 'A -> A' --family atomic", 0);
  check_exit("check 'A &> B'", 2);
  check_exit("check 'A -> A' --family martian", 2);

  // Budget exhaustion is a negative verdict, never a silent pass.
  proc::Result budget = qlw_run("check 'A -> A' --budget 3 --json");
  check(budget.code == 1, "inconclusive exit");
  json j = json::parse(budget.out);
  check(j.at("status") == "inconclusive", "inconclusive status");
  check(j.at("valuations_scanned") == 3, "budget respected");
  check(j.at("countermodel").is_null(), "no countermodel fabricated");

  // The oml family omits the Boolean models, so distributivity fails there.
  proc::Result oml = qlw_run("check '(A & (B | C)) -> ((A & B) | (A & C))' --family oml --json");
  check(oml.code == 1, "oml family exit");
  check(json::parse(oml.out).at("countermodel").at("model") == "MO(2)",
        "oml scan finds MO(2) first");
}

void test_classify() {
  proc::Result tnd = qlw_run("classify 'A | ~A'");
  check(tnd.code == 0, "quantum_valid exit");
  check(contains(tnd.out, "classification: quantum_valid"), "quantum_valid text");

  proc::Result dist = qlw_run("classify '(A & (B | C)) -> ((A & B) | (A & C))'");
  check(dist.code == 1, "classical_only exit");
  check(contains(dist.out, "classification: classical_only"), "classical_only text");
  check(contains(dist.out, "countermodel: MO(2)"), "classical_only witness text");

  proc::Result inv = qlw_run("classify 'A -> ~A'");
  check(inv.code == 1, "invalid_everywhere exit");
  check(contains(inv.out, "classification: invalid_everywhere"), "invalid text");
  check(contains(inv.out, "countermodel: boolean(1) with A -> 1"),
        "classical countermodel text");

  check_exit("classify 'A -> '", 2);

  // Every catalogue entry classifies as recorded.
  for (const CatalogueEntry& entry : load_catalogue(g_data + "/law_catalogue.json")) {
    proc::Result r = qlw_run("classify '" + entry.formula + "' --json");
    const int want = entry.expected == LawClass::QuantumValid ? 0 : 1;
    check(r.code == want, entry.name + " exit code");
    json j = json::parse(r.out);
    check(j.at("classification") == law_class_name(entry.expected),
          entry.name + " classification");
  }
}

void test_lattice() {
  proc::Result all = qlw_run("lattice " + g_data + "/mo2.json");
  check(all.code == 1, "all-laws exit on MO(2)");
  check(contains(all.out, "orthomodular: HOLDS"), "orthomodular verdict line");
  check(contains(all.out, "distributive: FAILS witness (a, b, b')"),
        "distributive witness line");

  proc::Result json_all = qlw_run("lattice " + g_data + "/mo2.json --json");
  json j = json::parse(json_all.out);
  check(j.at("name") == "MO(2)" && j.at("size") == 6, "lattice metadata");
  check(j.at("laws").size() == 5, "five default laws");
  check(j.at("laws")[0].at("law") == "orthomodular" &&
            j.at("laws")[0].at("holds") == true,
        "law order and verdict");
  check(j.at("laws")[1].at("witness") == json::array({"a", "b", "b'"}),
        "distributive witness JSON");

  check_exit("lattice " + g_data + "/mo2.json --law orthomodular --law atomic", 0);

  proc::Result o6 = qlw_run("lattice " + g_data + "/o6.json --law orthomodular");
  check(o6.code == 1, "o6 exit");
  check(contains(o6.out, "orthomodular: FAILS witness (a, b)"), "o6 witness line");

  proc::Result broken = qlw_run("lattice " + g_data + "/broken.json");
  check(broken.code == 2, "broken lattice exit");
  check(contains(broken.err, "ortho not involutive"), "broken lattice names invariant");

  check_exit("lattice " + g_data + "/no_such.json", 2);
  check_exit("lattice " + g_data + "/mo2.json --law sorcery", 2);
}

void test_simulate() {
  proc::Result zxz = qlw_run("simulate --state z+ --tests z+,x+,z+");
  check(zxz.code == 0, "all-pass exit");
  check(contains(zxz.out, "step 0: test z+ outcome pass probability 1"), "step 0 line");
  check(contains(zxz.out, "step 1: test x+ outcome pass probability 0.5"), "step 1 line");
  check(contains(zxz.out, "step 2: test z+ outcome pass probability 0.5"), "step 2 line");
  check(contains(zxz.out, "final: (1,0) (0,0)"), "final state line");

  check_exit("simulate --state z+ --tests z+,z+", 0);

  proc::Result blocked = qlw_run("simulate --state z+ --tests z- --policy all_pass");
  check(blocked.code == 1, "impossible branch exit");
  check(contains(blocked.err, "step 0"), "impossible branch names the step");
  check(contains(blocked.err, "impossible"), "impossible branch says why");

  // Exported records replay standalone through the library.
  const std::string out_path = "/tmp/qlw_contract_record.json";
  proc::Result exported =
      qlw_run("simulate --state z+ --tests z+,x+,z+ --json --out " + out_path);
  check(exported.code == 0, "export exit");
  check(exported.out == proc::read_file(out_path) ,
        "--out file matches --json stdout");
  MeasurementRecord record = record_from_json(load_json_file(out_path));
  try {
    record.validate();
    check(true, "record validates");
  } catch (const std::exception& e) {
    check(false, std::string("exported record fails validation: ") + e.what());
  }
  std::remove(out_path.c_str());

  // Sampling requires a seed and is reproducible for a fixed one.
  check_exit("simulate --state z+ --tests x+ --policy sample", 2);
  proc::Result s1 = qlw_run("simulate --state y+ --tests x+,z+,x+ --policy sample --seed 5 --json");
  proc::Result s2 = qlw_run("simulate --state y+ --tests x+,z+,x+ --policy sample --seed 5 --json");
  check(s1.code == 0, "sampled run exit");
  check(s1.out == s2.out, "sampled runs with one seed are byte-identical");
  MeasurementRecord sampled = record_from_json(json::parse(s1.out));
  try {
    sampled.validate();
    check(true, "sampled record validates");
  } catch (const std::exception& e) {
    check(false, std::string("sampled record fails validation: ") + e.what());
  }

  check_exit("simulate --state q+ --tests z+", 2);
  check_exit("simulate --state z+ --tests h7", 2);

  // A state file and a subspace file instead of named rays.
  const std::string state_path = "/tmp/qlw_contract_state.json";
  const std::string sub_path = "/tmp/qlw_contract_sub.json";
  save_json_file(state_path, vector_to_json(qubit_ray("x+")));
  save_json_file(sub_path, subspace_to_json(Subspace::span(2, {qubit_ray("x+")})));
  proc::Result filed = qlw_run("simulate --state " + state_path + " --tests " + sub_path);
  check(filed.code == 0, "file-based state and test");
  check(contains(filed.out, "probability 1"), "eigenstate passes its own test");
  std::remove(state_path.c_str());
  std::remove(sub_path.c_str());
}

void test_coexist() {
  proc::Result yes = qlw_run("coexist --a 0.5,0,0 --b 0,0.5,0");
  check(yes.code == 0, "coexistent exit");
  check(contains(yes.out, "1.41421") && contains(yes.out, "<= 2"), "inequality line");
  check(contains(yes.out, "verdict: COEXISTENT"), "coexistent verdict line");
  check(contains(yes.out, "joint POVM certificate"), "certificate line");

  proc::Result no = qlw_run("coexist --a 1,0,0 --b 0,1,0");
  check(no.code == 1, "non-coexistent exit");
  check(contains(no.out, "2.82843") && contains(no.out, "> 2"), "violation line");
  check(contains(no.out, "verdict: NOT COEXISTENT"), "negative verdict line");

  check_exit("coexist --a 1.5,0,0 --b 0,1,0", 2);
  check_exit("coexist --a 1,0 --b 0,1,0", 2);
  check_exit("coexist --a 1,0,zebra --b 0,1,0", 2);

  // Tolerance plumbing: --tol and QLW_TOL relax the verdict; the flag wins.
  check_exit("coexist --a 1,0,0 --b 0,1,0 --tol 1.0", 0);
  check_exit("coexist --a 1,0,0 --b 0,1,0", 0, "QLW_TOL=1.0");
  check_exit("coexist --a 1,0,0 --b 0,1,0 --tol 1e-9", 1, "QLW_TOL=1.0");
  check_exit("check 'A -> A'", 2, "QLW_TOL=abc");

  // JSON certificate margins sum to the identity.
  proc::Result cert = qlw_run("coexist --a 0.3,0.1,0 --b 0,0.2,0.4 --json");
  check(cert.code == 0, "generic coexistent pair exit");
  json j = json::parse(cert.out);
  check(j.at("coexistent") == true, "coexistent JSON flag");
  check(j.at("certificate").at("outcomes").size() == 4, "four joint outcomes");
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(2, 2);
  for (const auto& o : j.at("certificate").at("outcomes"))
    sum += matrix_from_json(o.at("matrix"));
  check((sum - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9,
        "certificate outcomes sum to identity");
}

void test_global_flags() {
  check_exit("--help", 0);
  check_exit("", 2);
  check_exit("frobnicate", 2);
  check_exit("check", 2);             // missing formula
  check_exit("check 'A' --larks 3", 2);

  // JSON mode is machine-stable: identical invocations, identical bytes.
  for (const std::string& args :
       {std::string("classify 'A | ~A' --json"),
        std::string("lattice ") + g_data + "/mo2.json --json",
        std::string("coexist --a 0.5,0,0 --b 0,0.5,0 --json")}) {
    proc::Result r1 = qlw_run(args);
    proc::Result r2 = qlw_run(args);
    check(r1.out == r2.out && !r1.out.empty(), "determinism: " + args);
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <path-to-qlw> <golden-dir> <data-dir>\n", argv[0]);
    return 2;
  }
  g_qlw = argv[1];
  g_golden = argv[2];
  g_data = argv[3];

  test_parse();
  test_check();
  test_classify();
  test_lattice();
  test_simulate();
  test_coexist();
  test_global_flags();

  std::printf("%d checks, %d failures\n", g_checks, g_failures);
  return g_failures == 0 ? 0 : 1;
}
