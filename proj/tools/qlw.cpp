// qlw: command-line workbench for orthomodular propositional logic.
//
// Exit codes: 0 affirmative verdict, 1 negative verdict (with witness where
// one exists), 2 input or usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlw/effects.hpp"
#include "qlw/formula.hpp"
#include "qlw/io.hpp"
#include "qlw/measurement.hpp"
#include "qlw/ortholattice.hpp"
#include "qlw/semantics.hpp"
#include "qlw/subspace.hpp"

namespace {

// Input problems that must map to exit code 2 (as opposed to negative
// verdicts, which are exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& all_law_names() {
  static const std::vector<std::string> names = {"orthomodular", "distributive",
                                                 "modular", "atomic", "covering"};
  return names;
}

qlw::Law law_by_name(const std::string& name) {
  if (name == "orthomodular") return qlw::Law::Orthomodular;
  if (name == "distributive") return qlw::Law::Distributive;
  if (name == "modular") return qlw::Law::Modular;
  if (name == "atomic") return qlw::Law::Atomic;
  if (name == "covering") return qlw::Law::Covering;
  throw UsageError("unknown law \"" + name + "\"");
}

qlw::ModelFamily family_by_name(const std::string& name) {
  if (name == "default") return qlw::default_family();
  if (name == "boolean") return qlw::boolean_family();
  if (name == "oml") return qlw::oml_family();
  if (name == "atomic") return qlw::atomic_family();
  throw UsageError("unknown model family \"" + name + "\"");
}

std::vector<double> parse_csv_numbers(const std::string& text, std::size_t expect,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(what + ": \"" + item + "\" is not a number");
    }
  }
  if (expect != 0 && out.size() != expect)
    throw UsageError(what + ": expected " + std::to_string(expect) +
                     " comma-separated numbers, got " + std::to_string(out.size()));
  return out;
}

bool is_named_ray(const std::string& token) {
  return token == "z+" || token == "z-" || token == "x+" || token == "x-" ||
         token == "y+" || token == "y-";
}

qlw::PureState parse_state(const std::string& spec, double tol) {
  if (is_named_ray(spec)) return qlw::named_state(spec);
  qlw::json j = qlw::load_json_file(spec);
  if (j.is_object() && j.contains("vector")) j = j.at("vector");
  return qlw::PureState::make(qlw::vector_from_json(j), tol);
}

std::vector<std::pair<std::string, qlw::Subspace>> parse_tests(
    const std::string& csv, Eigen::Index dim, double tol) {
  std::vector<std::pair<std::string, qlw::Subspace>> tests;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw UsageError("empty test token in --tests");
    qlw::Subspace s = is_named_ray(token)
                          ? qlw::Subspace::span(2, {qlw::qubit_ray(token)})
                          : qlw::load_subspace(token);
    if (s.ambient_dim() != dim)
      throw UsageError("test \"" + token + "\" lives in dimension " +
                       std::to_string(s.ambient_dim()) + ", the state in " +
                       std::to_string(dim));
    tests.emplace_back(token, std::move(s));
    (void)tol;
  }
  if (tests.empty()) throw UsageError("--tests must name at least one test");
  return tests;
}

void print_tree(const qlw::Formula& f, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (f.kind()) {
    case qlw::Connective::Elementary:
      std::cout << pad << "elementary " << f.name() << "\n";
      return;
    case qlw::Connective::Top: std::cout << pad << "top\n"; return;
    case qlw::Connective::Bottom: std::cout << pad << "bottom\n"; return;
    case qlw::Connective::Not: std::cout << pad << "not\n"; break;
    case qlw::Connective::And: std::cout << pad << "and\n"; break;
    case qlw::Connective::Or: std::cout << pad << "or\n"; break;
    case qlw::Connective::Implies: std::cout << pad << "implies\n"; break;
    case qlw::Connective::Seq: std::cout << pad << "seq\n"; break;
  }
  if (f.left()) print_tree(*f.left(), depth + 1);
  if (f.right()) print_tree(*f.right(), depth + 1);
}

qlw::json validity_to_json(const qlw::ValidityReport& r) {
  qlw::json j;
  j["formula"] = r.formula;
  j["family"] = r.family;
  j["status"] = qlw::validity_name(r.status);
  if (r.countermodel)
    j["countermodel"] = {{"model", r.countermodel->model},
                         {"assignment", r.countermodel->assignment}};
  else
    j["countermodel"] = nullptr;
  j["models_scanned"] = r.models_scanned;
  j["valuations_scanned"] = r.valuations_scanned;
  return j;
}

void print_validity_text(const qlw::ValidityReport& r) {
  std::cout << "formula: " << r.formula << "\n";
  std::cout << "family: " << r.family << "\n";
  std::cout << "status: " << qlw::validity_name(r.status) << "\n";
  if (r.countermodel) {
    std::cout << "countermodel: " << r.countermodel->model << " with";
    for (const auto& [ident, label] : r.countermodel->assignment)
      std::cout << " " << ident << " -> " << label;
    std::cout << "\n";
  }
  std::cout << "scanned: " << r.models_scanned << " models, " << r.valuations_scanned
            << " valuations\n";
}

int cmd_parse(const std::string& text, bool json_out) {
  qlw::FormulaPtr f = qlw::parse(text);
  auto idents = qlw::elementaries(*f);
  if (json_out) {
    qlw::json j;
    j["formula"] = qlw::render(*f);
    j["elementaries"] = idents;
    j["ast"] = qlw::formula_to_json(*f);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "formula: " << qlw::render(*f) << "\n";
    std::cout << "elementaries:";
    for (const auto& ident : idents) std::cout << " " << ident;
    std::cout << "\n";
    print_tree(*f, 0);
  }
  return 0;
}

int cmd_check(const std::string& text, const std::string& family_name,
              std::uint64_t budget, bool json_out) {
  qlw::FormulaPtr f = qlw::parse(text);
  qlw::ValidityReport report = qlw::find_countermodel(*f, family_by_name(family_name), budget);
  if (json_out)
    std::cout << validity_to_json(report).dump(2) << "\n";
  else
    print_validity_text(report);
  return report.valid() ? 0 : 1;
}

int cmd_classify(const std::string& text, std::uint64_t budget, bool json_out) {
  qlw::FormulaPtr f = qlw::parse(text);
  qlw::ClassificationReport report = qlw::classify_law_report(*f, budget);
  if (json_out) {
    qlw::json j;
    j["formula"] = qlw::render(*f);
    j["classification"] = qlw::law_class_name(report.verdict);
    j["quantum"] = validity_to_json(report.quantum);
    j["classical"] =
        report.classical ? validity_to_json(*report.classical) : qlw::json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "formula: " << qlw::render(*f) << "\n";
    std::cout << "classification: " << qlw::law_class_name(report.verdict) << "\n";
    if (report.quantum.countermodel) {
      const auto& cm = *report.quantum.countermodel;
      std::cout << "countermodel: " << cm.model << " with";
      for (const auto& [ident, label] : cm.assignment)
        std::cout << " " << ident << " -> " << label;
      std::cout << "\n";
    }
  }
  return report.verdict == qlw::LawClass::QuantumValid ? 0 : 1;
}

int cmd_lattice(const std::string& path, std::vector<std::string> law_names,
                bool json_out) {
  qlw::OrthoLattice lattice = qlw::load_lattice(path);
  if (law_names.empty()) law_names = all_law_names();
  bool all_hold = true;
  qlw::json laws = qlw::json::array();
  for (const auto& name : law_names) {
    qlw::LawVerdict verdict = qlw::check_law(lattice, law_by_name(name));
    all_hold = all_hold && verdict.holds;
    if (json_out) {
      laws.push_back({{"law", name},
                      {"holds", verdict.holds},
                      {"witness", verdict.holds ? qlw::json(nullptr)
                                                : qlw::json(verdict.witness)}});
    } else {
      std::cout << name << ": " << (verdict.holds ? "HOLDS" : "FAILS");
      if (!verdict.holds) {
        std::cout << " witness (";
        for (std::size_t i = 0; i < verdict.witness.size(); ++i)
          std::cout << (i ? ", " : "") << verdict.witness[i];
        std::cout << ")";
      }
      std::cout << "\n";
    }
  }
  if (json_out) {
    qlw::json j;
    j["name"] = lattice.name();
    j["size"] = lattice.size();
    j["laws"] = std::move(laws);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "lattice " << lattice.name() << " (" << lattice.size()
              << " elements): " << (all_hold ? "all requested laws hold" : "failures above")
              << "\n";
  }
  return all_hold ? 0 : 1;
}

int cmd_simulate(const std::string& state_spec, const std::string& tests_csv,
                 const std::string& policy_name, std::uint64_t seed, bool seed_given,
                 const std::string& out_path, double tol, bool json_out) {
  qlw::PureState state = parse_state(state_spec, tol);
  auto tests = parse_tests(tests_csv, state.dim(), tol);
  qlw::Policy policy;
  if (policy_name == "all_pass") policy = qlw::Policy::AllPass;
  else if (policy_name == "sample") policy = qlw::Policy::Sample;
  else throw UsageError("unknown policy \"" + policy_name + "\"");
  if (policy == qlw::Policy::Sample && !seed_given)
    throw UsageError("--policy sample requires --seed");

  qlw::MeasurementRecord record;
  try {
    record = qlw::run_sequence(state, tests, policy, seed, tol);
  } catch (const qlw::MeasurementError& e) {
    std::cerr << "impossible branch: " << e.what() << "\n";
    return 1;
  }
  record.validate(tol);

  if (!out_path.empty()) qlw::save_json_file(out_path, qlw::record_to_json(record));
  if (json_out) {
    std::cout << qlw::record_to_json(record).dump(2) << "\n";
  } else {
    std::cout << "initial: " << state_spec << " (d=" << state.dim() << ")\n";
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
      const auto& step = record.steps[i];
      std::cout << "step " << i << ": test " << step.label << " outcome "
                << qlw::outcome_name(step.outcome) << " probability "
                << step.probability << "\n";
    }
    std::cout << "final:";
    for (Eigen::Index i = 0; i < record.final_state.vector.size(); ++i)
      std::cout << " " << record.final_state.vector[i];
    std::cout << "\n";
  }
  return 0;
}

int cmd_coexist(const std::string& a_csv, const std::string& b_csv, double tol,
                bool json_out) {
  std::vector<double> av = parse_csv_numbers(a_csv, 3, "--a");
  std::vector<double> bv = parse_csv_numbers(b_csv, 3, "--b");
  Eigen::Vector3d a(av[0], av[1], av[2]);
  Eigen::Vector3d b(bv[0], bv[1], bv[2]);
  qlw::QubitEffect e1 = qlw::unsharp_qubit(a, 1.0, tol);
  qlw::QubitEffect e2 = qlw::unsharp_qubit(b, 1.0, tol);
  qlw::CoexistenceVerdict verdict = qlw::coexistent(e1, e2, tol);

  if (json_out) {
    qlw::json j;
    j["a"] = av;
    j["b"] = bv;
    j["sum_norm"] = verdict.sum_norm;
    j["coexistent"] = verdict.coexistent;
    if (verdict.certificate) {
      qlw::json outcomes = qlw::json::array();
      for (std::size_t i = 0; i < verdict.certificate->outcomes.size(); ++i) {
        const auto [mu, nu] = verdict.certificate->signs[i];
        outcomes.push_back(
            {{"mu", mu},
             {"nu", nu},
             {"matrix", qlw::matrix_to_json(verdict.certificate->outcomes[i].matrix())}});
      }
      j["certificate"] = {{"c", verdict.certificate->c}, {"outcomes", std::move(outcomes)}};
    } else {
      j["certificate"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "|a+b| + |a-b| = " << verdict.sum_norm << (verdict.coexistent ? " <= 2" : " > 2")
              << "\n";
    std::cout << "verdict: " << (verdict.coexistent ? "COEXISTENT" : "NOT COEXISTENT") << "\n";
    if (verdict.certificate)
      std::cout << "joint POVM certificate with c = " << verdict.certificate->c << "\n";
  }
  return verdict.coexistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlw: orthomodular-logic workbench"};
  app.require_subcommand(1);

  bool json_out = false;
  double tol = qlw::kDefaultTol;
  if (const char* env = std::getenv("QLW_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || v <= 0) {
      std::cerr << "error: QLW_TOL=\"" << env << "\" is not a positive number\n";
      return 2;
    }
    tol = v;
  }
  std::uint64_t seed = 0;
  std::uint64_t budget = qlw::kDefaultValuationBudget;
  std::string family = "default";

  app.add_flag("--json", json_out, "emit JSON instead of text");
  app.add_option("--tol", tol, "numeric comparison tolerance (default 1e-9; env QLW_TOL)");
  app.add_option("--seed", seed, "random seed for sampling");
  app.add_option("--budget", budget, "valuation budget for countermodel search");
  app.add_option("--family", family, "model family for validity scans")
      ->check(CLI::IsMember({"default", "boolean", "oml", "atomic"}));

  std::string formula_text, lattice_path, state_spec, tests_csv, a_csv, b_csv;
  std::string policy = "all_pass", out_path;
  std::vector<std::string> law_names;

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse a formula and dump its tree");
  parse_cmd->add_option("formula", formula_text, "formula text")->required();
  parse_cmd->fallthrough();

  CLI::App* check_cmd =
      app.add_subcommand("check", "search the model family for a countermodel");
  check_cmd->add_option("formula", formula_text, "formula text")->required();
  check_cmd->fallthrough();

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "quantum_valid | classical_only | invalid_everywhere");
  classify_cmd->add_option("formula", formula_text, "formula text")->required();
  classify_cmd->fallthrough();

  CLI::App* lattice_cmd = app.add_subcommand("lattice", "check lattice laws on a JSON file");
  lattice_cmd->add_option("path", lattice_path, "lattice JSON file")->required();
  lattice_cmd->add_option("--law", law_names, "law to check (repeatable; default: all)")
      ->check(CLI::IsMember(all_law_names()));
  lattice_cmd->fallthrough();

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "run a projective test sequence with state update");
  simulate_cmd->add_option("--state", state_spec, "initial state: z+|z-|x+|x-|y+|y- or vector JSON path")
      ->required();
  simulate_cmd->add_option("--tests", tests_csv,
                           "comma-separated tests: named rays or subspace JSON paths")
      ->required();
  simulate_cmd->add_option("--policy", policy, "all_pass | sample")
      ->check(CLI::IsMember({"all_pass", "sample"}));
  simulate_cmd->add_option("--out", out_path, "write the record JSON to this path");
  simulate_cmd->fallthrough();

  CLI::App* coexist_cmd =
      app.add_subcommand("coexist", "Busch coexistence test for unbiased qubit effects");
  coexist_cmd->add_option("--a", a_csv, "Bloch vector of the first effect, e.g. 0.5,0,0")
      ->required();
  coexist_cmd->add_option("--b", b_csv, "Bloch vector of the second effect")->required();
  coexist_cmd->fallthrough();

  int rc = 0;
  parse_cmd->callback([&] { rc = cmd_parse(formula_text, json_out); });
  check_cmd->callback([&] { rc = cmd_check(formula_text, family, budget, json_out); });
  classify_cmd->callback([&] { rc = cmd_classify(formula_text, budget, json_out); });
  lattice_cmd->callback([&] { rc = cmd_lattice(lattice_path, law_names, json_out); });
  simulate_cmd->callback([&] {
    rc = cmd_simulate(state_spec, tests_csv, policy, seed, app.count("--seed") > 0,
                      out_path, tol, json_out);
  });
  coexist_cmd->callback([&] { rc = cmd_coexist(a_csv, b_csv, tol, json_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qlw::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const qlw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
