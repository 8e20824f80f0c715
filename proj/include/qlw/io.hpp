#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlw/common.hpp"
#include "qlw/effects.hpp"
#include "qlw/measurement.hpp"
#include "qlw/ortholattice.hpp"
#include "qlw/semantics.hpp"
#include "qlw/subspace.hpp"

namespace qlw {

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(message) {}
};

using json = nlohmann::json;

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("\"" + path + "\" is not valid JSON: " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Lattice files: {"name": str, "elements": [str], "leq": [[str, str]],
// "ortho": {str: str}}. The leq pairs generate the order (reflexive-
// transitive closure is computed on load); saving emits the covering pairs.

inline OrthoLattice lattice_from_json(const json& j) {
  if (!j.is_object()) throw IoError("lattice file must be a JSON object");
  for (const char* key : {"elements", "leq", "ortho"})
    if (!j.contains(key))
      throw IoError(std::string("lattice file is missing \"") + key + "\"");
  std::string name = j.value("name", "");
  std::vector<std::string> elements;
  for (const auto& e : j.at("elements")) elements.push_back(e.get<std::string>());
  std::vector<std::pair<std::string, std::string>> leq;
  for (const auto& p : j.at("leq")) {
    if (!p.is_array() || p.size() != 2)
      throw IoError("every \"leq\" entry must be a [lower, upper] pair");
    leq.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  std::map<std::string, std::string> ortho;
  for (const auto& [k, v] : j.at("ortho").items()) ortho[k] = v.get<std::string>();
  return OrthoLattice::build(name, elements, leq, ortho);
}

inline OrthoLattice load_lattice(const std::string& path) {
  return lattice_from_json(load_json_file(path));
}

inline json lattice_to_json(const OrthoLattice& lattice) {
  json j;
  j["name"] = lattice.name();
  json elements = json::array();
  for (std::size_t i = 0; i < lattice.size(); ++i) elements.push_back(lattice.label(i));
  j["elements"] = std::move(elements);
  json leq = json::array();
  for (std::size_t a = 0; a < lattice.size(); ++a)
    for (std::size_t b = 0; b < lattice.size(); ++b) {
      if (a == b || !lattice.leq(a, b)) continue;
      bool covering = true;  // no c strictly between a and b
      for (std::size_t c = 0; c < lattice.size() && covering; ++c)
        covering = c == a || c == b || !(lattice.leq(a, c) && lattice.leq(c, b));
      if (covering) leq.push_back({lattice.label(a), lattice.label(b)});
    }
  j["leq"] = std::move(leq);
  json ortho = json::object();
  for (std::size_t i = 0; i < lattice.size(); ++i)
    ortho[lattice.label(i)] = lattice.label(lattice.ortho(i));
  j["ortho"] = std::move(ortho);
  return j;
}

// ---------------------------------------------------------------------------
// Complex vectors and matrices: entries as [re, im], matrices as row-major
// nested arrays. Subspaces: {"d": int, "basis": [vector, ...]}.

inline json complex_to_json(const std::complex<double>& z) {
  return json::array({z.real(), z.imag()});
}

inline std::complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError("complex entries must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json vector_to_json(const Eigen::VectorXcd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(complex_to_json(v[i]));
  return j;
}

inline Eigen::VectorXcd vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw IoError("vector must be a non-empty array");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw IoError("matrix must be a non-empty array");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw IoError("matrix rows have unequal lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

inline json subspace_to_json(const Subspace& s) {
  json j;
  j["d"] = s.ambient_dim();
  json basis = json::array();
  for (Eigen::Index c = 0; c < s.basis().cols(); ++c)
    basis.push_back(vector_to_json(s.basis().col(c)));
  j["basis"] = std::move(basis);
  return j;
}

inline Subspace subspace_from_json(const json& j, int max_dim = kDefaultDimCap) {
  if (!j.is_object() || !j.contains("d") || !j.contains("basis"))
    throw IoError("subspace must be {\"d\": int, \"basis\": [...]}");
  const int d = j.at("d").get<int>();
  std::vector<Eigen::VectorXcd> vectors;
  for (const auto& col : j.at("basis")) vectors.push_back(vector_from_json(col));
  return Subspace::span(d, vectors, max_dim);
}

inline Subspace load_subspace(const std::string& path, int max_dim = kDefaultDimCap) {
  return subspace_from_json(load_json_file(path), max_dim);
}

// ---------------------------------------------------------------------------
// Effects and POVMs reuse the matrix encoding, with outcome labels.

inline json effect_to_json(const Effect& e) {
  json j;
  j["d"] = e.dim();
  j["matrix"] = matrix_to_json(e.matrix());
  return j;
}

inline Effect effect_from_json(const json& j, double tol = kDefaultTol) {
  if (!j.is_object() || !j.contains("matrix"))
    throw IoError("effect must be {\"d\": int, \"matrix\": [...]}");
  Eigen::MatrixXcd m = matrix_from_json(j.at("matrix"));
  if (j.contains("d") && j.at("d").get<Eigen::Index>() != m.rows())
    throw IoError("effect \"d\" does not match the matrix size");
  return Effect::make(m, tol);
}

inline json povm_to_json(const Povm& p) {
  json j;
  j["d"] = p.dim();
  json outcomes = json::array();
  for (const auto& o : p.outcomes())
    outcomes.push_back({{"label", o.label}, {"matrix", matrix_to_json(o.effect.matrix())}});
  j["outcomes"] = std::move(outcomes);
  return j;
}

inline Povm povm_from_json(const json& j, double tol = kDefaultTol) {
  if (!j.is_object() || !j.contains("outcomes"))
    throw IoError("POVM must be {\"d\": int, \"outcomes\": [...]}");
  std::vector<PovmOutcome> outcomes;
  for (const auto& o : j.at("outcomes"))
    outcomes.push_back(PovmOutcome{o.value("label", ""),
                                   Effect::make(matrix_from_json(o.at("matrix")), tol)});
  return Povm::make(std::move(outcomes), tol);
}

// ---------------------------------------------------------------------------
// Measurement records: {"d": int, "initial": vector,
// "steps": [{"label", "outcome", "probability"}], "final": vector}.
// Subspaces are embedded per step so records replay standalone.

inline json record_to_json(const MeasurementRecord& record) {
  json j;
  j["d"] = record.initial.dim();
  j["initial"] = vector_to_json(record.initial.vector);
  json steps = json::array();
  for (const auto& step : record.steps)
    steps.push_back({{"label", step.label},
                     {"subspace", subspace_to_json(step.subspace)},
                     {"outcome", outcome_name(step.outcome)},
                     {"probability", step.probability}});
  j["steps"] = std::move(steps);
  j["final"] = vector_to_json(record.final_state.vector);
  return j;
}

inline MeasurementRecord record_from_json(const json& j, double tol = kDefaultTol) {
  if (!j.is_object() || !j.contains("initial") || !j.contains("steps") ||
      !j.contains("final"))
    throw IoError("record must contain \"initial\", \"steps\" and \"final\"");
  MeasurementRecord record{PureState::make(vector_from_json(j.at("initial")), tol),
                           {},
                           PureState::make(vector_from_json(j.at("final")), tol)};
  for (const auto& s : j.at("steps")) {
    std::string outcome = s.at("outcome").get<std::string>();
    if (outcome != "pass" && outcome != "fail")
      throw IoError("step outcome must be \"pass\" or \"fail\"");
    record.steps.push_back(TestStep{s.value("label", ""),
                                    subspace_from_json(s.at("subspace")),
                                    outcome == "pass" ? Outcome::Pass : Outcome::Fail,
                                    s.at("probability").get<double>()});
  }
  return record;
}

// ---------------------------------------------------------------------------
// Law catalogue: [{"name": str, "formula": str, "expected": classification}].

struct CatalogueEntry {
  std::string name;
  std::string formula;
  LawClass expected;
};

inline LawClass law_class_from_string(const std::string& s) {
  if (s == "quantum_valid") return LawClass::QuantumValid;
  if (s == "classical_only") return LawClass::ClassicalOnly;
  if (s == "invalid_everywhere") return LawClass::InvalidEverywhere;
  throw IoError("unknown law classification \"" + s + "\"");
}

inline std::vector<CatalogueEntry> catalogue_from_json(const json& j) {
  if (!j.is_array()) throw IoError("law catalogue must be a JSON array");
  std::vector<CatalogueEntry> entries;
  for (const auto& e : j) {
    entries.push_back(CatalogueEntry{e.at("name").get<std::string>(),
                                     e.at("formula").get<std::string>(),
                                     law_class_from_string(e.at("expected").get<std::string>())});
  }
  return entries;
}

inline std::vector<CatalogueEntry> load_catalogue(const std::string& path) {
  return catalogue_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// Formula ASTs, for machine-readable parser output.

inline json formula_to_json(const Formula& f) {
  switch (f.kind()) {
    case Connective::Elementary: return {{"kind", "elementary"}, {"name", f.name()}};
    case Connective::Top: return {{"kind", "top"}};
    case Connective::Bottom: return {{"kind", "bottom"}};
    case Connective::Not: return {{"kind", "not"}, {"child", formula_to_json(*f.left())}};
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
    case Connective::Seq: {
      const char* kind = f.kind() == Connective::And       ? "and"
                         : f.kind() == Connective::Or      ? "or"
                         : f.kind() == Connective::Implies ? "implies"
                                                           : "seq";
      return {{"kind", kind},
              {"left", formula_to_json(*f.left())},
              {"right", formula_to_json(*f.right())}};
    }
  }
  throw IoError("unreachable formula kind");
}

}  // namespace qlw
