#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qlw/formula.hpp"
#include "qlw/ortholattice.hpp"
#include "qlw/subspace.hpp"

namespace qlw {

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& message) : Error(message) {}
};

// Assignment of lattice elements to elementary identifiers. Top and Bottom
// are fixed to the lattice bounds and need no entry.
struct Valuation {
  const OrthoLattice* model = nullptr;
  std::map<std::string, std::size_t> assignment;
};

namespace detail {

inline std::size_t evaluate_node(const Formula& f, const OrthoLattice& L,
                                 const std::map<std::string, std::size_t>& assignment) {
  switch (f.kind()) {
    case Connective::Elementary: {
      auto it = assignment.find(f.name());
      if (it == assignment.end())
        throw EvalError("unassigned identifier \"" + f.name() + "\"");
      return it->second;
    }
    case Connective::Top: return L.top();
    case Connective::Bottom: return L.bottom();
    case Connective::Not:
      return L.ortho(evaluate_node(*f.left(), L, assignment));
    case Connective::And:
      return L.meet(evaluate_node(*f.left(), L, assignment),
                    evaluate_node(*f.right(), L, assignment));
    case Connective::Or:
      return L.join(evaluate_node(*f.left(), L, assignment),
                    evaluate_node(*f.right(), L, assignment));
    case Connective::Implies:
      return L.sasaki_hook(evaluate_node(*f.left(), L, assignment),
                           evaluate_node(*f.right(), L, assignment));
    case Connective::Seq:
      throw EvalError(
          "sequential connective '&>' has no lattice semantics; "
          "evaluate it with the measurement module");
  }
  throw EvalError("unreachable");
}

// Flat postfix form of a formula, for fast repeated evaluation during model
// scans: identifiers become integer slots, connectives become stack ops.
enum class OpCode : std::uint8_t { Var, Top, Bottom, Not, And, Or, Imp };

struct Op {
  OpCode code;
  std::size_t slot = 0;  // identifier index, used by Var only
};

inline void compile_node(const Formula& f,
                         const std::map<std::string, std::size_t>& slots,
                         std::vector<Op>& program) {
  switch (f.kind()) {
    case Connective::Elementary:
      program.push_back({OpCode::Var, slots.at(f.name())});
      return;
    case Connective::Top: program.push_back({OpCode::Top}); return;
    case Connective::Bottom: program.push_back({OpCode::Bottom}); return;
    case Connective::Not:
      compile_node(*f.left(), slots, program);
      program.push_back({OpCode::Not});
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
      compile_node(*f.left(), slots, program);
      compile_node(*f.right(), slots, program);
      program.push_back({f.kind() == Connective::And  ? OpCode::And
                         : f.kind() == Connective::Or ? OpCode::Or
                                                      : OpCode::Imp});
      return;
    case Connective::Seq:
      throw EvalError(
          "sequential connective '&>' has no lattice semantics; "
          "evaluate it with the measurement module");
  }
  throw EvalError("unreachable");
}

inline std::size_t run_program(const std::vector<Op>& program, const OrthoLattice& L,
                               const std::vector<std::size_t>& vars,
                               std::vector<std::size_t>& stack) {
  stack.clear();
  for (const Op& op : program) {
    switch (op.code) {
      case OpCode::Var: stack.push_back(vars[op.slot]); break;
      case OpCode::Top: stack.push_back(L.top()); break;
      case OpCode::Bottom: stack.push_back(L.bottom()); break;
      case OpCode::Not: stack.back() = L.ortho(stack.back()); break;
      default: {
        const std::size_t b = stack.back();
        stack.pop_back();
        const std::size_t a = stack.back();
        stack.back() = op.code == OpCode::And  ? L.meet(a, b)
                       : op.code == OpCode::Or ? L.join(a, b)
                                               : L.sasaki_hook(a, b);
      }
    }
  }
  return stack.back();
}

}  // namespace detail

// Structural evaluation: & -> meet, | -> join, ~ -> ortho, -> -> Sasaki hook.
inline std::size_t evaluate(const Formula& f, const Valuation& v) {
  if (!v.model) throw EvalError("valuation has no model");
  if (!v.model->is_orthomodular())
    throw EvalError("model \"" + v.model->name() + "\" is not orthomodular");
  for (const auto& [ident, elem] : v.assignment)
    if (elem >= v.model->size())
      throw EvalError("assignment for \"" + ident + "\" is out of range");
  return detail::evaluate_node(f, *v.model, v.assignment);
}

// Binary relations between propositions. Proof equivalence and value
// equivalence both collapse to element equality in the algebraic semantics;
// implication is the model order.
enum class Relation { ProofEquiv, ValueEquiv, Implies };

inline bool holds(Relation rel, const Formula& fa, const Formula& fb,
                  const Valuation& v) {
  std::size_t a = evaluate(fa, v);
  std::size_t b = evaluate(fb, v);
  return rel == Relation::Implies ? v.model->leq(a, b) : a == b;
}

struct NamedModel {
  std::string name;
  std::shared_ptr<const OrthoLattice> lattice;
};
using ModelFamily = std::vector<NamedModel>;

inline ModelFamily boolean_family() {
  ModelFamily f;
  for (int n = 1; n <= 3; ++n)
    f.push_back({"boolean(" + std::to_string(n) + ")",
                 std::make_shared<OrthoLattice>(OrthoLattice::boolean_algebra(n))});
  return f;
}

// Default validity family: small Boolean algebras, the MO(n) separating
// family, and two lattices generated from random rays in C^2 and C^3 (seeds
// fixed so verdicts are reproducible).
inline ModelFamily default_family() {
  ModelFamily f = boolean_family();
  for (int n = 1; n <= 4; ++n)
    f.push_back({"MO(" + std::to_string(n) + ")",
                 std::make_shared<OrthoLattice>(OrthoLattice::mo(n))});
  auto c2 = as_lattice(2, {random_subspace(2, 1, 101), random_subspace(2, 1, 102)},
                       64, kDefaultTol, "hilbert-C2");
  auto c3 = as_lattice(3, {random_subspace(3, 1, 201), random_subspace(3, 1, 202)},
                       64, kDefaultTol, "hilbert-C3");
  f.push_back({"hilbert-C2", std::make_shared<OrthoLattice>(std::move(c2.lattice))});
  f.push_back({"hilbert-C3", std::make_shared<OrthoLattice>(std::move(c3.lattice))});
  return f;
}

// The properly quantum part of the default family: the non-distributive
// orthomodular models (MO(n) and the Hilbert-generated lattices).
inline ModelFamily oml_family() {
  ModelFamily all = default_family();
  ModelFamily out;
  for (auto& m : all)
    if (!check_law(*m.lattice, Law::Distributive).holds) out.push_back(std::move(m));
  return out;
}

// Default family restricted to atomic models satisfying the covering law.
inline ModelFamily atomic_family() {
  ModelFamily out;
  for (auto& m : default_family()) {
    if (check_law(*m.lattice, Law::Atomic).holds &&
        check_law(*m.lattice, Law::Covering).holds)
      out.push_back(m);
  }
  return out;
}

inline std::string family_description(const ModelFamily& family) {
  std::string s;
  for (const auto& m : family) {
    if (!s.empty()) s += ", ";
    s += m.name;
  }
  return s;
}

struct Countermodel {
  std::string model;
  std::map<std::string, std::string> assignment;  // identifier -> element label
};

enum class Validity { Valid, Invalid, Inconclusive };

inline const char* validity_name(Validity v) {
  switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Invalid: return "invalid";
    case Validity::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ValidityReport {
  std::string formula;
  std::string family;
  Validity status = Validity::Inconclusive;
  std::optional<Countermodel> countermodel;
  std::uint64_t models_scanned = 0;
  std::uint64_t valuations_scanned = 0;

  bool valid() const { return status == Validity::Valid; }
};

inline constexpr std::uint64_t kDefaultValuationBudget = 10'000'000;

// Deterministic scan: models in family order, assignments lexicographic over
// sorted identifiers with the first identifier most significant. Stops at the
// first countermodel; a budget stop yields Inconclusive, never Valid.
inline ValidityReport find_countermodel(const Formula& f, const ModelFamily& family,
                                        std::uint64_t budget = kDefaultValuationBudget) {
  if (family.empty()) throw EvalError("empty model family");
  if (f.contains_seq())
    throw EvalError("sequential connective '&>' has no lattice semantics; "
                    "evaluate it with the measurement module");

  ValidityReport report;
  report.formula = render(f);
  report.family = family_description(family);

  const std::set<std::string> ident_set = elementaries(f);
  std::vector<std::string> idents(ident_set.begin(), ident_set.end());
  const std::size_t k = idents.size();

  std::map<std::string, std::size_t> slots;
  for (std::size_t i = 0; i < k; ++i) slots[idents[i]] = i;
  std::vector<detail::Op> program;
  detail::compile_node(f, slots, program);
  std::vector<std::size_t> stack;
  stack.reserve(program.size());

  for (const auto& model : family) {
    const OrthoLattice& L = *model.lattice;
    if (!L.is_orthomodular())
      throw EvalError("model \"" + model.name + "\" is not orthomodular");
    ++report.models_scanned;
    std::vector<std::size_t> digits(k, 0);
    while (true) {
      if (report.valuations_scanned >= budget) {
        report.status = Validity::Inconclusive;
        return report;
      }
      ++report.valuations_scanned;
      if (detail::run_program(program, L, digits, stack) != L.top()) {
        report.status = Validity::Invalid;
        Countermodel cm;
        cm.model = model.name;
        for (std::size_t i = 0; i < k; ++i)
          cm.assignment[idents[i]] = L.label(digits[i]);
        report.countermodel = std::move(cm);
        return report;
      }
      // Advance the odometer, last identifier fastest.
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (++digits[pos] < L.size()) break;
        digits[pos] = 0;
        if (pos == 0) { pos = k + 1; break; }
      }
      if (k == 0 || pos == k + 1) break;
    }
  }
  report.status = Validity::Valid;
  return report;
}

// Formal truth: value = top under every assignment over every family model.
inline ValidityReport is_formally_true(const Formula& f, const ModelFamily& family,
                                       std::uint64_t budget = kDefaultValuationBudget) {
  return find_countermodel(f, family, budget);
}

enum class LawClass { QuantumValid, ClassicalOnly, InvalidEverywhere };

inline const char* law_class_name(LawClass c) {
  switch (c) {
    case LawClass::QuantumValid: return "quantum_valid";
    case LawClass::ClassicalOnly: return "classical_only";
    case LawClass::InvalidEverywhere: return "invalid_everywhere";
  }
  return "?";
}

struct ClassificationReport {
  LawClass verdict = LawClass::QuantumValid;
  ValidityReport quantum;                   // scan over the orthomodular family
  std::optional<ValidityReport> classical;  // Boolean scan, run only on quantum failure
};

// quantum_valid: formally true over the orthomodular family. classical_only:
// fails there but holds over boolean(1..3). invalid_everywhere: fails even
// classically.
inline ClassificationReport classify_law_report(
    const Formula& f, const ModelFamily& quantum_family,
    const ModelFamily& bool_family, std::uint64_t budget = kDefaultValuationBudget) {
  ClassificationReport report;
  report.quantum = find_countermodel(f, quantum_family, budget);
  if (report.quantum.status == Validity::Inconclusive)
    throw EvalError("classification inconclusive: valuation budget exhausted");
  if (report.quantum.valid()) {
    report.verdict = LawClass::QuantumValid;
    return report;
  }
  report.classical = find_countermodel(f, bool_family, budget);
  if (report.classical->status == Validity::Inconclusive)
    throw EvalError("classification inconclusive: valuation budget exhausted");
  report.verdict = report.classical->valid() ? LawClass::ClassicalOnly
                                             : LawClass::InvalidEverywhere;
  return report;
}

inline ClassificationReport classify_law_report(
    const Formula& f, std::uint64_t budget = kDefaultValuationBudget) {
  return classify_law_report(f, default_family(), boolean_family(), budget);
}

inline LawClass classify_law(const Formula& f, const ModelFamily& quantum_family,
                             const ModelFamily& bool_family,
                             std::uint64_t budget = kDefaultValuationBudget) {
  return classify_law_report(f, quantum_family, bool_family, budget).verdict;
}

inline LawClass classify_law(const Formula& f,
                             std::uint64_t budget = kDefaultValuationBudget) {
  return classify_law_report(f, budget).verdict;
}

}  // namespace qlw
