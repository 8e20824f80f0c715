#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qlw/common.hpp"
#include "qlw/effects.hpp"
#include "qlw/subspace.hpp"

namespace qlw {

class MeasurementError : public Error {
 public:
  explicit MeasurementError(const std::string& message) : Error(message) {}
};

struct PureState {
  Eigen::VectorXcd vector;

  static PureState make(Eigen::VectorXcd v, double tol = kDefaultTol) {
    if (v.size() < 1) throw MeasurementError("state vector is empty");
    if (std::abs(v.norm() - 1.0) > tol)
      throw MeasurementError("state vector norm " + std::to_string(v.norm()) +
                             " is not 1");
    return PureState{std::move(v)};
  }

  // Normalizing constructor for raw amplitudes.
  static PureState normalized(Eigen::VectorXcd v) {
    double n = v.norm();
    if (n <= 0.0) throw MeasurementError("cannot normalize the zero vector");
    return PureState{v / n};
  }

  Eigen::Index dim() const { return vector.size(); }
};

inline PureState named_state(std::string_view name) {
  return PureState::make(qubit_ray(name));
}

// States equal up to global phase describe the same physical preparation.
inline bool same_state(const PureState& a, const PureState& b,
                       double tol = kDefaultTol) {
  if (a.dim() != b.dim()) return false;
  std::complex<double> ip = a.vector.adjoint() * b.vector;
  return 1.0 - std::abs(ip) <= tol;
}

inline PureState random_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(gauss(rng), gauss(rng));
  return PureState::normalized(std::move(v));
}

enum class Outcome { Pass, Fail };

inline const char* outcome_name(Outcome o) {
  return o == Outcome::Pass ? "pass" : "fail";
}

struct TestStep {
  std::string label;
  Subspace subspace;
  Outcome outcome = Outcome::Pass;
  double probability = 0.0;  // branch probability given the preceding state
};

struct LudersResult {
  PureState state;
  double probability = 0.0;
};

// Projection-postulate update: the pass branch projects onto P and
// renormalizes with probability |P s|^2, the fail branch onto the
// orthocomplement. A branch whose probability is <= tol is impossible.
inline LudersResult luders_update(const PureState& s, const Subspace& p,
                                  Outcome outcome, double tol = kDefaultTol) {
  if (s.dim() != p.ambient_dim())
    throw MeasurementError("state dimension " + std::to_string(s.dim()) +
                           " does not match subspace ambient dimension " +
                           std::to_string(p.ambient_dim()));
  Eigen::VectorXcd passed = p.projector() * s.vector;
  const double pass_prob = passed.squaredNorm();
  const double prob = outcome == Outcome::Pass ? pass_prob : 1.0 - pass_prob;
  if (prob <= tol)
    throw MeasurementError(std::string("impossible ") + outcome_name(outcome) +
                           " branch (probability " + std::to_string(prob) + ")");
  Eigen::VectorXcd next =
      outcome == Outcome::Pass ? std::move(passed) : (s.vector - passed).eval();
  return LudersResult{PureState::normalized(std::move(next)), prob};
}

struct MeasurementRecord {
  PureState initial;
  std::vector<TestStep> steps;
  PureState final_state;

  // Replays the steps from the initial state; every recorded probability and
  // the final state must be reproduced within tol.
  void validate(double tol = kDefaultTol) const {
    PureState s = initial;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const TestStep& step = steps[i];
      if (step.probability < -tol || step.probability > 1.0 + tol)
        throw MeasurementError("step " + std::to_string(i) +
                               " probability out of [0,1]");
      LudersResult r = luders_update(s, step.subspace, step.outcome, tol);
      if (std::abs(r.probability - step.probability) > tol)
        throw MeasurementError("step " + std::to_string(i) + " probability " +
                               std::to_string(step.probability) +
                               " is not reproducible (replay gives " +
                               std::to_string(r.probability) + ")");
      s = std::move(r.state);
    }
    if (!same_state(s, final_state, tol))
      throw MeasurementError("final state does not match the replayed sequence");
  }
};

enum class Policy { AllPass, Sample };

// Runs a chronologically ordered test sequence. AllPass follows the pass
// branch everywhere and reports the first impossible step; Sample draws each
// outcome from the branch probabilities of the current state.
inline MeasurementRecord run_sequence(
    const PureState& s, const std::vector<std::pair<std::string, Subspace>>& tests,
    Policy policy, std::uint64_t seed = 0, double tol = kDefaultTol) {
  MeasurementRecord record{s, {}, s};
  record.steps.reserve(tests.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PureState current = s;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto& [label, subspace] = tests[i];
    Outcome outcome = Outcome::Pass;
    if (policy == Policy::Sample) {
      double pass_prob =
          (subspace.projector() * current.vector).squaredNorm();
      if (pass_prob <= tol) outcome = Outcome::Fail;
      else if (pass_prob >= 1.0 - tol) outcome = Outcome::Pass;
      else outcome = unit(rng) < pass_prob ? Outcome::Pass : Outcome::Fail;
    }
    LudersResult r;
    try {
      r = luders_update(current, subspace, outcome, tol);
    } catch (const MeasurementError& e) {
      throw MeasurementError("step " + std::to_string(i) + " (test \"" + label +
                             "\"): " + e.what());
    }
    record.steps.push_back(TestStep{label, subspace, outcome, r.probability});
    current = std::move(r.state);
  }
  record.final_state = std::move(current);
  return record;
}

// Success probability of proving A then B in immediate succession:
// <s|P_A P_B P_A|s>. The sequential proposition holds (is true in the state)
// when this equals 1.
inline double seq_truth_probability(const PureState& s, const Subspace& a,
                                    const Subspace& b) {
  if (s.dim() != a.ambient_dim() || s.dim() != b.ambient_dim())
    throw MeasurementError("state and subspaces must share one dimension");
  return (b.projector() * (a.projector() * s.vector)).squaredNorm();
}

// Probability that a system prepared to pass A fails a second A-test after an
// interposed B-test, averaged over the B branches.
inline double flip_probability(const PureState& s, const Subspace& a,
                               const Subspace& b, double tol = kDefaultTol) {
  LudersResult in_a = luders_update(s, a, Outcome::Pass, tol);
  const Eigen::MatrixXcd pa = a.projector();
  const Eigen::MatrixXcd pb = b.projector();
  double flip = 0.0;
  for (Outcome o : {Outcome::Pass, Outcome::Fail}) {
    Eigen::VectorXcd branch = o == Outcome::Pass
                                  ? (pb * in_a.state.vector).eval()
                                  : (in_a.state.vector - pb * in_a.state.vector).eval();
    double prob = branch.squaredNorm();
    if (prob <= tol) continue;
    Eigen::VectorXcd renorm = branch / std::sqrt(prob);
    flip += prob * (1.0 - (pa * renorm).squaredNorm());
  }
  return flip;
}

struct CommensurabilityVerdict {
  bool commuting = false;
  bool preserved = false;  // no sampled trial flips a confirmed A-result
  std::size_t trials_run = 0;
  std::optional<PureState> witness;  // set when a flip was found
  double witness_flip = 0.0;
};

// Joint decidability as an operational fact: when the projectors commute, a
// confirmed A-result survives any interposed B-test; otherwise some state
// flips with positive probability. Candidate witnesses are scanned
// deterministically: the columns of A's basis first, then seeded random
// states restricted to A.
inline CommensurabilityVerdict commensurability_witness(
    const Subspace& a, const Subspace& b, std::size_t trials = 64,
    std::uint64_t seed = 7, double tol = kDefaultTol) {
  if (a.ambient_dim() != b.ambient_dim())
    throw MeasurementError("subspaces must share the ambient dimension");
  CommensurabilityVerdict verdict;
  verdict.commuting = commutes(a, b, tol);
  verdict.preserved = true;
  if (a.dim() == 0) return verdict;  // no state can pass A

  std::vector<PureState> candidates;
  for (int c = 0; c < a.dim(); ++c)
    candidates.push_back(PureState::normalized(a.basis().col(c)));
  for (std::size_t t = candidates.size(); t < trials; ++t) {
    PureState raw = random_state(a.ambient_dim(), seed + t);
    Eigen::VectorXcd inside = a.projector() * raw.vector;
    if (inside.norm() <= tol) continue;
    candidates.push_back(PureState::normalized(std::move(inside)));
  }

  for (const PureState& s : candidates) {
    ++verdict.trials_run;
    double flip = flip_probability(s, a, b, tol);
    if (flip > tol) {
      verdict.preserved = false;
      verdict.witness = s;
      verdict.witness_flip = flip;
      break;
    }
  }
  return verdict;
}

}  // namespace qlw
