#pragma once

// Shared helpers for the test suite: independent oracles (truth tables,
// certificate grid search, analytic eigenvalues) and structural utilities
// that deliberately avoid the library code paths they are checking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlw/formula.hpp"
#include "qlw/ortholattice.hpp"

namespace support {

inline std::string data_path(const std::string& name) {
#ifdef QLW_DATA_DIR
  return std::string(QLW_DATA_DIR) + "/" + name;
#else
  return "data/" + name;
#endif
}

// --------------------------------------------------------------------------
// Ortholattice isomorphism by backtracking over element bijections that
// preserve leq and ortho. Small sizes only (used up to ~12 elements).

inline bool isomorphic(const qlw::OrthoLattice& a, const qlw::OrthoLattice& b) {
  const std::size_t n = a.size();
  if (n != b.size()) return false;

  std::vector<std::size_t> image(n, n);  // a-index -> b-index
  std::vector<bool> used(n, false);

  auto consistent = [&](std::size_t x, std::size_t y) {
    for (std::size_t z = 0; z < n; ++z) {
      if (image[z] == n) continue;
      if (a.leq(x, z) != b.leq(y, image[z])) return false;
      if (a.leq(z, x) != b.leq(image[z], y)) return false;
      if ((a.ortho(x) == z) != (b.ortho(y) == image[z])) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> extend = [&](std::size_t x) -> bool {
    if (x == n) return true;
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || !consistent(x, y)) continue;
      image[x] = y;
      used[y] = true;
      if (extend(x + 1)) return true;
      image[x] = n;
      used[y] = false;
    }
    return false;
  };
  return extend(0);
}

// --------------------------------------------------------------------------
// Classical two-valued truth tables, computed directly on bools. The Sasaki
// hook collapses to material implication over a Boolean algebra, so validity
// over boolean(n) must agree with tautology checking.

inline bool eval_classical(const qlw::Formula& f, const std::map<std::string, bool>& v) {
  using qlw::Connective;
  switch (f.kind()) {
    case Connective::Elementary: return v.at(f.name());
    case Connective::Top: return true;
    case Connective::Bottom: return false;
    case Connective::Not: return !eval_classical(*f.left(), v);
    case Connective::And: return eval_classical(*f.left(), v) && eval_classical(*f.right(), v);
    case Connective::Or: return eval_classical(*f.left(), v) || eval_classical(*f.right(), v);
    case Connective::Implies:
      return !eval_classical(*f.left(), v) || eval_classical(*f.right(), v);
    case Connective::Seq: throw std::runtime_error("seq has no classical truth table");
  }
  throw std::runtime_error("bad connective");
}

inline bool is_tautology(const qlw::Formula& f) {
  const std::set<std::string> id_set = qlw::elementaries(f);
  std::vector<std::string> ids(id_set.begin(), id_set.end());
  const std::size_t k = ids.size();
  for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < k; ++i) v[ids[i]] = (mask >> i) & 1;
    if (!eval_classical(f, v)) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// Subset semantics for boolean(n): the element labeled by a set of letters is
// that subset of {a, ..}; meet/join/ortho are plain set operations on
// bitmasks, independent of the lattice tables.

inline unsigned label_to_mask(const std::string& label, unsigned full) {
  if (label == "0") return 0;
  if (label == "1") return full;
  unsigned m = 0;
  for (char c : label) m |= 1u << (c - 'a');
  return m;
}

// --------------------------------------------------------------------------
// Seeded random formula generator for parser round-trip properties.

inline qlw::FormulaPtr random_formula(std::mt19937_64& rng, int depth, bool allow_seq) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : (allow_seq ? 7 : 6));
  static const std::vector<std::string> names = {"A", "B", "C", "D1", "x", "y_2"};
  switch (pick(rng)) {
    case 0:
      return qlw::Formula::elementary(names[rng() % names.size()]);
    case 1:
      return rng() % 2 ? qlw::Formula::top() : qlw::Formula::bottom();
    case 2:
      return qlw::Formula::negation(random_formula(rng, depth - 1, allow_seq));
    case 3:
      return qlw::Formula::conjunction(random_formula(rng, depth - 1, allow_seq),
                                       random_formula(rng, depth - 1, allow_seq));
    case 4:
      return qlw::Formula::disjunction(random_formula(rng, depth - 1, allow_seq),
                                       random_formula(rng, depth - 1, allow_seq));
    case 5:
    case 6:
      return qlw::Formula::implication(random_formula(rng, depth - 1, allow_seq),
                                       random_formula(rng, depth - 1, allow_seq));
    default:
      return qlw::Formula::sequential(random_formula(rng, depth - 1, allow_seq),
                                      random_formula(rng, depth - 1, allow_seq));
  }
}

// --------------------------------------------------------------------------
// Independent coexistence oracle: a joint POVM of the parametric form exists
// iff some c in [-1, 1] keeps all four outcomes positive semidefinite. The
// scan uses analytic 2x2 Hermitian eigenvalues (trace/determinant), not the
// library's solver.

inline double min_eig_2x2(const Eigen::Matrix2cd& m) {
  const double tr = m(0, 0).real() + m(1, 1).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double h = tr / 2.0;
  const double disc = std::sqrt(std::max(0.0, h * h - det));
  return h - disc;
}

inline Eigen::Matrix2cd pauli_combo(double coeff_i, const Eigen::Vector3d& v) {
  Eigen::Matrix2cd m;
  const std::complex<double> i(0.0, 1.0);
  m(0, 0) = coeff_i + v[2];
  m(0, 1) = v[0] - i * v[1];
  m(1, 0) = v[0] + i * v[1];
  m(1, 1) = coeff_i - v[2];
  return m;
}

inline std::optional<double> certificate_search(const Eigen::Vector3d& a,
                                                const Eigen::Vector3d& b,
                                                double psd_tol = 1e-9,
                                                double step = 1e-3) {
  for (double c = -1.0; c <= 1.0 + step / 2; c += step) {
    bool feasible = true;
    for (int mu : {+1, -1}) {
      for (int nu : {+1, -1}) {
        Eigen::Matrix2cd g =
            0.25 * pauli_combo(1.0 + mu * nu * c, (mu * a + nu * b).eval());
        if (min_eig_2x2(g) < -psd_tol) {
          feasible = false;
          break;
        }
      }
      if (!feasible) break;
    }
    if (feasible) return c;
  }
  return std::nullopt;
}

}  // namespace support
