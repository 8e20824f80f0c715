#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlw/common.hpp"

namespace qlw {

enum class LatticeErrorCode {
  DuplicateLabel,
  UnknownElement,
  NotAPoset,
  MissingBounds,
  MissingMeet,
  MissingJoin,
  OrthoIncomplete,
  OrthoNotInvolutive,
  OrthoNotAntitone,
  OrthoNotComplement,
  NotOrthomodular,
  IncompatibleGenerators,
  ClosureNotBoolean,
  BadSpec,
};

class LatticeError : public Error {
 public:
  LatticeError(LatticeErrorCode code, const std::string& message)
      : Error(message), code_(code) {}

  LatticeErrorCode code() const { return code_; }

 private:
  LatticeErrorCode code_;
};

enum class Law { Orthomodular, Distributive, Modular, Atomic, Covering };

inline const char* law_name(Law law) {
  switch (law) {
    case Law::Orthomodular: return "orthomodular";
    case Law::Distributive: return "distributive";
    case Law::Modular: return "modular";
    case Law::Atomic: return "atomic";
    case Law::Covering: return "covering";
  }
  return "?";
}

// Verdict of a single law check; `witness` holds the first violating element
// tuple in lexicographic element-index order and is empty iff the law holds.
struct LawVerdict {
  Law law;
  bool holds;
  std::vector<std::string> witness;
};

// Finite bounded ortholattice. Elements are indexed 0..size()-1 in the order
// they were listed at construction; that order is the tie-break for every
// witness reported by the law checkers. Instances are immutable.
class OrthoLattice {
 public:
  // Builds a validated lattice from a generating order relation. The
  // reflexive-transitive closure of `leq_pairs` is computed; every
  // ortholattice invariant is verified and violations are reported as
  // LatticeError with a distinct code.
  static OrthoLattice build(std::string name, std::vector<std::string> labels,
                            const std::vector<std::pair<std::string, std::string>>& leq_pairs,
                            const std::map<std::string, std::string>& ortho_map) {
    OrthoLattice L;
    L.name_ = std::move(name);
    L.labels_ = std::move(labels);
    const std::size_t n = L.labels_.size();
    if (n == 0) throw LatticeError(LatticeErrorCode::BadSpec, "no elements");
    for (std::size_t i = 0; i < n; ++i) {
      if (!L.index_.emplace(L.labels_[i], i).second)
        throw LatticeError(LatticeErrorCode::DuplicateLabel,
                           "duplicate element label \"" + L.labels_[i] + "\"");
    }

    // Order closure.
    L.leq_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) L.leq_[i * n + i] = 1;
    for (const auto& [lo, hi] : leq_pairs)
      L.leq_[L.index_of(lo) * n + L.index_of(hi)] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        if (!L.leq_[i * n + k]) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (L.leq_[k * n + j]) L.leq_[i * n + j] = 1;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (L.leq_[i * n + j] && L.leq_[j * n + i])
          throw LatticeError(LatticeErrorCode::NotAPoset,
                             "not a poset: cycle through \"" + L.labels_[i] +
                                 "\" and \"" + L.labels_[j] + "\"");

    // Global bounds.
    auto find_bound = [&](bool want_bottom) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j)
          ok = want_bottom ? L.leq_[i * n + j] : L.leq_[j * n + i];
        if (ok) return i;
      }
      return std::nullopt;
    };
    auto bottom = find_bound(true);
    auto top = find_bound(false);
    if (!bottom || !top)
      throw LatticeError(LatticeErrorCode::MissingBounds,
                         "missing global bottom or top element");
    L.bottom_ = *bottom;
    L.top_ = *top;

    // Meet/join tables.
    L.meet_.assign(n * n, 0);
    L.join_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        auto glb = L.bound_of(a, b, true);
        if (!glb)
          throw LatticeError(LatticeErrorCode::MissingMeet,
                             "no meet for \"" + L.labels_[a] + "\" and \"" +
                                 L.labels_[b] + "\"");
        auto lub = L.bound_of(a, b, false);
        if (!lub)
          throw LatticeError(LatticeErrorCode::MissingJoin,
                             "no join for \"" + L.labels_[a] + "\" and \"" +
                                 L.labels_[b] + "\"");
        L.meet_[a * n + b] = *glb;
        L.join_[a * n + b] = *lub;
      }

    // Orthocomplementation.
    L.ortho_.assign(n, 0);
    std::vector<bool> mapped(n, false);
    for (const auto& [from, to] : ortho_map) {
      std::size_t i = L.index_of(from);
      L.ortho_[i] = L.index_of(to);
      mapped[i] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!mapped[i])
        throw LatticeError(LatticeErrorCode::OrthoIncomplete,
                           "ortho map missing \"" + L.labels_[i] + "\"");
    for (std::size_t i = 0; i < n; ++i)
      if (L.ortho_[L.ortho_[i]] != i)
        throw LatticeError(LatticeErrorCode::OrthoNotInvolutive,
                           "ortho not involutive at \"" + L.labels_[i] + "\"");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (L.leq_[a * n + b] && !L.leq_[L.ortho_[b] * n + L.ortho_[a]])
          throw LatticeError(LatticeErrorCode::OrthoNotAntitone,
                             "ortho not antitone on \"" + L.labels_[a] +
                                 "\" <= \"" + L.labels_[b] + "\"");
    for (std::size_t a = 0; a < n; ++a) {
      if (L.meet_[a * n + L.ortho_[a]] != L.bottom_ ||
          L.join_[a * n + L.ortho_[a]] != L.top_)
        throw LatticeError(LatticeErrorCode::OrthoNotComplement,
                           "ortho not a complement at \"" + L.labels_[a] +
                               "\"");
    }

    // Cache the orthomodularity verdict; the Sasaki operations gate on it.
    L.orthomodular_ = true;
    for (std::size_t a = 0; a < n && L.orthomodular_; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (!L.leq_[a * n + b]) continue;
        if (L.join_[a * n + L.meet_[b * n + L.ortho_[a]]] != b) {
          L.orthomodular_ = false;
          L.om_witness_ = {a, b};
          break;
        }
      }
    return L;
  }

  // Powerset lattice on `atom_count` atoms a, b, c, ...; 2^n elements.
  static OrthoLattice boolean_algebra(int atom_count) {
    if (atom_count < 1 || atom_count > 8)
      throw LatticeError(LatticeErrorCode::BadSpec,
                         "boolean(n) requires 1 <= n <= 8");
    const unsigned full = (1u << atom_count) - 1;
    std::vector<std::string> labels;
    for (unsigned mask = 0; mask <= full; ++mask)
      labels.push_back(subset_label(mask, full));
    std::vector<std::pair<std::string, std::string>> pairs;
    std::map<std::string, std::string> ortho;
    for (unsigned mask = 0; mask <= full; ++mask) {
      ortho[subset_label(mask, full)] = subset_label(full & ~mask, full);
      for (unsigned sup = 0; sup <= full; ++sup)
        if ((mask & sup) == mask && mask != sup)
          pairs.emplace_back(subset_label(mask, full), subset_label(sup, full));
    }
    return build("boolean(" + std::to_string(atom_count) + ")", std::move(labels),
                 pairs, ortho);
  }

  // MO(n): bounds plus n orthocomplementary atom pairs (a,a'), (b,b'), ...
  // Element order is 0, a, b, ..., then the primed atoms in reverse, then 1.
  static OrthoLattice mo(int pair_count) {
    if (pair_count < 1 || pair_count > 26)
      throw LatticeError(LatticeErrorCode::BadSpec,
                         "MO(n) requires 1 <= n <= 26");
    std::vector<std::string> labels{"0"};
    for (int i = 0; i < pair_count; ++i)
      labels.push_back(std::string(1, static_cast<char>('a' + i)));
    for (int i = pair_count - 1; i >= 0; --i)
      labels.push_back(std::string(1, static_cast<char>('a' + i)) + "'");
    labels.push_back("1");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::map<std::string, std::string> ortho{{"0", "1"}, {"1", "0"}};
    for (std::size_t i = 1; i + 1 < labels.size(); ++i) {
      pairs.emplace_back("0", labels[i]);
      pairs.emplace_back(labels[i], "1");
    }
    for (int i = 0; i < pair_count; ++i) {
      std::string atom(1, static_cast<char>('a' + i));
      ortho[atom] = atom + "'";
      ortho[atom + "'"] = atom;
    }
    return build("MO(" + std::to_string(pair_count) + ")", std::move(labels),
                 pairs, ortho);
  }

  // The benzene-ring ortholattice 0 < a < b < 1, 0 < b' < a' < 1; the
  // smallest ortholattice that is not orthomodular.
  static OrthoLattice o6() {
    return build("O6", {"0", "a", "b", "b'", "a'", "1"},
                 {{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "b'"}, {"b'", "a'"}, {"a'", "1"}},
                 {{"0", "1"}, {"1", "0"}, {"a", "a'"}, {"a'", "a"}, {"b", "b'"}, {"b'", "b"}});
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
      throw LatticeError(LatticeErrorCode::UnknownElement,
                         "unknown element \"" + label + "\"");
    return it->second;
  }

  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }

  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b]; }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a * size() + b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a * size() + b]; }
  std::size_t ortho(std::size_t a) const { return ortho_[a]; }

  bool is_orthomodular() const { return orthomodular_; }

  std::vector<std::size_t> atoms() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < size(); ++x) {
      if (x == bottom_) continue;
      bool atom = true;
      for (std::size_t y = 0; y < size() && atom; ++y)
        atom = y == bottom_ || y == x || !leq(y, x);
      if (atom) out.push_back(x);
    }
    return out;
  }

  // Compatibility: a = (a ^ b) v (a ^ b'). Mirrors joint decidability of the
  // corresponding propositions.
  bool commensurable(std::size_t a, std::size_t b) const {
    return join(meet(a, b), meet(a, ortho(b))) == a;
  }

  // Sasaki projection onto a: b |-> a ^ (a' v b). Defined on orthomodular
  // lattices only.
  std::size_t sasaki_projection(std::size_t a, std::size_t b) const {
    require_orthomodular();
    return meet(a, join(ortho(a), b));
  }

  // Sasaki hook a' v (a ^ b); equals top exactly when a <= b.
  std::size_t sasaki_hook(std::size_t a, std::size_t b) const {
    require_orthomodular();
    return join(ortho(a), meet(a, b));
  }

  // Smallest subset containing the generators, the bounds, and closed under
  // meet, join and ortho, returned as a lattice of its own. Generators must
  // be pairwise commensurable; the result is checked to be distributive.
  OrthoLattice boolean_closure(const std::vector<std::size_t>& generators) const;

 private:
  OrthoLattice() = default;

  std::optional<std::size_t> bound_of(std::size_t a, std::size_t b, bool lower) const {
    const std::size_t n = labels_.size();
    std::vector<std::size_t> candidates;
    for (std::size_t c = 0; c < n; ++c) {
      bool in = lower ? (leq_[c * n + a] && leq_[c * n + b])
                      : (leq_[a * n + c] && leq_[b * n + c]);
      if (in) candidates.push_back(c);
    }
    for (std::size_t m : candidates) {
      bool extremal = true;
      for (std::size_t c : candidates) {
        bool ok = lower ? leq_[c * n + m] : leq_[m * n + c];
        if (!ok) { extremal = false; break; }
      }
      if (extremal) return m;
    }
    return std::nullopt;
  }

  void require_orthomodular() const {
    if (!orthomodular_)
      throw LatticeError(LatticeErrorCode::NotOrthomodular,
                         "lattice \"" + name_ + "\" is not orthomodular (witness " +
                             labels_[om_witness_.first] + " <= " +
                             labels_[om_witness_.second] + ")");
  }

  static std::string subset_label(unsigned mask, unsigned full) {
    if (mask == 0) return "0";
    if (mask == full) return "1";
    std::string s;
    for (int i = 0; i < 32; ++i)
      if (mask & (1u << i)) s += static_cast<char>('a' + i);
    return s;
  }

  std::string name_;
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::uint8_t> leq_;
  std::vector<std::size_t> meet_, join_;
  std::vector<std::size_t> ortho_;
  std::size_t bottom_ = 0, top_ = 0;
  bool orthomodular_ = false;
  std::pair<std::size_t, std::size_t> om_witness_{0, 0};
};

// Exhaustive law check; O(n^3) for the ternary laws. The witness is the
// first violating tuple in lexicographic element-index order.
inline LawVerdict check_law(const OrthoLattice& L, Law law) {
  const std::size_t n = L.size();
  auto verdict = [&](std::vector<std::size_t> idx) {
    LawVerdict v{law, idx.empty(), {}};
    for (std::size_t i : idx) v.witness.push_back(L.label(i));
    return v;
  };
  switch (law) {
    case Law::Orthomodular:
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (!L.leq(a, b)) continue;
          if (L.join(a, L.meet(b, L.ortho(a))) != b) return verdict({a, b});
        }
      return verdict({});
    case Law::Distributive:
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c)
            if (L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c)))
              return verdict({a, b, c});
      return verdict({});
    case Law::Modular:
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c) {
            if (!L.leq(a, c)) continue;
            if (L.join(a, L.meet(b, c)) != L.meet(L.join(a, b), c))
              return verdict({a, b, c});
          }
      return verdict({});
    case Law::Atomic: {
      auto atoms = L.atoms();
      for (std::size_t x = 0; x < n; ++x) {
        if (x == L.bottom()) continue;
        bool dominated = false;
        for (std::size_t p : atoms)
          if (L.leq(p, x)) { dominated = true; break; }
        if (!dominated) return verdict({x});
      }
      return verdict({});
    }
    case Law::Covering: {
      auto atoms = L.atoms();
      for (std::size_t p : atoms)
        for (std::size_t b = 0; b < n; ++b) {
          if (L.meet(p, b) != L.bottom()) continue;
          std::size_t j = L.join(p, b);
          for (std::size_t x = 0; x < n; ++x)
            if (x != b && x != j && L.leq(b, x) && L.leq(x, j))
              return verdict({p, b, x});
        }
      return verdict({});
    }
  }
  return {law, true, {}};
}

inline OrthoLattice OrthoLattice::boolean_closure(
    const std::vector<std::size_t>& generators) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!commensurable(generators[i], generators[j]) ||
          !commensurable(generators[j], generators[i]))
        throw LatticeError(LatticeErrorCode::IncompatibleGenerators,
                           "generators \"" + labels_[generators[i]] + "\" and \"" +
                               labels_[generators[j]] + "\" are not commensurable");
    }

  std::vector<bool> in(size(), false);
  in[bottom_] = in[top_] = true;
  for (std::size_t g : generators) in.at(g) = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t a = 0; a < size(); ++a) {
      if (!in[a]) continue;
      if (!in[ortho_[a]]) { in[ortho_[a]] = true; grew = true; }
      for (std::size_t b = 0; b < size(); ++b) {
        if (!in[b]) continue;
        std::size_t m = meet(a, b), j = join(a, b);
        if (!in[m]) { in[m] = true; grew = true; }
        if (!in[j]) { in[j] = true; grew = true; }
      }
    }
  }

  std::vector<std::string> labels;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < size(); ++i)
    if (in[i]) {
      members.push_back(i);
      labels.push_back(labels_[i]);
    }
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::string> ortho_map;
  for (std::size_t i : members) {
    ortho_map[labels_[i]] = labels_[ortho_[i]];
    for (std::size_t j : members)
      if (leq(i, j)) pairs.emplace_back(labels_[i], labels_[j]);
  }
  OrthoLattice sub = build(name_ + " closure", std::move(labels), pairs, ortho_map);
  LawVerdict dist = check_law(sub, Law::Distributive);
  if (!dist.holds)
    throw LatticeError(LatticeErrorCode::ClosureNotBoolean,
                       "closure of commensurable generators is not distributive in \"" +
                           name_ + "\"");
  return sub;
}

}  // namespace qlw
