#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qlw/common.hpp"
#include "qlw/ortholattice.hpp"

namespace qlw {

namespace detail {

// Column-orthonormal basis of the column span; rank decided by singular-value
// threshold relative to the largest singular value.
inline Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& m) {
  if (m.cols() == 0) return Eigen::MatrixXcd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  double cutoff = std::max(kRankRel * (sv.size() ? sv(0) : 0.0), kRankAbs);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace detail

// Closed subspace of a finite-dimensional complex inner-product space,
// held as a column-orthonormal basis (zero columns = zero subspace).
class Subspace {
 public:
  static Subspace zero(int ambient_dim, int max_dim = kDefaultDimCap) {
    check_ambient(ambient_dim, max_dim);
    return Subspace(ambient_dim, Eigen::MatrixXcd(ambient_dim, 0));
  }

  static Subspace full(int ambient_dim, int max_dim = kDefaultDimCap) {
    check_ambient(ambient_dim, max_dim);
    return Subspace(ambient_dim,
                    Eigen::MatrixXcd::Identity(ambient_dim, ambient_dim));
  }

  static Subspace span(int ambient_dim, const std::vector<Eigen::VectorXcd>& vectors,
                       int max_dim = kDefaultDimCap) {
    check_ambient(ambient_dim, max_dim);
    Eigen::MatrixXcd m(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != ambient_dim)
        throw Error("span: vector dimension " + std::to_string(vectors[i].size()) +
                    " does not match ambient dimension " + std::to_string(ambient_dim));
      m.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return Subspace(ambient_dim, detail::orthonormal_span(m));
  }

  // Accepts a matrix whose columns need not be orthonormal.
  static Subspace from_columns(int ambient_dim, const Eigen::MatrixXcd& columns,
                               int max_dim = kDefaultDimCap) {
    check_ambient(ambient_dim, max_dim);
    if (columns.rows() != ambient_dim)
      throw Error("from_columns: row count does not match ambient dimension");
    return Subspace(ambient_dim, detail::orthonormal_span(columns));
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXcd& basis() const { return basis_; }

  Eigen::MatrixXcd projector() const { return basis_ * basis_.adjoint(); }

  Subspace ortho() const {
    if (dim() == 0) return full(ambient_, ambient_);
    if (dim() == ambient_) return zero(ambient_, ambient_);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis_, Eigen::ComputeFullU);
    return Subspace(ambient_, svd.matrixU().rightCols(ambient_ - dim()));
  }

 private:
  Subspace(int ambient, Eigen::MatrixXcd basis)
      : ambient_(ambient), basis_(std::move(basis)) {}

  static void check_ambient(int d, int max_dim) {
    if (d < 1) throw Error("ambient dimension must be positive");
    if (d > max_dim)
      throw Error("ambient dimension " + std::to_string(d) + " exceeds cap " +
                  std::to_string(max_dim));
  }

  int ambient_;
  Eigen::MatrixXcd basis_;
};

inline void check_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error("ambient dimension mismatch: " + std::to_string(a.ambient_dim()) +
                " vs " + std::to_string(b.ambient_dim()));
}

inline Subspace join(const Subspace& a, const Subspace& b) {
  check_same_ambient(a, b);
  Eigen::MatrixXcd m(a.ambient_dim(), a.dim() + b.dim());
  m << a.basis(), b.basis();
  return Subspace::from_columns(a.ambient_dim(), m, a.ambient_dim());
}

inline Subspace meet(const Subspace& a, const Subspace& b) {
  check_same_ambient(a, b);
  return join(a.ortho(), b.ortho()).ortho();
}

// Projector comparison is basis-independent.
inline bool approx_equal(const Subspace& a, const Subspace& b,
                         double tol = kDefaultTol) {
  check_same_ambient(a, b);
  return (a.projector() - b.projector()).cwiseAbs().maxCoeff() <= tol;
}

inline bool subspace_leq(const Subspace& a, const Subspace& b,
                         double tol = kDefaultTol) {
  check_same_ambient(a, b);
  Eigen::MatrixXcd pa = a.projector();
  return (b.projector() * pa - pa).cwiseAbs().maxCoeff() <= tol;
}

inline bool commutes(const Subspace& a, const Subspace& b,
                     double tol = kDefaultTol) {
  check_same_ambient(a, b);
  Eigen::MatrixXcd pa = a.projector(), pb = b.projector();
  return (pa * pb - pb * pa).cwiseAbs().maxCoeff() <= tol;
}

// Haar-like k-frame from orthonormalizing a seeded Gaussian matrix;
// deterministic for a given seed.
inline Subspace random_subspace(int ambient_dim, int k, std::uint64_t seed,
                                int max_dim = kDefaultDimCap) {
  if (k < 0 || k > ambient_dim)
    throw Error("subspace dimension " + std::to_string(k) +
                " out of range for ambient dimension " + std::to_string(ambient_dim));
  if (k == 0) return Subspace::zero(ambient_dim, max_dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(ambient_dim, k);
  for (int i = 0; i < ambient_dim; ++i)
    for (int j = 0; j < k; ++j) {
      double re = gauss(rng), im = gauss(rng);
      m(i, j) = std::complex<double>(re, im);
    }
  return Subspace::from_columns(ambient_dim, m, max_dim);
}

inline Eigen::VectorXcd qubit_ray(std::string_view name) {
  using namespace std::complex_literals;
  Eigen::VectorXcd v(2);
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "z+") v << 1, 0;
  else if (name == "z-") v << 0, 1;
  else if (name == "x+") v << s, s;
  else if (name == "x-") v << s, -s;
  else if (name == "y+") v << s, s * 1i;
  else if (name == "y-") v << s, -s * 1i;
  else throw Error("unknown ray name \"" + std::string(name) + "\"");
  return v;
}

// Finite ortholattice generated by closing subspaces under meet/join/ortho,
// together with the subspace realizing each element.
struct SubspaceLattice {
  OrthoLattice lattice;
  std::vector<Subspace> carrier;          // carrier[i] realizes element i
  std::vector<std::size_t> generator_index;  // element index of each generator
};

inline SubspaceLattice as_lattice(int ambient_dim, const std::vector<Subspace>& generators,
                                  std::size_t max_elements = 64,
                                  double tol = kDefaultTol,
                                  const std::string& name = "") {
  std::vector<Subspace> carrier{Subspace::zero(ambient_dim), Subspace::full(ambient_dim)};
  auto find = [&](const Subspace& s) -> std::size_t {
    for (std::size_t i = 0; i < carrier.size(); ++i)
      if (approx_equal(carrier[i], s, tol)) return i;
    return carrier.size();
  };
  auto add = [&](const Subspace& s) -> bool {
    if (find(s) < carrier.size()) return false;
    carrier.push_back(s);
    if (carrier.size() > max_elements)
      throw Error("subspace closure exceeds " + std::to_string(max_elements) +
                  " elements (currently " + std::to_string(carrier.size()) + ")");
    return true;
  };

  std::vector<std::size_t> gen_index;
  for (const Subspace& g : generators) {
    if (g.ambient_dim() != ambient_dim)
      throw Error("generator ambient dimension mismatch");
    add(g);
    gen_index.push_back(find(g));
  }

  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < carrier.size(); ++i) {
      if (add(carrier[i].ortho())) grew = true;
      for (std::size_t j = 0; j <= i; ++j) {
        if (add(meet(carrier[i], carrier[j]))) grew = true;
        if (add(join(carrier[i], carrier[j]))) grew = true;
      }
    }
  }

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < carrier.size(); ++i)
    labels.push_back(i == 0 ? "0" : i == 1 ? "1" : "s" + std::to_string(i - 1));
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::string> ortho_map;
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    ortho_map[labels[i]] = labels[find(carrier[i].ortho())];
    for (std::size_t j = 0; j < carrier.size(); ++j)
      if (subspace_leq(carrier[i], carrier[j], tol))
        pairs.emplace_back(labels[i], labels[j]);
  }
  std::string lattice_name =
      name.empty() ? "hilbert(d=" + std::to_string(ambient_dim) + ")" : name;
  OrthoLattice L = OrthoLattice::build(lattice_name, labels, pairs, ortho_map);
  return SubspaceLattice{std::move(L), std::move(carrier), std::move(gen_index)};
}

}  // namespace qlw
