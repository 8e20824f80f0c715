#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "qlw/ortholattice.hpp"
#include "qlw/subspace.hpp"
#include "support.hpp"

using namespace qlw;
using Catch::Approx;

namespace {

Eigen::VectorXcd ket(std::initializer_list<std::complex<double>> amps) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v[i++] = a;
  return v;
}

}  // namespace

TEST_CASE("span orthonormalizes and drops dependent vectors", "[subspace]") {
  Subspace s = Subspace::span(3, {ket({1, 0, 0}), ket({2, 0, 0}), ket({0, 3, 0})});
  CHECK(s.dim() == 2);
  Eigen::MatrixXcd g = s.basis().adjoint() * s.basis();
  CHECK((g - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(Subspace::zero(4).dim() == 0);
  CHECK(Subspace::full(4).dim() == 4);
  CHECK_THROWS_AS(Subspace::span(2, {ket({1, 0, 0})}), Error);
  CHECK_THROWS_AS(Subspace::zero(0), Error);
  CHECK_THROWS_AS(Subspace::zero(17), Error);  // ambient cap
}

TEST_CASE("projector and ortho-complement behave as projections", "[subspace]") {
  Subspace s = random_subspace(4, 2, 42);
  Eigen::MatrixXcd p = s.projector();
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  Subspace c = s.ortho();
  CHECK(c.dim() == 2);
  CHECK((p * c.projector()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(approx_equal(s.ortho().ortho(), s));
  CHECK(approx_equal(join(s, c), Subspace::full(4)));
  CHECK(approx_equal(meet(s, c), Subspace::zero(4)));
}

TEST_CASE("join and meet are order-theoretic sup and inf", "[subspace]") {
  Subspace a = Subspace::span(3, {ket({1, 0, 0})});
  Subspace b = Subspace::span(3, {ket({0, 1, 0})});
  Subspace ab = join(a, b);
  CHECK(ab.dim() == 2);
  CHECK(subspace_leq(a, ab));
  CHECK(subspace_leq(b, ab));
  CHECK(meet(a, b).dim() == 0);

  Subspace plane = Subspace::span(3, {ket({1, 0, 0}), ket({0, 1, 0})});
  Subspace diag = Subspace::span(3, {ket({1, 1, 0})});
  CHECK(subspace_leq(diag, plane));
  CHECK(approx_equal(meet(plane, diag), diag));
  CHECK(approx_equal(join(plane, diag), plane));
}

TEST_CASE("qubit rays: orthogonality and non-commutation", "[subspace]") {
  Subspace zp = Subspace::span(2, {qubit_ray("z+")});
  Subspace zm = Subspace::span(2, {qubit_ray("z-")});
  Subspace xp = Subspace::span(2, {qubit_ray("x+")});
  Subspace yp = Subspace::span(2, {qubit_ray("y+")});

  CHECK(approx_equal(zp.ortho(), zm));
  CHECK(commutes(zp, zm));
  CHECK_FALSE(commutes(zp, xp));
  CHECK_FALSE(commutes(xp, yp));
  CHECK(meet(zp, xp).dim() == 0);
  CHECK(join(zp, xp).dim() == 2);
  CHECK_THROWS_AS(qubit_ray("w+"), Error);
}

TEST_CASE("orthomodular identity holds numerically in random dimensions",
          "[subspace]") {
  // meet(b, join(a, ortho(b) ^ b-part)): the lattice form a <= b implies
  // b = a v (b ^ a-ortho), checked with a <= b arranged by construction.
  for (int d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 50; ++trial) {
      std::uint64_t seed = static_cast<std::uint64_t>(d * 1000 + trial);
      Subspace b = random_subspace(d, 1 + static_cast<int>(seed % d), seed);
      Subspace a = meet(b, random_subspace(d, d - 1, seed + 7));  // a <= b
      Subspace rhs = join(a, meet(b, a.ortho()));
      CAPTURE(d, trial, a.dim(), b.dim());
      CHECK(approx_equal(rhs, b));
    }
  }
}

TEST_CASE("De Morgan: ortho of join is meet of orthos", "[subspace]") {
  for (int trial = 0; trial < 50; ++trial) {
    Subspace a = random_subspace(4, 2, 100 + trial);
    Subspace b = random_subspace(4, 1, 200 + trial);
    CHECK(approx_equal(join(a, b).ortho(), meet(a.ortho(), b.ortho())));
    CHECK(approx_equal(meet(a, b).ortho(), join(a.ortho(), b.ortho())));
  }
}

TEST_CASE("covering law: a ray outside b pushes the dimension up by one",
          "[subspace]") {
  for (int trial = 0; trial < 50; ++trial) {
    Subspace b = random_subspace(4, 2, 300 + trial);
    Subspace p = random_subspace(4, 1, 400 + trial);
    if (meet(p, b).dim() != 0) continue;  // need p ^ b = 0
    CHECK(join(p, b).dim() == b.dim() + 1);
  }
}

TEST_CASE("commutes is symmetric and matches projector commutators",
          "[subspace]") {
  Subspace a = random_subspace(3, 1, 11);
  Subspace b = random_subspace(3, 2, 12);
  Eigen::MatrixXcd pa = a.projector(), pb = b.projector();
  bool manual = (pa * pb - pb * pa).cwiseAbs().maxCoeff() <= kDefaultTol;
  CHECK(commutes(a, b) == manual);
  CHECK(commutes(b, a) == manual);
  CHECK(commutes(a, a.ortho()));
  CHECK(commutes(a, Subspace::full(3)));
  CHECK(commutes(a, Subspace::zero(3)));
}

TEST_CASE("as_lattice on z+/x+ rays reproduces MO(2)", "[subspace]") {
  SubspaceLattice sl = as_lattice(
      2, {Subspace::span(2, {qubit_ray("z+")}), Subspace::span(2, {qubit_ray("x+")})});
  CHECK(sl.lattice.size() == 6);
  CHECK(sl.carrier.size() == 6);
  CHECK(sl.lattice.is_orthomodular());
  CHECK(support::isomorphic(sl.lattice, OrthoLattice::mo(2)));

  // Generator bookkeeping points at the generating rays.
  REQUIRE(sl.generator_index.size() == 2);
  CHECK(approx_equal(sl.carrier[sl.generator_index[0]],
                     Subspace::span(2, {qubit_ray("z+")})));
  CHECK(approx_equal(sl.carrier[sl.generator_index[1]],
                     Subspace::span(2, {qubit_ray("x+")})));
}

TEST_CASE("as_lattice closure in C^3: two generic rays give 12 elements",
          "[subspace]") {
  SubspaceLattice sl = as_lattice(3, {random_subspace(3, 1, 201), random_subspace(3, 1, 202)});
  CHECK(sl.lattice.size() == 12);
  CHECK(sl.lattice.is_orthomodular());
  // Commensurable in the finite lattice iff the projectors commute.
  for (std::size_t i : sl.generator_index)
    for (std::size_t j : sl.generator_index)
      CHECK(sl.lattice.commensurable(i, j) == commutes(sl.carrier[i], sl.carrier[j]));
}

TEST_CASE("as_lattice enforces the element budget", "[subspace]") {
  CHECK_THROWS_AS(as_lattice(3, {random_subspace(3, 1, 201), random_subspace(3, 1, 202)}, 8),
                  Error);
}
