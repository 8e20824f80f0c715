#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qlw/common.hpp"
#include "qlw/subspace.hpp"

namespace qlw {

class EffectError : public Error {
 public:
  explicit EffectError(const std::string& message) : Error(message) {}
};

// Positive operator with spectrum in [0,1]. Validation clamps eigenvalues
// within `tol` of the interval back onto it and reconstructs the matrix, so
// downstream arithmetic (square roots, products) never sees a stray negative
// eigenvalue. The square root is computed once and cached.
class Effect {
 public:
  static Effect make(const Eigen::MatrixXcd& m, double tol = kDefaultTol) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw EffectError("effect matrix must be square and non-empty");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw EffectError("effect matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam[i] < -tol)
        throw EffectError("effect eigenvalue " + std::to_string(lam[i]) + " below 0");
      if (lam[i] > 1.0 + tol)
        throw EffectError("effect eigenvalue " + std::to_string(lam[i]) + " above 1");
      lam[i] = std::min(1.0, std::max(0.0, lam[i]));
    }
    Effect e;
    const Eigen::MatrixXcd& u = es.eigenvectors();
    e.matrix_ = u * lam.asDiagonal() * u.adjoint();
    e.sqrt_ = u * lam.cwiseSqrt().asDiagonal() * u.adjoint();
    return e;
  }

  static Effect identity(Eigen::Index d) {
    return make(Eigen::MatrixXcd::Identity(d, d));
  }

  static Effect from_projector(const Subspace& s, double tol = kDefaultTol) {
    return make(s.projector(), tol);
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::MatrixXcd& sqrt() const { return sqrt_; }

  Effect complement(double tol = kDefaultTol) const {
    return make(Eigen::MatrixXcd::Identity(dim(), dim()) - matrix_, tol);
  }

 private:
  Effect() = default;
  Eigen::MatrixXcd matrix_, sqrt_;
};

// Sequential composition sqrt(E) * F * sqrt(E): first measure E unsharply,
// then F on the updated state. Always a valid effect.
inline Effect sequential_product(const Effect& e, const Effect& f,
                                 double tol = kDefaultTol) {
  if (e.dim() != f.dim())
    throw EffectError("sequential product of effects with different dimensions");
  return Effect::make(e.sqrt() * f.matrix() * e.sqrt(), tol);
}

struct PovmOutcome {
  std::string label;
  Effect effect;
};

// Labeled effects summing to the identity.
class Povm {
 public:
  static Povm make(std::vector<PovmOutcome> outcomes, double tol = kDefaultTol) {
    if (outcomes.empty()) throw EffectError("POVM needs at least one outcome");
    const Eigen::Index d = outcomes.front().effect.dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& o : outcomes) {
      if (o.effect.dim() != d)
        throw EffectError("POVM outcome \"" + o.label + "\" has mismatched dimension");
      sum += o.effect.matrix();
    }
    double dev = (sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > tol)
      throw EffectError("POVM effects sum deviates from identity by " +
                        std::to_string(dev));
    Povm p;
    p.outcomes_ = std::move(outcomes);
    return p;
  }

  const std::vector<PovmOutcome>& outcomes() const { return outcomes_; }
  Eigen::Index dim() const { return outcomes_.front().effect.dim(); }
  std::size_t size() const { return outcomes_.size(); }

 private:
  Povm() = default;
  std::vector<PovmOutcome> outcomes_;
};

inline const std::array<Eigen::Matrix2cd, 3>& pauli_matrices() {
  static const std::array<Eigen::Matrix2cd, 3> sigma = [] {
    std::array<Eigen::Matrix2cd, 3> s;
    const std::complex<double> i(0.0, 1.0);
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -i, i, 0;
    s[2] << 1, 0, 0, -1;
    return s;
  }();
  return sigma;
}

inline Eigen::Matrix2cd bloch_dot_sigma(const Eigen::Vector3d& a) {
  const auto& sigma = pauli_matrices();
  return a[0] * sigma[0] + a[1] * sigma[1] + a[2] * sigma[2];
}

// Qubit effect E = (bias*I + bloch.sigma)/2. Valid exactly when
// |bloch| <= min(bias, 2-bias); bias 1 is the unbiased case, where |bloch|
// interpolates between the trivial effect I/2 (0) and a sharp projector (1).
struct QubitEffect {
  double bias = 1.0;
  Eigen::Vector3d bloch = Eigen::Vector3d::Zero();

  static QubitEffect make(const Eigen::Vector3d& a, double gamma = 1.0,
                          double tol = kDefaultTol) {
    const double cap = std::min(gamma, 2.0 - gamma);
    if (a.norm() > cap + tol)
      throw EffectError("qubit effect with |bloch| = " + std::to_string(a.norm()) +
                        " exceeds min(bias, 2-bias) = " + std::to_string(cap));
    return QubitEffect{gamma, a};
  }

  bool unbiased(double tol = kDefaultTol) const { return std::abs(bias - 1.0) <= tol; }

  Effect effect(double tol = kDefaultTol) const {
    Eigen::Matrix2cd m =
        0.5 * (bias * Eigen::Matrix2cd::Identity() + bloch_dot_sigma(bloch));
    return Effect::make(m, tol);
  }
};

inline QubitEffect unsharp_qubit(const Eigen::Vector3d& a, double gamma = 1.0,
                                 double tol = kDefaultTol) {
  return QubitEffect::make(a, gamma, tol);
}

// Joint POVM witnessing coexistence of two unbiased qubit effects: four
// outcomes G(mu,nu) = [(1 + mu*nu*c)I + (mu*a + nu*b).sigma]/4 whose margins
// over nu and mu reproduce the effects of +-a and +-b respectively.
struct CoexistenceCertificate {
  double c = 0.0;
  // Outcomes in the fixed order (+,+), (+,-), (-,+), (-,-).
  std::array<std::pair<int, int>, 4> signs{{{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}}};
  std::vector<Effect> outcomes;
};

struct CoexistenceVerdict {
  bool coexistent = false;
  double sum_norm = 0.0;  // |a+b| + |a-b|; coexistent iff <= 2
  std::optional<CoexistenceCertificate> certificate;
};

// Busch criterion for unbiased qubit effects: E_a and E_b admit a joint
// observable iff |a+b| + |a-b| <= 2. On success the certificate picks
// c = (|a+b| - |a-b|)/2, which makes all four joint outcomes positive:
// the spectrum of 4*G(mu,nu) is 1 + mu*nu*c +- |mu*a + nu*b|.
inline CoexistenceVerdict coexistent(const QubitEffect& e1, const QubitEffect& e2,
                                     double tol = kDefaultTol) {
  if (!e1.unbiased(tol) || !e2.unbiased(tol))
    throw EffectError("coexistence criterion requires unbiased effects (bias = 1)");
  e1.effect(tol);  // revalidate |a| <= 1
  e2.effect(tol);
  const Eigen::Vector3d& a = e1.bloch;
  const Eigen::Vector3d& b = e2.bloch;
  const double plus = (a + b).norm();
  const double minus = (a - b).norm();

  CoexistenceVerdict v;
  v.sum_norm = plus + minus;
  v.coexistent = v.sum_norm <= 2.0 + tol;
  if (!v.coexistent) return v;

  CoexistenceCertificate cert;
  cert.c = 0.5 * (plus - minus);
  cert.outcomes.reserve(cert.signs.size());
  for (const auto& [mu, nu] : cert.signs) {
    Eigen::Matrix2cd g = 0.25 * ((1.0 + mu * nu * cert.c) * Eigen::Matrix2cd::Identity() +
                                 bloch_dot_sigma(mu * a + nu * b));
    cert.outcomes.push_back(Effect::make(g, tol));
  }
  v.certificate = std::move(cert);
  return v;
}

}  // namespace qlw
