#pragma once

// Inhomogeneous T-Q parametrization of the fundamental transfer-matrix
// spectrum: the dressing functions a, d, F and the inhomogeneity constant
// c, the Q-function built from a Bethe root set over the symmetric variable
// x = u(u + eta), pole-aware evaluation of the parametrized eigenvalue, and
// scale-invariant residuals of the Bethe equations.

#include "openspin/transfer.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace openspin {

class TQFunctions {
 public:
  explicit TQFunctions(ModelParams params) : params_(std::move(params)) {
    params_.validate();
    root_xi_ = std::sqrt(1.0 + params_.boundary.xi * params_.boundary.xi);
    root_vs_ =
        std::sqrt(1.0 + params_.boundary.varsigma * params_.boundary.varsigma);
  }

  const ModelParams& params() const { return params_; }

  // Number of Bethe roots carried by each eigenvalue branch: 2sN.  It is
  // forced by degree matching, since the inhomogeneous term c u(u+eta) F(u)
  // must have the same degree as Lambda(u) Q(u).
  int root_count() const { return params_.spin.twos * params_.sites; }

  Complex a_of(Complex u) const {
    const Complex eta = params_.eta;
    if (std::abs(2.0 * u + eta) < 1e-12 * std::abs(eta))
      throw std::domain_error("TQFunctions::a_of: pole at u = -eta/2");
    Complex v = (2.0 * u + 2.0 * eta) / (2.0 * u + eta) *
                (root_xi_ * u + params_.boundary.q) *
                (root_vs_ * u + params_.boundary.p);
    const Complex shift = (0.5 + 0.5 * params_.spin.twos) * eta;
    for (Complex th : params_.theta) v *= (u - th + shift) * (u + th + shift);
    return v;
  }

  Complex d_of(Complex u) const { return a_of(-u - params_.eta); }

  Complex f_of(Complex u) const {
    Complex v = 1.0;
    for (Complex th : params_.theta)
      for (int k = 0; k <= params_.spin.twos; ++k) {
        const Complex shift =
            (0.5 - 0.5 * params_.spin.twos + double(k)) * params_.eta;
        v *= (u - th + shift) * (u + th + shift);
      }
    return v;
  }

  Complex c_const() const {
    return 2.0 * (params_.boundary.varsigma * params_.boundary.xi - 1.0 -
                  root_vs_ * root_xi_);
  }

  // Q(u) = prod_j (u - lambda_j)(u + lambda_j + eta) = prod_j (x - x_j)
  // with x = u(u + eta) and x_j = lambda_j(lambda_j + eta); manifestly
  // invariant under u -> -u - eta.
  Complex q_of(Complex u, const std::vector<Complex>& roots) const {
    const Complex x = u * (u + params_.eta);
    Complex v = 1.0;
    for (Complex lam : roots) v *= x - lam * (lam + params_.eta);
    return v;
  }

  // The parametrized eigenvalue.  Throws when u collides with a zero of Q;
  // at a Bethe root the meaningful quantity is the equation residual.
  Complex lambda_of(Complex u, const std::vector<Complex>& roots) const {
    const Complex eta = params_.eta;
    const Complex x = u * (u + eta);
    Complex q = 1.0;
    for (Complex lam : roots) {
      const Complex xj = lam * (lam + eta);
      if (std::abs(x - xj) < 1e-10 * (1.0 + std::abs(x) + std::abs(xj)))
        throw std::domain_error("TQFunctions::lambda_of: u is a zero of Q");
      q *= x - xj;
    }
    return (a_of(u) * q_of(u - eta, roots) + d_of(u) * q_of(u + eta, roots) +
            c_const() * u * (u + eta) * f_of(u)) /
           q;
  }

  // Raw value of the j-th Bethe equation at the given root set.
  Complex bae_value(const std::vector<Complex>& roots, int j) const {
    const Complex lam = roots.at(j), eta = params_.eta;
    return a_of(lam) * q_of(lam - eta, roots) +
           d_of(lam) * q_of(lam + eta, roots) +
           c_const() * lam * (lam + eta) * f_of(lam);
  }

  // Scale-invariant residual: the modulus of the three-term sum divided by
  // the modulus of its largest term.
  double bae_residual(const std::vector<Complex>& roots, int j) const {
    const Complex lam = roots.at(j), eta = params_.eta;
    const Complex t1 = a_of(lam) * q_of(lam - eta, roots);
    const Complex t2 = d_of(lam) * q_of(lam + eta, roots);
    const Complex t3 = c_const() * lam * (lam + eta) * f_of(lam);
    const double scale =
        std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
    return std::abs(t1 + t2 + t3) / scale;
  }

  double bae_residual_max(const std::vector<Complex>& roots) const {
    double worst = 0.0;
    for (int j = 0; j < int(roots.size()); ++j)
      worst = std::max(worst, bae_residual(roots, j));
    return worst;
  }

 private:
  ModelParams params_;
  Complex root_xi_, root_vs_;
};

}  // namespace openspin
