#pragma once

// Gauge transformation diagonalizing the upper boundary matrix.  A 2x2
// similarity transform U0 acting on the auxiliary space turns K^+(u) into
// diag(q + sqrt(1+xi^2)(u+eta), q - sqrt(1+xi^2)(u+eta)) simultaneously
// for all u, at the price of making K^-(u) non-diagonal.  In the gauged
// frame the fundamental transfer matrix is a two-term combination of the
// diagonal double-row blocks, which is what every separated-variables
// construction downstream consumes.  Only varsigma = 0 boundaries admit
// this frame; xi must be nonzero for U0 to be invertible.

#include "openspin/transfer.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace openspin {

// Auxiliary-space blocks of the gauged site matrix U0 R^(1/2,s)(u) U0^-1.
// The off-diagonal blocks are independent of u and expressible through the
// site spin operators; they generate the reference-state ladder.
inline AuxBlocks gauged_site_r(Complex u, Complex eta, int twos, Complex xi) {
  if (std::abs(xi) == 0.0)
    throw std::invalid_argument("gauged_site_r: xi must be nonzero");
  const Complex root = std::sqrt(1.0 + xi * xi);
  CMatrix u0(2, 2), u0inv(2, 2);
  u0 << root - 1.0, xi, -root - 1.0, xi;
  const Complex det = 2.0 * xi * root;
  u0inv << xi / det, -xi / det, (root + 1.0) / det, (root - 1.0) / det;
  const Eigen::Index dq = twos + 1;
  const CMatrix r = r_half_s_direct(u, eta, twos);
  const CMatrix gauged = kron(u0, identity(dq)) * r * kron(u0inv, identity(dq));
  return aux_blocks(gauged);
}

// Eigenvalue functions of the gauged one-row diagonal blocks on the product
// reference states: a(u) = prod_l (u - theta_l + (1/2 + s) eta) and
// d(u) = prod_l (u - theta_l + (1/2 - s) eta).  Well defined for any theta
// grid, including the homogeneous one.
inline Complex reference_a(const ModelParams& pr, Complex u) {
  const Complex shift = (0.5 + 0.5 * pr.spin.twos) * pr.eta;
  Complex v = 1.0;
  for (Complex th : pr.theta) v *= (u - th + shift);
  return v;
}

inline Complex reference_d(const ModelParams& pr, Complex u) {
  const Complex shift = (0.5 - 0.5 * pr.spin.twos) * pr.eta;
  Complex v = 1.0;
  for (Complex th : pr.theta) v *= (u - th + shift);
  return v;
}

// The gauged frame over a fixed parameter set: gauged boundary matrices,
// one-row blocks (A~, B~, C~, D~), double-row blocks (script A~ ... D~) and
// the transfer matrix rebuilt from them.
class GaugedTransfer {
 public:
  explicit GaugedTransfer(ModelParams params)
      : params_(std::move(params)), fam_(params_, 1) {
    params_.validate();
    if (std::abs(params_.boundary.varsigma) != 0.0)
      throw std::invalid_argument(
          "GaugedTransfer: the gauge frame needs varsigma == 0");
    if (std::abs(params_.boundary.xi) == 0.0)
      throw std::invalid_argument("GaugedTransfer: the gauge frame needs xi != 0");
    const Complex xi = params_.boundary.xi;
    root_ = std::sqrt(1.0 + xi * xi);
    u0_.resize(2, 2);
    u0_ << root_ - 1.0, xi, -root_ - 1.0, xi;
    const Complex det = 2.0 * xi * root_;
    u0inv_.resize(2, 2);
    u0inv_ << xi / det, -xi / det, (root_ + 1.0) / det, (root_ - 1.0) / det;
  }

  const ModelParams& params() const { return params_; }
  const CMatrix& u0() const { return u0_; }
  const CMatrix& u0_inverse() const { return u0inv_; }
  Complex root() const { return root_; }

  // Diagonal entries of the gauged upper boundary matrix.
  Complex k_plus_11(Complex u) const {
    return params_.boundary.q + root_ * (u + params_.eta);
  }
  Complex k_plus_22(Complex u) const {
    return params_.boundary.q - root_ * (u + params_.eta);
  }

  // Gauged lower boundary matrix U0 K^-(u) U0^-1 (no longer diagonal).
  CMatrix k_minus(Complex u) const {
    return u0_ * k_minus_half(u, params_.boundary.p, Complex(0.0)) * u0inv_;
  }

  // One-row blocks {A~, B~; C~, D~} of U0 T(u) U0^-1.
  AuxBlocks one_row(Complex u) const { return aux_blocks(conj_aux(fam_.monodromy_T(u))); }

  // Blocks of the gauged second monodromy U0 That(u) U0^-1.
  AuxBlocks one_row_hat(Complex u) const {
    return aux_blocks(conj_aux(fam_.monodromy_That(u)));
  }

  // Double-row blocks {script A~, B~; C~, D~} of U0 T K^- That U0^-1.
  AuxBlocks double_row(Complex u) const {
    return aux_blocks(conj_aux(fam_.double_row_U(u)));
  }

  // Shifted diagonal combination D-bar(u) = D~(u) - eta/(2u+eta) A~(u) of
  // the double-row blocks; the pair (A~, D-bar) diagonalizes the exchange
  // algebra used by the scalar products.
  CMatrix dbar(Complex u) const {
    const Complex eta = params_.eta;
    if (std::abs(2.0 * u + eta) < 1e-12)
      throw std::domain_error("dbar: pole at 2u = -eta");
    const AuxBlocks w = double_row(u);
    return w.d - (eta / (2.0 * u + eta)) * w.a;
  }

  // t(u) = K~+_11(u) script-A~(u) + K~+_22(u) script-D~(u).
  CMatrix transfer(Complex u) const {
    const AuxBlocks w = double_row(u);
    return k_plus_11(u) * w.a + k_plus_22(u) * w.d;
  }

 private:
  CMatrix conj_aux(const CMatrix& m) const {
    const CMatrix left = kron(u0_, identity(params_.chain_dim()));
    const CMatrix right = kron(u0inv_, identity(params_.chain_dim()));
    return left * m * right;
  }

  ModelParams params_;
  TransferFamily fam_;
  Complex root_;
  CMatrix u0_, u0inv_;
};

}  // namespace openspin
