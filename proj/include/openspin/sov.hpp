#pragma once

// Separated-variables machinery.  The kernel of the gauged site block
// r~21 seeds a ladder of local reference states; their tensor products
// give a pair of product states on which the gauged one-row blocks act
// diagonally.  Repeated application of the double-row diagonal blocks at
// the shifted inhomogeneity grids generates left and right families of
// common eigenstates of the commuting operator family script-C, labelled
// by a multi-index alpha in {0..2s}^N, with closed-form eigenvalues and
// closed-form overlaps against the vacuum and against transfer-matrix
// eigenstates.

#include "openspin/gauge.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace openspin {

// The 2s+1 local ladder states: the first is annihilated by r~21, each
// subsequent one is the r~12 image of its predecessor, normalized to unit
// bilinear norm.  The resulting set is bilinearly orthonormal.
inline std::vector<CVector> reference_ladder(Complex eta, int twos, Complex xi) {
  const Complex root = std::sqrt(1.0 + xi * xi);
  CVector seed = CVector::Zero(twos + 1);
  double falling = 1.0, factorial = 1.0;
  for (int j = 0; j <= twos; ++j) {
    if (j > 0) {
      falling *= double(twos - j + 1);
      factorial *= double(j);
    }
    // Components against the S^z basis (highest weight first): the state
    // annihilated by r~21 has weight-(s-j) coefficient
    // sqrt(2s (2s-1) ... (2s-j+1)) / (sqrt(j!) (root+1)^(j-2)) xi^j.
    seed(twos - j) = std::sqrt(falling) / std::sqrt(factorial) *
                     std::pow(root + 1.0, Complex(2.0 - double(j))) *
                     std::pow(xi, double(j));
  }
  const AuxBlocks site = gauged_site_r(Complex(0.0), eta, twos, xi);

  std::vector<CVector> ladder;
  ladder.reserve(twos + 1);
  CVector cur = seed;
  for (int a = 0; a <= twos; ++a) {
    if (a > 0) cur = site.b * cur;
    const Complex norm2 = bilinear(cur, cur);
    if (std::abs(norm2) < 1e-24)
      throw std::runtime_error("reference_ladder: isotropic ladder state");
    cur /= std::sqrt(norm2);
    ladder.push_back(cur);
  }
  return ladder;
}

class SovBasis {
 public:
  explicit SovBasis(ModelParams params)
      : params_(std::move(params)), gauged_(params_) {
    params_.require_generic_theta();
    const int twos = params_.spin.twos;
    const int sites = params_.sites;

    beta_.resize(sites);
    beta_prime_.resize(sites);
    for (int l = 0; l < sites; ++l) {
      beta_[l] = params_.theta[l] - (0.5 - 0.5 * twos) * params_.eta;
      beta_prime_[l] = params_.theta[l] - (0.5 + 0.5 * twos) * params_.eta;
    }

    const std::vector<CVector> ladder =
        reference_ladder(params_.eta, twos, params_.boundary.xi);
    omega_ = ladder.front();
    omega_bar_ = ladder.back();
    for (int n = 1; n < sites; ++n) {
      omega_ = kron(CMatrix(omega_), CMatrix(ladder.front())).col(0).eval();
      omega_bar_ = kron(CMatrix(omega_bar_), CMatrix(ladder.back())).col(0).eval();
    }

    // Precompute the diagonal double-row blocks on the two shifted grids.
    raising_.assign(sites, {});
    lowering_.assign(sites, {});
    for (int j = 0; j < sites; ++j) {
      raising_[j].reserve(twos);
      lowering_[j].reserve(twos);
      for (int k = 0; k < twos; ++k) {
        raising_[j].push_back(
            gauged_.double_row(beta_[j] - double(k) * params_.eta).a);
        lowering_[j].push_back(
            gauged_
                .double_row(-beta_prime_[j] - double(k + 1) * params_.eta)
                .d.transpose()
                .eval());
      }
    }

    // Build the full right and left families.
    right_.resize(size());
    left_.resize(size());
    for (int idx = 0; idx < size(); ++idx) {
      const std::vector<int> al = alpha(idx);
      CVector v = omega_, w = omega_bar_;
      for (int j = 0; j < sites; ++j)
        for (int k = 0; k < al[j]; ++k) {
          v = raising_[j][k] * v;
          w = lowering_[j][k] * w;
        }
      right_[idx] = v;
      left_[idx] = w;
    }
  }

  const ModelParams& params() const { return params_; }
  const GaugedTransfer& gauged() const { return gauged_; }

  int size() const {
    int total = 1;
    for (int n = 0; n < params_.sites; ++n) total *= params_.spin.twos + 1;
    return total;
  }

  // Multi-index enumeration, last site fastest.
  std::vector<int> alpha(int idx) const {
    std::vector<int> al(params_.sites);
    for (int j = params_.sites - 1; j >= 0; --j) {
      al[j] = idx % (params_.spin.twos + 1);
      idx /= params_.spin.twos + 1;
    }
    return al;
  }

  int index(const std::vector<int>& al) const {
    int idx = 0;
    for (int j = 0; j < params_.sites; ++j) idx = idx * (params_.spin.twos + 1) + al[j];
    return idx;
  }

  // Index of the complementary multi-index {2s - alpha_j}: the unique left
  // state that pairs non-trivially with the right state at idx.
  int complement(int idx) const {
    std::vector<int> al = alpha(idx);
    for (int& a : al) a = params_.spin.twos - a;
    return index(al);
  }

  const CVector& omega() const { return omega_; }
  const CVector& omega_bar() const { return omega_bar_; }
  Complex beta(int j) const { return beta_.at(j); }
  Complex beta_prime(int j) const { return beta_prime_.at(j); }

  // Eigenvalues of the gauged one-row diagonal blocks on the reference
  // states: a(u) = prod_l (u - beta'_l) and d(u) = prod_l (u - beta_l).
  Complex a_of(Complex u) const { return reference_a(params_, u); }
  Complex d_of(Complex u) const { return reference_d(params_, u); }

  const CVector& right(int idx) const { return right_.at(idx); }
  const CVector& left(int idx) const { return left_.at(idx); }

  // Eigenvalue of script-C(u) on the right state at idx.  Since
  // d(u) = prod_l (u - beta_l), the raw product of shifted ratios against
  // d(u) d(-u-eta) collapses to the pole-free polynomial used here.
  Complex c_eigen_right(Complex u, int idx) const {
    const std::vector<int> al = alpha(idx);
    const Complex eta = params_.eta;
    Complex h = gauged_.k_minus(u)(1, 0);
    for (int j = 0; j < params_.sites; ++j)
      h *= (u - beta_[j] + double(al[j]) * eta) *
           (u + beta_[j] + eta - double(al[j]) * eta);
    return h;
  }

  // Eigenvalue of script-C(u) on the left state at idx.  Equals
  // c_eigen_right at the complementary multi-index {2s - alpha_j}, which is
  // why only complementary pairs of the two families overlap.
  Complex c_eigen_left(Complex u, int idx) const {
    const std::vector<int> al = alpha(idx);
    const Complex eta = params_.eta;
    Complex h = gauged_.k_minus(u)(1, 0);
    for (int j = 0; j < params_.sites; ++j)
      h *= (u - beta_prime_[j] - double(al[j]) * eta) *
           (u + beta_prime_[j] + eta + double(al[j]) * eta);
    return h;
  }

  // <left(complement(idx)) | right(idx)>, the only nonvanishing pairing of
  // the two families.
  Complex pairing(int idx) const {
    return bilinear(left_.at(complement(idx)), right_.at(idx));
  }

  // Closed form for <0|right(idx)> / <0|Omega> where <0| is the product of
  // local highest-weight states.
  Complex vacuum_overlap_ratio(int idx) const {
    const std::vector<int> al = alpha(idx);
    const Complex eta = params_.eta, p = params_.boundary.p;
    const double sign = (params_.sites % 2 == 0) ? 1.0 : -1.0;
    Complex f = 1.0;
    for (int j = 0; j < params_.sites; ++j)
      for (int k = 0; k < al[j]; ++k) {
        const Complex b = beta_[j] - double(k) * eta;
        f *= sign * (p + b) * a_of(b) * d_of(-b - eta);
      }
    return f;
  }

  // Closed form for <Psi|right(idx)> / <Psi|Omega> where <Psi| is a left
  // transfer-matrix eigenstate whose eigenvalue is carried by the
  // Q-function qfun.
  Complex eigenstate_overlap_ratio(
      int idx, const std::function<Complex(Complex)>& qfun) const {
    const std::vector<int> al = alpha(idx);
    const Complex eta = params_.eta, p = params_.boundary.p;
    const double sign = (params_.sites % 2 == 0) ? 1.0 : -1.0;
    Complex f = 1.0;
    for (int j = 0; j < params_.sites; ++j)
      for (int k = 0; k < al[j]; ++k) {
        const Complex b = beta_[j] - double(k) * eta;
        f *= sign * (p + b) * a_of(b) * d_of(-b - eta) * qfun(b - eta) / qfun(b);
      }
    return f;
  }

 private:
  ModelParams params_;
  GaugedTransfer gauged_;
  std::vector<Complex> beta_, beta_prime_;
  CVector omega_, omega_bar_;
  std::vector<std::vector<CMatrix>> raising_, lowering_;
  std::vector<CVector> right_, left_;
};

}  // namespace openspin
