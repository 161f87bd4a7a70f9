#pragma once

// SU(2)-invariant R-matrices for arbitrary (half-)integer spin pairs.
//
// Everything descends from the fundamental R^(1/2,1/2)(u) = u + eta*P by
// fusion: the quantum space of R^(1/2,s) is assembled from 2s fundamental
// sites compressed through the rank-(2s+1) symmetrizer, and the auxiliary
// space of R^(j,s) from 2j shifted copies of R^(1/2,s).  The spin-(s,s)
// matrix also has a closed projector-sum form used as an independent
// cross-check of the fused construction.
//
// Conventions: R^(a,b) acts on V_a (x) V_b with V_a the leftmost kron
// factor; magnetic bases are ordered highest weight first (spin.hpp).

#include "openspin/linalg.hpp"
#include "openspin/spin.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace openspin {

// Permutation operator on C^2 (x) C^2.
inline CMatrix perm_half() {
  CMatrix p = CMatrix::Zero(4, 4);
  p(0, 0) = p(3, 3) = 1.0;
  p(1, 2) = p(2, 1) = 1.0;
  return p;
}

// Fundamental rational R-matrix R(u) = u + eta P.
inline CMatrix r_half_half(Complex u, Complex eta) {
  return u * identity(4) + eta * perm_half();
}

// Symmetrizer on (C^2)^(x m), built as the ordered product
//   P+ = (1/m!) * prod_{k=1..m} ( sum_{l=1..k} P_{l,k} ),
// increasing k left to right (P_{k,k} = id).  Equals the projector onto the
// spin-m/2 top channel.
inline CMatrix sym_projector(int m) {
  if (m < 1) throw std::invalid_argument("sym_projector: need m >= 1");
  const std::vector<Eigen::Index> dims(m, 2);
  const Eigen::Index dim = Eigen::Index(1) << m;
  CMatrix acc = identity(dim);
  double fact = 1.0;
  for (int k = 2; k <= m; ++k) {
    CMatrix sum = identity(dim);  // l = k term
    for (int l = 1; l < k; ++l)
      sum += embed_pair(perm_half(), dims, l - 1, k - 1);
    acc = acc * sum;
    fact *= k;
  }
  return acc / fact;
}

// Isometry V: C^(m+1) -> (C^2)^(x m) onto the symmetric subspace.  Column k
// is the normalized sum over basis states with k down-spins, so V^T V = id
// and V V^T = sym_projector(m); conjugation carries sum_i sigma^z_i / 2 to
// the spin-m/2 S^z.
inline CMatrix symmetric_isometry(int m) {
  if (m < 1) throw std::invalid_argument("symmetric_isometry: need m >= 1");
  const Eigen::Index dim = Eigen::Index(1) << m;
  CMatrix v = CMatrix::Zero(dim, m + 1);
  std::vector<double> binom(m + 1, 1.0);
  for (int k = 1; k <= m; ++k) binom[k] = binom[k - 1] * (m - k + 1) / k;
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    int downs = 0;  // bit 1 on slot i means down-spin at tensor slot i
    for (int i = 0; i < m; ++i) downs += (idx >> i) & 1;
    v(idx, downs) = 1.0 / std::sqrt(binom[downs]);
  }
  return v;
}

// R^(1/2,s)(u) = u + eta/2 + eta sigma.S, written in auxiliary 2x2 blocks
//   [ u + eta/2 + eta S^z      eta S^-            ]
//   [ eta S^+                  u + eta/2 - eta S^z ].
inline CMatrix r_half_s_direct(Complex u, Complex eta, int twos) {
  const SpinMatrices s = spin_matrices(twos);
  const int d = twos + 1;
  CMatrix r(2 * d, 2 * d);
  const CMatrix diag = (u + 0.5 * eta) * identity(d);
  r.topLeftCorner(d, d) = diag + eta * s.sz;
  r.topRightCorner(d, d) = eta * s.sm;
  r.bottomLeftCorner(d, d) = eta * s.sp;
  r.bottomRightCorner(d, d) = diag - eta * s.sz;
  return r;
}

// Quantum-space fusion: assemble R^(1/2,s) from 2s fundamental R-matrices,
//   R^(1/2,s)(u) = [prod_{k=1..2s-1} (u + (1/2 - s + k) eta)]^(-1)
//                  * P+ prod_{k=1..2s} R_{a,k}(u + (k - 1/2 - s) eta) P+,
// (k increasing left to right), compressed to the (2s+1)-dim block.
// Throws when u sits on one of the normalization zeros.
inline CMatrix r_half_s_fused(Complex u, Complex eta, int twos) {
  const int m = twos;
  const double s = 0.5 * twos;
  Complex norm(1.0);
  for (int k = 1; k <= m - 1; ++k) norm *= u + (0.5 - s + k) * eta;
  if (std::abs(norm) < 1e-12 * std::pow(std::abs(eta), m - 1))
    throw std::domain_error("r_half_s_fused: u hits a fusion normalization zero");

  std::vector<Eigen::Index> dims(m + 1, 2);  // slot 0: auxiliary, 1..m: quantum
  CMatrix prod = identity(Eigen::Index(2) << m);
  for (int k = 1; k <= m; ++k) {
    const Complex arg = u + (k - 0.5 - s) * eta;
    prod = prod * embed_pair(r_half_half(arg, eta), dims, 0, k);
  }
  const CMatrix proj = kron(identity(2), sym_projector(m));
  const CMatrix w = kron(identity(2), symmetric_isometry(m));
  return (w.transpose() * (proj * prod * proj) * w) / norm;
}

// Auxiliary-space fusion: R^(j,s) from 2j copies of R^(1/2,s),
//   R^(j,s)(u) = P+ prod_{k=1..2j} R^(1/2,s)_{k,q}(u + (k - j - 1/2) eta) P+
// (k increasing left to right, symmetrizer over the 2j auxiliary slots, no
// scalar normalization), compressed to the (2j+1)-dim auxiliary block.
inline CMatrix r_j_s_fused(Complex u, Complex eta, int twoj, int twos) {
  const int m = twoj;
  const double j = 0.5 * twoj;
  const Eigen::Index ds = twos + 1;
  std::vector<Eigen::Index> dims(m + 1, 2);
  dims[m] = ds;  // slots 0..m-1: auxiliary halves, slot m: quantum
  Eigen::Index dim = ds * (Eigen::Index(1) << m);
  CMatrix prod = identity(dim);
  for (int k = 1; k <= m; ++k) {
    const Complex arg = u + (k - j - 0.5) * eta;
    prod = prod * embed_pair(r_half_s_direct(arg, eta, twos), dims, k - 1, m);
  }
  const CMatrix proj = kron(sym_projector(m), identity(ds));
  const CMatrix w = kron(symmetric_isometry(m), identity(ds));
  return w.transpose() * (proj * prod * proj) * w;
}

// Projector onto the total-spin-l channel of V_s (x) V_s,
//   P^(l) = prod_{j != l} [ (S_1 + S_2)^2 - j(j+1) ] / [ l(l+1) - j(j+1) ].
inline CMatrix projector_spin_l(int twos, int l) {
  if (l < 0 || l > twos) throw std::invalid_argument("projector_spin_l: l out of range");
  const SpinMatrices s = spin_matrices(twos);
  const Eigen::Index d = twos + 1;
  const CMatrix sz = kron(s.sz, identity(d)) + kron(identity(d), s.sz);
  const CMatrix sp = kron(s.sp, identity(d)) + kron(identity(d), s.sp);
  const CMatrix sm = kron(s.sm, identity(d)) + kron(identity(d), s.sm);
  const CMatrix total = sz * sz + 0.5 * (sp * sm + sm * sp);  // (S_1+S_2)^2
  CMatrix p = identity(d * d);
  for (int jj = 0; jj <= twos; ++jj) {
    if (jj == l) continue;
    p = p * (total - double(jj * (jj + 1)) * identity(d * d)) /
        double(l * (l + 1) - jj * (jj + 1));
  }
  return p;
}

// Closed form of the spin-(s,s) R-matrix: with the l-channel coefficient
// written pole-free as
//   c_l(u) = prod_{k=1..l} (u + k eta) * prod_{j=l+1..2s} (u - j eta),
// R^(s,s)(u) = sum_l c_l(u) P^(l).  At u=0 this reduces to (2s)! eta^(2s) P
// and at u=-eta to a multiple of the singlet projector.
inline CMatrix r_s_s_direct(Complex u, Complex eta, int twos) {
  const Eigen::Index d = twos + 1;
  CMatrix r = CMatrix::Zero(d * d, d * d);
  for (int l = 0; l <= twos; ++l) {
    Complex c(1.0);
    for (int k = 1; k <= l; ++k) c *= u + double(k) * eta;
    for (int j = l + 1; j <= twos; ++j) c *= u - double(j) * eta;
    r += c * projector_spin_l(twos, l);
  }
  return r;
}

// General dispatch: R^(a,b)(u) acting on V_a (x) V_b.  twoa == 1 takes the
// direct 2(2s+1)-dim form, equal spins the closed projector form (equal to
// the fused product, see tests); anything else goes through auxiliary fusion.
inline CMatrix r_matrix(Complex u, Complex eta, int twoa, int twob) {
  if (twoa == 1) return r_half_s_direct(u, eta, twob);
  if (twoa == twob) return r_s_s_direct(u, eta, twoa);
  return r_j_s_fused(u, eta, twoa, twob);
}

// Exchange the two tensor factors of an operator on V_a (x) V_b, giving the
// same abstract map on V_b (x) V_a.  Used to realize R^(b,a) acting with
// the quantum space on the left: R^(b,a)_{21}(u) = Flip R^(a,b)_{12}(u) Flip.
inline CMatrix exchange_factors(const CMatrix& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw std::invalid_argument("exchange_factors: dim mismatch");
  CMatrix out(db * da, db * da);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < db; ++b)
      for (Eigen::Index ap = 0; ap < da; ++ap)
        for (Eigen::Index bp = 0; bp < db; ++bp)
          out(b * da + a, bp * da + ap) = m(a * db + b, ap * db + bp);
  return out;
}

// Relative Yang-Baxter residual on V_j1 (x) V_j2 (x) V_j3:
//   R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v).
inline double check_ybe(Complex u, Complex v, Complex eta, int twoj1, int twoj2,
                        int twoj3) {
  const std::vector<Eigen::Index> dims{twoj1 + 1, twoj2 + 1, twoj3 + 1};
  const CMatrix r12 = embed_pair(r_matrix(u - v, eta, twoj1, twoj2), dims, 0, 1);
  const CMatrix r13 = embed_pair(r_matrix(u, eta, twoj1, twoj3), dims, 0, 2);
  const CMatrix r23 = embed_pair(r_matrix(v, eta, twoj2, twoj3), dims, 1, 2);
  const CMatrix lhs = r12 * r13 * r23;
  const CMatrix rhs = r23 * r13 * r12;
  return (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), 1e-300});
}

}  // namespace openspin
