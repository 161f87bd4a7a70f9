#pragma once

// One-row and double-row monodromy matrices and the commuting family of
// open-chain transfer matrices t^(j,s)(u), together with the identities
// that certify them: crossing symmetry, the u=0 value, polynomial
// asymptotics, the fusion hierarchy with its delta^(s) coefficient, the
// closure identity at the inhomogeneity points, and the Hamiltonian.
//
// Space layout: auxiliary slot 0 (dim 2j+1), then chain sites 1..N (dim
// 2s+1 each, site 1 leftmost).

#include "openspin/kmatrix.hpp"
#include "openspin/linalg.hpp"
#include "openspin/rmatrix.hpp"
#include "openspin/spin.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace openspin {

struct ModelParams {
  SpinLabel spin;   // quantum spin s carried by every site
  int sites = 1;    // N
  Complex eta{1.0, 0.0};
  BoundaryParams boundary;
  std::vector<Complex> theta;  // inhomogeneities, one per site

  // Minimum spacing demanded of the theta grid before SoV-type
  // constructions (shifted beta-grids must not collide across sites).
  static constexpr double kGenericGap = 1e-6;

  void validate() const {
    if (sites < 1) throw std::invalid_argument("ModelParams: need sites >= 1");
    if (static_cast<int>(theta.size()) != sites)
      throw std::invalid_argument("ModelParams: theta size != sites");
    if (!(std::abs(eta) > 0)) throw std::invalid_argument("ModelParams: eta = 0");
  }

  // Genericity needed by the separation-of-variables machinery: pairwise
  // theta gaps, and gaps of every difference from the integer eta lattice,
  // all exceed kGenericGap.  Homogeneous theta == 0 deliberately fails here
  // while remaining valid for spectrum/Bethe pipelines.
  void require_generic_theta() const {
    validate();
    for (int i = 0; i < sites; ++i)
      for (int j = i + 1; j < sites; ++j) {
        const Complex g = theta[i] - theta[j];
        for (int k = -spin.twos - 2; k <= spin.twos + 2; ++k)
          if (std::abs(g - double(k) * eta) < kGenericGap)
            throw std::invalid_argument(
                "ModelParams: theta grid too close to the eta lattice for SoV");
      }
  }

  Eigen::Index local_dim() const { return spin.twos + 1; }
  Eigen::Index chain_dim() const {
    Eigen::Index d = 1;
    for (int n = 0; n < sites; ++n) d *= local_dim();
    return d;
  }
};

// Trace out the auxiliary slot 0: result(i,j) = sum_a M[(a,i),(a,j)].
inline CMatrix partial_trace_aux(const CMatrix& m, Eigen::Index da, Eigen::Index dq) {
  if (m.rows() != da * dq || m.cols() != da * dq)
    throw std::invalid_argument("partial_trace_aux: dim mismatch");
  CMatrix out = CMatrix::Zero(dq, dq);
  for (Eigen::Index a = 0; a < da; ++a) out += m.block(a * dq, a * dq, dq, dq);
  return out;
}

// 2x2 block decomposition over a dim-2 auxiliary slot: returns
// {A, B; C, D} with M = [[A, B], [C, D]].
struct AuxBlocks {
  CMatrix a, b, c, d;
};

inline AuxBlocks aux_blocks(const CMatrix& m) {
  const Eigen::Index dq = m.rows() / 2;
  if (m.rows() != 2 * dq || m.cols() != 2 * dq)
    throw std::invalid_argument("aux_blocks: need even-dim square matrix");
  return {m.block(0, 0, dq, dq), m.block(0, dq, dq, dq), m.block(dq, 0, dq, dq),
          m.block(dq, dq, dq, dq)};
}

// The transfer-matrix family at fixed auxiliary spin j.  All evaluations
// are pure functions of u; nothing is cached.
class TransferFamily {
 public:
  TransferFamily(ModelParams params, int twoj)
      : params_(std::move(params)), twoj_(twoj) {
    params_.validate();
    if (twoj_ < 1) throw std::invalid_argument("TransferFamily: need twoj >= 1");
    dims_.assign(1 + params_.sites, params_.local_dim());
    dims_[0] = twoj_ + 1;
  }

  const ModelParams& params() const { return params_; }
  int twoj() const { return twoj_; }
  Eigen::Index aux_dim() const { return twoj_ + 1; }
  Eigen::Index chain_dim() const { return params_.chain_dim(); }

  // T(u) = R_{a,N}(u - theta_N) ... R_{a,1}(u - theta_1).
  CMatrix monodromy_T(Complex u) const {
    CMatrix acc = identity(aux_dim() * chain_dim());
    for (int n = params_.sites; n >= 1; --n) acc = acc * site_r(u - params_.theta[n - 1], n);
    return acc;
  }

  // That(u) = R_{a,1}(u + theta_1) ... R_{a,N}(u + theta_N).  Of the two
  // candidate site orderings this is the one under which crossing symmetry
  // and transfer commutativity hold (and, at j=1/2, the block identity
  // That(u) = (-1)^N sigma^y T^t(-u-eta) sigma^y in auxiliary space).
  CMatrix monodromy_That(Complex u) const {
    CMatrix acc = identity(aux_dim() * chain_dim());
    for (int n = 1; n <= params_.sites; ++n) acc = acc * site_r(u + params_.theta[n - 1], n);
    return acc;
  }

  CMatrix k_minus(Complex u) const {
    return k_minus_s_fused(u, params_.eta, twoj_, params_.boundary.p,
                           params_.boundary.varsigma);
  }

  CMatrix k_plus(Complex u) const {
    return k_plus_s(u, params_.eta, twoj_, params_.boundary.q, params_.boundary.xi);
  }

  // Double-row monodromy U(u) = T(u) K^-(u) That(u) on aux (x) chain.
  CMatrix double_row_U(Complex u) const {
    const CMatrix km = kron(k_minus(u), identity(chain_dim()));
    return monodromy_T(u) * km * monodromy_That(u);
  }

  // t(u) = tr_aux[ K^+(u) U(u) ].
  CMatrix evaluate(Complex u) const {
    const CMatrix kp = kron(k_plus(u), identity(chain_dim()));
    return partial_trace_aux(kp * double_row_U(u), aux_dim(), chain_dim());
  }
  CMatrix operator()(Complex u) const { return evaluate(u); }

  // As evaluate(), but with the dual K-matrix left unnormalized (no 1/f^(j)
  // factor).  Entries are then polynomial in u; the Hamiltonian derivative
  // uses this form since f^(j) may vanish at u=0.
  CMatrix evaluate_unnormalized(Complex u) const {
    const CMatrix kbar = k_minus_s_fused(-u - params_.eta, params_.eta, twoj_,
                                         params_.boundary.q, -params_.boundary.xi);
    const CMatrix kp = kron(kbar, identity(chain_dim()));
    return partial_trace_aux(kp * double_row_U(u), aux_dim(), chain_dim());
  }

 private:
  CMatrix site_r(Complex arg, int n) const {
    return embed_pair(r_matrix(arg, params_.eta, twoj_, params_.spin.twos), dims_, 0,
                      n);
  }

  ModelParams params_;
  int twoj_;
  std::vector<Eigen::Index> dims_;
};

// Coefficient delta^(s)(u) of the lower step in the fusion hierarchy:
//   (2u-2eta)(2u+2eta) / [(2u-eta)(2u+eta)] * ((1+vs^2)u^2 - p^2)
//   * ((1+xi^2)u^2 - q^2) * prod_l (u -+ theta_l + (1/2+s)eta)
//                         * prod_l (u -+ theta_l - (1/2+s)eta).
inline Complex delta_s(const ModelParams& pr, Complex u) {
  const Complex eta = pr.eta;
  if (std::abs(2.0 * u - eta) < 1e-12 || std::abs(2.0 * u + eta) < 1e-12)
    throw std::domain_error("delta_s: pole at 2u = +-eta");
  const Complex vs = pr.boundary.varsigma, xi = pr.boundary.xi;
  const Complex p = pr.boundary.p, q = pr.boundary.q;
  Complex val = (2.0 * u - 2.0 * eta) * (2.0 * u + 2.0 * eta) /
                ((2.0 * u - eta) * (2.0 * u + eta));
  val *= (1.0 + vs * vs) * u * u - p * p;
  val *= (1.0 + xi * xi) * u * u - q * q;
  const Complex shift = (0.5 + 0.5 * pr.spin.twos) * eta;
  for (Complex th : pr.theta) val *= (u - th + shift) * (u + th + shift);
  for (Complex th : pr.theta) val *= (u - th - shift) * (u + th - shift);
  return val;
}

namespace detail {

// t^(j) with the degenerate tails of the hierarchy: t^(0) = id, t^(-1/2) = 0.
inline CMatrix transfer_or_tail(const ModelParams& pr, int twoj, Complex u) {
  if (twoj < 0) return CMatrix::Zero(pr.chain_dim(), pr.chain_dim());
  if (twoj == 0) return identity(pr.chain_dim());
  return TransferFamily(pr, twoj).evaluate(u);
}

}  // namespace detail

// Fusion hierarchy at auxiliary spin j (twoj = 2j):
//   t^(1/2)(u) t^(j-1/2)(u - j eta)
//     = t^(j)(u - (j-1/2) eta) + delta^(s)(u) t^(j-1)(u - (j+1/2) eta).
// Returns the relative residual.
inline double check_hierarchy(const ModelParams& pr, int twoj, Complex u) {
  if (twoj < 1) throw std::invalid_argument("check_hierarchy: need twoj >= 1");
  const Complex eta = pr.eta;
  const CMatrix lhs = TransferFamily(pr, 1).evaluate(u) *
                      detail::transfer_or_tail(pr, twoj - 1, u - 0.5 * twoj * eta);
  const CMatrix rhs =
      detail::transfer_or_tail(pr, twoj, u - 0.5 * (twoj - 1) * eta) +
      delta_s(pr, u) * detail::transfer_or_tail(pr, twoj - 2, u - 0.5 * (twoj + 1) * eta);
  return (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), 1e-300});
}

// Closure identity at the inhomogeneity point theta_l (1-based site index):
//   t^(s)(theta_l) t^(1/2)(theta_l - (1/2+s) eta)
//     = delta^(s)(theta_l + (1/2-s) eta) t^(s-1/2)(theta_l + eta/2).
// By the crossing symmetry of the fused family, the tail factor equals
// t^(s-1/2)(-theta_l - 3 eta/2).
inline double check_closure_identity(const ModelParams& pr, int site_l) {
  if (site_l < 1 || site_l > pr.sites)
    throw std::out_of_range("check_closure_identity: site index");
  const Complex th = pr.theta[site_l - 1];
  const Complex eta = pr.eta;
  const int twos = pr.spin.twos;
  const CMatrix lhs = TransferFamily(pr, twos).evaluate(th) *
                      TransferFamily(pr, 1).evaluate(th - (0.5 + 0.5 * twos) * eta);
  const CMatrix rhs = delta_s(pr, th + (0.5 - 0.5 * twos) * eta) *
                      detail::transfer_or_tail(pr, twos - 1, th + 0.5 * eta);
  return (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), 1e-300});
}

// Coefficient matrix of u^(2N+2) in the fundamental transfer matrix
// t^(1/2,s)(u), whose entries are polynomials of degree <= 2N+2.  Sampling
// on a circle at the (2N+3)rd roots of unity makes the discrete Fourier sum
// below an exact interpolation, free of the O(1/u) contamination a
// large-|u| evaluation would carry.  Expected value: 2(xi varsigma - 1) Id.
inline CMatrix transfer_leading_coefficient(const ModelParams& pr) {
  const int deg = 2 * pr.sites + 2;
  const int n = deg + 1;
  const double radius = 1.1730513 * std::abs(pr.eta);
  const TransferFamily fam(pr, 1);
  CMatrix acc = CMatrix::Zero(pr.chain_dim(), pr.chain_dim());
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n;
    acc += fam.evaluate(std::polar(radius, angle)) *
           std::polar(1.0, -angle * deg);
  }
  return acc / (double(n) * std::pow(radius, deg));
}

// Open-chain Hamiltonian H = d/du ln[f^(s)(u) t^(s,s)(u)] at u=0 in the
// homogeneous point theta == 0.  Since f^(s) t^(s,s) = tr[Kbar^+ U] is the
// transfer matrix with the *unnormalized* dual K (polynomial in u, no 1/f
// pole), H = g'(0) g(0)^{-1} with g = evaluate_unnormalized, the derivative
// taken by 5-point central differences (Richardson-extrapolated, O(h^4)).
inline CMatrix hamiltonian(const ModelParams& params) {
  ModelParams pr = params;
  pr.theta.assign(pr.sites, Complex(0.0));
  const TransferFamily fam(pr, pr.spin.twos);
  const double h = 1e-5 * std::abs(pr.eta);
  const CMatrix g1 = fam.evaluate_unnormalized(Complex(h));
  const CMatrix gm1 = fam.evaluate_unnormalized(Complex(-h));
  const CMatrix g2 = fam.evaluate_unnormalized(Complex(2 * h));
  const CMatrix gm2 = fam.evaluate_unnormalized(Complex(2 * -h));
  const CMatrix deriv = (8.0 * (g1 - gm1) - (g2 - gm2)) / (12.0 * h);
  const CMatrix g0 = fam.evaluate_unnormalized(Complex(0.0));
  Eigen::FullPivLU<CMatrix> lu(g0);
  if (!lu.isInvertible())
    throw std::runtime_error("hamiltonian: t(0) is singular for these parameters");
  return deriv * lu.inverse();
}

}  // namespace openspin
