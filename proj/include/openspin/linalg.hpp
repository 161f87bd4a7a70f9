#pragma once

// Dense complex linear algebra helpers shared by every module: Kronecker
// products, operator embeddings into tensor-product chains, two-sided
// eigensystems with the bilinear (transpose, no conjugation) pairing,
// least squares and polynomial root finding via companion matrices.
//
// All vector spaces are finite tensor products of small spin multiplets, so
// everything is kept as dense Eigen matrices; typical sizes are < 100.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace openspin {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Hard cap on any matrix dimension produced by kron/embedding.  Guards
// against typo-sized tensor products; the physics never needs more than a
// few thousand here.
inline constexpr Eigen::Index kMaxKronDim = 1 << 20;

// Bilinear pairing <x, y> = x^T y (no conjugation).  Left eigenvectors,
// dual reference states and scalar products all use this pairing; the
// transfer matrices are complex symmetric-free so the Hermitian pairing
// would mix eigenspaces.
inline Complex bilinear(const CVector& x, const CVector& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("bilinear: size mismatch");
  return (x.transpose() * y)(0, 0);
}

// Kronecker product, row-major convention: (A (x) B)[(i*rB+k)(j*cB+l)] =
// A(i,j) B(k,l).  Slot 0 is the leftmost (most significant) factor.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  if (a.rows() * b.rows() > kMaxKronDim || a.cols() * b.cols() > kMaxKronDim)
    throw std::length_error("kron: product dimension exceeds kMaxKronDim");
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

namespace detail {

inline Eigen::Index total_dim(const std::vector<Eigen::Index>& dims) {
  Eigen::Index d = 1;
  for (Eigen::Index x : dims) {
    if (x <= 0) throw std::invalid_argument("embed: nonpositive slot dim");
    d *= x;
    if (d > kMaxKronDim)
      throw std::length_error("embed: chain dimension exceeds kMaxKronDim");
  }
  return d;
}

}  // namespace detail

// Embed a single-slot operator `op` acting on slot `site` of a tensor
// product with the given slot dimensions (slot 0 leftmost).
inline CMatrix embed_site(const CMatrix& op, const std::vector<Eigen::Index>& dims,
                          std::size_t site) {
  if (site >= dims.size()) throw std::out_of_range("embed_site: slot index");
  if (op.rows() != dims[site] || op.cols() != dims[site])
    throw std::invalid_argument("embed_site: operator/slot dim mismatch");
  CMatrix out = identity(1);
  for (std::size_t k = 0; k < dims.size(); ++k)
    out = kron(out, k == site ? op : identity(dims[k]));
  return out;
}

// Embed a two-slot operator acting on (slot_a, slot_b); `op` is given on
// V_a (x) V_b in that kron order.  Slots need not be adjacent or ordered.
inline CMatrix embed_pair(const CMatrix& op, const std::vector<Eigen::Index>& dims,
                          std::size_t slot_a, std::size_t slot_b) {
  const std::size_t n = dims.size();
  if (slot_a >= n || slot_b >= n || slot_a == slot_b)
    throw std::out_of_range("embed_pair: bad slot indices");
  const Eigen::Index da = dims[slot_a], db = dims[slot_b];
  if (op.rows() != da * db || op.cols() != da * db)
    throw std::invalid_argument("embed_pair: operator/slot dim mismatch");
  const Eigen::Index total = detail::total_dim(dims);

  // Strides for mixed-radix decoding of a full-space index.
  std::vector<Eigen::Index> stride(n, 1);
  for (std::size_t k = n - 1; k-- > 0;) stride[k] = stride[k + 1] * dims[k + 1];

  CMatrix out = CMatrix::Zero(total, total);
  const Eigen::Index rest = total / (da * db);
  // Enumerate spectator configurations once, then fill the op block.
  for (Eigen::Index r = 0; r < rest; ++r) {
    // Decode spectator digits into a base index with zeros at slot_a/slot_b.
    Eigen::Index base = 0, tmp = r;
    for (std::size_t k = n; k-- > 0;) {
      if (k == slot_a || k == slot_b) continue;
      base += (tmp % dims[k]) * stride[k];
      tmp /= dims[k];
    }
    for (Eigen::Index ia = 0; ia < da; ++ia)
      for (Eigen::Index ib = 0; ib < db; ++ib)
        for (Eigen::Index ja = 0; ja < da; ++ja)
          for (Eigen::Index jb = 0; jb < db; ++jb) {
            const Complex v = op(ia * db + ib, ja * db + jb);
            if (v == Complex(0.0)) continue;
            out(base + ia * stride[slot_a] + ib * stride[slot_b],
                base + ja * stride[slot_a] + jb * stride[slot_b]) += v;
          }
  }
  return out;
}

// Two-sided eigensystem.  right.col(i) is a unit right eigenvector,
// left.row(i) the matching left eigenvector normalized so that
// left.row(i) * right.col(j) = delta_ij under the bilinear pairing
// (rows of right^{-1}).  Eigenvalues come sorted by (Re, Im) so repeated
// runs and perturbed inputs align.
struct EigenSystem {
  CVector values;
  CMatrix right;        // columns: right eigenvectors
  CMatrix left;         // rows: bilinear left eigenvectors, left*right = I
  double residual = 0;  // max_i |M v_i - lambda_i v_i| / |M|
  std::vector<std::pair<int, int>> clusters;  // [first,last] index ranges of
                                              // near-degenerate eigenvalues
};

inline EigenSystem eigenpairs(const CMatrix& m, double cluster_tol = 1e-8) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenpairs: not square");
  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenpairs: eigensolver failed to converge");

  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  const CVector& raw = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (raw[a].real() != raw[b].real()) return raw[a].real() < raw[b].real();
    return raw[a].imag() < raw[b].imag();
  });

  EigenSystem sys;
  sys.values.resize(n);
  sys.right.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sys.values[i] = raw[order[i]];
    sys.right.col(i) = solver.eigenvectors().col(order[i]).normalized();
  }

  Eigen::FullPivLU<CMatrix> lu(sys.right);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "eigenpairs: defective eigenbasis (non-invertible eigenvector matrix)");
  sys.left = lu.inverse();

  const double mnorm = std::max(m.norm(), 1e-300);
  sys.residual = (m * sys.right - sys.right * sys.values.asDiagonal()).norm() / mnorm;

  // Flag eigenvalue clusters: members closer than cluster_tol * scale are
  // reported so callers can treat their eigenvectors as a block.
  const double scale = std::max(1.0, sys.values.cwiseAbs().maxCoeff());
  int first = 0;
  for (int i = 1; i <= static_cast<int>(n); ++i) {
    if (i == n || std::abs(sys.values[i] - sys.values[i - 1]) > cluster_tol * scale) {
      if (i - first > 1) sys.clusters.emplace_back(first, i - 1);
      first = i;
    }
  }
  return sys;
}

// Least squares min_x |A x - b| via SVD.  `rank` counts singular values
// above rtol * s_max; rank < cols flags a deficient (non-unique) solution.
struct LstsqResult {
  CVector x;
  double residual = 0;  // |A x - b|
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

inline LstsqResult lstsq(const CMatrix& a, const CVector& b, double rtol = 1e-12) {
  if (a.rows() != b.size()) throw std::invalid_argument("lstsq: row mismatch");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rtol);
  LstsqResult res;
  res.x = svd.solve(b);
  res.rank = svd.rank();
  res.rank_deficient = res.rank < a.cols();
  res.residual = (a * res.x - b).norm();
  return res;
}

}  // namespace openspin
