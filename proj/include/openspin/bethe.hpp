#pragma once

// Spectrum pipeline for the fundamental transfer matrix: simultaneous
// diagonalization with consistent branch labels, per-branch extraction of
// the monic Q-polynomial over x = u(u + eta) by linear least squares,
// damped-Newton refinement of the Bethe roots, reconstruction of the
// left/right Bethe states from the gauged double-row blocks, and
// eigenstate verification.

#include "openspin/gauge.hpp"
#include "openspin/poly.hpp"
#include "openspin/tq.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace openspin {

// One consistent labelling of the commuting family's eigenbasis: right
// eigenvectors as columns, left eigenvectors as rows of the inverse, so
// that left * right = Id and branch i of the family is
// left.row(i) * t(u) * right.col(i).
struct Spectrum {
  Complex base_point;
  std::vector<Complex> values;  // eigenvalues at base_point, sorted (Re, Im)
  CMatrix right;
  CMatrix left;

  int size() const { return int(values.size()); }
};

inline Spectrum diagonalize_transfer(const TransferFamily& fam) {
  const Complex eta = fam.params().eta;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const Complex u0 =
        (Complex(0.83, 0.41) + double(attempt) * Complex(0.137, -0.059)) * eta;
    const CMatrix t = fam.evaluate(u0);
    Eigen::ComplexEigenSolver<CMatrix> solver(t, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) continue;

    const Eigen::Index n = t.rows();
    std::vector<int> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Complex va = solver.eigenvalues()(a), vb = solver.eigenvalues()(b);
      if (va.real() != vb.real()) return va.real() < vb.real();
      return va.imag() < vb.imag();
    });

    Spectrum sp;
    sp.base_point = u0;
    sp.values.resize(n);
    sp.right.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      sp.values[i] = solver.eigenvalues()(order[i]);
      sp.right.col(i) = solver.eigenvectors().col(order[i]);
    }

    // A clustered spectrum at this base point makes the branch labels
    // unreliable; try the next base point.
    double spread = 0.0, gap = 1e300;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double dist = std::abs(sp.values[i] - sp.values[j]);
        spread = std::max(spread, dist);
        gap = std::min(gap, dist);
      }
    if (n > 1 && gap < 1e-8 * std::max(spread, 1.0)) continue;

    sp.left = sp.right.fullPivLu().inverse();
    return sp;
  }
  throw std::runtime_error(
      "diagonalize_transfer: spectrum too clustered at every base point");
}

// Eigenvalues of every branch at u, in the labelling of sp.
inline CVector branch_values(const Spectrum& sp, const TransferFamily& fam,
                             Complex u) {
  return (sp.left * fam.evaluate(u) * sp.right).diagonal();
}

// Deterministic generic sample points: fixed-seed pseudo-random annulus
// 0.5 <= |u| <= 1.5 (scaled by |eta|), kept away from the a/d pole at
// -eta/2, its crossing image, the shifted inhomogeneity grids, and from
// each other.
inline std::vector<Complex> tq_sample_points(const ModelParams& pr, int count,
                                             unsigned seed = 0x7e57a110u) {
  const double scale = std::abs(pr.eta);
  std::vector<Complex> avoid = {-0.5 * pr.eta, 0.5 * pr.eta};
  for (Complex th : pr.theta)
    for (int k = -pr.spin.twos - 1; k <= pr.spin.twos + 1; ++k) {
      avoid.push_back(th + 0.5 * double(k) * pr.eta);
      avoid.push_back(-th - 0.5 * double(k) * pr.eta);
    }

  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::vector<Complex> samples;
  for (int guard = 0; int(samples.size()) < count && guard < 10000; ++guard) {
    const Complex u = std::polar(radius(gen) * scale, angle(gen));
    bool ok = true;
    for (Complex bad : avoid)
      if (std::abs(u - bad) < 0.05 * scale) ok = false;
    for (Complex prev : samples)
      if (std::abs(u - prev) < 0.02 * scale) ok = false;
    if (ok) samples.push_back(u);
  }
  if (int(samples.size()) < count)
    throw std::runtime_error("tq_sample_points: annulus rejection exhausted");
  return samples;
}

struct QExtraction {
  Polynomial q_x;               // monic in x = u(u + eta), degree 2sN
  std::vector<Complex> roots;   // canonical lambda_j, Re(lambda) >= -Re(eta)/2
  double fit_residual = 0.0;    // relative least-squares residual
};

// Solve Lambda(u_k) Q(u_k) - a(u_k) Q(u_k - eta) - d(u_k) Q(u_k + eta)
//        = c u_k (u_k + eta) F(u_k)
// for the non-leading coefficients of monic Q in x, then factor Q.
inline QExtraction extract_q(const TQFunctions& tq,
                             const std::vector<Complex>& samples,
                             const std::vector<Complex>& lambda_values) {
  const int m = tq.root_count();
  if (samples.size() != lambda_values.size())
    throw std::invalid_argument("extract_q: samples/values length mismatch");
  if (int(samples.size()) < 2 * m + 4)
    throw std::invalid_argument("extract_q: need at least 2M+4 samples");

  const Complex eta = tq.params().eta;
  CMatrix lhs(samples.size(), m);
  CVector rhs(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const Complex u = samples[r];
    const Complex lam = lambda_values[r], au = tq.a_of(u), du = tq.d_of(u);
    const Complex x0 = u * (u + eta);
    const Complex xm = (u - eta) * u;
    const Complex xp = (u + eta) * (u + 2.0 * eta);
    Complex p0 = 1.0, pm = 1.0, pp = 1.0;
    for (int j = 0; j < m; ++j) {
      lhs(r, j) = lam * p0 - au * pm - du * pp;
      p0 *= x0;
      pm *= xm;
      pp *= xp;
    }
    rhs(r) = tq.c_const() * u * (u + eta) * tq.f_of(u) -
             (lam * p0 - au * pm - du * pp);
  }

  const LstsqResult ls = lstsq(lhs, rhs);
  QExtraction out;
  out.fit_residual =
      ls.residual / std::max(lhs.norm() * ls.x.norm() + rhs.norm(), 1e-300);
  if (out.fit_residual > 1e-6)
    throw std::runtime_error(
        "extract_q: T-Q fit residual " + std::to_string(out.fit_residual) +
        " exceeds 1e-6; eigenvalue branch not of T-Q form");

  std::vector<Complex> coeff(ls.x.data(), ls.x.data() + m);
  coeff.push_back(Complex(1.0));
  out.q_x = Polynomial(coeff);

  out.roots.reserve(m);
  for (Complex xj : poly_roots(out.q_x)) {
    // lambda and -lambda-eta give the same Q; the principal square root
    // lands on the representative with Re(lambda) >= -Re(eta)/2.
    out.roots.push_back(0.5 * (-eta + std::sqrt(eta * eta + 4.0 * xj)));
  }
  std::sort(out.roots.begin(), out.roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

struct RefineResult {
  std::vector<Complex> roots;
  double residual = 0.0;  // worst scale-invariant Bethe-equation residual
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on the full coupled root system, with Q rebuilt from the
// current iterate each step.  Stops at the tolerance or 50 iterations; a
// failed line search returns the best iterate with converged=false.
inline RefineResult newton_refine(const TQFunctions& tq,
                                  std::vector<Complex> roots,
                                  double tol = 1e-12, int max_iter = 50) {
  const int m = tq.root_count();
  if (int(roots.size()) != m)
    throw std::invalid_argument("newton_refine: expected 2sN roots");

  const auto raw = [&](const std::vector<Complex>& r) {
    CVector f(m);
    for (int j = 0; j < m; ++j) f(j) = tq.bae_value(r, j);
    return f;
  };

  RefineResult best{roots, tq.bae_residual_max(roots), 0, false};
  for (int iter = 1; iter <= max_iter; ++iter) {
    if (best.residual < tol) {
      best.converged = true;
      return best;
    }
    const CVector f = raw(roots);
    CMatrix jac(m, m);
    for (int i = 0; i < m; ++i) {
      const double h = 1e-7 * (1.0 + std::abs(roots[i]));
      std::vector<Complex> plus = roots, minus = roots;
      plus[i] += h;
      minus[i] -= h;
      jac.col(i) = (raw(plus) - raw(minus)) / (2.0 * h);
    }
    const CVector step = jac.fullPivLu().solve(f);

    bool improved = false;
    double damp = 1.0;
    for (int cut = 0; cut < 12; ++cut, damp *= 0.5) {
      std::vector<Complex> trial = roots;
      for (int i = 0; i < m; ++i) trial[i] -= damp * step(i);
      double trial_res;
      try {
        trial_res = tq.bae_residual_max(trial);
      } catch (const std::domain_error&) {
        continue;  // trial stepped onto the a/d pole; shorten
      }
      if (trial_res < best.residual) {
        roots = std::move(trial);
        best = {roots, trial_res, iter, trial_res < tol};
        improved = true;
        break;
      }
    }
    if (!improved) return best;  // stalled; report best iterate
  }
  best.converged = best.residual < tol;
  return best;
}

namespace detail {

// Shared skeleton of the two Bethe-state products.  The normalization
// denominators are dropped when any of them degenerates (the state is
// projective, so the direction is still meaningful).
inline CVector bethe_product(const GaugedTransfer& g,
                             const std::vector<Complex>& roots, bool leftward) {
  const ModelParams& pr = g.params();
  const double sign = pr.sites % 2 == 0 ? 1.0 : -1.0;

  std::vector<Complex> denom(roots.size());
  double dmax = 0.0;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const Complex lam = roots[j];
    denom[j] = leftward ? sign * g.k_minus(lam)(1, 0) * reference_d(pr, lam) *
                              reference_d(pr, -lam - pr.eta)
                        : sign * g.k_minus(lam)(0, 1) * reference_a(pr, lam) *
                              reference_a(pr, -lam - pr.eta);
    dmax = std::max(dmax, std::abs(denom[j]));
  }
  bool normalize = true;
  for (Complex dj : denom)
    if (std::abs(dj) < 1e-8 * std::max(dmax, 1.0)) normalize = false;

  CVector v = CVector::Zero(pr.chain_dim());
  v(0) = 1.0;  // product of local highest-weight states
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const AuxBlocks w = g.double_row(roots[j]);
    const CMatrix op = leftward ? CMatrix(w.c.transpose()) : w.b;
    const CVector next = op * v;
    if (next.norm() < 1e-13 * std::max(op.norm(), 1.0) * v.norm())
      throw std::runtime_error("bethe state annihilated at root index " +
                               std::to_string(j));
    v = normalize ? CVector(next / denom[j]) : next;
  }
  return v;
}

}  // namespace detail

// Right state: the product of upper-right double-row blocks over the root
// set applied to the highest-weight product state, each factor divided by
// (-1)^N K~_{12}(lambda) a(lambda) a(-lambda-eta).
inline CVector bethe_state_right(const GaugedTransfer& g,
                                 const std::vector<Complex>& roots) {
  return detail::bethe_product(g, roots, /*leftward=*/false);
}

// Left state, returned as the column w with <state| = w^T: lower-left
// blocks transposed onto the highest-weight product state, each factor
// divided by (-1)^N K~_{21}(lambda) d(lambda) d(-lambda-eta).
inline CVector bethe_state_left(const GaugedTransfer& g,
                                const std::vector<Complex>& roots) {
  return detail::bethe_product(g, roots, /*leftward=*/true);
}

// Worst relative eigen-residual of v against the eigenvalue function
// lambda over the supplied points.
template <typename LambdaFn>
inline double eigenstate_residual(const TransferFamily& fam, const CVector& v,
                                  LambdaFn&& lambda,
                                  const std::vector<Complex>& points) {
  if (v.norm() == 0.0)
    throw std::invalid_argument("eigenstate_residual: zero vector");
  double worst = 0.0;
  for (Complex u : points) {
    const CMatrix t = fam.evaluate(u);
    worst = std::max(worst, (t * v - lambda(u) * v).norm() /
                                std::max(t.norm() * v.norm(), 1e-300));
  }
  return worst;
}

// Hermitian cosine between two nonzero vectors; 1 means parallel.
inline double fidelity(const CVector& x, const CVector& y) {
  return std::abs(x.dot(y)) / std::max(x.norm() * y.norm(), 1e-300);
}

struct BetheSolution {
  int eigen_index = 0;
  Complex base_value;                 // eigenvalue at the spectrum base point
  Polynomial q_x;                     // extracted monic Q over x
  std::vector<Complex> roots;         // refined Bethe roots
  double tq_fit_residual = 0.0;
  double bae_residual = 0.0;          // worst post-refinement residual
  bool refine_converged = false;
  double state_fidelity = 0.0;        // rebuilt right state vs exact eigenvector
  double eigen_residual = 0.0;        // rebuilt right state vs T-Q eigenvalue
};

struct BetheRun {
  Spectrum spectrum;
  std::vector<BetheSolution> solutions;
};

// Full pipeline over every eigenvalue branch.
inline BetheRun solve_bethe(const ModelParams& pr) {
  pr.validate();
  const TransferFamily fam(pr, 1);
  const TQFunctions tq(pr);
  const GaugedTransfer gauged(pr);

  BetheRun run;
  run.spectrum = diagonalize_transfer(fam);

  const int m = tq.root_count();
  const std::vector<Complex> samples = tq_sample_points(pr, 2 * m + 6);
  std::vector<CVector> tracked(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k)
    tracked[k] = branch_values(run.spectrum, fam, samples[k]);

  const std::vector<Complex> check_points =
      tq_sample_points(pr, 5, /*seed=*/0xc8ec4a11u);
  for (int i = 0; i < run.spectrum.size(); ++i) {
    BetheSolution sol;
    sol.eigen_index = i;
    sol.base_value = run.spectrum.values[i];

    std::vector<Complex> lam_i(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) lam_i[k] = tracked[k](i);
    QExtraction ext = extract_q(tq, samples, lam_i);
    sol.q_x = ext.q_x;
    sol.tq_fit_residual = ext.fit_residual;

    RefineResult ref = newton_refine(tq, ext.roots);
    sol.roots = ref.roots;
    sol.bae_residual = ref.residual;
    sol.refine_converged = ref.converged;

    const CVector rebuilt = bethe_state_right(gauged, sol.roots);
    sol.state_fidelity = fidelity(run.spectrum.right.col(i), rebuilt);
    sol.eigen_residual = eigenstate_residual(
        fam, rebuilt, [&](Complex u) { return tq.lambda_of(u, sol.roots); },
        check_points);
    run.solutions.push_back(std::move(sol));
  }
  return run;
}

}  // namespace openspin
