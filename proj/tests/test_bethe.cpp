// The spectrum pipeline: consistent branch labelling of the commuting
// family, eigenvalue tracking and its polynomial structure, Q extraction
// with a one-unknown closed-form oracle, Newton refinement, Bethe-state
// reconstruction with fidelity and eigen-residual checks including the
// homogeneous limit, and the closed-form overlaps with the separated basis.

#include "openspin/bethe.hpp"
#include "openspin/sov.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace openspin;

namespace {

std::mt19937_64 rng(0x5eed0008);

Complex random_u() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex(u(rng), u(rng));
}

ModelParams config_a() {
  return {SpinLabel{1}, 3, Complex(1.0),
          {Complex(0.8), Complex(0.0), Complex(1.2), Complex(0.6)},
          {Complex(0.31), Complex(-0.17), Complex(0.23)}};
}

ModelParams config_b() {
  return {SpinLabel{2}, 2, Complex(1.0),
          {Complex(0.8), Complex(0.0), Complex(1.2), Complex(0.6)},
          {Complex(0.31), Complex(-0.17)}};
}

ModelParams config_c() {
  return {SpinLabel{3}, 1, Complex(1.0),
          {Complex(0.8), Complex(0.0), Complex(1.2), Complex(0.6)},
          {Complex(0.31)}};
}

ModelParams config_tiny() {  // spin-1/2 pair of branches, single site
  return {SpinLabel{1}, 1, Complex(1.0),
          {Complex(0.8), Complex(0.0), Complex(1.2), Complex(0.6)},
          {Complex(0.29)}};
}

}  // namespace

TEST_CASE("diagonalization labels a biorthonormal eigenbasis") {
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const TransferFamily fam(pr, 1);
    const Spectrum sp = diagonalize_transfer(fam);
    REQUIRE(sp.size() == pr.chain_dim());
    REQUIRE((sp.left * sp.right - identity(pr.chain_dim())).norm() < 1e-10);
    REQUIRE(std::is_sorted(sp.values.begin(), sp.values.end(),
                           [](Complex a, Complex b) {
                             if (a.real() != b.real()) return a.real() < b.real();
                             return a.imag() < b.imag();
                           }));
    // Branch values at the base point reproduce the labels.
    const CVector lam = branch_values(sp, fam, sp.base_point);
    for (int i = 0; i < sp.size(); ++i)
      REQUIRE(std::abs(lam(i) - sp.values[i]) < 1e-10 * std::abs(sp.values[i]));
  }
}

TEST_CASE("branch values sum to the trace and have the closed asymptotics") {
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const TransferFamily fam(pr, 1);
    const Spectrum sp = diagonalize_transfer(fam);

    const Complex u = Complex(0.91, 0.37);
    const CVector lam = branch_values(sp, fam, u);
    const Complex tr = fam.evaluate(u).trace();
    REQUIRE(std::abs(lam.sum() - tr) < 1e-12 * std::abs(tr));

    // Universal value at u = 0 for every branch.
    Complex lam0 = 2.0 * pr.boundary.p * pr.boundary.q;
    for (Complex th : pr.theta)
      lam0 *= (th + (0.5 + 0.5 * pr.spin.twos) * pr.eta) *
              (-th + (0.5 + 0.5 * pr.spin.twos) * pr.eta);
    const CVector at0 = branch_values(sp, fam, Complex(0.0));
    for (int i = 0; i < sp.size(); ++i)
      REQUIRE(std::abs(at0(i) - lam0) < 1e-12 * std::abs(lam0));

    // Leading coefficient 2(xi varsigma - 1) of every branch, read off by
    // discrete Fourier interpolation on a circle.
    const int deg = 2 * pr.sites + 2, nodes = deg + 1;
    const double radius = 1.37 * std::abs(pr.eta);
    std::vector<CVector> ring;
    for (int k = 0; k < nodes; ++k)
      ring.push_back(branch_values(
          sp, fam, std::polar(radius, 6.283185307179586 * k / nodes)));
    const Complex expect =
        2.0 * (pr.boundary.xi * pr.boundary.varsigma - 1.0);
    for (int i = 0; i < sp.size(); ++i) {
      Complex acc = 0.0;
      for (int k = 0; k < nodes; ++k)
        acc += ring[k](i) * std::polar(1.0, -6.283185307179586 * k * deg / nodes);
      acc /= double(nodes) * std::pow(radius, deg);
      REQUIRE(std::abs(acc - expect) < 1e-12 * std::abs(expect));
    }
  }
}

TEST_CASE("each branch of the single-site chain is a quartic polynomial") {
  const ModelParams pr = config_tiny();
  const TransferFamily fam(pr, 1);
  const Spectrum sp = diagonalize_transfer(fam);
  const std::vector<Complex> pts = tq_sample_points(pr, 9);
  for (int i = 0; i < sp.size(); ++i) {
    std::vector<Complex> ys;
    for (Complex u : pts) ys.push_back(branch_values(sp, fam, u)(i));
    const PolyFit fit = polyfit(pts, ys, 2 * pr.sites + 2);
    double scale = 0.0;
    for (Complex y : ys) scale = std::max(scale, std::abs(y));
    REQUIRE(fit.residual < 1e-10 * scale);
  }
}

TEST_CASE("sample points stay inside the annulus and clear of the grids") {
  const ModelParams pr = config_b();
  const std::vector<Complex> pts = tq_sample_points(pr, 20);
  REQUIRE(int(pts.size()) == 20);
  const double scale = std::abs(pr.eta);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(std::abs(pts[i]) > 0.5 * scale - 1e-12);
    REQUIRE(std::abs(pts[i]) < 1.5 * scale + 1e-12);
    REQUIRE(std::abs(pts[i] + 0.5 * pr.eta) > 0.05 * scale - 1e-12);
    for (std::size_t j = 0; j < i; ++j)
      REQUIRE(std::abs(pts[i] - pts[j]) > 0.02 * scale - 1e-12);
  }
  // Deterministic for a fixed seed.
  const std::vector<Complex> again = tq_sample_points(pr, 20);
  for (std::size_t i = 0; i < pts.size(); ++i) REQUIRE(pts[i] == again[i]);
}

TEST_CASE("extraction solves the one-unknown case in closed form") {
  const ModelParams pr = config_tiny();
  const TransferFamily fam(pr, 1);
  const TQFunctions tq(pr);
  REQUIRE(tq.root_count() == 1);
  const Spectrum sp = diagonalize_transfer(fam);
  const std::vector<Complex> samples = tq_sample_points(pr, 2 * 1 + 4);
  for (int i = 0; i < sp.size(); ++i) {
    std::vector<Complex> lam;
    for (Complex u : samples) lam.push_back(branch_values(sp, fam, u)(i));
    const QExtraction ext = extract_q(tq, samples, lam);
    REQUIRE(ext.q_x.degree() == 1);

    // One sample point determines the single coefficient directly.
    const Complex u = samples[3], eta = pr.eta, l = lam[3];
    const Complex au = tq.a_of(u), du = tq.d_of(u);
    const Complex x0 = u * (u + eta), xm = (u - eta) * u,
                  xp = (u + eta) * (u + 2.0 * eta);
    const Complex c0 = (tq.c_const() * u * (u + eta) * tq.f_of(u) + au * xm +
                        du * xp - l * x0) /
                       (l - au - du);
    REQUIRE(std::abs(ext.q_x.coefficients()[0] - c0) < 1e-10 * std::abs(c0));
  }
}

TEST_CASE("extraction and refinement satisfy the Bethe equations") {
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const TransferFamily fam(pr, 1);
    const TQFunctions tq(pr);
    const Spectrum sp = diagonalize_transfer(fam);
    const int m = tq.root_count();
    const std::vector<Complex> samples = tq_sample_points(pr, 2 * m + 6);
    const std::vector<Complex> heldout = tq_sample_points(pr, 10, 0xd15717c7u);

    for (int i = 0; i < sp.size(); ++i) {
      std::vector<Complex> lam;
      for (Complex u : samples) lam.push_back(branch_values(sp, fam, u)(i));
      const QExtraction ext = extract_q(tq, samples, lam);
      REQUIRE(int(ext.roots.size()) == m);
      REQUIRE(ext.fit_residual < 1e-10);

      // Canonical representatives and reconstruction at held-out points.
      for (Complex r : ext.roots) REQUIRE(r.real() >= -0.5 - 1e-12);
      for (Complex u : heldout) {
        const Complex rebuilt = tq.lambda_of(u, ext.roots);
        const Complex tracked = branch_values(sp, fam, u)(i);
        REQUIRE(std::abs(rebuilt - tracked) < 1e-7 * std::abs(tracked));
      }

      const RefineResult ref = newton_refine(tq, ext.roots);
      REQUIRE(ref.residual < 1e-10);
      REQUIRE(tq.bae_residual_max(ref.roots) == ref.residual);
    }
  }
}

TEST_CASE("refinement recovers from a perturbation and checks arity") {
  const ModelParams pr = config_b();
  const BetheRun run = solve_bethe(pr);
  const TQFunctions tq(pr);

  std::vector<Complex> shifted = run.solutions[2].roots;
  for (Complex& r : shifted) r += Complex(1e-3, -7e-4);
  REQUIRE(tq.bae_residual_max(shifted) > 1e-6);
  const RefineResult back = newton_refine(tq, shifted);
  REQUIRE(back.converged);
  REQUIRE(back.residual < 1e-10);

  std::vector<Complex> wrong = run.solutions[2].roots;
  wrong.push_back(Complex(0.5, 0.5));
  REQUIRE_THROWS_AS(newton_refine(tq, wrong), std::invalid_argument);
}

TEST_CASE("full pipeline meets residual and fidelity targets") {
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const BetheRun run = solve_bethe(pr);
    REQUIRE(int(run.solutions.size()) == pr.chain_dim());
    for (const BetheSolution& s : run.solutions) {
      REQUIRE(int(s.roots.size()) == pr.spin.twos * pr.sites);
      REQUIRE(s.tq_fit_residual < 1e-10);
      REQUIRE(s.bae_residual < 1e-10);
      REQUIRE(s.state_fidelity > 1.0 - 1e-9);
      REQUIRE(s.eigen_residual < 1e-7);
    }
  }
}

TEST_CASE("left Bethe states align with the exact left eigenvectors") {
  for (const ModelParams& pr : {config_a(), config_c()}) {
    const BetheRun run = solve_bethe(pr);
    const GaugedTransfer g(pr);
    for (const BetheSolution& s : run.solutions) {
      const CVector built = bethe_state_left(g, s.roots);
      const CVector exact = run.spectrum.left.row(s.eigen_index).transpose();
      REQUIRE(fidelity(exact, built) > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("state construction is order independent and handles edge roots") {
  const ModelParams pr = config_b();
  const GaugedTransfer g(pr);
  const BetheRun run = solve_bethe(pr);
  const std::vector<Complex>& roots = run.solutions[1].roots;

  std::vector<Complex> reversed = roots;
  std::reverse(reversed.begin(), reversed.end());
  const CVector v1 = bethe_state_right(g, roots);
  const CVector v2 = bethe_state_right(g, reversed);
  REQUIRE((v1 - v2).norm() < 1e-8 * v1.norm());
  const CVector w1 = bethe_state_left(g, roots);
  const CVector w2 = bethe_state_left(g, reversed);
  REQUIRE((w1 - w2).norm() < 1e-8 * w1.norm());

  // No roots: the highest-weight product state itself.
  const CVector bare = bethe_state_right(g, {});
  REQUIRE(bare(0) == Complex(1.0));
  REQUIRE(bare.norm() == 1.0);

  // A root on the beta'-grid kills a normalization denominator; the builder
  // falls back to the unnormalized direction.
  const Complex bp = 0.31 - 1.5 * 1.0;
  const CVector dir = bethe_state_right(g, {bp, Complex(0.45, 0.2)});
  REQUIRE(dir.allFinite());
  REQUIRE(dir.norm() > 1e-6);

  // The double-row upper-right block vanishes identically at u = 0, so a
  // zero root annihilates the state.
  REQUIRE_THROWS_AS(bethe_state_right(g, {Complex(0.0)}), std::runtime_error);
}

TEST_CASE("exact eigenvectors pass their own residual check") {
  const ModelParams pr = config_b();
  const TransferFamily fam(pr, 1);
  const Spectrum sp = diagonalize_transfer(fam);
  const std::vector<Complex> pts = tq_sample_points(pr, 5, 0xc8ec4a11u);
  for (int i = 0; i < sp.size(); ++i) {
    const CVector v = sp.right.col(i);
    const double res = eigenstate_residual(
        fam, v,
        [&](Complex u) { return Complex(branch_values(sp, fam, u)(i)); }, pts);
    REQUIRE(res < 1e-10);
  }
}

TEST_CASE("rebuilt states survive the homogeneous limit") {
  for (ModelParams pr : {config_a(), config_b()}) {
    pr.theta.assign(pr.theta.size(), Complex(0.0));
    const BetheRun run = solve_bethe(pr);
    for (const BetheSolution& s : run.solutions) {
      REQUIRE(s.bae_residual < 1e-10);
      REQUIRE(s.eigen_residual < 1e-6);
      REQUIRE(s.state_fidelity > 1.0 - 1e-7);
    }
  }
}

TEST_CASE("eigenstate overlaps with the separated basis take the closed form") {
  for (const ModelParams& pr : {config_a(), config_b()}) {
    const SovBasis sv(pr);
    const GaugedTransfer g(pr);
    const TQFunctions tq(pr);
    const BetheRun run = solve_bethe(pr);
    for (const BetheSolution& s : run.solutions) {
      const auto qfun = [&](Complex u) { return tq.q_of(u, s.roots); };
      const CVector exact = run.spectrum.left.row(s.eigen_index).transpose();
      const CVector built = bethe_state_left(g, s.roots);
      const Complex dexact = bilinear(exact, sv.omega());
      const Complex dbuilt = bilinear(built, sv.omega());
      for (int idx = 0; idx < sv.size(); ++idx) {
        const Complex closed = sv.eigenstate_overlap_ratio(idx, qfun);
        const Complex r1 = bilinear(exact, sv.right(idx)) / dexact;
        const Complex r2 = bilinear(built, sv.right(idx)) / dbuilt;
        REQUIRE(std::abs(r1 - closed) < 1e-9 * (1.0 + std::abs(closed)));
        REQUIRE(std::abs(r2 - closed) < 1e-7 * (1.0 + std::abs(closed)));
      }
    }
  }
}
