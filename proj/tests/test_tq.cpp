// The inhomogeneous T-Q parametrization: dressing functions and their
// crossing relation, the inhomogeneity constant, the zero structure of F,
// the Q-function's built-in symmetry, universal values and symmetry of the
// parametrized eigenvalue, pole guards, and the relation between the
// dressing functions and the hierarchy coefficient.

#include "openspin/tq.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace openspin;

namespace {

std::mt19937_64 rng(0x5eed0007);

Complex random_u() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex(u(rng), u(rng));
}

Complex generic_u() { return Complex(0.85, 0.40) + 0.3 * random_u(); }

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

std::vector<Complex> random_roots(int m) {
  std::vector<Complex> roots;
  for (int j = 0; j < m; ++j)
    roots.push_back(Complex(0.45, 0.35) + 0.25 * random_u() +
                    double(j) * Complex(0.31, -0.12));
  return roots;
}

}  // namespace

TEST_CASE("root count is 2sN") {
  REQUIRE(TQFunctions(config_a()).root_count() == 3);
  REQUIRE(TQFunctions(config_b()).root_count() == 4);
  REQUIRE(TQFunctions(config_c()).root_count() == 3);
}

TEST_CASE("dressing functions obey crossing and take their closed values") {
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const TQFunctions tq(pr);
    for (int rep = 0; rep < 4; ++rep) {
      const Complex u = generic_u();
      REQUIRE(std::abs(tq.d_of(u) - tq.a_of(-u - pr.eta)) <
              1e-12 * std::abs(tq.d_of(u)));
    }

    // varsigma = 0 pins the inhomogeneity constant at 2(-1 - sqrt(1+xi^2)).
    const Complex expected =
        2.0 * (-1.0 - std::sqrt(1.0 + Complex(0.6) * Complex(0.6)));
    REQUIRE(std::abs(tq.c_const() - expected) < 1e-14);
  }

  ModelParams diag = config_a();
  diag.boundary.xi = Complex(0.0);
  REQUIRE(std::abs(TQFunctions(diag).c_const() - Complex(-4.0)) < 1e-14);
}

TEST_CASE("F vanishes exactly on the shifted inhomogeneity grid") {
  const ModelParams pr{SpinLabel{2}, 1, Complex(1.0),
                       {Complex(0.8), Complex(0.0), Complex(1.2), Complex(0.6)},
                       {Complex(0.31)}};
  const TQFunctions tq(pr);
  for (int k = 0; k <= pr.spin.twos; ++k) {
    const Complex shift = (0.5 - 0.5 * pr.spin.twos + double(k)) * pr.eta;
    REQUIRE(std::abs(tq.f_of(pr.theta[0] - shift)) < 1e-10);
    REQUIRE(std::abs(tq.f_of(-pr.theta[0] - shift)) < 1e-10);
  }
  REQUIRE(std::abs(tq.f_of(generic_u())) > 1e-3);
}

TEST_CASE("dressing functions factor the hierarchy coefficient") {
  // delta(u) = a(u) a(-u): the two boundary rational factors and the
  // shifted products recombine into the closed coefficient used by the
  // fusion hierarchy.
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const TQFunctions tq(pr);
    for (int rep = 0; rep < 3; ++rep) {
      const Complex u = generic_u();
      const Complex lhs = delta_s(pr, u);
      const Complex rhs = tq.a_of(u) * tq.a_of(-u);
      REQUIRE(std::abs(lhs - rhs) < 1e-13 * std::abs(rhs));
    }
  }
}

TEST_CASE("Q is symmetric under u -> -u-eta by construction") {
  const TQFunctions tq(config_b());
  const std::vector<Complex> roots = random_roots(tq.root_count());
  for (int rep = 0; rep < 4; ++rep) {
    const Complex u = generic_u();
    const Complex q1 = tq.q_of(u, roots);
    const Complex q2 = tq.q_of(-u - Complex(1.0), roots);
    REQUIRE(std::abs(q1 - q2) < 1e-14 * std::abs(q1));
  }
}

TEST_CASE("parametrized eigenvalue has the universal value at u = 0") {
  // At u = 0 the d-term and the inhomogeneous term vanish and
  // Q(-eta) = Q(0), so Lambda(0) is Q-independent.
  for (const ModelParams& pr : {config_a(), config_b(), config_c()}) {
    const TQFunctions tq(pr);
    Complex expected = 2.0 * pr.boundary.p * pr.boundary.q;
    for (Complex th : pr.theta)
      expected *= (th + (0.5 + 0.5 * pr.spin.twos) * pr.eta) *
                  (-th + (0.5 + 0.5 * pr.spin.twos) * pr.eta);
    for (int rep = 0; rep < 2; ++rep) {
      const std::vector<Complex> roots = random_roots(tq.root_count());
      REQUIRE(std::abs(tq.lambda_of(Complex(0.0), roots) - expected) <
              1e-12 * std::abs(expected));
    }
  }
}

TEST_CASE("parametrized eigenvalue is crossing symmetric for any Q") {
  const TQFunctions tq(config_a());
  const std::vector<Complex> roots = random_roots(tq.root_count());
  for (int rep = 0; rep < 4; ++rep) {
    const Complex u = generic_u();
    const Complex l1 = tq.lambda_of(u, roots);
    const Complex l2 = tq.lambda_of(-u - Complex(1.0), roots);
    REQUIRE(std::abs(l1 - l2) < 1e-12 * std::abs(l1));
  }
}

TEST_CASE("pole guards fire where the parametrization degenerates") {
  const TQFunctions tq(config_a());
  const std::vector<Complex> roots = random_roots(tq.root_count());
  REQUIRE_THROWS_AS(tq.a_of(Complex(-0.5)), std::domain_error);
  REQUIRE_THROWS_AS(tq.lambda_of(roots[1], roots), std::domain_error);
  // The mirrored root is the same zero of Q.
  REQUIRE_THROWS_AS(tq.lambda_of(-roots[1] - Complex(1.0), roots),
                    std::domain_error);
}

TEST_CASE("Bethe-equation residual is small exactly when the equation holds") {
  const TQFunctions tq(config_c());
  std::vector<Complex> roots = random_roots(tq.root_count());
  // Generic points are far from solving the equations.
  REQUIRE(tq.bae_residual_max(roots) > 1e-3);

  // The residual is the modulus of the three-term sum over its largest term.
  for (int j = 0; j < tq.root_count(); ++j) {
    const Complex lam = roots[j];
    const Complex t1 = tq.a_of(lam) * tq.q_of(lam - Complex(1.0), roots);
    const Complex t2 = tq.d_of(lam) * tq.q_of(lam + Complex(1.0), roots);
    const Complex t3 =
        tq.c_const() * lam * (lam + Complex(1.0)) * tq.f_of(lam);
    const double expect = std::abs(t1 + t2 + t3) /
                          std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    REQUIRE(std::abs(tq.bae_residual(roots, j) - expect) < 1e-14);
    REQUIRE(std::abs(tq.bae_value(roots, j) - (t1 + t2 + t3)) <
            1e-12 * std::abs(t1 + t2 + t3));
  }
}
