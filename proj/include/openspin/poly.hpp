#pragma once

// Dense univariate polynomials over C with ascending coefficient storage,
// plus root finding via the companion matrix.  Used for transfer-matrix
// polynomiality checks, Q-polynomial bookkeeping and asymptotic
// coefficient extraction.

#include "openspin/linalg.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

namespace openspin {

class Polynomial {
 public:
  Polynomial() : coeff_{Complex(0.0)} {}
  explicit Polynomial(std::vector<Complex> ascending) : coeff_(std::move(ascending)) {
    if (coeff_.empty()) coeff_.push_back(Complex(0.0));
    trim();
  }

  static Polynomial constant(Complex c) { return Polynomial({c}); }

  // prod_i (u - roots[i]), monic.
  static Polynomial from_roots(const std::vector<Complex>& roots) {
    Polynomial p({Complex(1.0)});
    for (Complex r : roots) p = p * Polynomial({-r, Complex(1.0)});
    return p;
  }

  const std::vector<Complex>& coefficients() const { return coeff_; }
  int degree() const { return static_cast<int>(coeff_.size()) - 1; }
  bool is_zero() const { return coeff_.size() == 1 && coeff_[0] == Complex(0.0); }

  Complex operator()(Complex u) const {  // Horner
    Complex acc(0.0);
    for (std::size_t i = coeff_.size(); i-- > 0;) acc = acc * u + coeff_[i];
    return acc;
  }

  Polynomial derivative() const {
    if (degree() == 0) return Polynomial();
    std::vector<Complex> d(coeff_.size() - 1);
    for (std::size_t i = 1; i < coeff_.size(); ++i)
      d[i - 1] = coeff_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(a.coeff_.size() + b.coeff_.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.coeff_.size(); ++i)
      for (std::size_t j = 0; j < b.coeff_.size(); ++j)
        c[i + j] += a.coeff_[i] * b.coeff_[j];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.coeff_.size(), b.coeff_.size()), Complex(0.0));
    for (std::size_t i = 0; i < a.coeff_.size(); ++i) c[i] += a.coeff_[i];
    for (std::size_t i = 0; i < b.coeff_.size(); ++i) c[i] += b.coeff_[i];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(Complex s, const Polynomial& p) {
    std::vector<Complex> c = p.coeff_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
  }

 private:
  void trim() {
    // Keep the invariant: leading coefficient nonzero unless the zero
    // polynomial.  Exact-zero trim only; noisy coefficients are the
    // caller's business.
    while (coeff_.size() > 1 && coeff_.back() == Complex(0.0)) coeff_.pop_back();
  }
  std::vector<Complex> coeff_;  // coeff_[k] multiplies u^k
};

// Roots of a polynomial given by ascending coefficients, via the
// eigenvalues of the (monic-normalized) companion matrix.  Degree 0 or the
// zero polynomial is a contract violation.  Roots are sorted by (Re, Im).
inline std::vector<Complex> poly_roots(std::vector<Complex> coeff) {
  while (coeff.size() > 1 && std::abs(coeff.back()) == 0.0) coeff.pop_back();
  const int deg = static_cast<int>(coeff.size()) - 1;
  if (deg < 1)
    throw std::invalid_argument("poly_roots: need degree >= 1 with nonzero lead");

  CMatrix companion = CMatrix::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeff[i] / coeff[deg];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = Complex(1.0);

  Eigen::ComplexEigenSolver<CMatrix> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("poly_roots: companion eigensolve failed");
  std::vector<Complex> roots(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + deg);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

inline std::vector<Complex> poly_roots(const Polynomial& p) {
  return poly_roots(p.coefficients());
}

// Least-squares fit of a degree-`deg` polynomial through samples (xs, ys).
// With deg+1 well-spread nodes this is interpolation; more nodes give an
// over-determined consistency check (see fit residual in the result).
struct PolyFit {
  Polynomial poly;
  double residual = 0;
};

inline PolyFit polyfit(const std::vector<Complex>& xs, const std::vector<Complex>& ys,
                       int deg) {
  if (xs.size() != ys.size() || static_cast<int>(xs.size()) < deg + 1)
    throw std::invalid_argument("polyfit: need >= deg+1 samples");
  CMatrix vand(xs.size(), deg + 1);
  for (std::size_t r = 0; r < xs.size(); ++r) {
    Complex pw(1.0);
    for (int c = 0; c <= deg; ++c) {
      vand(r, c) = pw;
      pw *= xs[r];
    }
  }
  CVector rhs(ys.size());
  for (std::size_t r = 0; r < ys.size(); ++r) rhs[r] = ys[r];
  LstsqResult ls = lstsq(vand, rhs);
  std::vector<Complex> coeff(ls.x.data(), ls.x.data() + deg + 1);
  PolyFit fit;
  fit.poly = Polynomial(std::move(coeff));
  fit.residual = ls.residual;
  return fit;
}

}  // namespace openspin
