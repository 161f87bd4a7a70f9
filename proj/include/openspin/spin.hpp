#pragma once

// Spin multiplets.  A spin-s representation is labeled by twos = 2s to keep
// half-integers exact; the magnetic basis is ordered m = s, s-1, ..., -s
// (highest weight first), so S^z = diag(s, s-1, ..., -s).

#include "openspin/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace openspin {

struct SpinLabel {
  int twos = 1;  // 2s, so twos=1 is spin-1/2

  constexpr int dim() const { return twos + 1; }
  double value() const { return 0.5 * twos; }

  static SpinLabel parse(const std::string& text) {
    // Accept "1/2", "1", "3/2", "2", ... ; anything else is a usage error.
    if (text.size() >= 3 && text.substr(text.size() - 2) == "/2") {
      const std::string num = text.substr(0, text.size() - 2);
      const int n = std::stoi(num);
      if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("spin: bad half-integer '" + text + "'");
      return SpinLabel{n};
    }
    const int n = std::stoi(text);
    if (n <= 0) throw std::invalid_argument("spin: bad value '" + text + "'");
    return SpinLabel{2 * n};
  }

  std::string str() const {
    if (twos % 2 == 0) return std::to_string(twos / 2);
    return std::to_string(twos) + "/2";
  }
};

struct SpinMatrices {
  CMatrix sz, sp, sm;  // S^z, S^+, S^- with [S^+, S^-] = 2 S^z
  CMatrix sx() const { return 0.5 * (sp + sm); }
  CMatrix sy() const { return Complex(0, -0.5) * (sp - sm); }
};

inline SpinMatrices spin_matrices(int twos) {
  if (twos < 1) throw std::invalid_argument("spin_matrices: need twos >= 1");
  const int d = twos + 1;
  const double s = 0.5 * twos;
  SpinMatrices out;
  out.sz = CMatrix::Zero(d, d);
  out.sp = CMatrix::Zero(d, d);
  out.sm = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) out.sz(k, k) = s - k;
  // S^+ |s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>; basis index k has m = s - k.
  for (int k = 1; k < d; ++k) {
    const double m = s - k;
    out.sp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  out.sm = out.sp.transpose();
  return out;
}

inline SpinMatrices spin_matrices(SpinLabel s) { return spin_matrices(s.twos); }

}  // namespace openspin
