#pragma once

// Named residual checks covering every identity layer of the workbench,
// shared by the command-line front end and the acceptance harness.  Each
// check draws its spectral parameters deterministically from the caller's
// seed, evaluates one identity, and reports a scale-free residual together
// with the tolerance it was judged against.

#include "openspin/bethe.hpp"
#include "openspin/sov.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace openspin::checks {

struct CheckRow {
  std::string name;    // stable identifier, unique within a report
  std::string anchor;  // the identity being tested, in plain words
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  double seconds = 0.0;  // wall time; never part of byte-stable reports
};

struct SuiteOptions {
  int samples = 3;            // spectral points drawn per identity
  std::uint64_t seed = 42;    // drives every random draw below
  double tol_override = 0.0;  // > 0 replaces every default tolerance
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "ybe", "reflection", "fusion", "transfer", "gauge",
      "sov", "scalar", "tq",       "bethe"};
  return names;
}

inline bool suite_known(const std::string& name) {
  if (name == "all") return true;
  for (const std::string& s : suite_names())
    if (s == name) return true;
  return false;
}

// Gauge-frame suites need a vanishing lower off-diagonal boundary entry;
// the separated basis additionally needs pairwise-generic inhomogeneities.
inline bool suite_applicable(const ModelParams& pr, const std::string& name) {
  const bool gauge_frame = pr.boundary.varsigma == Complex(0.0);
  bool generic = true;
  try {
    pr.require_generic_theta();
  } catch (const std::exception&) {
    generic = false;
  }
  if (name == "gauge" || name == "tq" || name == "bethe") return gauge_frame;
  if (name == "sov" || name == "scalar") return gauge_frame && generic;
  return true;
}

namespace detail {

// Uniform double in [0, 1) built from raw engine words, so the stream is
// pinned by the standard rather than by a library's distribution choice.
inline double unit_real(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// Generic spectral point in the upper half plane, order eta away from the
// real axis.
inline Complex sample_u(std::mt19937_64& rng) {
  const double re = 0.3 + 0.8 * unit_real(rng);
  const double im = 0.2 + 0.6 * unit_real(rng);
  return Complex(re, im);
}

// Pair with opposite-sign imaginary parts: keeps u - v, u + v and their
// eta-shifts away from the exchange algebra's singular denominators.
inline std::pair<Complex, Complex> sample_pair(std::mt19937_64& rng) {
  const Complex u = sample_u(rng);
  const Complex v = std::conj(sample_u(rng));
  return {u, v};
}

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}

inline std::string spin_text(int twos) {
  if (twos % 2 == 0) return std::to_string(twos / 2);
  return std::to_string(twos) + "/2";
}

// Runs one named check, timing it and converting exceptions into a failed
// row with an off-scale residual so the report stays well formed.
class Collector {
 public:
  explicit Collector(const SuiteOptions& opt) : opt_(opt) {}

  void add(std::string name, std::string anchor, double tol,
           const std::function<double()>& fn) {
    CheckRow row;
    row.name = std::move(name);
    row.anchor = std::move(anchor);
    row.tol = opt_.tol_override > 0.0 ? opt_.tol_override : tol;
    const auto start = std::chrono::steady_clock::now();
    try {
      row.residual = fn();
    } catch (const std::exception&) {
      row.residual = std::numeric_limits<double>::max();
    }
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    row.pass = row.residual <= row.tol;
    rows_.push_back(std::move(row));
  }

  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  SuiteOptions opt_;
  std::vector<CheckRow> rows_;
};

}  // namespace detail

// --- factorized scattering -------------------------------------------------

inline std::vector<CheckRow> ybe_rows(const ModelParams& pr,
                                      const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x79626500u);
  const int ts = pr.spin.twos;
  std::vector<std::array<int, 3>> combos{{1, 1, 1}};
  for (std::array<int, 3> c : {std::array<int, 3>{1, 1, ts},
                               std::array<int, 3>{1, ts, ts},
                               std::array<int, 3>{ts, ts, ts}})
    if (std::find(combos.begin(), combos.end(), c) == combos.end())
      combos.push_back(c);
  for (const auto& c : combos) {
    const std::string label = detail::spin_text(c[0]) + "," +
                              detail::spin_text(c[1]) + "," +
                              detail::spin_text(c[2]);
    out.add("ybe(" + label + ")",
            "R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v) on spins " + label,
            1e-10, [&] {
              double worst = 0.0;
              for (int k = 0; k < opt.samples; ++k) {
                const auto [u, v] = detail::sample_pair(rng);
                worst = std::max(
                    worst, check_ybe(u, v, pr.eta, c[0], c[1], c[2]));
              }
              return worst;
            });
  }
  return out.take();
}

inline std::vector<CheckRow> reflection_rows(const ModelParams& pr,
                                             const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x7265666cu);
  const int ts = pr.spin.twos;
  std::vector<std::array<int, 2>> combos{{1, 1}};
  for (std::array<int, 2> c :
       {std::array<int, 2>{1, ts}, std::array<int, 2>{ts, ts}})
    if (std::find(combos.begin(), combos.end(), c) == combos.end())
      combos.push_back(c);
  for (const auto& c : combos) {
    const std::string label =
        detail::spin_text(c[0]) + "," + detail::spin_text(c[1]);
    out.add("reflection(" + label + ")",
            "R(u-v) K1(u) R(u+v) K2(v) = K2(v) R(u+v) K1(u) R(u-v) on spins " +
                label,
            1e-10, [&] {
              double worst = 0.0;
              for (int k = 0; k < opt.samples; ++k) {
                const auto [u, v] = detail::sample_pair(rng);
                worst = std::max(worst,
                                 check_reflection_eq(u, v, pr.eta, c[0], c[1],
                                                     pr.boundary.p,
                                                     pr.boundary.varsigma));
              }
              return worst;
            });
  }
  return out.take();
}

inline std::vector<CheckRow> fusion_rows(const ModelParams& pr,
                                         const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x66757365u);
  std::vector<int> spins{2};
  if (pr.spin.twos > 2) spins.push_back(pr.spin.twos);
  for (int ts : spins) {
    const std::string s = detail::spin_text(ts);
    out.add("fusion r(1/2," + s + ")",
            "symmetrizer-fused R(1/2," + s + ") equals the direct construction",
            1e-10, [&] {
              double worst = 0.0;
              for (int k = 0; k < opt.samples; ++k) {
                const Complex u = detail::sample_u(rng);
                worst = std::max(worst,
                                 detail::rel_diff(
                                     r_half_s_fused(u, pr.eta, ts),
                                     r_half_s_direct(u, pr.eta, ts)));
              }
              return worst;
            });
    out.add("fusion r(" + s + "," + s + ")",
            "fused R(" + s + "," + s +
                ") equals the projector-decomposition construction",
            1e-10, [&] {
              double worst = 0.0;
              for (int k = 0; k < opt.samples; ++k) {
                const Complex u = detail::sample_u(rng);
                worst = std::max(worst,
                                 detail::rel_diff(
                                     r_j_s_fused(u, pr.eta, ts, ts),
                                     r_s_s_direct(u, pr.eta, ts)));
              }
              return worst;
            });
  }
  out.add("fusion k-(1/2)",
          "fused lower boundary matrix at spin 1/2 reduces to the elementary one",
          1e-10, [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              worst = std::max(
                  worst, detail::rel_diff(
                             k_minus_s_fused(u, pr.eta, 1, pr.boundary.p,
                                             pr.boundary.varsigma),
                             k_minus_half(u, pr.boundary.p,
                                          pr.boundary.varsigma)));
            }
            return worst;
          });
  out.add("fusion k+(1/2)",
          "fused dual boundary matrix at spin 1/2 reduces to the elementary one",
          1e-10, [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              worst = std::max(
                  worst, detail::rel_diff(
                             k_plus_s(u, pr.eta, 1, pr.boundary.q,
                                      pr.boundary.xi),
                             k_plus_half(u, pr.eta, pr.boundary.q,
                                         pr.boundary.xi)));
            }
            return worst;
          });
  return out.take();
}

// --- transfer-matrix algebra -----------------------------------------------

inline std::vector<CheckRow> transfer_rows(const ModelParams& pr,
                                           const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x7472616eu);
  // Deeper fusion carries more cancellation; relax by one decade at s >= 3/2.
  const double tol = pr.spin.twos >= 3 ? 1e-7 : 1e-8;
  const TransferFamily fam(pr, 1);

  out.add("transfer commutativity", "[t(u), t(v)] = 0 at generic u, v", tol,
          [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const auto [u, v] = detail::sample_pair(rng);
              const CMatrix tu = fam(u), tv = fam(v);
              worst = std::max(worst,
                               (tu * tv - tv * tu).norm() /
                                   std::max(tu.norm() * tv.norm(), 1e-300));
            }
            return worst;
          });
  out.add("transfer crossing", "t(-u - eta) = t(u)", tol, [&] {
    double worst = 0.0;
    for (int k = 0; k < opt.samples; ++k) {
      const Complex u = detail::sample_u(rng);
      worst = std::max(worst, detail::rel_diff(fam(-u - pr.eta), fam(u)));
    }
    return worst;
  });
  out.add("transfer origin value",
          "t(0) = 2 p q prod_l (theta_l + (1/2+s) eta)(-theta_l + (1/2+s) "
          "eta) Id",
          tol, [&] {
            Complex scalar = 2.0 * pr.boundary.p * pr.boundary.q;
            const Complex shift = (0.5 + 0.5 * pr.spin.twos) * pr.eta;
            for (Complex th : pr.theta) scalar *= (th + shift) * (-th + shift);
            const CMatrix t0 = fam(Complex(0.0));
            return (t0 - scalar * identity(pr.chain_dim())).norm() /
                   std::max(t0.norm(), 1e-300);
          });
  out.add("transfer asymptotics",
          "leading coefficient of t(u) is 2 (xi varsigma - 1) Id", tol, [&] {
            const CMatrix lead = transfer_leading_coefficient(pr);
            const Complex expect =
                2.0 * (pr.boundary.xi * pr.boundary.varsigma - 1.0);
            return detail::rel_diff(lead,
                                    expect * identity(pr.chain_dim()));
          });
  out.add("transfer hierarchy",
          "t(j)(u) recursion from t(j-1/2), t(j-1) with the delta coefficient",
          tol, [&] {
            // The twoj = 1 step is trivially exact; start one level up and
            // close one level past the model spin.
            double worst = 0.0;
            for (int twoj = 2; twoj <= pr.spin.twos + 1; ++twoj)
              for (int k = 0; k < opt.samples; ++k)
                worst = std::max(
                    worst,
                    check_hierarchy(pr, twoj, detail::sample_u(rng)));
            return worst;
          });
  out.add("transfer closure",
          "hierarchy truncation at the inhomogeneity points", tol, [&] {
            double worst = 0.0;
            for (int l = 1; l <= pr.sites; ++l)
              worst = std::max(worst, check_closure_identity(pr, l));
            return worst;
          });
  // The logarithmic-derivative Hamiltonian exists only while the
  // polynomial transfer matrix is invertible at the origin (s <= 1); for
  // higher spin the row is omitted rather than reported as a failure.
  bool ham_defined = true;
  CMatrix h;
  try {
    h = hamiltonian(pr);
  } catch (const std::exception&) {
    ham_defined = false;
  }
  if (ham_defined)
    out.add("transfer hamiltonian",
            "[H, t(u)] = 0 for the homogeneous chain", tol, [&] {
              ModelParams hom = pr;
              hom.theta.assign(hom.sites, Complex(0.0));
              const TransferFamily fh(hom, 1);
              double worst = 0.0;
              for (int k = 0; k < opt.samples; ++k) {
                const CMatrix t = fh(detail::sample_u(rng));
                worst = std::max(worst,
                                 (h * t - t * h).norm() /
                                     std::max(h.norm() * t.norm(), 1e-300));
              }
              return worst;
            });
  return out.take();
}

// --- gauged double-row algebra ----------------------------------------------

inline std::vector<CheckRow> gauge_rows(const ModelParams& pr,
                                        const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x67617567u);
  const GaugedTransfer g(pr);
  const Complex eta = pr.eta;

  out.add("gauge transfer split",
          "sum of the two gauged diagonal blocks rebuilds t(u)", 1e-9, [&] {
            const TransferFamily fam(pr, 1);
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              worst = std::max(worst, detail::rel_diff(g.transfer(u), fam(u)));
            }
            return worst;
          });
  out.add("gauge one-row exchange",
          "six gauged one-row exchange relations at generic u, v", 1e-9, [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const auto [u, v] = detail::sample_pair(rng);
              const AuxBlocks x = g.one_row(u), y = g.one_row(v);
              const Complex d = u - v;
              worst = std::max(
                  {worst,
                   detail::rel_diff(x.a * y.b, ((d - eta) / d) * y.b * x.a +
                                                   (eta / d) * x.b * y.a),
                   detail::rel_diff(x.d * y.b, ((d + eta) / d) * y.b * x.d -
                                                   (eta / d) * x.b * y.d),
                   detail::rel_diff(x.b * y.d, ((d + eta) / d) * y.d * x.b -
                                                   (eta / d) * x.d * y.b),
                   detail::rel_diff(x.c * y.a, ((d + eta) / d) * y.a * x.c -
                                                   (eta / d) * x.a * y.c),
                   detail::rel_diff(x.c * y.d, ((d - eta) / d) * y.d * x.c +
                                                   (eta / d) * x.d * y.c),
                   detail::rel_diff(x.c * y.b - y.b * x.c,
                                    (eta / d) * (x.d * y.a - y.d * x.a))});
            }
            return worst;
          });
  out.add("gauge double-row exchange",
          "gauged double-row exchange relations at generic u, v", 1e-9, [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const auto [u, v] = detail::sample_pair(rng);
              const AuxBlocks x = g.double_row(u), y = g.double_row(v);
              const Complex dm = u - v, dp = u + v;
              const Complex f1 = dp * (dm + eta) / (dm * (dp + eta));
              const Complex f2 = eta / (dp + eta);
              const Complex f3 = dp * eta / (dm * (dp + eta));
              const Complex f4 = eta * (dp + 2.0 * eta) / (dm * (dp + eta));
              worst = std::max(
                  {worst,
                   detail::rel_diff(x.c * y.a, f1 * y.a * x.c - f2 * x.d * y.c -
                                                   f3 * x.a * y.c),
                   detail::rel_diff(y.d * x.c, f1 * x.c * y.d - f2 * y.c * x.a -
                                                   f3 * y.c * x.d),
                   detail::rel_diff(x.a * y.a, y.a * x.a + f2 * y.b * x.c -
                                                   f2 * x.b * y.c),
                   detail::rel_diff(x.d * y.d, y.d * x.d + f2 * y.c * x.b -
                                                   f2 * x.c * y.b),
                   detail::rel_diff(x.d * y.a, y.a * x.d - f4 * x.b * y.c +
                                                   f4 * y.b * x.c),
                   (x.c * y.c - y.c * x.c).norm() /
                       std::max(x.c.norm() * y.c.norm(), 1e-300),
                   (x.b * y.b - y.b * x.b).norm() /
                       std::max(x.b.norm() * y.b.norm(), 1e-300)});
            }
            return worst;
          });
  return out.take();
}

// --- separated basis ---------------------------------------------------------

inline std::vector<CheckRow> sov_rows(const ModelParams& pr,
                                      const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x736f7620u);
  const SovBasis sv(pr);
  const GaugedTransfer& g = sv.gauged();

  out.add("sov right eigenstates",
          "right separated states diagonalize the lower-left double-row family",
          1e-8, [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              const CMatrix op = g.double_row(u).c;
              for (int idx = 0; idx < sv.size(); ++idx) {
                const CVector& r = sv.right(idx);
                const double err =
                    (op * r - sv.c_eigen_right(u, idx) * r).norm() /
                    std::max(op.norm() * r.norm(), 1e-300);
                worst = std::max(worst, err);
              }
            }
            return worst;
          });
  out.add("sov left eigenstates",
          "left separated states diagonalize the transposed family", 1e-8,
          [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              const CMatrix op = g.double_row(u).c.transpose();
              for (int idx = 0; idx < sv.size(); ++idx) {
                const CVector& l = sv.left(idx);
                const double err =
                    (op * l - sv.c_eigen_left(u, idx) * l).norm() /
                    std::max(op.norm() * l.norm(), 1e-300);
                worst = std::max(worst, err);
              }
            }
            return worst;
          });
  out.add("sov pairing structure",
          "left and right states pair only through complementary labels", 1e-8,
          [&] {
            CMatrix gram(sv.size(), sv.size());
            for (int i = 0; i < sv.size(); ++i)
              for (int j = 0; j < sv.size(); ++j)
                gram(i, j) = bilinear(sv.left(i), sv.right(j));
            // Off-complement entries relative to the pairing scale; the
            // size of the anti-diagonal itself is watched by the condition
            // number row below.
            const double scale = gram.cwiseAbs().maxCoeff();
            double off = 0.0;
            for (int j = 0; j < sv.size(); ++j)
              for (int i = 0; i < sv.size(); ++i)
                if (i != sv.complement(j))
                  off = std::max(off, std::abs(gram(i, j)));
            return off / std::max(scale, 1e-300);
          });
  out.add("sov gram condition",
          "condition number of the left/right pairing matrix", 1e12, [&] {
            CMatrix gram(sv.size(), sv.size());
            for (int i = 0; i < sv.size(); ++i)
              for (int j = 0; j < sv.size(); ++j)
                gram(i, j) = bilinear(sv.left(i), sv.right(j));
            const Eigen::JacobiSVD<CMatrix> svd(gram);
            const auto& sing = svd.singularValues();
            return sing(0) / std::max(sing(sing.size() - 1), 1e-300);
          });
  out.add("sov vacuum overlaps",
          "highest-weight overlaps of the right basis collapse to "
          "boundary-dressed products",
          1e-8, [&] {
            CVector highest = CVector::Zero(pr.chain_dim());
            highest(0) = 1.0;
            const Complex denom = bilinear(highest, sv.omega());
            double worst = 0.0;
            for (int idx = 0; idx < sv.size(); ++idx) {
              const Complex direct = bilinear(highest, sv.right(idx)) / denom;
              const Complex closed = sv.vacuum_overlap_ratio(idx);
              worst = std::max(worst, std::abs(direct - closed) /
                                          (1.0 + std::abs(closed)));
            }
            return worst;
          });
  return out.take();
}

// --- scalar products ----------------------------------------------------------

inline std::vector<CheckRow> scalar_rows(const ModelParams& pr,
                                         const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x7363616cu);
  const SovBasis sv(pr);
  const GaugedTransfer& g = sv.gauged();
  const Complex eta = pr.eta;

  out.add("scalar one-row qdet",
          "one-row quantum determinant is the scalar a(u) d(u - eta)", 1e-9,
          [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              const AuxBlocks lo = g.one_row(u - eta), hi = g.one_row(u);
              const CMatrix q1 = lo.a * hi.d - lo.c * hi.b;
              const CMatrix q2 = lo.d * hi.a - lo.b * hi.c;
              const CMatrix val =
                  sv.a_of(u) * sv.d_of(u - eta) * identity(pr.chain_dim());
              worst = std::max({worst, detail::rel_diff(q1, q2),
                                detail::rel_diff(q1, val)});
            }
            return worst;
          });
  out.add("scalar double-row qdet",
          "double-row quantum determinant is the boundary-dressed scalar",
          1e-9, [&] {
            const Complex p = pr.boundary.p;
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              const CMatrix lhs =
                  g.dbar(u - eta) * g.double_row(u).a -
                  (2.0 * u / (2.0 * u - eta)) * g.double_row(u - eta).b *
                      g.double_row(u).c;
              const CMatrix rhs = ((2.0 * u - 2.0 * eta) / (2.0 * u - eta)) *
                                  (p * p - u * u) * sv.a_of(u) *
                                  sv.d_of(-u - eta) * sv.a_of(-u) *
                                  sv.d_of(u - eta) * identity(pr.chain_dim());
              worst = std::max(worst, detail::rel_diff(lhs, rhs));
            }
            return worst;
          });
  out.add("scalar eigenstate overlaps",
          "separated-basis overlaps of transfer eigenstates match the "
          "Q-dressed closed form",
          1e-7, [&] {
            const TQFunctions tq(pr);
            const BetheRun run = solve_bethe(pr);
            double worst = 0.0;
            for (const BetheSolution& s : run.solutions) {
              const auto qfun = [&](Complex u) { return tq.q_of(u, s.roots); };
              const CVector exact =
                  run.spectrum.left.row(s.eigen_index).transpose();
              const Complex denom = bilinear(exact, sv.omega());
              for (int idx = 0; idx < sv.size(); ++idx) {
                const Complex closed = sv.eigenstate_overlap_ratio(idx, qfun);
                const Complex direct =
                    bilinear(exact, sv.right(idx)) / denom;
                worst = std::max(worst, std::abs(direct - closed) /
                                            (1.0 + std::abs(closed)));
              }
            }
            return worst;
          });
  return out.take();
}

// --- T-Q relation and Bethe states --------------------------------------------

inline std::vector<CheckRow> tq_rows(const ModelParams& pr,
                                     const SuiteOptions& opt) {
  detail::Collector out(opt);
  std::mt19937_64 rng(opt.seed ^ 0x74712020u);
  const TQFunctions tq(pr);

  out.add("tq delta factorization",
          "delta(u) of the hierarchy equals a(u) a(-u) of the dressing "
          "functions",
          1e-10, [&] {
            double worst = 0.0;
            for (int k = 0; k < opt.samples; ++k) {
              const Complex u = detail::sample_u(rng);
              const Complex lhs = delta_s(pr, u);
              const Complex rhs = tq.a_of(u) * tq.a_of(-u);
              worst = std::max(worst,
                               std::abs(lhs - rhs) /
                                   std::max(std::abs(lhs), 1e-300));
            }
            return worst;
          });

  // The remaining rows share one spectral run.
  BetheRun run;
  bool run_ok = true;
  try {
    run = solve_bethe(pr);
  } catch (const std::exception&) {
    run_ok = false;
  }
  if (!run_ok) {
    out.add("tq pipeline", "eigenvalue tracking and Q extraction complete",
            0.5, [] { return std::numeric_limits<double>::max(); });
    return out.take();
  }

  out.add("tq origin value",
          "every eigenvalue branch takes the universal value at u = 0", 1e-8,
          [&] {
            Complex scalar = 2.0 * pr.boundary.p * pr.boundary.q;
            const Complex shift = (0.5 + 0.5 * pr.spin.twos) * pr.eta;
            for (Complex th : pr.theta) scalar *= (th + shift) * (-th + shift);
            const TransferFamily fam(pr, 1);
            const CVector at0 =
                branch_values(run.spectrum, fam, Complex(0.0));
            double worst = 0.0;
            for (Eigen::Index i = 0; i < at0.size(); ++i)
              worst = std::max(worst, std::abs(at0(i) - scalar) /
                                          std::max(std::abs(scalar), 1e-300));
            return worst;
          });
  out.add("tq fit residual",
          "least-squares defect of the inhomogeneous T-Q fit per branch", 1e-7,
          [&] {
            double worst = 0.0;
            for (const BetheSolution& s : run.solutions)
              worst = std::max(worst, s.tq_fit_residual);
            return worst;
          });
  out.add("tq bae residual",
          "Bethe-equation residuals of the refined roots", 1e-10, [&] {
            double worst = 0.0;
            for (const BetheSolution& s : run.solutions)
              worst = std::max(worst, s.bae_residual);
            return worst;
          });
  out.add("tq root count",
          "each branch carries exactly 2 s N Bethe roots", 0.5, [&] {
            const std::size_t want =
                std::size_t(pr.spin.twos) * std::size_t(pr.sites);
            double worst = 0.0;
            for (const BetheSolution& s : run.solutions)
              worst = std::max(worst,
                               std::abs(double(s.roots.size()) - double(want)));
            return worst;
          });
  return out.take();
}

inline std::vector<CheckRow> bethe_rows_from_run(const ModelParams& pr,
                                                 const BetheRun& run,
                                                 const SuiteOptions& opt) {
  detail::Collector out(opt);
  bool homogeneous = true;
  for (Complex th : pr.theta)
    if (th != Complex(0.0)) homogeneous = false;
  // Homogeneous refits ride on confluent sample grids; allow one decade.
  const double res_tol = homogeneous ? 1e-6 : 1e-7;

  out.add("bethe fidelity",
          "rebuilt Bethe states align with the exact eigenvectors", 1e-7, [&] {
            double worst = 0.0;
            for (const BetheSolution& s : run.solutions)
              worst = std::max(worst, 1.0 - s.state_fidelity);
            return worst;
          });
  out.add("bethe eigenstate residual",
          "rebuilt states satisfy t(u) v = Lambda(u) v off the sample grid",
          res_tol, [&] {
            double worst = 0.0;
            for (const BetheSolution& s : run.solutions)
              worst = std::max(worst, s.eigen_residual);
            return worst;
          });
  out.add("bethe refinement",
          "Newton refinement converged on every branch", 0.5, [&] {
            double bad = 0.0;
            for (const BetheSolution& s : run.solutions)
              if (!s.refine_converged) bad += 1.0;
            return bad;
          });
  return out.take();
}

inline std::vector<CheckRow> bethe_rows(const ModelParams& pr,
                                        const SuiteOptions& opt) {
  try {
    const BetheRun run = solve_bethe(pr);
    return bethe_rows_from_run(pr, run, opt);
  } catch (const std::exception&) {
    detail::Collector out(opt);
    out.add("bethe pipeline", "eigenvalue tracking and Q extraction complete",
            0.5, [] { return std::numeric_limits<double>::max(); });
    return out.take();
  }
}

// --- dispatch -----------------------------------------------------------------

inline std::vector<CheckRow> run_suite(const ModelParams& pr,
                                       const std::string& suite,
                                       const SuiteOptions& opt) {
  if (suite == "ybe") return ybe_rows(pr, opt);
  if (suite == "reflection") return reflection_rows(pr, opt);
  if (suite == "fusion") return fusion_rows(pr, opt);
  if (suite == "transfer") return transfer_rows(pr, opt);
  if (suite == "gauge") return gauge_rows(pr, opt);
  if (suite == "sov") return sov_rows(pr, opt);
  if (suite == "scalar") return scalar_rows(pr, opt);
  if (suite == "tq") return tq_rows(pr, opt);
  if (suite == "bethe") return bethe_rows(pr, opt);
  if (suite == "all") {
    std::vector<CheckRow> rows;
    for (const std::string& name : suite_names()) {
      if (!suite_applicable(pr, name)) continue;
      std::vector<CheckRow> part = run_suite(pr, name, opt);
      rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
    return rows;
  }
  throw std::invalid_argument("run_suite: unknown suite '" + suite + "'");
}

}  // namespace openspin::checks
