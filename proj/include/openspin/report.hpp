#pragma once

// Run configuration and machine-readable reports for the command-line
// workbench.  Reports serialize to JSON (fixed key order, 17-significant-
// digit residuals, so identical runs produce identical bytes and every
// number reads back exactly) or to flat CSV tables, and are written
// atomically via a temporary file.

#include "openspin/checks.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace openspin::cli {

// --- number and complex formatting -------------------------------------------

// Shortest decimal form that parses back to the same double.
inline std::string fmt_double(double x) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == x) {
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
      char probe[64];
      std::snprintf(probe, sizeof probe, "%.*g", prec, x);
      std::sscanf(probe, "%lf", &back);
      if (back == x) return std::string(probe);
    }
  }
  return std::string(buf, std::size_t(n));
}

// Full 17-significant-digit form used for residual and tolerance fields.
inline std::string fmt_double_17(double x) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, std::size_t(n));
}

// Complex values are exchanged as "re" or "re+imi" strings.
inline std::string fmt_complex(Complex z) {
  std::string out = fmt_double(z.real());
  if (z.imag() != 0.0) {
    if (z.imag() > 0.0) out += "+";
    out += fmt_double(z.imag());
    out += "i";
  }
  return out;
}

inline Complex parse_complex(const std::string& text) {
  const char* s = text.c_str();
  char* end = nullptr;
  const double re = std::strtod(s, &end);
  if (end == s)
    throw std::invalid_argument("expected 're' or 're+imi', got '" + text +
                                "'");
  if (*end == '\0') return Complex(re, 0.0);
  const char* rest = end;
  const double im = std::strtod(rest, &end);
  if (end == rest || *end != 'i' || *(end + 1) != '\0')
    throw std::invalid_argument("expected 're' or 're+imi', got '" + text +
                                "'");
  return Complex(re, im);
}

// --- run configuration ---------------------------------------------------------

struct RunConfig {
  std::string command = "check";  // check | spectrum | bethe | sov
  SpinLabel spin{1};
  int sites = 3;
  Complex eta{1.0, 0.0};
  Complex p{0.8, 0.0};
  Complex q{1.2, 0.0};
  Complex xi{0.6, 0.0};
  Complex varsigma{0.0, 0.0};
  std::vector<Complex> theta;  // resolved values; see resolve_theta
  std::uint64_t seed = 42;
  int samples = 3;
  std::string suite = "all";  // check command only
  double tol_override = 0.0;  // > 0 replaces every default tolerance
  std::string format = "json";
  std::string out;  // empty writes to stdout

  ModelParams model() const {
    return ModelParams{spin, sites, eta, {p, varsigma, q, xi}, theta};
  }

  checks::SuiteOptions suite_options() const {
    checks::SuiteOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    opt.tol_override = tol_override;
    return opt;
  }
};

// Default inhomogeneities are drawn from the seed: order-one, pairwise
// generic, reproducible.
inline std::vector<Complex> default_theta(int sites, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x7468657461ull);
  for (int attempt = 0; attempt < 128; ++attempt) {
    std::vector<Complex> theta(sites);
    for (Complex& th : theta)
      th = Complex(-0.4 + 0.8 * checks::detail::unit_real(rng), 0.0);
    ModelParams probe{SpinLabel{1}, sites, Complex(1.0),
                      {Complex(0.8), Complex(0.0), Complex(1.2), Complex(0.6)},
                      theta};
    try {
      probe.require_generic_theta();
      return theta;
    } catch (const std::exception&) {
      continue;  // colliding draw; take fresh words from the stream
    }
  }
  throw std::runtime_error("default_theta: could not draw a generic set");
}

// The spin-chain dimension cap guards against accidentally huge dense
// builds; WORKBENCH_MAX_DIM overrides the default of 1024.
inline long dimension_cap() {
  if (const char* env = std::getenv("WORKBENCH_MAX_DIM")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap <= 0)
      throw std::invalid_argument(
          "WORKBENCH_MAX_DIM must be a positive integer");
    return cap;
  }
  return 1024;
}

// --- report -----------------------------------------------------------------------

struct BetheRow {
  int eigen_index = 0;
  double lambda_re = 0.0;
  double lambda_im = 0.0;
  double bae_residual = 0.0;
  double fidelity = 0.0;
};

struct SpectrumRow {
  int eigen_index = 0;
  double lambda_re = 0.0;
  double lambda_im = 0.0;
};

struct SovRow {
  std::string index;  // semicolon-joined magnon labels, one per site
  double pairing_re = 0.0;
  double pairing_im = 0.0;
};

struct Report {
  RunConfig config;
  std::vector<checks::CheckRow> checks;
  std::vector<BetheRow> bethe;
  std::string base_point;  // spectrum command: where the family was diagonalized
  std::vector<SpectrumRow> spectrum;
  std::vector<SovRow> sov;

  bool all_pass() const {
    for (const checks::CheckRow& row : checks)
      if (!row.pass) return false;
    return true;
  }
};

// --- JSON emission (fixed layout, hand-rolled for byte stability) -----------------

namespace detail {

inline void json_escape(std::string& out, const std::string& text) {
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace detail

inline std::string to_json(const Report& rep) {
  std::string out;
  const auto str = [&](const std::string& s) { detail::json_escape(out, s); };
  out += "{\n  \"config\": {\n";
  out += "    \"command\": ";
  str(rep.config.command);
  out += ",\n    \"spin\": ";
  str(rep.config.spin.str());
  out += ",\n    \"sites\": " + std::to_string(rep.config.sites);
  out += ",\n    \"eta\": ";
  str(fmt_complex(rep.config.eta));
  out += ",\n    \"p\": ";
  str(fmt_complex(rep.config.p));
  out += ",\n    \"q\": ";
  str(fmt_complex(rep.config.q));
  out += ",\n    \"xi\": ";
  str(fmt_complex(rep.config.xi));
  out += ",\n    \"varsigma\": ";
  str(fmt_complex(rep.config.varsigma));
  out += ",\n    \"theta\": [";
  for (std::size_t l = 0; l < rep.config.theta.size(); ++l) {
    if (l) out += ", ";
    str(fmt_complex(rep.config.theta[l]));
  }
  out += "]";
  out += ",\n    \"seed\": " + std::to_string(rep.config.seed);
  out += ",\n    \"samples\": " + std::to_string(rep.config.samples);
  if (rep.config.command == "check") {
    out += ",\n    \"suite\": ";
    str(rep.config.suite);
  }
  if (rep.config.tol_override > 0.0)
    out += ",\n    \"tol\": " + fmt_double_17(rep.config.tol_override);
  out += "\n  },\n  \"checks\": [";
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const checks::CheckRow& row = rep.checks[i];
    out += i ? ",\n    {\n" : "\n    {\n";
    out += "      \"name\": ";
    str(row.name);
    out += ",\n      \"anchor\": ";
    str(row.anchor);
    out += ",\n      \"residual\": " + fmt_double_17(row.residual);
    out += ",\n      \"tol\": " + fmt_double_17(row.tol);
    out += ",\n      \"pass\": ";
    out += row.pass ? "true" : "false";
    out += "\n    }";
  }
  out += rep.checks.empty() ? "],\n" : "\n  ],\n";
  out += "  \"bethe\": [";
  for (std::size_t i = 0; i < rep.bethe.size(); ++i) {
    const BetheRow& row = rep.bethe[i];
    out += i ? ",\n    {\n" : "\n    {\n";
    out += "      \"eigen_index\": " + std::to_string(row.eigen_index);
    out += ",\n      \"lambda_re\": " + fmt_double_17(row.lambda_re);
    out += ",\n      \"lambda_im\": " + fmt_double_17(row.lambda_im);
    out += ",\n      \"bae_residual\": " + fmt_double_17(row.bae_residual);
    out += ",\n      \"fidelity\": " + fmt_double_17(row.fidelity);
    out += "\n    }";
  }
  out += rep.bethe.empty() ? "]" : "\n  ]";
  if (rep.config.command == "spectrum") {
    out += ",\n  \"base_point\": ";
    str(rep.base_point);
    out += ",\n  \"spectrum\": [";
    for (std::size_t i = 0; i < rep.spectrum.size(); ++i) {
      const SpectrumRow& row = rep.spectrum[i];
      out += i ? ",\n    {\n" : "\n    {\n";
      out += "      \"eigen_index\": " + std::to_string(row.eigen_index);
      out += ",\n      \"lambda_re\": " + fmt_double_17(row.lambda_re);
      out += ",\n      \"lambda_im\": " + fmt_double_17(row.lambda_im);
      out += "\n    }";
    }
    out += rep.spectrum.empty() ? "]" : "\n  ]";
  }
  if (rep.config.command == "sov") {
    out += ",\n  \"sov\": [";
    for (std::size_t i = 0; i < rep.sov.size(); ++i) {
      const SovRow& row = rep.sov[i];
      out += i ? ",\n    {\n" : "\n    {\n";
      out += "      \"index\": ";
      str(row.index);
      out += ",\n      \"pairing_re\": " + fmt_double_17(row.pairing_re);
      out += ",\n      \"pairing_im\": " + fmt_double_17(row.pairing_im);
      out += "\n    }";
    }
    out += rep.sov.empty() ? "]" : "\n  ]";
  }
  out += "\n}\n";
  return out;
}

// Parses a report emitted by to_json; to_json(from_json(text)) == text.
inline Report from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Report rep;
  const nlohmann::json& c = j.at("config");
  rep.config.command = c.at("command").get<std::string>();
  rep.config.spin = SpinLabel::parse(c.at("spin").get<std::string>());
  rep.config.sites = c.at("sites").get<int>();
  rep.config.eta = parse_complex(c.at("eta").get<std::string>());
  rep.config.p = parse_complex(c.at("p").get<std::string>());
  rep.config.q = parse_complex(c.at("q").get<std::string>());
  rep.config.xi = parse_complex(c.at("xi").get<std::string>());
  rep.config.varsigma = parse_complex(c.at("varsigma").get<std::string>());
  rep.config.theta.clear();
  for (const nlohmann::json& th : c.at("theta"))
    rep.config.theta.push_back(parse_complex(th.get<std::string>()));
  rep.config.seed = c.at("seed").get<std::uint64_t>();
  rep.config.samples = c.at("samples").get<int>();
  if (c.contains("suite")) rep.config.suite = c.at("suite").get<std::string>();
  if (c.contains("tol")) rep.config.tol_override = c.at("tol").get<double>();
  for (const nlohmann::json& row : j.at("checks")) {
    checks::CheckRow r;
    r.name = row.at("name").get<std::string>();
    r.anchor = row.at("anchor").get<std::string>();
    r.residual = row.at("residual").get<double>();
    r.tol = row.at("tol").get<double>();
    r.pass = row.at("pass").get<bool>();
    rep.checks.push_back(std::move(r));
  }
  for (const nlohmann::json& row : j.at("bethe")) {
    BetheRow r;
    r.eigen_index = row.at("eigen_index").get<int>();
    r.lambda_re = row.at("lambda_re").get<double>();
    r.lambda_im = row.at("lambda_im").get<double>();
    r.bae_residual = row.at("bae_residual").get<double>();
    r.fidelity = row.at("fidelity").get<double>();
    rep.bethe.push_back(r);
  }
  if (j.contains("base_point"))
    rep.base_point = j.at("base_point").get<std::string>();
  if (j.contains("spectrum"))
    for (const nlohmann::json& row : j.at("spectrum")) {
      SpectrumRow r;
      r.eigen_index = row.at("eigen_index").get<int>();
      r.lambda_re = row.at("lambda_re").get<double>();
      r.lambda_im = row.at("lambda_im").get<double>();
      rep.spectrum.push_back(r);
    }
  if (j.contains("sov"))
    for (const nlohmann::json& row : j.at("sov")) {
      SovRow r;
      r.index = row.at("index").get<std::string>();
      r.pairing_re = row.at("pairing_re").get<double>();
      r.pairing_im = row.at("pairing_im").get<double>();
      rep.sov.push_back(std::move(r));
    }
  return rep;
}

// --- CSV emission -------------------------------------------------------------------

namespace detail {

inline void csv_quote(std::string& out, const std::string& text) {
  out += '"';
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace detail

inline std::string to_csv(const Report& rep) {
  std::string out;
  if (rep.config.command == "bethe") {
    out += "eigen_index,lambda_re,lambda_im,bae_residual,fidelity\n";
    for (const BetheRow& row : rep.bethe) {
      out += std::to_string(row.eigen_index) + "," +
             fmt_double_17(row.lambda_re) + "," + fmt_double_17(row.lambda_im) +
             "," + fmt_double_17(row.bae_residual) + "," +
             fmt_double_17(row.fidelity) + "\n";
    }
    return out;
  }
  if (rep.config.command == "spectrum") {
    out += "eigen_index,lambda_re,lambda_im\n";
    for (const SpectrumRow& row : rep.spectrum)
      out += std::to_string(row.eigen_index) + "," +
             fmt_double_17(row.lambda_re) + "," + fmt_double_17(row.lambda_im) +
             "\n";
    return out;
  }
  if (rep.config.command == "sov") {
    out += "sov_index,pairing_re,pairing_im\n";
    for (const SovRow& row : rep.sov)
      out += row.index + "," + fmt_double_17(row.pairing_re) + "," +
             fmt_double_17(row.pairing_im) + "\n";
    return out;
  }
  out += "name,anchor,residual,tolerance,pass\n";
  for (const checks::CheckRow& row : rep.checks) {
    detail::csv_quote(out, row.name);
    out += ",";
    detail::csv_quote(out, row.anchor);
    out += "," + fmt_double_17(row.residual) + "," + fmt_double_17(row.tol) +
           "," + (row.pass ? std::string("true") : std::string("false")) +
           "\n";
  }
  return out;
}

inline std::string render(const Report& rep) {
  return rep.config.format == "csv" ? to_csv(rep) : to_json(rep);
}

// Atomic file write: stage into a sibling temporary, then rename over the
// target so readers never observe a half-written report.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    if (!stream) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    stream.write(content.data(), std::streamsize(content.size()));
    if (!stream) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw std::runtime_error("cannot move report into place at '" + path +
                             "': " + ec.message());
}

}  // namespace openspin::cli
