// Command-line workbench for the open spin-s chain: identity check suites,
// transfer spectra, Bethe-root extraction, and separated-basis diagnostics,
// emitted as byte-stable JSON or CSV reports.
//
// Exit codes: 0 every check passed, 1 at least one check failed (report is
// still written), 2 usage or configuration error (nothing is written).

#include "openspin/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace openspin;

struct PendingOptions {
  std::string config_path;
  std::string spin, eta, p, q, xi, varsigma, theta, suite, format, out;
  int sites = 0, samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool timings = false;
};

// Registers the options shared by every subcommand; returns nothing, the
// values land in `pending` and are merged with config-file values later
// (flags win on conflict).
void add_common_options(CLI::App* cmd, PendingOptions& pending) {
  cmd->add_option("--config", pending.config_path,
                  "JSON configuration file; explicit flags take precedence");
  cmd->add_option("--spin", pending.spin, "site spin as '1/2', '1', '3/2', ...");
  cmd->add_option("--sites", pending.sites, "number of chain sites");
  cmd->add_option("--eta", pending.eta, "crossing parameter ('re' or 're+imi')");
  cmd->add_option("--p", pending.p, "lower boundary parameter p");
  cmd->add_option("--q", pending.q, "dual boundary parameter q");
  cmd->add_option("--xi", pending.xi, "dual boundary parameter xi");
  cmd->add_option("--varsigma", pending.varsigma,
                  "lower boundary parameter varsigma");
  cmd->add_option("--theta", pending.theta,
                  "inhomogeneities: comma-separated list or the literal "
                  "'zero' (default: drawn from the seed)");
  cmd->add_option("--samples", pending.samples,
                  "random spectral points per identity check");
  cmd->add_option("--tol", pending.tol,
                  "override every check tolerance with this value");
  cmd->add_option("--seed", pending.seed, "seed for all random draws");
  cmd->add_option("--out", pending.out,
                  "report path (default: write the report to stdout)");
  cmd->add_option("--format", pending.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timings", pending.timings,
                "include wall times in the console summary");
}

std::vector<Complex> parse_theta_list(const std::string& text, int sites) {
  if (text == "zero") return std::vector<Complex>(sites, Complex(0.0));
  std::vector<Complex> theta;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    theta.push_back(cli::parse_complex(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (int(theta.size()) != sites)
    throw std::invalid_argument("expected " + std::to_string(sites) +
                                " inhomogeneities, got " +
                                std::to_string(theta.size()));
  return theta;
}

bool flag_given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Merge order: built-in defaults, then the JSON config file, then flags.
cli::RunConfig build_config(const CLI::App& cmd, const PendingOptions& pend,
                            const std::string& command) {
  cli::RunConfig cfg;
  cfg.command = command;
  std::string theta_text;

  if (flag_given(cmd, "--config")) {
    std::ifstream stream(pend.config_path);
    if (!stream)
      throw std::invalid_argument("cannot read config file '" +
                                  pend.config_path + "'");
    nlohmann::json j;
    stream >> j;
    for (const auto& [key, value] : j.items()) {
      if (key == "spin")
        cfg.spin = SpinLabel::parse(value.get<std::string>());
      else if (key == "sites")
        cfg.sites = value.get<int>();
      else if (key == "eta")
        cfg.eta = cli::parse_complex(value.get<std::string>());
      else if (key == "p")
        cfg.p = cli::parse_complex(value.get<std::string>());
      else if (key == "q")
        cfg.q = cli::parse_complex(value.get<std::string>());
      else if (key == "xi")
        cfg.xi = cli::parse_complex(value.get<std::string>());
      else if (key == "varsigma")
        cfg.varsigma = cli::parse_complex(value.get<std::string>());
      else if (key == "theta") {
        if (value.is_string()) {
          theta_text = value.get<std::string>();
        } else {
          theta_text.clear();
          for (const nlohmann::json& item : value) {
            if (!theta_text.empty()) theta_text += ",";
            theta_text += item.get<std::string>();
          }
        }
      } else if (key == "samples")
        cfg.samples = value.get<int>();
      else if (key == "tol")
        cfg.tol_override = value.get<double>();
      else if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "suite")
        cfg.suite = value.get<std::string>();
      else if (key == "format")
        cfg.format = value.get<std::string>();
      else if (key == "out")
        cfg.out = value.get<std::string>();
      else
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

  if (flag_given(cmd, "--spin")) cfg.spin = SpinLabel::parse(pend.spin);
  if (flag_given(cmd, "--sites")) cfg.sites = pend.sites;
  if (flag_given(cmd, "--eta")) cfg.eta = cli::parse_complex(pend.eta);
  if (flag_given(cmd, "--p")) cfg.p = cli::parse_complex(pend.p);
  if (flag_given(cmd, "--q")) cfg.q = cli::parse_complex(pend.q);
  if (flag_given(cmd, "--xi")) cfg.xi = cli::parse_complex(pend.xi);
  if (flag_given(cmd, "--varsigma"))
    cfg.varsigma = cli::parse_complex(pend.varsigma);
  if (flag_given(cmd, "--theta")) theta_text = pend.theta;
  if (flag_given(cmd, "--samples")) cfg.samples = pend.samples;
  if (flag_given(cmd, "--tol")) cfg.tol_override = pend.tol;
  if (flag_given(cmd, "--seed")) cfg.seed = pend.seed;
  if (flag_given(cmd, "--suite")) cfg.suite = pend.suite;
  if (flag_given(cmd, "--format")) cfg.format = pend.format;
  if (flag_given(cmd, "--out")) cfg.out = pend.out;

  if (cfg.sites < 1) throw std::invalid_argument("need at least one site");
  if (cfg.samples < 1) throw std::invalid_argument("need at least one sample");

  long dim = 1;
  const long cap = cli::dimension_cap();
  for (int l = 0; l < cfg.sites; ++l) {
    dim *= cfg.spin.twos + 1;
    if (dim > cap)
      throw std::invalid_argument(
          "chain dimension " + std::to_string(cfg.spin.twos + 1) + "^" +
          std::to_string(cfg.sites) + " exceeds the cap of " +
          std::to_string(cap) + " (override with WORKBENCH_MAX_DIM)");
  }

  cfg.theta = theta_text.empty()
                  ? cli::default_theta(cfg.sites, cfg.seed)
                  : parse_theta_list(theta_text, cfg.sites);
  cfg.model().validate();
  return cfg;
}

std::string join_alpha(const std::vector<int>& alpha) {
  std::string out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i) out += ";";
    out += std::to_string(alpha[i]);
  }
  return out;
}

cli::Report run_command(const cli::RunConfig& cfg) {
  cli::Report rep;
  rep.config = cfg;
  const ModelParams pr = cfg.model();
  const checks::SuiteOptions opt = cfg.suite_options();

  if (cfg.command == "check") {
    if (!cfg.suite.empty()) rep.checks = checks::run_suite(pr, cfg.suite, opt);
    return rep;
  }
  if (cfg.command == "spectrum") {
    const TransferFamily fam(pr, 1);
    const Spectrum sp = diagonalize_transfer(fam);
    rep.base_point = cli::fmt_complex(sp.base_point);
    for (int i = 0; i < sp.size(); ++i)
      rep.spectrum.push_back(
          cli::SpectrumRow{i, sp.values[i].real(), sp.values[i].imag()});
    return rep;
  }
  if (cfg.command == "bethe") {
    try {
      const BetheRun run = solve_bethe(pr);
      const TQFunctions tq(pr);
      rep.checks = checks::bethe_rows_from_run(pr, run, opt);
      for (const BetheSolution& s : run.solutions)
        for (std::size_t jr = 0; jr < s.roots.size(); ++jr)
          rep.bethe.push_back({s.eigen_index, s.roots[jr].real(),
                               s.roots[jr].imag(),
                               tq.bae_residual(s.roots, int(jr)),
                               s.state_fidelity});
    } catch (const std::exception&) {
      checks::CheckRow row;
      row.name = "bethe pipeline";
      row.anchor = "eigenvalue tracking and Q extraction complete";
      row.residual = std::numeric_limits<double>::max();
      row.tol = 0.5;
      row.pass = false;
      rep.checks.push_back(std::move(row));
    }
    return rep;
  }
  if (cfg.command == "sov") {
    rep.checks = checks::run_suite(pr, "sov", opt);
    const SovBasis sv(pr);
    for (int idx = 0; idx < sv.size(); ++idx) {
      const Complex pairing = sv.pairing(idx);
      rep.sov.push_back(
          {join_alpha(sv.alpha(idx)), pairing.real(), pairing.imag()});
    }
    return rep;
  }
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

void print_summary(const cli::Report& rep, bool timings) {
  if (rep.config.command == "spectrum") {
    std::printf("spectrum: %zu eigenvalue branches at base point %s\n",
                rep.spectrum.size(), rep.base_point.c_str());
    return;
  }
  for (const checks::CheckRow& row : rep.checks) {
    if (timings)
      std::printf("%-4s %-28s residual %-12.3e tol %-9.1e %8.1f ms\n",
                  row.pass ? "ok" : "FAIL", row.name.c_str(), row.residual,
                  row.tol, 1e3 * row.seconds);
    else
      std::printf("%-4s %-28s residual %-12.3e tol %-9.1e\n",
                  row.pass ? "ok" : "FAIL", row.name.c_str(), row.residual,
                  row.tol);
  }
  if (rep.config.command == "bethe")
    std::printf("bethe: %zu root rows across %d eigenstates\n",
                rep.bethe.size(),
                rep.bethe.empty() ? 0 : rep.bethe.back().eigen_index + 1);
  if (rep.config.command == "sov")
    std::printf("sov: %zu separated labels\n", rep.sov.size());
  std::printf("overall: %s\n", rep.all_pass() ? "pass" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "openspin: numerical workbench for the open spin-s Heisenberg chain "
      "with non-diagonal boundaries"};
  app.require_subcommand(1);

  PendingOptions pending;
  CLI::App* check = app.add_subcommand(
      "check", "run an identity check suite and report residuals");
  check
      ->add_option("--suite", pending.suite,
                   "ybe, reflection, fusion, transfer, gauge, sov, scalar, "
                   "tq, bethe, all, or '' for none")
      ->capture_default_str();
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "diagonalize the fundamental transfer matrix");
  CLI::App* bethe = app.add_subcommand(
      "bethe", "extract and refine Bethe roots for every eigenstate");
  CLI::App* sov = app.add_subcommand(
      "sov", "separated-basis diagnostics and pairings");
  for (CLI::App* cmd : {check, spectrum, bethe, sov})
    add_common_options(cmd, pending);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  cli::Report rep;
  try {
    const cli::RunConfig cfg = build_config(*cmd, pending, cmd->get_name());
    if (cfg.command == "check" && !cfg.suite.empty() &&
        !checks::suite_known(cfg.suite)) {
      std::cerr << "error: unknown suite '" << cfg.suite << "'\n";
      return 2;
    }
    if (cfg.command == "check" && !cfg.suite.empty() && cfg.suite != "all" &&
        !checks::suite_applicable(cfg.model(), cfg.suite)) {
      std::cerr << "error: suite '" << cfg.suite
                << "' needs varsigma = 0"
                << (cfg.suite == "sov" || cfg.suite == "scalar"
                        ? " and pairwise-generic inhomogeneities"
                        : "")
                << "\n";
      return 2;
    }
    if ((cfg.command == "sov" || cfg.command == "bethe") &&
        !checks::suite_applicable(cfg.model(), cfg.command)) {
      std::cerr << "error: '" << cfg.command
                << "' needs varsigma = 0"
                << (cfg.command == "sov"
                        ? " and pairwise-generic inhomogeneities"
                        : "")
                << "\n";
      return 2;
    }
    rep = run_command(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::string body = cli::render(rep);
    if (rep.config.out.empty()) {
      std::fwrite(body.data(), 1, body.size(), stdout);
    } else {
      cli::write_atomic(rep.config.out, body);
      print_summary(rep, pending.timings);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rep.all_pass() ? 0 : 1;
}
