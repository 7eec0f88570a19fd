#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/version.hpp"

namespace {

using zeta4::cli::json;
using zeta4::cli::Params;

int exit_code(zeta4::ErrorKind kind) {
  using zeta4::ErrorKind;
  switch (kind) {
    case ErrorKind::Budget:
    case ErrorKind::Precision:
    case ErrorKind::MissedZero:
      return 3;
    case ErrorKind::Geometry:
      return 4;
    default:
      return 2;
  }
}

// Resolved option values of one subcommand, numbers kept numeric.
json resolved_config(const CLI::App& sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    std::vector<std::string> values = opt->results();
    if (values.empty()) {
      const std::string def = opt->get_default_str();
      if (def.empty()) continue;
      values = {def};
    }
    const std::string type = opt->get_type_name();
    const bool integral = type.rfind("INT", 0) == 0 || type.rfind("UINT", 0) == 0;
    json arr = json::array();
    for (const auto& v : values) {
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (!v.empty() && end && *end == '\0') {
        if (integral) arr.push_back(static_cast<long long>(x));
        else arr.push_back(x);
      } else if (v == "true" || v == "false") {
        arr.push_back(v == "true");
      } else {
        arr.push_back(v);
      }
    }
    cfg[name] = (arr.size() == 1 && opt->get_expected_max() <= 1) ? arr[0] : arr;
  }
  return cfg;
}

std::size_t default_budget() {
  if (const char* env = std::getenv("ZETA4_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    std::cerr << "ignoring malformed ZETA4_BUDGET='" << env << "'\n";
  }
  return 10'000'000;
}

}  // namespace

int main(int argc, char** argv) {
  Params p;
  p.budget = default_budget();
  for (int k = 10; k <= 17; ++k) p.heights.push_back(10.0 * static_cast<double>(1 << k));

  CLI::App app{"Fourth-moment and chord-geometry laboratory for the Riemann zeta function", "zeta4"};
  app.set_version_flag("--version", std::string("zeta4 ") + zeta4::kVersion);
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool csv) {
    sub->add_option("--format", p.format, csv ? "json or csv" : "json")
        ->check(csv ? CLI::IsMember({"json", "csv"}) : CLI::IsMember({"json"}))
        ->capture_default_str();
    sub->add_option("--out", p.out, "output file (default standard output)");
  };
  auto budget = [&](CLI::App* sub) {
    sub->add_option("--budget", p.budget, "integrand evaluation cap (env ZETA4_BUDGET)")->capture_default_str();
  };
  auto tol = [&](CLI::App* sub, double def) {
    p.tol = def;
    sub->add_option("--tol", p.tol, "relative tolerance in (0, 1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  };
  auto curve_opts = [&](CLI::App* sub, bool from_file) {
    sub->add_option("--T", p.T, "curve start (>= 10)");
    sub->add_option("--U", p.U, "curve length (> 0)");
    sub->add_option("--step", p.step, "grid spacing (<= 0.05)")->capture_default_str();
    sub->add_option("--convention", p.convention, "anchor-log or local-log")
        ->check(CLI::IsMember({"anchor-log", "local-log"}))
        ->capture_default_str();
    sub->add_option("--eps", p.eps, "exponent slack in T^(13/14+2eps)")->capture_default_str();
    if (from_file) {
      sub->add_option("--curve", p.curve, "read the curve from this CSV instead of building it");
      sub->add_option("--sidecar", p.sidecar, "JSON sidecar of --curve (default <curve>.json)");
    }
  };

  std::map<CLI::App*, std::function<json(std::ostream*)>> run;

  auto* s_theta = app.add_subcommand("theta", "Riemann-Siegel theta function");
  s_theta->add_option("--t", p.t, "height")->required();
  common(s_theta, false);
  run[s_theta] = [&](std::ostream*) { return zeta4::cli::cmd_theta(p); };

  auto* s_z = app.add_subcommand("z", "Hardy's Z function");
  s_z->add_option("--t", p.t, "height")->required();
  s_z->add_option("--terms", p.terms, "Riemann-Siegel correction terms (0..4)")->capture_default_str();
  tol(s_z, 1e-8);
  common(s_z, false);
  run[s_z] = [&](std::ostream*) { return zeta4::cli::cmd_z(p); };

  auto* s_zeros = app.add_subcommand("zeros", "critical-line zeros in (lo, hi]");
  s_zeros->add_option("--lo", p.lo, "lower end (>= 10)")->required();
  s_zeros->add_option("--hi", p.hi, "upper end")->required();
  s_zeros->add_option("--grid", p.grid, "scan spacing (<= 0.05)")->capture_default_str();
  common(s_zeros, true);
  run[s_zeros] = [&](std::ostream* csv) { return zeta4::cli::cmd_zeros(p, csv); };

  auto* s_moment = app.add_subcommand("moment", "integral of Z^4 over [T, T+U]");
  s_moment->add_option("--T", p.T, "lower end (>= 1)")->required();
  s_moment->add_option("--U", p.U, "length (>= 0)")->required();
  s_moment->add_flag("--adaptive-only", p.adaptive_only, "disable the equispaced long-range path")->capture_default_str();
  tol(s_moment, 1e-8);
  budget(s_moment);
  common(s_moment, false);
  run[s_moment] = [&](std::ostream*) { return zeta4::cli::cmd_moment(p); };

  auto* s_laplace = app.add_subcommand("laplace", "integral of Z^4 e^(-delta t) over [0, inf)");
  s_laplace->add_option("--delta", p.delta, "decay rate in (0, 1]")->required();
  tol(s_laplace, 1e-6);
  budget(s_laplace);
  common(s_laplace, false);
  run[s_laplace] = [&](std::ostream*) { return zeta4::cli::cmd_laplace(p); };

  auto* s_fit = app.add_subcommand("fit", "least-squares fit of the moment polynomial");
  s_fit->add_option("--samples", p.samples_in, "read samples (T,value,err_bound) from CSV");
  s_fit->add_option("--heights", p.heights, "sample heights when computing")->delimiter(',')->capture_default_str();
  s_fit->add_option("--save-samples", p.samples_out, "write computed samples to CSV");
  s_fit->add_flag("--drop-leading", p.drop_leading, "fit without the ln^4 column")->capture_default_str();
  tol(s_fit, 1e-9);
  budget(s_fit);
  common(s_fit, false);
  run[s_fit] = [&](std::ostream*) { return zeta4::cli::cmd_fit(p); };

  auto* s_ladder = app.add_subcommand("ladder", "reconstruct phi_2 on [T, T+U]");
  curve_opts(s_ladder, false);
  s_ladder->add_option("--sidecar", p.sidecar, "write the curve's JSON sidecar here");
  tol(s_ladder, 1e-9);
  budget(s_ladder);
  common(s_ladder, true);
  run[s_ladder] = [&](std::ostream* csv) { return zeta4::cli::cmd_ladder(p, csv); };

  auto* s_chords = app.add_subcommand("chords", "fundamental chord and almost-parallel chord scan");
  curve_opts(s_chords, true);
  s_chords->add_option("--lengths", p.lengths, "chord lengths to scan")->delimiter(',');
  s_chords->add_option("--chord-tol", p.chord_tol, "accepted |slope - 1|")->capture_default_str();
  s_chords->add_option("--n", p.n, "also solve for a unit-slope chord starting here");
  tol(s_chords, 1e-9);
  budget(s_chords);
  common(s_chords, true);
  run[s_chords] = [&](std::ostream* csv) { return zeta4::cli::cmd_chords(p, csv); };

  auto* s_inflect = app.add_subcommand("inflect", "inflection points between consecutive zeros");
  s_inflect->add_option("--lo", p.lo, "lower end (>= 10)")->required();
  s_inflect->add_option("--hi", p.hi, "upper end")->required();
  s_inflect->add_option("--step", p.step, "ladder grid spacing")->capture_default_str();
  s_inflect->add_option("--convention", p.convention, "anchor-log or local-log")
      ->check(CLI::IsMember({"anchor-log", "local-log"}))
      ->capture_default_str();
  tol(s_inflect, 1e-9);
  budget(s_inflect);
  common(s_inflect, false);
  run[s_inflect] = [&](std::ostream*) { return zeta4::cli::cmd_inflect(p); };

  auto* s_gbar = app.add_subcommand("gamma-bar", "paired zero, chord and crossing point");
  s_gbar->add_option("--gamma", p.gamma, "start at the first zero at or above this height")->required();
  s_gbar->add_option("--eps", p.eps, "exponent slack")->capture_default_str();
  s_gbar->add_option("--step", p.step, "ladder grid spacing")->capture_default_str();
  s_gbar->add_option("--ceiling", p.ceiling, "refuse heights above this")->capture_default_str();
  tol(s_gbar, 1e-9);
  budget(s_gbar);
  common(s_gbar, false);
  run[s_gbar] = [&](std::ostream*) { return zeta4::cli::cmd_gamma_bar(p); };

  auto* s_rotate = app.add_subcommand("rotate", "chord from a zero with a prescribed slope");
  s_rotate->add_option("--gamma", p.gamma, "start at the first zero at or above this height")->required();
  s_rotate->add_option("--tan", p.tan, "target slope")->required();
  s_rotate->add_option("--mode", p.mode, "s3 (window up to rho) or s4 (window up to rho_bar)")
      ->check(CLI::IsMember({"s3", "s4"}))
      ->capture_default_str();
  s_rotate->add_option("--eta", p.eta, "s4 clamps the target into [eta, 1 - eta]")->capture_default_str();
  s_rotate->add_option("--eps", p.eps, "exponent slack")->capture_default_str();
  s_rotate->add_option("--step", p.step, "ladder grid spacing")->capture_default_str();
  s_rotate->add_option("--ceiling", p.ceiling, "refuse s4 heights above this")->capture_default_str();
  tol(s_rotate, 1e-9);
  budget(s_rotate);
  common(s_rotate, true);
  run[s_rotate] = [&](std::ostream* csv) { return zeta4::cli::cmd_rotate(p, csv); };

  auto* s_verify = app.add_subcommand("verify", "compare the chord slope with the integral of Z^4");
  curve_opts(s_verify, true);
  s_verify->add_option("--n", p.n, "chord start (default curve start)");
  s_verify->add_option("--m", p.m, "chord end (default curve end)");
  s_verify->add_flag("--allow-drift", p.allow_drift, "report the local-log drift instead of refusing")->capture_default_str();
  tol(s_verify, 1e-9);
  budget(s_verify);
  common(s_verify, false);
  run[s_verify] = [&](std::ostream*) { return zeta4::cli::cmd_verify(p); };

  // --tol defaults differ per command; reset once the subcommand is known.
  std::map<CLI::App*, double> tol_default = {{s_z, 1e-8},       {s_moment, 1e-8}, {s_laplace, 1e-6},
                                             {s_fit, 1e-9},     {s_ladder, 1e-9}, {s_chords, 1e-9},
                                             {s_inflect, 1e-9}, {s_gbar, 1e-9},   {s_rotate, 1e-9},
                                             {s_verify, 1e-9}};
  for (auto& [sub, def] : tol_default) {
    sub->parse_complete_callback([&p, sub, def] {
      if (sub->get_option("--tol")->count() == 0) p.tol = def;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!p.out.empty()) {
    file.open(p.out);
    if (!file) {
      std::cerr << "cannot open output file '" << p.out << "'\n";
      return 2;
    }
    out = &file;
  }

  try {
    const bool csv = p.format == "csv";
    const json result = run.at(sub)(csv ? out : nullptr);
    if (!csv) {
      json record;
      record["command"] = sub->get_name();
      record["version"] = zeta4::kVersion;
      record["config"] = resolved_config(*sub);
      record["result"] = result;
      *out << record.dump() << '\n';
    }
  } catch (const zeta4::Error& e) {
    json err = {{"command", sub->get_name()},
                {"version", zeta4::kVersion},
                {"error", zeta4::to_string(e.kind())},
                {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return exit_code(e.kind());
  }
  return 0;
}
