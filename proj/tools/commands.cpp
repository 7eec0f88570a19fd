#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>

#include "cli.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/ladder.hpp"
#include "zeta4/quad.hpp"
#include "zeta4/specfun.hpp"
#include "zeta4/zeros.hpp"

namespace zeta4::cli {

namespace {

constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;

double ln4(double t) {
  const double l = std::log(t);
  return l * l * l * l;
}

QuadConfig quad_config(const Params& p) {
  QuadConfig c;
  c.budget = p.budget;
  c.adaptive_only = p.adaptive_only;
  return c;
}

LadderOptions ladder_options(const Params& p) {
  LadderOptions o;
  o.eps = p.eps;
  o.budget = p.budget;
  o.tol = std::min(p.tol, 1e-9);
  return o;
}

json chord_json(const Chord& c) { return {{"n", c.n}, {"m", c.m}, {"slope", c.slope}}; }

LadderCurve load_or_build(const Params& p) {
  if (!p.curve.empty()) {
    std::ifstream csv(p.curve);
    std::ifstream side(p.sidecar.empty() ? p.curve + ".json" : p.sidecar);
    if (!csv || !side) fail(ErrorKind::Domain, "cannot open curve '" + p.curve + "' or its sidecar");
    return read_ladder(csv, side);
  }
  return build_ladder(p.T, p.U, p.step, parse_convention(p.convention), ladder_options(p));
}

// First zero at or above t, found on a short window.
double zero_at_or_above(double t) {
  for (double w = 4.0;; w *= 2.0) {
    const std::vector<double> zs = find_zeros(std::max(10.0, t), t + w);
    if (!zs.empty()) return zs.front();
  }
}

void require_ceiling(const Params& p, double gamma) {
  if (gamma > p.ceiling) {
    fail(ErrorKind::Domain, "height " + std::to_string(gamma) + " is above the section-4 ceiling " +
                                std::to_string(p.ceiling) + " (raise --ceiling)");
  }
}

struct Section4 {
  double gamma = 0.0;
  GammaBar bar;
  LadderCurve curve;
  double slope = 0.0;
  double rho_bar = 0.0;
  double h_at_rho_bar = 0.0;
};

Section4 section4(const Params& p) {
  Section4 s;
  s.gamma = zero_at_or_above(p.gamma);
  require_ceiling(p, s.gamma);
  const double reach = s.gamma + std::pow(s.gamma, 13.0 / 14.0 + 2.0 * p.eps);
  std::vector<double> zs = find_zeros(s.gamma + 1e-6, reach + 8.0);
  s.bar = select_gamma_bar(s.gamma, p.eps, zs);
  s.curve = build_ladder(s.gamma, s.bar.gamma_bar - s.gamma, p.step, parse_convention(p.convention), ladder_options(p));
  s.slope = chord(s.curve, s.gamma, s.bar.gamma_bar).slope;
  s.rho_bar = crossing_point(s.curve, s.gamma, s.bar.gamma_bar);
  s.h_at_rho_bar = s.curve.phi_at(s.rho_bar) - (s.curve.phi_at(s.gamma) + s.slope * (s.rho_bar - s.gamma));
  return s;
}

json corollary_json(const CorollaryReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"n", s.n},
                       {"m", s.m},
                       {"slope", s.slope},
                       {"lhs", s.lhs},
                       {"rhs", s.rhs},
                       {"rel_discrepancy", s.rel_discrepancy},
                       {"flagged", s.flagged}});
  }
  return {{"target_slope", r.target_slope}, {"tolerance", r.tolerance}, {"samples", samples}, {"skipped", r.skipped}};
}

}  // namespace

json cmd_theta(const Params& p) { return {{"t", p.t}, {"theta", static_cast<double>(theta(p.t))}}; }

json cmd_z(const Params& p) {
  Precision prec;
  prec.target_abs_err = p.tol;
  prec.correction_terms = p.terms;
  const EvalPoint e = z(p.t, prec);
  return {{"t", e.t},
          {"theta", static_cast<double>(e.theta)},
          {"z", e.z},
          {"abs_err", e.abs_err},
          {"path", e.path == ZPath::Oracle ? "euler-maclaurin" : "riemann-siegel"}};
}

json cmd_zeros(const Params& p, std::ostream* csv) {
  ZeroScanOptions o;
  o.grid = p.grid;
  const std::vector<double> zs = find_zeros(p.lo, p.hi, o);
  if (csv) {
    csv->precision(17);
    *csv << "gamma\n";
    for (double g : zs) *csv << g << '\n';
  }
  return {{"count", zs.size()},
          {"expected", zero_count_main_term(p.hi) - zero_count_main_term(p.lo)},
          {"zeros", zs}};
}

json cmd_moment(const Params& p) {
  const MomentEstimate e = integrate_z4(p.T, p.U, p.tol, quad_config(p));
  json r = {{"T", e.T},
            {"U", e.U},
            {"value", e.value},
            {"err_bound", e.err_bound},
            {"panels", e.panels},
            {"evaluations", e.evaluations}};
  if (e.U > 0.0) r["ingham_ratio"] = ingham_ratio(e);
  return r;
}

json cmd_laplace(const Params& p) {
  LaplaceOptions o;
  o.budget = p.budget;
  const LaplaceReport r = laplace_moment(p.delta, p.tol, o);
  return {{"delta", r.delta},
          {"value", r.value},
          {"err_bound", r.err_bound},
          {"t_max", r.t_max},
          {"envelope_const", r.envelope_const},
          {"tail_bound", r.tail_bound},
          {"leading_term", r.leading_term},
          {"ratio_to_leading", r.value / r.leading_term},
          {"evaluations", r.evaluations}};
}

json cmd_fit(const Params& p) {
  std::vector<MomentSample> samples;
  if (!p.samples_in.empty()) {
    std::ifstream in(p.samples_in);
    if (!in) fail(ErrorKind::Domain, "cannot open samples file '" + p.samples_in + "'");
    samples = read_samples_csv(in);
  } else {
    samples = moment_samples(p.heights, p.tol, quad_config(p));
  }
  if (!p.samples_out.empty()) {
    std::ofstream out(p.samples_out);
    write_samples_csv(out, samples);
  }
  const MomentFit f = fit_moment_polynomial(samples, p.drop_leading);
  const double c0 = 1.0 / kTwoPiSq;
  json pts = json::array();
  for (const auto& s : samples) {
    const double l = std::log(s.T);
    pts.push_back({{"T", s.T},
                   {"value", s.value},
                   {"err_bound", s.err_bound},
                   {"ingham_ratio", s.value / (s.T * l * l * l * l / kTwoPiSq)}});
  }
  return {{"coeffs", f.coeffs},
          {"residual_rms", f.residual_rms},
          {"sample_range", {f.sample_range.first, f.sample_range.second}},
          {"leading_dropped", f.leading_dropped},
          {"c0_reference", c0},
          {"c0_rel_error", f.leading_dropped ? json(nullptr) : json(f.coeffs[0] / c0 - 1.0)},
          {"samples", pts}};
}

json cmd_ladder(const Params& p, std::ostream* csv) {
  const LadderCurve c = build_ladder(p.T, p.U, p.step, parse_convention(p.convention), ladder_options(p));
  if (csv) write_ladder_csv(*csv, c);
  if (!p.sidecar.empty()) {
    std::ofstream side(p.sidecar);
    side << ladder_sidecar_json(c) << '\n';
  }
  json r = json::parse(ladder_sidecar_json(c));
  r["samples"] = c.size();
  r["fundamental_slope"] = chord(c, c.t0, c.t1).slope;
  if (c.validity_warning) r["warning"] = c.warning;
  return r;
}

json cmd_chords(const Params& p, std::ostream* csv) {
  const LadderCurve c = load_or_build(p);
  const Chord fundamental = chord(c, c.t0, c.t1);
  std::vector<double> lengths = p.lengths;
  if (lengths.empty()) lengths.push_back(c.t1 - c.t0);
  const std::vector<ChordScan> scans = find_almost_parallel_chords(c, lengths, p.chord_tol);
  json out = json::array();
  if (csv) {
    csv->precision(17);
    *csv << "n,m,slope\n";
  }
  for (const auto& s : scans) {
    out.push_back({{"length", s.length},
                   {"scanned", s.scanned},
                   {"passing", s.chords.size()},
                   {"passing_fraction", s.passing_fraction}});
    if (csv) {
      for (const auto& ch : s.chords) *csv << ch.n << ',' << ch.m << ',' << ch.slope << '\n';
    }
  }
  json r = {{"fundamental", chord_json(fundamental)},
            {"fundamental_error", fundamental.slope - 1.0},
            {"three_over_log", 3.0 / std::log(c.t0)},
            {"scans", out}};
  if (p.n > 0.0) r["unit_slope_chord"] = chord_json(find_unit_slope_chord(c, p.n));
  return r;
}

json cmd_inflect(const Params& p) {
  const std::vector<double> zs = find_zeros(p.lo, p.hi);
  if (zs.size() < 2) fail(ErrorKind::Domain, "inflect: fewer than two zeros in the range");
  const LadderCurve c = build_ladder(p.lo, p.hi - p.lo, p.step, parse_convention(p.convention), ladder_options(p));
  json records = json::array();
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    ZeroGeometry g;
    g.gamma = zs[i];
    g.gamma_next = zs[i + 1];
    const double rho = find_inflection(g, c);
    const bool convex = phi_second(c, g.gamma + 1e-3) > 0.0;
    const bool concave = phi_second(c, g.gamma_next - 1e-3) < 0.0;
    records.push_back({{"gamma", g.gamma},
                       {"gamma_next", g.gamma_next},
                       {"rho", rho},
                       {"tan_beta", chord(c, g.gamma, rho).slope},
                       {"phi_prime_rho", phi_first(c, rho)},
                       {"checks", {{"convex_right_of_gamma", convex}, {"concave_left_of_gamma_next", concave}}}});
  }
  return {{"pairs", records}};
}

json cmd_gamma_bar(const Params& p) {
  const Section4 s = section4(p);
  ZeroGeometry g;
  g.gamma = s.gamma;
  g.rho_bar = s.rho_bar;
  const CorollaryReport cor = verify_corollaries(g, s.curve, CorollaryMode::Crossing, 3, 1e-3);
  const double bound = 3.0 / std::log(s.gamma);
  return {{"gamma", s.gamma},
          {"gamma_bar", s.bar.gamma_bar},
          {"delta_gap", s.bar.delta_gap},
          {"gap_warning", s.bar.gap_warning},
          {"u_ratio", (s.bar.gamma_bar - s.gamma) / std::pow(s.gamma, 13.0 / 14.0 + 2.0 * p.eps)},
          {"rho_bar", s.rho_bar},
          {"checks",
           {{"chord_slope", s.slope},
            {"chord_error", s.slope - 1.0},
            {"chord_bound", bound},
            {"chord_within_bound", std::abs(s.slope - 1.0) <= bound},
            {"h_at_rho_bar", s.h_at_rho_bar}}},
          {"corollary", corollary_json(cor)}};
}

json cmd_rotate(const Params& p, std::ostream* csv) {
  double gamma = 0.0;
  double window = 0.0;
  double target = p.tan;
  LadderCurve c;
  if (p.mode == "s3") {
    gamma = zero_at_or_above(p.gamma);
    const std::vector<double> next = find_zeros(gamma + 1e-6, gamma + 8.0);
    if (next.empty()) fail(ErrorKind::Coverage, "rotate: no zero after gamma within 8 units");
    c = build_ladder(gamma, next.front() - gamma, p.step, parse_convention(p.convention), ladder_options(p));
    ZeroGeometry g;
    g.gamma = gamma;
    g.gamma_next = next.front();
    window = find_inflection(g, c) - gamma;
  } else if (p.mode == "s4") {
    const Section4 s = section4(p);
    gamma = s.gamma;
    c = s.curve;
    window = s.rho_bar - gamma;
    target = std::clamp(target, p.eta, 1.0 - p.eta);
  } else {
    fail(ErrorKind::Domain, "rotate: mode must be s3 or s4");
  }
  const double u = rotating_chord_solve(c, gamma, target, window);
  const double lhs = integrate_z4(gamma, u, 1e-10, quad_config(p)).value;
  const double rhs = target * u * ln4(gamma) / kTwoPiSq;
  if (csv) {
    csv->precision(17);
    *csv << "U,slope\n";
    for (std::size_t i = 1; i < c.size() && c.t_at(i) <= gamma + window; ++i) {
      *csv << c.t_at(i) - gamma << ',' << chord(c, gamma, c.t_at(i)).slope << '\n';
    }
  }
  return {{"gamma", gamma},
          {"target_tan", target},
          {"U", u},
          {"window", window},
          {"slope", chord(c, gamma, gamma + u).slope},
          {"lhs", lhs},
          {"rhs", rhs},
          {"rel_discrepancy", std::abs(lhs - rhs) / lhs}};
}

json cmd_verify(const Params& p) {
  const LadderCurve c = load_or_build(p);
  const double n = p.n > 0.0 ? p.n : c.t0;
  const double m = p.m > 0.0 ? p.m : c.t1;
  const TheoremReport r = verify_theorem(c, n, m, p.allow_drift, quad_config(p));
  json out = {{"n", r.n},
              {"m", r.m},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"rel_discrepancy", r.rel_discrepancy},
              {"slope", r.slope},
              {"tolerance", r.tolerance},
              {"within", r.within},
              {"convention", to_string(r.convention)}};
  if (r.convention == LogConvention::LocalLog) out["drift_bound"] = r.drift_bound;
  if (c.validity_warning) out["warning"] = c.warning;
  return out;
}

}  // namespace zeta4::cli
