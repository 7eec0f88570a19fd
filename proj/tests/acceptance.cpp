// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/ladder.hpp"
#include "zeta4/quad.hpp"
#include "zeta4/zeros.hpp"

using namespace zeta4;

namespace {

constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;

double ln4(double t) { return std::pow(std::log(t), 4); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<double>& low_zeros() {
  static const std::vector<double> zs = find_zeros(10.0, 150.0);
  return zs;
}

Outcome c1_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  Precision prec;
  prec.target_abs_err = 1e-8;
  prec.correction_terms = 4;
  Precision ref;
  ref.target_abs_err = 1e-10;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(10.0, 2e4);
  double worst = 0.0;
  int rs = 0;
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    const EvalPoint e = z(t, prec);
    if (e.path == ZPath::RiemannSiegel) ++rs;
    const double m = std::abs(zeta_oracle(t, ref));
    worst = std::max(worst, std::abs(e.z * e.z - m * m));
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << "max |z^2 - |zeta|^2| = " << worst << " over 200 heights (" << rs << " Riemann-Siegel, " << 200 - rs
    << " oracle path), " << secs << " s";
  return {worst <= 1e-8 && secs <= 60.0, d.str()};
}

Outcome c2_zero_table() {
  const std::vector<double> ref = oracle::zeros(10.0, 150.0);
  const std::vector<double>& zs = low_zeros();
  bool ok = zs.size() >= 50 && ref.size() >= 50;
  double worst = 0.0;
  for (std::size_t i = 0; ok && i < 50; ++i) worst = std::max(worst, std::abs(zs[i] - ref[i]));
  ok = ok && worst <= 1e-6;
  const std::size_t n100 = find_zeros(10.0, 100.0).size();
  ok = ok && n100 == 29;
  std::ostringstream d;
  d << "max deviation of first 50 = " << worst << ", N(100) = " << n100;
  for (double T : {100.0, 500.0, 1000.0}) {
    const double count = static_cast<double>(find_zeros(10.0, T).size());
    const double main = zero_count_main_term(T);
    ok = ok && std::abs(count - main) <= 2.0;
    d << ", N(" << T << ") = " << count << " vs " << main;
  }
  return {ok, d.str()};
}

Outcome c3_moment_polynomial() {
  std::vector<double> heights;
  for (int k = 10; k <= 17; ++k) heights.push_back(10.0 * std::ldexp(1.0, k));
  const std::vector<MomentSample> s = moment_samples(heights, 1e-9);
  const MomentFit f = fit_moment_polynomial(s);
  const double c0 = 1.0 / kTwoPiSq;
  const double rel = std::abs(f.coeffs[0] - c0) / c0;

  const std::array<double, 5> exact = {0.05, -0.7, 3.0, -4.0, 1.0};
  std::vector<MomentSample> synth;
  for (double T : heights) {
    const double l = std::log(T);
    synth.push_back({T, T * ((((exact[0] * l + exact[1]) * l + exact[2]) * l + exact[3]) * l + exact[4]), 0.0});
  }
  const MomentFit g = fit_moment_polynomial(synth);
  double round_trip = 0.0;
  for (int i = 0; i < 5; ++i) round_trip = std::max(round_trip, std::abs(g.coeffs[i] - exact[i]));

  std::ostringstream d;
  d << "C0 = " << f.coeffs[0] << " (" << 100.0 * rel << "% from 1/(2pi^2)), rms " << f.residual_rms
    << ", synthetic round trip " << round_trip << ", Ingham ratio at top "
    << s.back().value / (c0 * s.back().T * ln4(s.back().T));
  return {rel <= 0.15 && round_trip <= 1e-9, d.str()};
}

Outcome c4_fundamental_chord() {
  const auto start = std::chrono::steady_clock::now();
  LadderOptions o;
  o.budget = 500'000'000;
  bool ok = true;
  double prev = INFINITY;
  std::ostringstream d;
  for (double T : {1e3, 1e4}) {
    const LadderCurve c = build_ladder(T, validity_length(T, 0.01), kMaxLadderStep, LogConvention::AnchorLog, o);
    const double e = chord(c, c.t0, c.t1).slope - 1.0;
    const double bound = 3.0 / std::log(T);
    ok = ok && std::abs(e) <= bound && std::abs(e) < prev;
    prev = std::abs(e);
    d << "T=" << T << ": slope-1 = " << e << " (bound " << bound << "); ";
  }
  const double secs = seconds_since(start);
  ok = ok && secs <= 600.0;
  d << secs << " s";
  return {ok, d.str()};
}

Outcome c5_theorem_identity() {
  const LadderCurve c = build_ladder(1e4, 500.0, 0.01);
  const double lengths[] = {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 250.0, 400.0, 500.0};
  const double starts[] = {1e4 + 7.3, 1e4 + 41.07, 1e4 + 123.45, 1e4 + 200.0, 1e4 + 310.5,
                           1e4 + 17.0, 1e4 + 333.33, 1e4 + 150.0, 1e4 + 60.0, 1e4};
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const TheoremReport r = verify_theorem(c, starts[i], starts[i] + lengths[i]);
    worst = std::max(worst, r.rel_discrepancy);
  }
  std::ostringstream d;
  d << "max relative discrepancy " << worst << " over 10 subintervals of length 0.1..500";
  return {worst <= 1e-6, d.str()};
}

Outcome c6_microscopic() {
  int good = 0;
  std::ostringstream d;
  d << "M-N:";
  for (int k = 0; k < 10; ++k) {
    const double g = low_zeros()[k];
    const LadderCurve c = build_ladder(g, 20.0, 0.01);
    try {
      const Chord ch = find_unit_slope_chord(c, g + 0.01);
      const bool ok = ch.m - ch.n < 1.0 && std::abs(ch.slope - 1.0) <= 1e-9;
      if (ok) ++good;
      d << ' ' << ch.m - ch.n;
    } catch (const Error& e) {
      d << " (" << to_string(e.kind()) << ')';
    }
  }
  d << "; " << good << "/10 below 1";
  return {good == 10, d.str()};
}

const LadderCurve& low_curve() {
  static const LadderCurve c = build_ladder(low_zeros()[0], low_zeros()[20] + 1.0 - low_zeros()[0], 0.01);
  return c;
}

Outcome c7_geometry() {
  const LadderCurve& c = low_curve();
  int good = 0;
  double lo = 1.0;
  double hi = 0.0;
  std::ostringstream failures;
  for (std::size_t k = 0; k < 20; ++k) {
    ZeroGeometry g;
    g.gamma = low_zeros()[k];
    g.gamma_next = low_zeros()[k + 1];
    try {
      const double rho = find_inflection(g, c);
      const bool ok = rho > g.gamma && rho < g.gamma_next && phi_first(c, rho) > 0.0 &&
                      phi_second(c, g.gamma + 1e-3) > 0.0 && phi_second(c, g.gamma_next - 1e-3) < 0.0;
      if (ok) ++good;
      else failures << ' ' << k + 1;
      const double frac = (rho - g.gamma) / (g.gamma_next - g.gamma);
      lo = std::min(lo, frac);
      hi = std::max(hi, frac);
    } catch (const Error& e) {
      failures << ' ' << k + 1 << '(' << to_string(e.kind()) << ')';
    }
  }
  std::ostringstream d;
  d << good << "/20 pairs, rho at " << lo << ".." << hi << " of the gap";
  if (!failures.str().empty()) d << ", failing pairs:" << failures.str();
  return {good == 20, d.str()};
}

Outcome c8_rotating_chord() {
  const double g = low_zeros()[0];
  ZeroGeometry geom;
  geom.gamma = g;
  geom.gamma_next = low_zeros()[1];
  const LadderCurve c = build_ladder(g, geom.gamma_next - g, 0.01);
  const double rho = find_inflection(geom, c);
  const double target = std::tan(std::numbers::pi / 6);
  const double u = rotating_chord_solve(c, g, target, rho - g);
  const double lhs = kTwoPiSq * integrate_z4(g, u, 1e-10).value;
  const double rhs = target * u * ln4(g);
  const double rel = std::abs(lhs - rhs) / rhs;
  std::ostringstream d;
  d << "gamma = " << g << ", U = " << u << ", tan(beta) = " << chord(c, g, rho).slope << ", relative error " << rel;
  return {rel <= 1e-3, d.str()};
}

Outcome c9_pipeline() {
  const double eps = 0.01;
  const std::vector<double> zs = find_zeros(100.0, 300.0);
  const double gamma = zs.front();
  const GammaBar gb = select_gamma_bar(gamma, eps, zs);
  const bool genuine = std::abs(z(gb.gamma_bar, zero_precision()).z) <= 1e-8;
  const LadderCurve c = build_ladder(gamma, gb.gamma_bar - gamma, 0.01);
  const double slope = chord(c, gamma, gb.gamma_bar).slope;
  const double bound = 3.0 / std::log(gamma);
  const double rho_bar = crossing_point(c, gamma, gb.gamma_bar);
  const double h = c.phi_at(rho_bar) - c.phi_at(gamma) - slope * (rho_bar - gamma);
  ZeroGeometry geom;
  geom.gamma = gamma;
  geom.gamma_bar = gb.gamma_bar;
  geom.rho_bar = rho_bar;
  const CorollaryReport cor = verify_corollaries(geom, c, CorollaryMode::Crossing, 3, 1e-3);
  double worst = 0.0;
  for (const auto& s : cor.samples) worst = std::max(worst, s.rel_discrepancy);
  const bool cor_ok = cor.samples.size() == 3 && worst <= 1e-3;
  const bool interior = rho_bar > gamma && rho_bar < gb.gamma_bar;
  const bool slope_ok = std::abs(slope - 1.0) <= bound;

  std::ostringstream d;
  d << "gamma = " << gamma << ", gamma_bar = " << gb.gamma_bar << (genuine ? " (zero)" : " (not a zero)")
    << ", delta = " << gb.delta_gap << ", chord slope - 1 = " << slope - 1.0 << " (bound " << bound
    << (slope_ok ? ", within" : ", exceeded") << "), rho_bar = " << rho_bar << ", |h| = " << std::abs(h) << ", "
    << cor.samples.size() << " subchords with max relative error " << worst;
  return {genuine && gb.delta_gap >= 0.0 && slope_ok && interior && std::abs(h) <= 1e-8 && cor_ok, d.str()};
}

std::string run_cli(const std::string& args, int& status) {
  const std::string cmd = std::string(ZETA4_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

Outcome c10_determinism() {
  const char* commands[] = {
      "z --t 5000.5 --terms 4",
      "zeros --lo 10 --hi 200",
      "moment --T 1000 --U 300",
      "verify --T 10000 --U 100",
      "chords --T 1000 --U 100 --lengths 1,10,50",
      "gamma-bar --gamma 100",
  };
  int same = 0;
  std::ostringstream bad;
  for (const char* c : commands) {
    int s1 = 0;
    int s2 = 0;
    const std::string a = run_cli(c, s1);
    const std::string b = run_cli(c, s2);
    if (s1 == 0 && s2 == 0 && a == b && !a.empty()) ++same;
    else bad << " [" << c << "]";
  }
  std::ostringstream d;
  d << same << "/6 commands byte-identical across two runs";
  if (!bad.str().empty()) d << ", differing:" << bad.str();
  return {same == 6, d.str()};
}

}  // namespace

int main() {
  const std::pair<int, std::function<Outcome()>> criteria[] = {
      {1, c1_oracle_equivalence}, {2, c2_zero_table},      {3, c3_moment_polynomial}, {4, c4_fundamental_chord},
      {5, c5_theorem_identity},   {6, c6_microscopic},     {7, c7_geometry},          {8, c8_rotating_chord},
      {9, c9_pipeline},           {10, c10_determinism},
  };
  std::cout.precision(10);
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const Error& e) {
      o = {false, std::string(to_string(e.kind())) + " error: " + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << std::endl;
  }
  std::cout << failed << " of 10 criteria failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
