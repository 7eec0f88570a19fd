#include "zeta4/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zeta4/errors.hpp"
#include "zeta4/parallel.hpp"
#include "zeta4/quad.hpp"

namespace zeta4 {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::size_t kScanChunk = 512;
constexpr double kInflectionRes = 1e-8;
constexpr double kCrossingRes = 1e-8;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

double zval(double t) { return z(t, zero_precision()).z; }

void require_cover(const LadderCurve& curve, double a, double b, const char* who) {
  const double slack = 1e-9 * curve.step;
  if (!(a >= curve.t0 - slack && b <= curve.t1 + slack)) {
    fail(ErrorKind::Domain, std::string(who) + ": curve [" + fmt(curve.t0) + ", " + fmt(curve.t1) +
                                "] does not cover [" + fmt(a) + ", " + fmt(b) + "]");
  }
}

}  // namespace

Precision zero_precision() {
  Precision p;
  p.target_abs_err = 1e-10;
  p.correction_terms = 4;
  return p;
}

double zero_count_main_term(double T) { return static_cast<double>(theta(T) / kPi) + 1.0; }

std::vector<double> find_zeros(double t_lo, double t_hi, const ZeroScanOptions& options) {
  if (!std::isfinite(t_lo) || t_lo < 10.0) fail(ErrorKind::Domain, "find_zeros: t_lo must be >= 10");
  if (!std::isfinite(t_hi) || !(t_hi > t_lo)) fail(ErrorKind::Domain, "find_zeros: needs t_hi > t_lo");
  if (!(options.grid > 0.0 && options.grid <= kMaxZeroGrid)) fail(ErrorKind::Domain, "find_zeros: grid must lie in (0, 0.05]");
  if (!(options.resolution > 0.0)) fail(ErrorKind::Domain, "find_zeros: resolution must be > 0");

  const auto steps = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / options.grid));
  const double h = (t_hi - t_lo) / static_cast<double>(steps);
  auto at = [&](std::size_t i) { return i == steps ? t_hi : t_lo + h * static_cast<double>(i); };

  const std::size_t chunks = (steps + kScanChunk - 1) / kScanChunk;
  std::vector<std::vector<double>> found(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t i0 = c * kScanChunk;
    const std::size_t i1 = std::min(steps, i0 + kScanChunk);
    double za = zval(at(i0));
    for (std::size_t i = i0; i < i1; ++i) {
      double a = at(i);
      double b = at(i + 1);
      const double zb = zval(b);
      if (zb == 0.0) {
        found[c].push_back(b);
      } else if (za != 0.0 && (za > 0.0) != (zb > 0.0)) {
        double zlo = za;
        while (b - a > options.resolution) {
          const double mid = 0.5 * (a + b);
          if (mid <= a || mid >= b) break;
          const double zm = zval(mid);
          if (zm == 0.0) {
            a = b = mid;
            break;
          }
          if ((zm > 0.0) == (zlo > 0.0)) {
            a = mid;
            zlo = zm;
          } else {
            b = mid;
          }
        }
        found[c].push_back(0.5 * (a + b));
      }
      za = zb;
    }
  });

  std::vector<double> zeros;
  for (const auto& part : found) zeros.insert(zeros.end(), part.begin(), part.end());

  const double expected = static_cast<double>((theta(t_hi) - theta(t_lo)) / kPi);
  const double miss = expected - static_cast<double>(zeros.size());
  if (std::abs(miss) > kZeroCountSlack) {
    fail(ErrorKind::MissedZero,
         "find_zeros: found " + std::to_string(zeros.size()) + " sign changes in (" + fmt(t_lo) + ", " + fmt(t_hi) +
             "] but the main term predicts " + fmt(expected) + "; refine the grid",
         miss);
  }
  return zeros;
}

double phi_first(const LadderCurve& curve, double t) {
  const double v = zval(t);
  const double v2 = v * v;
  return v2 * v2 * curve.log_weight(t);
}

double phi_second(const LadderCurve& curve, double t) {
  const Precision prec = zero_precision();
  const double v = zval(t);
  const double dv = z_prime(t, prec);
  double out = curve.log_weight(t) * 4.0 * v * v * v * dv;
  if (curve.convention == LogConvention::LocalLog) {
    const double l = std::log(t);
    out -= 8.0 * kPi * kPi * v * v * v * v / (t * l * l * l * l * l);
  }
  return out;
}

double find_inflection(const ZeroGeometry& geom, const LadderCurve& curve) {
  const double a = geom.gamma;
  const double b = geom.gamma_next;
  if (!(b > a)) fail(ErrorKind::Domain, "find_inflection: needs gamma < gamma_next");
  require_cover(curve, a, b, "find_inflection");

  const auto n = static_cast<std::size_t>(std::max(200.0, std::ceil((b - a) / std::min(curve.step, 1e-2))));
  const double h = (b - a) / static_cast<double>(n);
  double prev_t = a + h;
  double prev = phi_second(curve, prev_t);
  double lo_seen = prev;
  double hi_seen = prev;
  for (std::size_t k = 2; k < n; ++k) {
    const double t = a + h * static_cast<double>(k);
    const double v = phi_second(curve, t);
    lo_seen = std::min(lo_seen, v);
    hi_seen = std::max(hi_seen, v);
    if ((v > 0.0) != (prev > 0.0)) {
      double lo = prev_t;
      double hi = t;
      double vlo = prev;
      while (hi - lo > kInflectionRes) {
        const double mid = 0.5 * (lo + hi);
        const double vm = phi_second(curve, mid);
        if ((vm > 0.0) == (vlo > 0.0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      const double rho = 0.5 * (lo + hi);
      if (!(phi_first(curve, rho) > 0.0)) {
        fail(ErrorKind::Geometry, "find_inflection: phi_2' vanishes at the sign change " + fmt(rho));
      }
      return rho;
    }
    prev_t = t;
    prev = v;
  }
  fail(ErrorKind::Geometry, "find_inflection: phi_2'' keeps one sign on (" + fmt(a) + ", " + fmt(b) +
                                "); sampled range [" + fmt(lo_seen) + ", " + fmt(hi_seen) + "]");
}

double rotating_chord_solve(const LadderCurve& curve, double gamma, double target_tan, double u_max) {
  if (!(u_max > 0.0)) fail(ErrorKind::Domain, "rotating_chord_solve: u_max must be > 0");
  require_cover(curve, gamma, gamma + u_max, "rotating_chord_solve");
  if (!(target_tan > 0.0) || !std::isfinite(target_tan)) {
    fail(ErrorKind::Range, "rotating_chord_solve: target slope must be positive and finite");
  }
  try {
    return solve_chord_slope(curve, gamma, target_tan, gamma + u_max).m - gamma;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoBracket) throw;
    fail(ErrorKind::Range, "rotating_chord_solve: slope " + fmt(target_tan) + " not attained; " + e.what(),
         e.payload());
  }
}

GammaBar select_gamma_bar(double gamma, double eps, const std::vector<double>& zeros) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorKind::Domain, "select_gamma_bar: gamma must be positive");
  if (!(eps >= 0.0) || !std::isfinite(eps)) fail(ErrorKind::Domain, "select_gamma_bar: eps must be >= 0");
  const double reach = gamma + std::pow(gamma, 13.0 / 14.0 + 2.0 * eps);
  const auto it = std::lower_bound(zeros.begin(), zeros.end(), reach);
  if (it == zeros.end()) {
    fail(ErrorKind::Coverage, "select_gamma_bar: zero list ends at " + fmt(zeros.empty() ? 0.0 : zeros.back()) +
                                  ", before gamma + gamma^(13/14+2eps) = " + fmt(reach));
  }
  GammaBar out;
  out.gamma_bar = *it;
  out.delta_gap = *it - reach;
  out.gap_warning = out.delta_gap > std::pow(gamma, 0.25 + eps);
  return out;
}

double crossing_point(const LadderCurve& curve, double gamma, double gamma_bar) {
  if (!(gamma_bar > gamma)) fail(ErrorKind::Domain, "crossing_point: needs gamma < gamma_bar");
  require_cover(curve, gamma, gamma_bar, "crossing_point");
  const double base = curve.phi_at(gamma);
  const double k = chord(curve, gamma, gamma_bar).slope;
  auto h = [&](double t) { return curve.phi_at(t) - (base + k * (t - gamma)); };

  const double s = curve.step;
  const double right = h(gamma + s);
  const double left = h(gamma_bar - s);
  if (!(right < 0.0 && left > 0.0)) {
    fail(ErrorKind::Geometry, "crossing_point: expected h < 0 right of gamma and h > 0 left of gamma_bar, got h(" +
                                  fmt(gamma + s) + ") = " + fmt(right) + ", h(" + fmt(gamma_bar - s) +
                                  ") = " + fmt(left));
  }
  double prev_t = gamma + s;
  for (double t = gamma + 2.0 * s;; t += s) {
    t = std::min(t, gamma_bar - s);
    const double v = h(t);
    if (v == 0.0) return t;
    if (v > 0.0) {
      // Both the bracket width and |h| must reach the resolution.
      double lo = prev_t;
      double hi = t;
      double rho_bar = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        rho_bar = 0.5 * (lo + hi);
        const double hm = h(rho_bar);
        if (hi - lo <= kCrossingRes && std::abs(hm) <= kCrossingRes) break;
        if (rho_bar <= lo || rho_bar >= hi) break;
        if (hm < 0.0) {
          lo = rho_bar;
        } else {
          hi = rho_bar;
        }
      }
      if (std::abs(h(rho_bar)) > kCrossingRes) {
        fail(ErrorKind::Geometry, "crossing_point: |h| = " + fmt(std::abs(h(rho_bar))) + " at " + fmt(rho_bar));
      }
      return rho_bar;
    }
    prev_t = t;
  }
}

CorollaryReport verify_corollaries(const ZeroGeometry& geom, const LadderCurve& curve, CorollaryMode mode,
                                   int samples, double tolerance) {
  if (samples < 1) fail(ErrorKind::Domain, "verify_corollaries: needs at least one sample");
  CorollaryReport rep;
  rep.mode = mode;
  rep.tolerance = tolerance;
  double end = 0.0;
  if (mode == CorollaryMode::Inflection) {
    if (!geom.rho) fail(ErrorKind::Domain, "verify_corollaries: inflection mode needs rho");
    end = *geom.rho;
    rep.target_slope = geom.tan_beta ? *geom.tan_beta : chord(curve, geom.gamma, end).slope;
  } else {
    if (!geom.rho_bar) fail(ErrorKind::Domain, "verify_corollaries: crossing mode needs rho_bar");
    end = *geom.rho_bar;
    rep.target_slope = 1.0;
  }
  const double l = std::log(geom.gamma);
  const double l4 = l * l * l * l;

  // Left endpoints at sixteenths of the window; the first few that bracket
  // the target slope inside the window are kept.
  for (int j = 1; j < 16 && static_cast<int>(rep.samples.size()) < samples; ++j) {
    const double n = geom.gamma + (end - geom.gamma) * j / 16.0;
    Chord c;
    try {
      c = solve_chord_slope(curve, n, rep.target_slope, end);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoBracket) throw;
      rep.skipped.push_back("n = " + fmt(n) + ": no bracket");
      continue;
    }
    CorollarySample s;
    s.n = c.n;
    s.m = c.m;
    s.slope = c.slope;
    s.lhs = integrate_z4(c.n, c.m - c.n, 1e-10).value;
    s.rhs = rep.target_slope * (c.m - c.n) * l4 / (2.0 * kPi * kPi);
    s.rel_discrepancy = std::abs(s.lhs - s.rhs) / std::max(std::abs(s.lhs), 1e-300);
    s.flagged = !(s.rel_discrepancy <= tolerance);
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace zeta4
