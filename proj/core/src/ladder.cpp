#include "zeta4/ladder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "quad_internal.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/parallel.hpp"

namespace zeta4 {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSnap = 1e-9;  // in grid steps
constexpr double kSlopeTol = 1e-9;
constexpr std::size_t kChunk = 2048;

double ln4(double t) {
  const double l = std::log(t);
  return l * l * l * l;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

// Kronrod node offsets within a cell of width h, in the order the weights are
// applied below: centre, then (left, right) pairs.
std::vector<double> node_offsets(double h) {
  const auto& x = Kronrod::abscissa();
  std::vector<double> out{0.5 * h};
  for (std::size_t i = 1; i < x.size(); ++i) {
    out.push_back(0.5 * h * (1.0 - x[i]));
    out.push_back(0.5 * h * (1.0 + x[i]));
  }
  return out;
}

// fx[k] holds f at node_offsets()[k].
std::pair<double, double> combine(const double* fx, double h) {
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  double kronrod = wk[0] * fx[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < wk.size(); ++i) {
    const double pair = fx[2 * i - 1] + fx[2 * i];
    kronrod += wk[i] * pair;
    if (i % 2 == 1) gauss += wg[i / 2] * pair;
  }
  return {kronrod * 0.5 * h, gauss * 0.5 * h};
}

}  // namespace

const char* to_string(LogConvention c) { return c == LogConvention::AnchorLog ? "anchor-log" : "local-log"; }

LogConvention parse_convention(const std::string& name) {
  if (name == "anchor-log") return LogConvention::AnchorLog;
  if (name == "local-log") return LogConvention::LocalLog;
  fail(ErrorKind::Domain, "unknown log convention '" + name + "' (anchor-log or local-log)");
}

double validity_length(double T, double eps) { return std::pow(T, 13.0 / 14.0 + 2.0 * eps); }

double LadderCurve::t_at(std::size_t i) const {
  return i + 1 == phi.size() ? t1 : t0 + step * static_cast<double>(i);
}

std::size_t LadderCurve::cell_of(double t) const {
  const double x = (t - t0) / step;
  const double i = std::floor(x + kSnap);
  if (i <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(i), phi.size() - 2);
}

bool LadderCurve::on_grid(double t) const {
  if (std::abs(t - t1) <= kSnap * step) return true;
  const double x = (t - t0) / step;
  return std::abs(x - std::round(x)) <= kSnap;
}

double LadderCurve::phi_at(double t) const {
  if (!(t >= t0 - kSnap * step && t <= t1 + kSnap * step)) {
    fail(ErrorKind::Domain, "abscissa " + fmt(t) + " outside the curve [" + fmt(t0) + ", " + fmt(t1) + "]");
  }
  const std::size_t j = cell_of(t);
  const double a = t_at(j);
  const double b = t_at(j + 1);
  if (std::abs(t - a) <= kSnap * step) return phi[j];
  if (std::abs(t - b) <= kSnap * step) return phi[j + 1];
  return phi[j] + (phi[j + 1] - phi[j]) * ((t - a) / (b - a));
}

double LadderCurve::log_weight(double t) const {
  return 2.0 * kPi * kPi / ln4(convention == LogConvention::AnchorLog ? anchor : t);
}

LadderCurve build_ladder(double T, double U, double step, LogConvention convention, const LadderOptions& options) {
  if (!std::isfinite(T) || T < 10.0) fail(ErrorKind::Domain, "build_ladder: T must be >= 10");
  if (!std::isfinite(U) || U <= 0.0) fail(ErrorKind::Domain, "build_ladder: U must be > 0");
  if (!(step > 0.0 && step <= kMaxLadderStep)) fail(ErrorKind::Domain, "build_ladder: step must lie in (0, 0.05]");
  if (!(options.tol > 0.0 && options.tol < 1.0)) fail(ErrorKind::Domain, "build_ladder: tol must lie in (0, 1)");
  if (!(options.eps >= 0.0 && std::isfinite(options.eps))) fail(ErrorKind::Domain, "build_ladder: eps must be >= 0");

  LadderCurve curve;
  curve.t0 = T;
  curve.t1 = T + U;
  curve.step = step;
  curve.convention = convention;
  curve.anchor = T;
  curve.tol = options.tol;
  const double u0 = validity_length(T, options.eps);
  if (U > u0) {
    curve.validity_warning = true;
    curve.warning = "U = " + fmt(U) + " exceeds the validity length T^(13/14+2eps) = " + fmt(u0);
  }

  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(U / step - kSnap)));
  curve.phi.assign(cells + 1, 0.0);
  if (21 * cells > options.budget) {
    fail(ErrorKind::Budget,
         "build_ladder: " + std::to_string(cells) + " cells need more than the budget of " +
             std::to_string(options.budget) + " evaluations");
  }

  auto f = [&](double t) {
    const double v = options.integrand ? options.integrand(t) : detail::z4(t);
    return v * curve.log_weight(t);
  };
  const double switchover = rs_switchover(quadrature_precision());
  const int terms = quadrature_precision().correction_terms;
  const std::vector<double> offsets = node_offsets(step);

  std::vector<double> value(cells);
  std::vector<double> err(cells);
  std::atomic<std::size_t> used{0};
  const std::size_t chunks = (cells + kChunk - 1) / kChunk;

  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t i0 = c * kChunk;
    const std::size_t i1 = std::min(cells, i0 + kChunk);
    // The short last cell is never part of a grid sweep.
    const bool short_last = curve.t_at(cells) - curve.t_at(cells - 1) < step * (1.0 - kSnap);
    const std::size_t full = (i1 == cells && short_last) ? i1 - 1 : i1;
    const std::size_t count = full > i0 ? full - i0 : 0;
    const bool sweep = !options.integrand && count > 0 && curve.t_at(i0) >= switchover;

    std::vector<double> fx(offsets.size() * (i1 - i0));
    if (sweep) {
      const double base = curve.t_at(i0);
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const std::vector<double> zs = z_on_grid(base + offsets[k], step, count, terms);
        for (std::size_t j = 0; j < count; ++j) {
          const double z2 = zs[j] * zs[j];
          fx[j * offsets.size() + k] = z2 * z2 * curve.log_weight(base + step * static_cast<double>(j) + offsets[k]);
        }
      }
    }
    used += 21 * (i1 - i0);
    for (std::size_t i = i0; i < i1; ++i) {
      const double a = curve.t_at(i);
      const double b = curve.t_at(i + 1);
      double* cell = fx.data() + (i - i0) * offsets.size();
      if (!sweep || i >= full) {
        const std::vector<double> local = node_offsets(b - a);
        for (std::size_t k = 0; k < local.size(); ++k) cell[k] = f(a + local[k]);
      }
      const auto [kronrod, gauss] = combine(cell, b - a);
      const double e = detail::panel_error(kronrod, gauss);
      if (e <= 0.5 * options.tol * std::max(std::abs(kronrod), (b - a) / U)) {
        value[i] = kronrod;
        err[i] = e;
        continue;
      }
      const std::size_t spent = used.load();
      const QuadResult q =
          detail::refine_panel(f, a, b, options.tol, U, options.budget > spent ? options.budget - spent : 0);
      used += q.evaluations;
      value[i] = q.value;
      err[i] = q.err_bound;
    }
  });

  for (std::size_t i = 0; i < cells; ++i) {
    curve.phi[i + 1] = curve.phi[i] + value[i];
    curve.err_bound += err[i];
  }
  return curve;
}

Chord chord(const LadderCurve& curve, double n, double m) {
  if (!std::isfinite(n) || !std::isfinite(m)) fail(ErrorKind::Domain, "chord: endpoints must be finite");
  if (!(m > n)) fail(ErrorKind::Domain, "chord: needs m > n, got n = " + fmt(n) + ", m = " + fmt(m));
  return {n, m, (curve.phi_at(m) - curve.phi_at(n)) / (m - n)};
}

std::vector<ChordScan> find_almost_parallel_chords(const LadderCurve& curve, std::span<const double> lengths,
                                                   double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::Domain, "find_almost_parallel_chords: tol must be > 0");
  const double span = curve.t1 - curve.t0;
  std::vector<ChordScan> out;
  for (double length : lengths) {
    if (!(length > 0.0 && length <= span * (1.0 + 1e-12))) {
      fail(ErrorKind::Domain, "find_almost_parallel_chords: length " + fmt(length) + " outside (0, " + fmt(span) + "]");
    }
    ChordScan scan;
    scan.length = length;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      const double n = curve.t_at(i);
      double m = n + length;
      if (m > curve.t1 + kSnap * curve.step) break;
      m = std::min(m, curve.t1);
      const Chord c = chord(curve, n, m);
      ++scan.scanned;
      if (std::abs(c.slope - 1.0) <= tol) scan.chords.push_back(c);
    }
    if (scan.scanned > 0) scan.passing_fraction = static_cast<double>(scan.chords.size()) / scan.scanned;
    out.push_back(std::move(scan));
  }
  return out;
}

Chord solve_chord_slope(const LadderCurve& curve, double n, double target, double m_max) {
  if (!std::isfinite(target)) fail(ErrorKind::Domain, "chord solve: target slope must be finite");
  m_max = std::min(m_max, curve.t1);
  if (!(m_max > n)) fail(ErrorKind::Domain, "chord solve: search window (" + fmt(n) + ", " + fmt(m_max) + "] is empty");
  curve.phi_at(n);

  auto g = [&](double m) { return chord(curve, n, m).slope - target; };
  double lo_slope = std::numeric_limits<double>::infinity();
  double hi_slope = -lo_slope;

  std::size_t i = curve.cell_of(n) + 1;
  double prev_m = 0.0;
  double prev_g = 0.0;
  bool have_prev = false;
  for (;; ++i) {
    double m = i < curve.size() ? curve.t_at(i) : m_max;
    if (m > m_max) m = m_max;
    if (m - n <= kSnap * curve.step) continue;
    const double gm = g(m);
    lo_slope = std::min(lo_slope, gm + target);
    hi_slope = std::max(hi_slope, gm + target);
    if (std::abs(gm) <= kSlopeTol) return chord(curve, n, m);
    if (have_prev && (gm > 0.0) != (prev_g > 0.0)) {
      double lo = prev_m;
      double hi = m;
      double glo = prev_g;
      double best = std::abs(gm) < std::abs(glo) ? m : lo;
      for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gmid = g(mid);
        if (std::abs(gmid) < std::abs(g(best))) best = mid;
        if (std::abs(gmid) <= kSlopeTol) return chord(curve, n, mid);
        if ((gmid > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gmid;
        } else {
          hi = mid;
        }
      }
      const Chord c = chord(curve, n, best);
      if (std::abs(c.slope - target) > kSlopeTol) {
        fail(ErrorKind::Precision, "chord solve: bisection stalled at slope " + fmt(c.slope), std::abs(c.slope - target));
      }
      return c;
    }
    prev_m = m;
    prev_g = gm;
    have_prev = true;
    if (m >= m_max) break;
  }
  fail(ErrorKind::NoBracket,
       "no chord from n = " + fmt(n) + " with slope " + fmt(target) + " in (" + fmt(n) + ", " + fmt(m_max) +
           "]; scanned slopes span [" + fmt(lo_slope) + ", " + fmt(hi_slope) + "]",
       hi_slope);
}

Chord find_unit_slope_chord(const LadderCurve& curve, double n) { return solve_chord_slope(curve, n, 1.0, curve.t1); }

TheoremReport verify_theorem(const LadderCurve& curve, double n, double m, bool allow_drift, const QuadConfig& config) {
  if (curve.convention == LogConvention::LocalLog && !allow_drift) {
    fail(ErrorKind::Convention,
         "verify_theorem: the identity holds under anchor-log; a local-log curve needs the drift report");
  }
  const Chord c = chord(curve, n, m);
  TheoremReport rep;
  rep.n = n;
  rep.m = m;
  rep.slope = c.slope;
  rep.convention = curve.convention;
  rep.lhs = integrate_z4(n, m - n, curve.tol, config).value;
  rep.rhs = (m - n) * c.slope * ln4(curve.anchor) / (2.0 * kPi * kPi);
  const double scale = std::max(std::abs(rep.lhs), std::numeric_limits<double>::min());
  rep.rel_discrepancy = rep.lhs == rep.rhs ? 0.0 : std::abs(rep.lhs - rep.rhs) / scale;

  // Linear interpolation inside a cell is off by about h^2/8 |phi''|.
  double interp = 0.0;
  for (double e : {n, m}) {
    if (curve.on_grid(e)) continue;
    const std::size_t j = curve.cell_of(e);
    auto cell_slope = [&](std::size_t k) {
      k = std::min(k, curve.size() - 2);
      return (curve.phi[k + 1] - curve.phi[k]) / (curve.t_at(k + 1) - curve.t_at(k));
    };
    const double s = cell_slope(j);
    const double left = j > 0 ? std::abs(s - cell_slope(j - 1)) : 0.0;
    const double right = std::abs(cell_slope(j + 1) - s);
    interp += curve.step * std::max(left, right) / 8.0;
  }
  rep.tolerance = 4.0 * curve.tol + interp * ln4(curve.anchor) / (2.0 * kPi * kPi) / scale;
  if (curve.convention == LogConvention::LocalLog) {
    const double l = std::log(curve.anchor);
    rep.drift_bound = 2.0 * 4.0 * std::log(l) / l;
    rep.within = rep.rel_discrepancy <= rep.drift_bound;
  } else {
    rep.within = rep.rel_discrepancy <= rep.tolerance;
  }
  return rep;
}

void write_ladder_csv(std::ostream& out, const LadderCurve& curve) {
  const auto old = out.precision(17);
  out << "t,phi\n";
  for (std::size_t i = 0; i < curve.size(); ++i) out << curve.t_at(i) << ',' << curve.phi[i] << '\n';
  out.precision(old);
}

std::string ladder_sidecar_json(const LadderCurve& curve) {
  nlohmann::ordered_json j;
  j["t0"] = curve.t0;
  j["t1"] = curve.t1;
  j["step"] = curve.step;
  j["convention"] = to_string(curve.convention);
  j["anchor"] = curve.anchor;
  j["tol_ladder"] = curve.tol;
  j["err_bound"] = curve.err_bound;
  j["validity_warning"] = curve.validity_warning;
  return j.dump();
}

LadderCurve read_ladder(std::istream& csv, std::istream& sidecar) {
  LadderCurve curve;
  try {
    const auto j = nlohmann::json::parse(sidecar);
    curve.t0 = j.at("t0").get<double>();
    curve.t1 = j.at("t1").get<double>();
    curve.step = j.at("step").get<double>();
    curve.convention = parse_convention(j.at("convention").get<std::string>());
    curve.anchor = j.at("anchor").get<double>();
    curve.tol = j.at("tol_ladder").get<double>();
    curve.err_bound = j.value("err_bound", 0.0);
    curve.validity_warning = j.value("validity_warning", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Domain, std::string("ladder sidecar: ") + e.what());
  }
  if (!(curve.step > 0.0 && curve.t1 > curve.t0)) fail(ErrorKind::Domain, "ladder sidecar: inconsistent grid");

  std::string line;
  if (!std::getline(csv, line) || line.rfind("t,phi", 0) != 0) fail(ErrorKind::Domain, "ladder CSV: header must be t,phi");
  std::vector<double> ts;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double t = 0.0;
    double p = 0.0;
    char comma = 0;
    if (!(row >> t >> comma >> p) || comma != ',') fail(ErrorKind::Domain, "ladder CSV: malformed row '" + line + "'");
    ts.push_back(t);
    curve.phi.push_back(p);
  }
  if (curve.phi.size() < 2) fail(ErrorKind::Domain, "ladder CSV: needs at least two samples");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - curve.t_at(i)) > kSnap * curve.step * 10.0) {
      fail(ErrorKind::Domain, "ladder CSV: sample " + std::to_string(i) + " is off the sidecar grid");
    }
  }
  return curve;
}

}  // namespace zeta4
