#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zeta4/quad.hpp"

namespace zeta4 {

enum class LogConvention { AnchorLog, LocalLog };

const char* to_string(LogConvention c);
LogConvention parse_convention(const std::string& name);

inline constexpr double kMaxLadderStep = 0.05;

struct LadderOptions {
  // Exponent slack in the validity length T^{13/14 + 2 eps}.
  double eps = 0.01;
  double tol = 1e-9;
  std::size_t budget = 50'000'000;
  // Replaces Z^4 in the integrand (test hook).
  std::function<double(double)> integrand;
};

// phi_2 sampled at t0, t0 + step, ..., t1; the last cell may be shorter.
struct LadderCurve {
  double t0 = 0.0;
  double t1 = 0.0;
  double step = 0.0;
  std::vector<double> phi;
  LogConvention convention = LogConvention::AnchorLog;
  double anchor = 0.0;
  double tol = 0.0;
  double err_bound = 0.0;
  bool validity_warning = false;
  std::string warning;

  std::size_t size() const { return phi.size(); }
  double t_at(std::size_t i) const;
  // Linear interpolation between samples.
  double phi_at(double t) const;
  // Index of the cell [t_i, t_{i+1}] containing t; grid points within 1e-9
  // steps are snapped.
  std::size_t cell_of(double t) const;
  bool on_grid(double t) const;
  // 2 pi^2 / ln^4 of the anchor or of t, by convention.
  double log_weight(double t) const;
};

LadderCurve build_ladder(double T, double U, double step, LogConvention convention = LogConvention::AnchorLog,
                         const LadderOptions& options = {});

double validity_length(double T, double eps);

struct Chord {
  double n = 0.0;
  double m = 0.0;
  double slope = 0.0;
};

Chord chord(const LadderCurve& curve, double n, double m);

struct ChordScan {
  double length = 0.0;
  std::vector<Chord> chords;
  std::size_t scanned = 0;
  double passing_fraction = 0.0;
};

// For each length, every grid left endpoint n with n + length in range is
// tested for |slope - 1| <= tol.
std::vector<ChordScan> find_almost_parallel_chords(const LadderCurve& curve, std::span<const double> lengths,
                                                   double tol);

// Smallest m in (n, m_max] with |slope(n, m) - target| <= 1e-9, located by a
// grid scan for the first sign change of slope - target and then bisection.
// Throws NoBracket when the scan finds no sign change.
Chord solve_chord_slope(const LadderCurve& curve, double n, double target, double m_max);

Chord find_unit_slope_chord(const LadderCurve& curve, double n);

struct TheoremReport {
  double n = 0.0;
  double m = 0.0;
  double slope = 0.0;
  double lhs = 0.0;  // integral of Z^4 over [n, m]
  double rhs = 0.0;  // (1/2pi^2)(m - n) ln^4(anchor) slope
  double rel_discrepancy = 0.0;
  double tolerance = 0.0;
  bool within = false;
  LogConvention convention = LogConvention::AnchorLog;
  // LocalLog only: 2 * 4 ln ln T / ln T.
  double drift_bound = 0.0;
};

// Under LocalLog the identity drifts by ln^4 t / ln^4 T; that case throws
// ErrorKind::Convention unless allow_drift is set.
TheoremReport verify_theorem(const LadderCurve& curve, double n, double m, bool allow_drift = false,
                             const QuadConfig& config = {});

void write_ladder_csv(std::ostream& out, const LadderCurve& curve);
std::string ladder_sidecar_json(const LadderCurve& curve);
LadderCurve read_ladder(std::istream& csv, std::istream& sidecar);

}  // namespace zeta4
