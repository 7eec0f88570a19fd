#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zeta4/ladder.hpp"
#include "zeta4/specfun.hpp"

namespace zeta4 {

inline constexpr double kMaxZeroGrid = 0.05;
inline constexpr int kZeroCountSlack = 2;

// Precision of every Z evaluation made while locating zeros.
Precision zero_precision();

struct ZeroScanOptions {
  double grid = kMaxZeroGrid;
  // Width at which bisection stops.
  double resolution = 1e-10;
};

// Sign changes of Z on (t_lo, t_hi], refined by bisection. The count is
// checked against (theta(t_hi) - theta(t_lo)) / pi; a shortfall beyond the
// slack throws ErrorKind::MissedZero.
std::vector<double> find_zeros(double t_lo, double t_hi, const ZeroScanOptions& options = {});

// N(T) main term theta(T)/pi + 1.
double zero_count_main_term(double T);

struct ZeroGeometry {
  double gamma = 0.0;
  double gamma_next = 0.0;
  std::optional<double> rho;
  std::optional<double> tan_beta;
  std::optional<double> gamma_bar;
  std::optional<double> delta_gap;
  std::optional<double> rho_bar;
  std::vector<std::string> checks;
};

// d/dt of 2 pi^2 Z^4 / ln^4(.), assembled from Z and Z'.
double phi_second(const LadderCurve& curve, double t);
double phi_first(const LadderCurve& curve, double t);

// Smallest sign change of phi_2'' in (gamma, gamma_next), refined to 1e-8.
double find_inflection(const ZeroGeometry& geom, const LadderCurve& curve);

// Smallest U in (0, u_max] with slope(gamma, gamma + U) = target_tan.
// Throws ErrorKind::Range when target_tan is not attained.
double rotating_chord_solve(const LadderCurve& curve, double gamma, double target_tan, double u_max);

struct GammaBar {
  double gamma_bar = 0.0;
  double delta_gap = 0.0;
  bool gap_warning = false;  // delta_gap > gamma^(1/4 + eps)
};

// First zero at or beyond gamma + gamma^(13/14 + 2 eps).
GammaBar select_gamma_bar(double gamma, double eps, const std::vector<double>& zeros);

// First crossing in (gamma, gamma_bar) of the curve with its chord over
// [gamma, gamma_bar].
double crossing_point(const LadderCurve& curve, double gamma, double gamma_bar);

enum class CorollaryMode { Inflection, Crossing };

struct CorollarySample {
  double n = 0.0;
  double m = 0.0;
  double slope = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_discrepancy = 0.0;
  bool flagged = false;
};

struct CorollaryReport {
  CorollaryMode mode = CorollaryMode::Inflection;
  double target_slope = 0.0;
  double tolerance = 0.0;
  std::vector<CorollarySample> samples;
  std::vector<std::string> skipped;
};

// Inflection mode: chords inside (gamma, rho) parallel to (gamma, rho).
// Crossing mode: unit-slope chords inside (gamma, rho_bar). Each chord is
// compared against integrate_z4 over the same interval.
CorollaryReport verify_corollaries(const ZeroGeometry& geom, const LadderCurve& curve, CorollaryMode mode,
                                   int samples = 3, double tolerance = 1e-3);

}  // namespace zeta4
