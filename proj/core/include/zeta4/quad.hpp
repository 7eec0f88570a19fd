#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "zeta4/specfun.hpp"

namespace zeta4 {

inline constexpr std::size_t kDefaultBudget = 10'000'000;
// Intervals at least this long (above the Riemann-Siegel switchover) are
// integrated on equispaced grids instead of adaptive panels.
inline constexpr double kLongRange = 256.0;

// Precision used for Z inside every quadrature.
Precision quadrature_precision();

// Mean zero spacing 2 pi / ln(max(t, 10) / 2 pi).
double oscillation_scale(double t);

struct QuadResult {
  double value = 0.0;
  double err_bound = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

// Adaptive Gauss-Kronrod (10/21) on panels of initial width `width`, split
// until |K21 - G10| <= tol/2 * max(|K21|, w / (b - a)) per panel.
// Throws ErrorKind::Budget (payload = partial sum) after `budget` evaluations.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol, double width,
                              std::size_t budget = kDefaultBudget);

struct MomentEstimate {
  double T = 0.0;
  double U = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

struct QuadConfig {
  std::size_t budget = kDefaultBudget;
  // Disables the equispaced long-range path (test hook).
  bool adaptive_only = false;
};

// Integral of Z^4 over [T, T+U] with |value - true| <= max(tol*value, tol).
MomentEstimate integrate_z4(double T, double U, double tol, const QuadConfig& config = {});

// value / ((1/2pi^2) X ln^4 X) with X = T + U; reported, never gated.
double ingham_ratio(const MomentEstimate& estimate);

struct LaplaceOptions {
  std::size_t budget = kDefaultBudget;
  // Multiplies the automatically chosen truncation point (test hook).
  double t_max_scale = 1.0;
};

struct LaplaceReport {
  double delta = 0.0;
  double tol = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
  double t_max = 0.0;
  double envelope_const = 0.0;
  double tail_bound = 0.0;
  // (1/2pi^2)(1/delta) ln^4(1/delta)
  double leading_term = 0.0;
  std::size_t evaluations = 0;
};

// Integral of Z^4(t) e^{-delta t} over [0, inf), truncated where the tail
// bound under the envelope c t ln^4 t drops below tol.
LaplaceReport laplace_moment(double delta, double tol, const LaplaceOptions& options = {});

// Constant c with int_1^t Z^4 <= c t ln^4 t, calibrated once on [100, 1e4].
double moment_envelope_const();

struct MomentSample {
  double T = 0.0;
  double value = 0.0;
  double err_bound = 0.0;
};

struct MomentFit {
  // value/T ~ C0 ln^4 T + C1 ln^3 T + C2 ln^2 T + C3 ln T + C4
  std::array<double, 5> coeffs{};
  double residual_rms = 0.0;
  std::pair<double, double> sample_range{};
  bool leading_dropped = false;

  double evaluate(double T) const;  // fitted value (not value/T)
};

MomentFit fit_moment_polynomial(std::span<const MomentSample> samples, bool drop_leading = false);

// Samples integrate_z4(1, T-1) at the requested heights, accumulating
// consecutive pieces so each stretch is integrated once.
std::vector<MomentSample> moment_samples(std::span<const double> heights, double tol, const QuadConfig& config = {});

void write_samples_csv(std::ostream& out, std::span<const MomentSample> samples);
std::vector<MomentSample> read_samples_csv(std::istream& in);

}  // namespace zeta4
