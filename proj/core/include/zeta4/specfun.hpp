#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace zeta4 {

// Accuracy request for evaluations of Z(t) and zeta(1/2+it).
struct Precision {
  double target_abs_err = 1e-8;
  // Highest Riemann-Siegel coefficient C_k kept in the remainder (0..4).
  int correction_terms = 1;
  // Euler-Maclaurin main-sum length; 0 selects max(50, ceil(2t)).
  long oracle_terms = 0;
  // Number of Bernoulli correction terms in the Euler-Maclaurin tail (>= 6).
  int bernoulli_terms = 6;
  // Run the Euler-Maclaurin oracle in 50-digit software floats.
  bool high_precision = false;

  void validate() const;
};

enum class ZPath { Oracle, RiemannSiegel };

struct EvalPoint {
  double t = 0.0;
  long double theta = 0.0L;
  double z = 0.0;
  double abs_err = 0.0;
  ZPath path = ZPath::Oracle;
};

struct OracleValue {
  std::complex<double> value;
  // Certified Euler-Maclaurin remainder bound plus a rounding allowance.
  double abs_err = 0.0;
  long terms = 0;
};

inline constexpr int kMaxCorrectionTerms = 4;
// Heights above this are never delegated to the O(t) oracle from z().
inline constexpr double kOracleCeiling = 2.0e5;
// Height below which the Riemann-Siegel remainder bounds are not available.
inline constexpr double kRiemannSiegelFloor = 200.0;

// Riemann-Siegel theta function. Direct complex log-gamma below t = 30, the
// asymptotic series above.
long double theta(long double t);

// Z(t). Heights below rs_switchover(prec) are delegated to the oracle path.
EvalPoint z(double t, const Precision& prec = {});

// Lowest height at which the Riemann-Siegel bound meets prec.target_abs_err.
double rs_switchover(const Precision& prec);

// Riemann-Siegel evaluation without any fallback; needs t >= 2.
double riemann_siegel_z(double t, int correction_terms);

// Gabcke's remainder bound for C_0..C_K (valid for t >= 200).
double riemann_siegel_bound(double t, int correction_terms);

// zeta(1/2 + it) by Euler-Maclaurin summation. Shares no code with the
// Riemann-Siegel path.
OracleValue zeta_oracle_detail(double t, const Precision& prec = {});
std::complex<double> zeta_oracle(double t, const Precision& prec = {});

// Z'(t) by central differences with step max(1e-6, 1e-8 t), holding the
// evaluation path fixed across both stencil points.
double z_prime(double t, const Precision& prec = {});

// Z on the arithmetic progression t0 + j*step, j < count, through the
// Riemann-Siegel formula with rotated main-sum terms. Requires t0 >= 200.
std::vector<double> z_on_grid(double t0, double step, std::size_t count, int correction_terms);

}  // namespace zeta4
