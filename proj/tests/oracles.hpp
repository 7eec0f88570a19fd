#pragma once

// Reference computations used only by the tests. None of them call into the
// Riemann-Siegel code path.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "zeta4/specfun.hpp"

namespace oracle {

using cld = std::complex<long double>;

// ln Gamma(w) for Re w > 0: shift by 24, then Stirling with 10 Bernoulli terms.
inline cld lngamma(cld w) {
  static const long double b2n[] = {1.0L / 6,        -1.0L / 30,     1.0L / 42,          -1.0L / 30,
                                    5.0L / 66,       -691.0L / 2730, 7.0L / 6,           -3617.0L / 510,
                                    43867.0L / 798, -174611.0L / 330};
  cld shift = 0.0L;
  for (int k = 0; k < 24; ++k) shift += std::log(w + static_cast<long double>(k));
  const cld x = w + 24.0L;
  const long double half_log_2pi = 0.918938533204672741780329736405617639861L;
  cld s = (x - 0.5L) * std::log(x) - x + half_log_2pi;
  cld xp = x;
  const cld x2 = x * x;
  for (int k = 1; k <= 10; ++k) {
    s += b2n[k - 1] / (static_cast<long double>(2 * k) * (2 * k - 1) * xp);
    xp *= x2;
  }
  return s - shift;
}

inline long double theta(long double t) {
  const long double pi = 3.141592653589793238462643383279502884L;
  return std::imag(lngamma(cld(0.25L, 0.5L * t))) - 0.5L * t * std::log(pi);
}

// Z(t) = Re(e^{i theta} zeta(1/2 + it)) from the Euler-Maclaurin oracle.
inline double z(double t) {
  zeta4::Precision p;
  p.target_abs_err = 1e-12;
  const std::complex<double> zeta = zeta4::zeta_oracle(t, p);
  const long double th = theta(t);
  return static_cast<double>(std::cos(th) * zeta.real() - std::sin(th) * zeta.imag());
}

// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

// Zeros by dense scan of the oracle Z at spacing h plus bisection.
inline std::vector<double> zeros(double lo, double hi, double h = 0.01) {
  std::vector<double> out;
  double a = lo;
  double za = z(a);
  while (a < hi) {
    const double b = std::min(hi, a + h);
    const double zb = z(b);
    if ((za > 0) != (zb > 0)) {
      double l = a;
      double r = b;
      double zl = za;
      while (r - l > 1e-12) {
        const double m = 0.5 * (l + r);
        const double zm = z(m);
        if ((zm > 0) == (zl > 0)) {
          l = m;
          zl = zm;
        } else {
          r = m;
        }
      }
      out.push_back(0.5 * (l + r));
    }
    a = b;
    za = zb;
  }
  return out;
}

}  // namespace oracle
