#include <cmath>
#include <complex>

#include "zeta4/errors.hpp"
#include "zeta4/specfun.hpp"

namespace zeta4 {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kLnPi = 1.144729885849400174143427351353058712L;
constexpr long double kHalfLnTwoPi = 0.918938533204672741780329736405617640L;
constexpr long double kThetaSwitch = 30.0L;

// Lanczos approximation, g = 7, nine coefficients.
constexpr long double kLanczosG = 7.0L;
constexpr long double kLanczos[9] = {
    0.99999999999980993L,  676.5203681218851L,     -1259.1392167224028L,
    771.32342877765313L,   -176.61502916214059L,   12.507343278686905L,
    -0.13857109526572012L, 9.9843695780195716e-6L, 1.5056327351493116e-7L};

// ln Gamma(w) for Re w >= 1/2, continuous branch.
std::complex<long double> lanczos_lngamma(std::complex<long double> w) {
  const std::complex<long double> x = w - 1.0L;
  std::complex<long double> series = kLanczos[0];
  for (int i = 1; i < 9; ++i) series += kLanczos[i] / (x + static_cast<long double>(i));
  const std::complex<long double> shifted = x + kLanczosG + 0.5L;
  return kHalfLnTwoPi + (x + 0.5L) * std::log(shifted) - shifted + std::log(series);
}

long double theta_asymptotic(long double t) {
  const long double inv = 1.0L / t;
  const long double inv2 = inv * inv;
  // 1/(48t) + 7/(5760t^3) + 31/(80640t^5) + 127/(430080t^7) + 511/(1216512t^9)
  const long double tail =
      inv * (1.0L / 48.0L +
             inv2 * (7.0L / 5760.0L +
                     inv2 * (31.0L / 80640.0L + inv2 * (127.0L / 430080.0L + inv2 * (511.0L / 1216512.0L)))));
  return 0.5L * t * std::log(t / (2.0L * kPi)) - 0.5L * t - kPi / 8.0L + tail;
}

}  // namespace

long double theta(long double t) {
  if (!std::isfinite(t) || t < 0.0L) fail(ErrorKind::Domain, "theta: t must be finite and >= 0");
  if (t >= kThetaSwitch) return theta_asymptotic(t);
  // ln Gamma(1/4 + it/2) = ln Gamma(5/4 + it/2) - ln(1/4 + it/2)
  const std::complex<long double> arg(0.25L, 0.5L * t);
  const std::complex<long double> lg = lanczos_lngamma(arg + 1.0L) - std::log(arg);
  return lg.imag() - 0.5L * t * kLnPi;
}

}  // namespace zeta4
