// Euler-Maclaurin evaluation of zeta(1/2 + it). This file deliberately has no
// dependency on the Riemann-Siegel machinery so the two can check each other.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "zeta4/errors.hpp"
#include "zeta4/specfun.hpp"

namespace zeta4 {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

template <class Real>
struct Cx {
  Real re;
  Real im;
};

template <class Real>
Cx<Real> mul(const Cx<Real>& a, const Cx<Real>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class Real>
Cx<Real> div(const Cx<Real>& a, const Cx<Real>& b) {
  const Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <class Real>
Real modulus(const Cx<Real>& a) {
  using std::sqrt;
  return sqrt(a.re * a.re + a.im * a.im);
}

// n^{-1/2 - it}
template <class Real>
Cx<Real> inverse_power(long n, const Real& t) {
  using std::cos;
  using std::log;
  using std::sin;
  using std::sqrt;
  const Real nn(n);
  const Real mag = 1 / sqrt(nn);
  const Real ang = t * log(nn);
  return {mag * cos(ang), -mag * sin(ang)};
}

template <class Real>
OracleValue euler_maclaurin(double t_in, long terms, int bernoulli_terms, double target) {
  const Real t(t_in);
  const Real sigma = Real(1) / 2;
  const Cx<Real> s{sigma, t};

  Real sum_re = 0;
  Real sum_im = 0;
  Real energy = 0;
  for (long n = 1; n < terms; ++n) {
    const Cx<Real> term = inverse_power<Real>(n, t);
    sum_re += term.re;
    sum_im += term.im;
    energy += term.re * term.re + term.im * term.im;
  }

  const Real big_n(terms);
  const Cx<Real> n_pow = inverse_power<Real>(terms, t);  // N^{-s}

  // N^{1-s}/(s-1) + N^{-s}/2
  const Cx<Real> n_pow_scaled{n_pow.re * big_n, n_pow.im * big_n};
  const Cx<Real> integral_part = div(n_pow_scaled, Cx<Real>{sigma - 1, t});
  sum_re += integral_part.re + n_pow.re / 2;
  sum_im += integral_part.im + n_pow.im / 2;

  // Tail terms B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
  Cx<Real> rising = s;  // (s)_{2k-1}
  Real n_scale = 1 / big_n;  // N^{-(2k-1)}
  Real factorial = 2;  // (2k)!
  for (int k = 1; k <= bernoulli_terms; ++k) {
    const Real coeff = boost::math::bernoulli_b2n<Real>(k) / factorial * n_scale;
    const Cx<Real> term = mul(mul(rising, n_pow), Cx<Real>{coeff, Real(0)});
    sum_re += term.re;
    sum_im += term.im;
    rising = mul(rising, mul(Cx<Real>{sigma + 2 * k - 1, t}, Cx<Real>{sigma + 2 * k, t}));
    n_scale /= big_n * big_n;
    factorial *= Real(2 * k + 1) * Real(2 * k + 2);
  }

  // |R_M| <= |(s)_{2M+1} B_{2M+2} / (2M+2)! N^{-sigma-2M-1}| * |s+2M+1| / (sigma+2M+1)
  using std::abs;
  using std::sqrt;
  const int m = bernoulli_terms;
  const Real next_coeff = abs(boost::math::bernoulli_b2n<Real>(m + 1)) / factorial * n_scale / sqrt(big_n);
  const Cx<Real> last{sigma + 2 * m + 1, t};
  const Real remainder = modulus(rising) * next_coeff * modulus(last) / (sigma + 2 * m + 1);

  // Statistical allowance: independent per-term rounding of the phase t ln n
  // and of the accumulation.
  const double eps = static_cast<double>(std::numeric_limits<Real>::epsilon());
  const double rounding = 4.0 * eps * std::sqrt(static_cast<double>(energy)) *
                          (std::sqrt(static_cast<double>(terms)) + t_in * std::log(std::max<double>(terms, 2.0)));
  OracleValue out;
  out.value = {static_cast<double>(sum_re), static_cast<double>(sum_im)};
  out.abs_err = static_cast<double>(remainder) + rounding;
  out.terms = terms;
  if (!(out.abs_err <= target)) {
    fail(ErrorKind::Precision,
         "zeta_oracle: remainder bound " + sci(out.abs_err) + " exceeds target " + sci(target),
         out.abs_err);
  }
  return out;
}

}  // namespace

OracleValue zeta_oracle_detail(double t, const Precision& prec) {
  prec.validate();
  if (!std::isfinite(t) || t < 0.0) fail(ErrorKind::Domain, "zeta_oracle: t must be finite and >= 0");
  const long automatic = std::max<long>(50, static_cast<long>(std::ceil(2.0 * t)));
  const long terms = prec.oracle_terms > 0 ? prec.oracle_terms : automatic;
  if (prec.high_precision) {
    using Real = boost::multiprecision::cpp_bin_float_50;
    return euler_maclaurin<Real>(t, terms, prec.bernoulli_terms, prec.target_abs_err);
  }
  return euler_maclaurin<long double>(t, terms, prec.bernoulli_terms, prec.target_abs_err);
}

std::complex<double> zeta_oracle(double t, const Precision& prec) { return zeta_oracle_detail(t, prec).value; }

}  // namespace zeta4
