#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "zeta4/errors.hpp"
#include "zeta4/specfun.hpp"

namespace zeta4 {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kTwoPi = 6.283185307179586476925286766559005768L;

// Gabcke's constants d_k for |Z - Z_K| <= d_k (t/2pi)^{-(2k+3)/4}, t >= 200.
constexpr std::array<double, kMaxCorrectionTerms + 1> kGabcke = {0.127, 0.053, 0.011, 0.031, 0.017};

long double reduce(long double phase) { return phase - kTwoPi * std::nearbyint(phase / kTwoPi); }

// Taylor coefficients of C_k(1/2 + x) in powers of x.
//
// Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) is entire, so its series
// about p = 1/2 converges on all of [0, 1). The series quotient amplifies
// rounding like 4^m, hence the 100-digit working precision.
struct CoefficientTable {
  std::array<std::vector<long double>, kMaxCorrectionTerms + 1> c;

  CoefficientTable() {
    using Big = boost::multiprecision::cpp_bin_float_100;
    constexpr int order = 110;
    const Big pi = boost::math::constants::pi<Big>();
    const Big two_pi = 2 * pi;

    // Psi(1/2 + x) = -cos(2 pi x^2 - 5 pi / 8) / cos(2 pi x)
    std::vector<Big> num(order + 1, Big(0));
    std::vector<Big> den(order + 1, Big(0));
    const Big c58 = cos(5 * pi / 8);
    const Big s58 = sin(5 * pi / 8);
    {
      // cos(2 pi x^2) and sin(2 pi x^2)
      Big power = 1;  // (2 pi)^j / j!
      for (int j = 0; 2 * j <= order; ++j) {
        if (j > 0) power = power * two_pi / j;
        const int sign = (j / 2) % 2 == 0 ? 1 : -1;
        if (j % 2 == 0) {
          num[2 * j] += -c58 * sign * power;
        } else {
          num[2 * j] += -s58 * sign * power;
        }
      }
    }
    {
      Big power = 1;  // (2 pi)^m / m!
      for (int m = 0; m <= order; ++m) {
        if (m > 0) power = power * two_pi / m;
        if (m % 2 == 0) den[m] = ((m / 2) % 2 == 0 ? 1 : -1) * power;
      }
    }
    std::vector<Big> psi(order + 1, Big(0));
    for (int m = 0; m <= order; ++m) {
      Big acc = num[m];
      for (int i = 1; i <= m; ++i) acc -= den[i] * psi[m - i];
      psi[m] = acc / den[0];
    }

    constexpr int max_derivative = 12;
    constexpr int degree = order - max_derivative;
    auto derivative = [&](int j) {
      std::vector<Big> d(degree + 1);
      for (int m = 0; m <= degree; ++m) {
        Big falling = 1;
        for (int i = 1; i <= j; ++i) falling *= m + i;
        d[m] = psi[m + j] * falling;
      }
      return d;
    };
    std::array<std::vector<Big>, max_derivative + 1> deriv;
    for (int j = 0; j <= max_derivative; ++j) deriv[j] = derivative(j);

    const Big pi2 = pi * pi;
    const Big pi4 = pi2 * pi2;
    const Big pi6 = pi4 * pi2;
    const Big pi8 = pi4 * pi4;
    std::array<std::vector<Big>, kMaxCorrectionTerms + 1> big;
    for (auto& v : big) v.assign(degree + 1, Big(0));
    for (int m = 0; m <= degree; ++m) {
      big[0][m] = deriv[0][m];
      big[1][m] = -deriv[3][m] / (96 * pi2);
      big[2][m] = deriv[6][m] / (18432 * pi4) + deriv[2][m] / (64 * pi2);
      big[3][m] = -deriv[9][m] / (5308416 * pi6) - deriv[5][m] / (3840 * pi4) - deriv[1][m] / (64 * pi2);
      big[4][m] = deriv[12][m] / (Big(2038431744) * pi8) + 11 * deriv[8][m] / (5898240 * pi6) +
                  19 * deriv[4][m] / (24576 * pi4) + deriv[0][m] / (128 * pi2);
    }

    // Drop the tail once it cannot contribute at |x| <= 1/2.
    for (int k = 0; k <= kMaxCorrectionTerms; ++k) {
      int last = degree;
      Big scale = pow(Big(0.5), degree);
      while (last > 0 && abs(big[k][last]) * scale < Big(1e-24)) {
        --last;
        scale *= 2;
      }
      c[k].resize(last + 1);
      for (int m = 0; m <= last; ++m) c[k][m] = static_cast<long double>(big[k][m]);
    }
  }

  long double eval(int k, long double x) const {
    const auto& poly = c[k];
    long double acc = 0.0L;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
};

const CoefficientTable& coefficients() {
  static const CoefficientTable table;
  return table;
}

constexpr long kTableTerms = 1L << 13;

struct TermTable {
  std::vector<long double> log_n;
  std::vector<double> inv_sqrt_n;
  TermTable() : log_n(kTableTerms + 1), inv_sqrt_n(kTableTerms + 1) {
    for (long n = 1; n <= kTableTerms; ++n) {
      log_n[n] = std::log(static_cast<long double>(n));
      inv_sqrt_n[n] = 1.0 / std::sqrt(static_cast<double>(n));
    }
  }
};

const TermTable& terms() {
  static const TermTable table;
  return table;
}

long main_sum_length(long double t) {
  const long n = static_cast<long>(std::floor(std::sqrt(t / kTwoPi)));
  if (n > kTableTerms) fail(ErrorKind::Domain, "riemann_siegel_z: height outside the supported range");
  return n;
}

// (-1)^{N-1} a^{-1/4} sum_k C_k(p) a^{-k/2}
double remainder(long double t, long n, int correction_terms) {
  const long double a = t / kTwoPi;
  const long double p = std::sqrt(a) - static_cast<long double>(n);
  const long double x = p - 0.5L;
  const auto& table = coefficients();
  const long double inv_sqrt_a = 1.0L / std::sqrt(a);
  long double acc = 0.0L;
  long double scale = 1.0L;
  for (int k = 0; k <= correction_terms; ++k) {
    acc += table.eval(k, x) * scale;
    scale *= inv_sqrt_a;
  }
  const long double sign = (n - 1) % 2 == 0 ? 1.0L : -1.0L;
  return static_cast<double>(sign * std::pow(a, -0.25L) * acc);
}

void check_terms(int correction_terms) {
  if (correction_terms < 0 || correction_terms > kMaxCorrectionTerms) {
    fail(ErrorKind::Domain, "correction_terms must lie in [0, " + std::to_string(kMaxCorrectionTerms) + "]");
  }
}

double rounding_allowance(double t, long n) {
  // per-term cosine error plus the extended-precision phase error
  const double mass = 2.0 * std::sqrt(static_cast<double>(std::max<long>(n, 1)));
  return mass * (4e-16 + 1e-19 * t * std::log(static_cast<double>(std::max<long>(n, 2))));
}

}  // namespace

void Precision::validate() const {
  if (!(target_abs_err > 0.0 && target_abs_err < 1.0)) fail(ErrorKind::Domain, "target_abs_err must lie in (0, 1)");
  check_terms(correction_terms);
  if (oracle_terms < 0) fail(ErrorKind::Domain, "oracle_terms must be >= 0");
  if (bernoulli_terms < 6) fail(ErrorKind::Domain, "bernoulli_terms must be >= 6");
}

double riemann_siegel_bound(double t, int correction_terms) {
  check_terms(correction_terms);
  const double a = t / static_cast<double>(kTwoPi);
  return kGabcke[correction_terms] * std::pow(a, -(2.0 * correction_terms + 3.0) / 4.0);
}

double rs_switchover(const Precision& prec) {
  prec.validate();
  const int k = prec.correction_terms;
  const double height =
      static_cast<double>(kTwoPi) * std::pow(kGabcke[k] / prec.target_abs_err, 4.0 / (2.0 * k + 3.0));
  return std::max(kRiemannSiegelFloor, height);
}

double riemann_siegel_z(double t, int correction_terms) {
  check_terms(correction_terms);
  if (!std::isfinite(t) || t < 2.0) fail(ErrorKind::Domain, "riemann_siegel_z: needs t >= 2");
  const long double tl = t;
  const long n = main_sum_length(tl);
  const long double th = theta(tl);
  const auto& tab = terms();
  double sum = 0.0;
  for (long k = 1; k <= n; ++k) {
    const long double phase = reduce(th - tl * tab.log_n[k]);
    sum += tab.inv_sqrt_n[k] * std::cos(static_cast<double>(phase));
  }
  return 2.0 * sum + remainder(tl, n, correction_terms);
}

EvalPoint z(double t, const Precision& prec) {
  prec.validate();
  if (!std::isfinite(t) || t < 0.0) fail(ErrorKind::Domain, "z: t must be finite and >= 0");
  EvalPoint out;
  out.t = t;
  out.theta = theta(t);
  const double switchover = rs_switchover(prec);
  if (t < switchover) {
    if (t > kOracleCeiling) {
      const double best = riemann_siegel_bound(t, prec.correction_terms);
      std::ostringstream msg;
      msg << "z: target " << prec.target_abs_err << " unreachable with " << prec.correction_terms
          << " correction terms at t = " << t << "; best bound " << best;
      fail(ErrorKind::Precision, msg.str(), best);
    }
    const OracleValue o = zeta_oracle_detail(t, prec);
    const long double c = std::cos(out.theta);
    const long double s = std::sin(out.theta);
    out.z = static_cast<double>(c * o.value.real() - s * o.value.imag());
    out.abs_err = o.abs_err;
    out.path = ZPath::Oracle;
    return out;
  }
  out.z = riemann_siegel_z(t, prec.correction_terms);
  out.abs_err = riemann_siegel_bound(t, prec.correction_terms) +
                rounding_allowance(t, main_sum_length(t));
  out.path = ZPath::RiemannSiegel;
  return out;
}

double z_prime(double t, const Precision& prec) {
  prec.validate();
  const double h = std::max(1e-6, 1e-8 * t);
  if (t - h < 0.0) fail(ErrorKind::Domain, "z_prime: t too small for the difference stencil");
  if (t >= rs_switchover(prec)) {
    return (riemann_siegel_z(t + h, prec.correction_terms) - riemann_siegel_z(t - h, prec.correction_terms)) /
           (2.0 * h);
  }
  Precision fixed = prec;
  fixed.oracle_terms = std::max<long>({prec.oracle_terms, 50L, static_cast<long>(std::ceil(2.0 * (t + h)))});
  auto eval = [&](double u) {
    const std::complex<double> zeta = zeta_oracle(u, fixed);
    const long double th = theta(u);
    return static_cast<double>(std::cos(th) * zeta.real() - std::sin(th) * zeta.imag());
  };
  return (eval(t + h) - eval(t - h)) / (2.0 * h);
}

std::vector<double> z_on_grid(double t0, double step, std::size_t count, int correction_terms) {
  check_terms(correction_terms);
  if (!(t0 >= kRiemannSiegelFloor) || !(step > 0.0)) {
    fail(ErrorKind::Domain, "z_on_grid: needs t0 >= 200 and step > 0");
  }
  std::vector<double> out(count);
  if (count == 0) return out;
  const auto& tab = terms();
  const long double last_t = static_cast<long double>(t0) + static_cast<long double>(step) * (count - 1);
  const long max_n = main_sum_length(last_t);

  // w_n = n^{-1/2} e^{-i t ln n}, advanced by r_n = e^{-i step ln n}.
  std::vector<double> wr(max_n + 1, 0.0), wi(max_n + 1, 0.0), rr(max_n + 1), ri(max_n + 1);
  for (long n = 1; n <= max_n; ++n) {
    const double ang = static_cast<double>(reduce(static_cast<long double>(step) * tab.log_n[n]));
    rr[n] = std::cos(ang);
    ri[n] = -std::sin(ang);
  }
  auto exact = [&](long double t, long n) {
    const double ang = static_cast<double>(reduce(t * tab.log_n[n]));
    wr[n] = tab.inv_sqrt_n[n] * std::cos(ang);
    wi[n] = -tab.inv_sqrt_n[n] * std::sin(ang);
  };

  constexpr std::size_t kRefresh = 64;
  long active = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const long double t = static_cast<long double>(t0) + static_cast<long double>(step) * j;
    const long n = main_sum_length(t);
    if (j % kRefresh == 0) {
      for (long k = 1; k <= n; ++k) exact(t, k);
    } else {
      for (long k = 1; k <= active; ++k) {
        const double re = wr[k] * rr[k] - wi[k] * ri[k];
        const double im = wr[k] * ri[k] + wi[k] * rr[k];
        wr[k] = re;
        wi[k] = im;
      }
      for (long k = active + 1; k <= n; ++k) exact(t, k);
    }
    active = n;

    double sr[4] = {0, 0, 0, 0}, si[4] = {0, 0, 0, 0};
    long k = 1;
    for (; k + 3 <= n; k += 4) {
      for (int l = 0; l < 4; ++l) {
        sr[l] += wr[k + l];
        si[l] += wi[k + l];
      }
    }
    for (; k <= n; ++k) {
      sr[0] += wr[k];
      si[0] += wi[k];
    }
    const double sum_re = (sr[0] + sr[1]) + (sr[2] + sr[3]);
    const double sum_im = (si[0] + si[1]) + (si[2] + si[3]);
    const double th = static_cast<double>(reduce(theta(t)));
    out[j] = 2.0 * (std::cos(th) * sum_re - std::sin(th) * sum_im) + remainder(t, n, correction_terms);
  }
  return out;
}

}  // namespace zeta4
