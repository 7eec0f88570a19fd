#include <algorithm>
#include <cmath>
#include <vector>

#include "quad_internal.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/quad.hpp"

namespace zeta4 {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double ln4(double t) {
  const double l = std::log(t);
  return l * l * l * l;
}

// delta * c * int_{tm}^{inf} t ln^4 t e^{-delta t} dt
double tail_bound(double delta, double c, double tm) {
  auto f = [&](double t) { return t * ln4(t) * std::exp(-delta * (t - tm)); };
  const double reach = 80.0 / delta;
  const QuadResult q = integrate_adaptive(f, tm, tm + reach, 1e-6, 1.0 / delta);
  return delta * c * std::exp(-delta * tm) * q.value * (1.0 + 1e-6);
}

QuadResult weighted_piece(double a, double b, double delta, double tol, std::size_t budget) {
  auto weight = [delta](double t) { return std::exp(-delta * t); };
  const double grid_start = std::max(a, rs_switchover(quadrature_precision()));
  QuadResult out;
  auto absorb = [&](const QuadResult& q) {
    out.value += q.value;
    out.err_bound += q.err_bound;
    out.panels += q.panels;
    out.evaluations += q.evaluations;
  };
  const bool use_grid = b - grid_start >= kLongRange;
  const double split = use_grid ? grid_start : b;
  if (split > a) {
    auto f = [&](double t) { return detail::z4(t) * weight(t); };
    absorb(integrate_adaptive(f, a, split, tol, 0.25 * oscillation_scale(std::max(a, 1.0)), budget));
  }
  if (use_grid) absorb(detail::grid_integrate(split, b, tol, weight, budget - std::min(budget, out.evaluations)));
  return out;
}

}  // namespace

double moment_envelope_const() {
  static const double c = [] {
    // Running integral of Z^4 from 1, sampled every 100 units up to 1e4.
    double running = integrate_z4(1.0, 99.0, 1e-8).value;
    double worst = running / (100.0 * ln4(100.0));
    for (double t = 100.0; t < 1e4; t += 100.0) {
      running += integrate_z4(t, 100.0, 1e-8).value;
      worst = std::max(worst, running / ((t + 100.0) * ln4(t + 100.0)));
    }
    return 1.25 * worst;
  }();
  return c;
}

LaplaceReport laplace_moment(double delta, double tol, const LaplaceOptions& options) {
  if (!std::isfinite(delta) || delta <= 0.0 || delta > 1.0) {
    fail(ErrorKind::Domain, "laplace_moment: delta must lie in (0, 1]");
  }
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorKind::Domain, "laplace_moment: tol must lie in (0, 1)");
  if (!(options.t_max_scale >= 1.0)) fail(ErrorKind::Domain, "laplace_moment: t_max_scale must be >= 1");

  LaplaceReport rep;
  rep.delta = delta;
  rep.tol = tol;
  rep.envelope_const = moment_envelope_const();
  const double inv = 1.0 / delta;
  rep.leading_term = inv * ln4(inv) / (2.0 * kPi * kPi);

  // The envelope only holds from 100 upward.
  double tm = std::max(100.0, 10.0 * inv);
  double lo = 0.0;
  std::size_t used = 0;
  auto extend = [&](double hi) {
    const QuadResult q = weighted_piece(lo, hi, delta, 0.5 * tol, options.budget - std::min(options.budget, used));
    rep.value += q.value;
    rep.err_bound += q.err_bound;
    rep.evaluations += q.evaluations;
    used += q.evaluations;
    lo = hi;
  };
  extend(tm);
  for (;;) {
    rep.tail_bound = tail_bound(delta, rep.envelope_const, tm);
    if (rep.tail_bound <= 0.5 * tol * std::max(rep.value, 1.0)) break;
    tm *= 1.5;
    extend(tm);
  }
  if (options.t_max_scale > 1.0) {
    tm *= options.t_max_scale;
    extend(tm);
    rep.tail_bound = tail_bound(delta, rep.envelope_const, tm);
  }
  rep.t_max = tm;
  rep.err_bound += rep.tail_bound;
  return rep;
}

}  // namespace zeta4
