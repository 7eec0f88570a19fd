#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "quad_internal.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/parallel.hpp"
#include "zeta4/quad.hpp"

namespace zeta4 {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kMaxDepth = 48;

struct Panel {
  double value = 0.0;
  double err = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

// 21-point Kronrod estimate and the embedded 10-point Gauss estimate.
std::pair<double, double> gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kronrod = wk[0] * f0;
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fx = f(mid - half * x[i]) + f(mid + half * x[i]);
    kronrod += wk[i] * fx;
    if (i % 2 == 1) gauss += wg[i / 2] * fx;
  }
  return {kronrod * half, gauss * half};
}

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void charge(std::size_t n) {
    if (used_.fetch_add(n) + n > limit_) {
      exhausted_.store(true);
      fail(ErrorKind::Budget, "integrand evaluation budget of " + std::to_string(limit_) + " exceeded");
    }
  }
  bool exhausted() const { return exhausted_.load(); }

 private:
  std::size_t limit_;
  std::atomic<std::size_t> used_{0};
  std::atomic<bool> exhausted_{false};
};

void refine(const std::function<double(double)>& f, double a, double b, double tol, double span, int depth,
            Budget& budget, Panel& out) {
  budget.charge(21);
  const auto [kronrod, gauss] = gauss_kronrod(f, a, b);
  out.evaluations += 21;
  const double err = detail::panel_error(kronrod, gauss);
  const double allowed = 0.5 * tol * std::max(std::abs(kronrod), (b - a) / span);
  if (err <= allowed || depth >= kMaxDepth || (b - a) < 1e-13 * (1.0 + std::abs(a))) {
    out.value += kronrod;
    out.err += err;
    out.panels += 1;
    return;
  }
  const double mid = 0.5 * (a + b);
  refine(f, a, mid, tol, span, depth + 1, budget, out);
  refine(f, mid, b, tol, span, depth + 1, budget, out);
}

QuadResult adaptive(const std::function<double(double)>& f, double a, double b, double tol, double width,
                    Budget& budget) {
  QuadResult result;
  if (b == a) return result;
  const double span = b - a;
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width - 1e-9)));
  std::vector<Panel> panels(count);
  try {
    parallel_for(count, [&](std::size_t i) {
      const double lo = a + span * static_cast<double>(i) / static_cast<double>(count);
      const double hi = (i + 1 == count) ? b : a + span * static_cast<double>(i + 1) / static_cast<double>(count);
      refine(f, lo, hi, tol, span, 0, budget, panels[i]);
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Budget) throw;
    double partial = 0.0;
    for (const auto& p : panels) partial += p.value;
    throw Error(ErrorKind::Budget, e.what(), partial);
  }
  for (const auto& p : panels) {
    result.value += p.value;
    result.err_bound += p.err;
    result.panels += p.panels;
    result.evaluations += p.evaluations;
  }
  return result;
}

// s(x) = (1 + erf x) / 2, the smooth step used to blend grid sections.
double smooth_step(double x) { return 0.5 * std::erfc(-x); }

constexpr double kBlendWidth = 1.0;  // sigma
constexpr double kBlendReach = 6.0;  // erfc(6) ~ 2e-17
constexpr double kSectionLength = 4096.0;

}  // namespace

Precision quadrature_precision() {
  Precision p;
  p.target_abs_err = 1e-7;
  p.correction_terms = 4;
  return p;
}

double oscillation_scale(double t) { return 2.0 * kPi / std::log(std::max(t, 10.0) / (2.0 * kPi)); }

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol, double width,
                              std::size_t budget) {
  if (!(b >= a)) fail(ErrorKind::Domain, "integrate_adaptive: needs b >= a");
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorKind::Domain, "integrate_adaptive: tol must lie in (0, 1)");
  if (!(width > 0.0)) fail(ErrorKind::Domain, "integrate_adaptive: width must be > 0");
  Budget meter(budget);
  return adaptive(f, a, b, tol, width, meter);
}

namespace detail {

QuadResult refine_panel(const std::function<double(double)>& f, double a, double b, double tol, double span,
                        std::size_t budget) {
  Budget meter(budget);
  Panel p;
  refine(f, a, b, tol, span, 0, meter, p);
  return {p.value, p.err, p.panels, p.evaluations};
}

double z4(double t) {
  static const Precision prec = quadrature_precision();
  const double v = z(t, prec).z;
  const double v2 = v * v;
  return v2 * v2;
}

// Blended-grid trapezoid sums of Z^4(t) m(t) over [a, b], b - a >= kLongRange,
// a above the Riemann-Siegel switchover. The weights w_i = s((t-c_i)/sigma) -
// s((t-c_{i+1})/sigma) vanish to rounding at both ends of every section grid,
// so each trapezoid sum converges geometrically; the leftover end strips are
// handed to the adaptive rule.
QuadResult grid_integrate(double a, double b, double tol, const std::function<double(double)>& multiplier,
                          std::size_t budget) {
  const int terms = quadrature_precision().correction_terms;
  const double reach = kBlendReach * kBlendWidth;
  const double first_cut = a + reach;
  const double last_cut = b - reach;
  const auto sections =
      static_cast<std::size_t>(std::max(1.0, std::ceil((last_cut - first_cut) / kSectionLength)));
  std::vector<double> cuts(sections + 1);
  for (std::size_t i = 0; i <= sections; ++i) {
    cuts[i] = first_cut + (last_cut - first_cut) * static_cast<double>(i) / static_cast<double>(sections);
  }
  cuts.back() = last_cut;

  Budget meter(budget);
  std::vector<QuadResult> parts(sections);
  auto g = [&](double t) { return multiplier ? multiplier(t) : 1.0; };

  try {
    parallel_for(sections, [&](std::size_t i) {
      const double lo = cuts[i] - reach;
      const double hi = cuts[i + 1] + reach;
      const double band = 2.0 * std::log(hi / (2.0 * kPi)) + 12.0 / kBlendWidth;
      double step = 2.0 * kPi / band;
      QuadResult& part = parts[i];
      for (int halvings = 1;; ++halvings) {
        const double fine = 0.5 * step;
        const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / fine)) + 1;
        meter.charge(count);
        const std::vector<double> zs = z_on_grid(lo, fine, count, terms);
        part.evaluations += count;
        double sum_fine = 0.0;
        double sum_coarse = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
          const double t = lo + fine * static_cast<double>(j);
          const double z2 = zs[j] * zs[j];
          const double w = smooth_step((t - cuts[i]) / kBlendWidth) - smooth_step((t - cuts[i + 1]) / kBlendWidth);
          const double v = z2 * z2 * w * g(t);
          sum_fine += v;
          if (j % 2 == 0) sum_coarse += v;
        }
        const double value = fine * sum_fine;
        const double coarse = step * sum_coarse;
        const double err = std::abs(value - coarse);
        if (err <= 0.5 * tol * std::max(std::abs(value), (hi - lo) / (b - a)) || halvings >= 6) {
          part.value = value;
          part.err_bound = err;
          part.panels = 1;
          break;
        }
        step = fine;
      }
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Budget) throw;
    double partial = 0.0;
    for (const auto& p : parts) partial += p.value;
    throw Error(ErrorKind::Budget, e.what(), partial);
  }

  QuadResult result;
  for (const auto& p : parts) {
    result.value += p.value;
    result.err_bound += p.err_bound;
    result.panels += p.panels;
    result.evaluations += p.evaluations;
  }

  // End strips: f (1 - s((t - c_0)/sigma)) near a and f s((t - c_m)/sigma) near b.
  const double width = 0.25 * oscillation_scale(a);
  const std::size_t remaining = budget > result.evaluations ? budget - result.evaluations : 0;
  auto left = [&](double t) { return z4(t) * g(t) * (1.0 - smooth_step((t - first_cut) / kBlendWidth)); };
  auto right = [&](double t) { return z4(t) * g(t) * smooth_step((t - last_cut) / kBlendWidth); };
  const double strip_tol = 0.25 * tol;
  const QuadResult l = integrate_adaptive(left, a, a + 2.0 * reach, strip_tol, width, remaining);
  const QuadResult r = integrate_adaptive(right, b - 2.0 * reach, b, strip_tol, width,
                                          remaining > l.evaluations ? remaining - l.evaluations : 0);
  for (const QuadResult* q : {&l, &r}) {
    result.value += q->value;
    result.err_bound += q->err_bound;
    result.panels += q->panels;
    result.evaluations += q->evaluations;
  }
  return result;
}

}  // namespace detail

MomentEstimate integrate_z4(double T, double U, double tol, const QuadConfig& config) {
  if (!std::isfinite(T) || T < 1.0) fail(ErrorKind::Domain, "integrate_z4: T must be >= 1");
  if (!std::isfinite(U) || U < 0.0) fail(ErrorKind::Domain, "integrate_z4: U must be >= 0");
  if (!(tol > 0.0 && tol < 1.0)) fail(ErrorKind::Domain, "integrate_z4: tol must lie in (0, 1)");

  MomentEstimate est;
  est.T = T;
  est.U = U;
  if (U == 0.0) return est;

  const double b = T + U;
  const double grid_start = std::max(T, rs_switchover(quadrature_precision()));
  const bool use_grid = !config.adaptive_only && b - grid_start >= kLongRange;
  const double split = use_grid ? grid_start : b;

  std::size_t used = 0;
  auto absorb = [&](const QuadResult& q) {
    est.value += q.value;
    est.err_bound += q.err_bound;
    est.panels += q.panels;
    est.evaluations += q.evaluations;
    used += q.evaluations;
  };

  try {
    if (split > T) {
      absorb(integrate_adaptive(detail::z4, T, split, use_grid ? 0.5 * tol : tol, 0.25 * oscillation_scale(T),
                                config.budget));
    }
    if (use_grid) absorb(detail::grid_integrate(split, b, 0.5 * tol, nullptr, config.budget - used));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Budget) throw;
    throw Error(ErrorKind::Budget, e.what(), est.value + e.payload());
  }
  est.value = std::max(est.value, 0.0);
  return est;
}

double ingham_ratio(const MomentEstimate& estimate) {
  const double x = estimate.T + estimate.U;
  const double l = std::log(x);
  return estimate.value / (x * l * l * l * l / (2.0 * kPi * kPi));
}

}  // namespace zeta4
