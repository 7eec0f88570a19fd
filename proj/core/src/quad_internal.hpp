#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "zeta4/quad.hpp"

namespace zeta4::detail {

// Z(t)^4 at quadrature_precision().
double z4(double t);

// Integral of Z^4(t) m(t) over [a, b] on blended equispaced grids; requires
// b - a >= kLongRange and a >= rs_switchover(quadrature_precision()).
// An empty multiplier means m = 1.
QuadResult grid_integrate(double a, double b, double tol, const std::function<double(double)>& multiplier,
                          std::size_t budget);

// One adaptive panel on [a, b] whose absolute acceptance floor is
// tol/2 * (b - a) / span, as if it were one of the panels of a longer run.
QuadResult refine_panel(const std::function<double(double)>& f, double a, double b, double tol, double span,
                        std::size_t budget);

// |K21 - G10| plus the rounding floor used by every panel test.
inline double panel_error(double kronrod, double gauss) {
  return std::abs(kronrod - gauss) + 1e-13 * std::abs(kronrod);
}

}  // namespace zeta4::detail
