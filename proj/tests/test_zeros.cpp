#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zeta4/errors.hpp"
#include "zeta4/zeros.hpp"

using namespace zeta4;

namespace {

const std::vector<double>& first_zeros() {
  static const std::vector<double> zs = find_zeros(10.0, 150.0);
  return zs;
}

// One curve over the first 21 zeros, anchored at the first.
const LadderCurve& low_curve() {
  static const LadderCurve c = build_ladder(first_zeros()[0], first_zeros()[20] + 1.0 - first_zeros()[0], 0.01);
  return c;
}

ZeroGeometry pair(std::size_t k) {
  ZeroGeometry g;
  g.gamma = first_zeros()[k];
  g.gamma_next = first_zeros()[k + 1];
  return g;
}

}  // namespace

TEST_SUITE("zeros") {
  TEST_CASE("first zero") {
    const std::vector<double> zs = find_zeros(10.0, 20.0);
    REQUIRE(zs.size() == 1);
    CHECK(std::abs(zs[0] - 14.134725141734693) <= 1e-6);
  }

  TEST_CASE("29 zeros up to 100") {
    const std::vector<double> zs = find_zeros(10.0, 100.0);
    CHECK(zs.size() == 29);
    CHECK(std::abs(zs.back() - 98.831194218193692) <= 1e-6);
  }

  TEST_CASE("zeros are zeros") {
    for (double g : first_zeros()) CHECK(std::abs(z(g, zero_precision()).z) <= 1e-8);
  }

  TEST_CASE("first zeros against a dense oracle scan") {
    const std::vector<double> ref = oracle::zeros(10.0, 150.0);
    const std::vector<double>& zs = first_zeros();
    REQUIRE(zs.size() == ref.size());
    REQUIRE(zs.size() >= 50);
    for (std::size_t i = 0; i < 50; ++i) {
      CAPTURE(i);
      CHECK(std::abs(zs[i] - ref[i]) <= 1e-6);
    }
    CHECK(std::abs(zs[49] - 143.11184580762063) <= 1e-6);
  }

  TEST_CASE("main-term count") {
    CHECK(zero_count_main_term(100.0) == doctest::Approx(29.0).epsilon(0.05));
    CHECK(find_zeros(100.0, 150.0).size() == 23);
  }

  TEST_CASE("scan preconditions") {
    CHECK_THROWS_AS(find_zeros(20.0, 10.0), Error);
    ZeroScanOptions coarse;
    coarse.grid = 0.1;
    CHECK_THROWS_AS(find_zeros(10.0, 20.0, coarse), Error);
  }

  TEST_CASE("inflection between consecutive zeros") {
    const LadderCurve& c = low_curve();
    for (std::size_t k = 0; k < 20; ++k) {
      const ZeroGeometry g = pair(k);
      const double rho = find_inflection(g, c);
      CAPTURE(k);
      CHECK(rho > g.gamma);
      CHECK(rho < g.gamma_next);
      const double h = 1e-4;
      CHECK(phi_second(c, rho - h) > 0.0);
      CHECK(phi_second(c, rho + h) < 0.0);
      CHECK(phi_first(c, rho) > 0.0);
    }
  }

  TEST_CASE("inflection is the first dense sign change") {
    const LadderCurve& c = low_curve();
    for (std::size_t k : {0u, 5u, 13u}) {
      const ZeroGeometry g = pair(k);
      const double rho = find_inflection(g, c);
      double first = NAN;
      double prev = phi_second(c, g.gamma + 1e-4);
      for (double t = g.gamma + 2e-4; t < g.gamma_next; t += 1e-4) {
        const double v = phi_second(c, t);
        if ((prev > 0) != (v > 0)) {
          first = t;
          break;
        }
        prev = v;
      }
      CAPTURE(k);
      CHECK(std::abs(rho - first) <= 2e-4);
    }
  }

  TEST_CASE("curve is convex then concave around each inflection") {
    const LadderCurve& c = low_curve();
    for (std::size_t k = 0; k < 20; ++k) {
      const ZeroGeometry g = pair(k);
      const double rho = find_inflection(g, c);
      // second differences of phi_1 from the ladder on either side
      const double d = 0.02;
      const double left = rho - 0.25 * (rho - g.gamma);
      const double right = rho + 0.25 * (g.gamma_next - rho);
      auto second = [&](double t) { return c.phi_at(t + d) - 2.0 * c.phi_at(t) + c.phi_at(t - d); };
      CAPTURE(k);
      CHECK(second(left) > 0.0);
      CHECK(second(right) < 0.0);
    }
  }

  TEST_CASE("inflection is stable under a finer curve") {
    const ZeroGeometry g = pair(3);
    const LadderCurve a = build_ladder(g.gamma, 8.0, 0.01);
    const LadderCurve b = build_ladder(g.gamma, 8.0, 0.005);
    CHECK(std::abs(find_inflection(g, a) - find_inflection(g, b)) <= 1e-6);
  }

  TEST_CASE("rotating chord") {
    const LadderCurve& c = low_curve();
    const ZeroGeometry g = pair(0);
    const double rho = find_inflection(g, c);
    const double tan_beta = chord(c, g.gamma, rho).slope;
    const double u = rotating_chord_solve(c, g.gamma, tan_beta, rho - g.gamma);
    CHECK(std::abs(chord(c, g.gamma, g.gamma + u).slope - tan_beta) <= 1e-9);
    CHECK(u <= rho - g.gamma + 1e-9);

    // smaller targets are reached sooner
    double prev = 0.0;
    for (double t : {0.001, 0.01, 0.1}) {
      const double ut = rotating_chord_solve(c, g.gamma, t, rho - g.gamma);
      CHECK(ut > prev);
      prev = ut;
    }

    const double u6 = rotating_chord_solve(c, g.gamma, std::tan(std::numbers::pi / 6), rho - g.gamma);
    CHECK(std::abs(chord(c, g.gamma, g.gamma + u6).slope - std::tan(std::numbers::pi / 6)) <= 1e-9);
    CHECK(u6 < rho - g.gamma);

    try {
      rotating_chord_solve(c, g.gamma, 10.0 * tan_beta + 100.0, rho - g.gamma);
      FAIL("expected a range error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Range);
    }
  }

  TEST_CASE("gamma bar at 100") {
    const std::vector<double> zs = find_zeros(100.0, 250.0);
    const double gamma = zs.front();
    const GammaBar gb = select_gamma_bar(gamma, 0.01, zs);
    CHECK(std::abs(z(gb.gamma_bar, zero_precision()).z) <= 1e-8);
    const double reach = std::pow(gamma, 13.0 / 14.0 + 0.02);
    CHECK(gb.gamma_bar - gamma >= reach);
    CHECK((gb.gamma_bar - gamma) / reach >= 1.0);
    CHECK((gb.gamma_bar - gamma) / reach <= 1.5);
    CHECK(gb.delta_gap > 0.0);
    const std::vector<double> short_list(zs.begin(), zs.begin() + 5);
    try {
      select_gamma_bar(gamma, 0.01, short_list);
      FAIL("expected a coverage error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Coverage);
    }
  }

  TEST_CASE("crossing point at the first zero") {
    const std::vector<double>& zs = first_zeros();
    const double gamma = zs[0];
    const GammaBar gb = select_gamma_bar(gamma, 0.0, zs);
    const LadderCurve& c = low_curve();
    REQUIRE(gb.gamma_bar <= c.t1);
    const double rho_bar = crossing_point(c, gamma, gb.gamma_bar);
    CHECK(rho_bar > gamma);
    CHECK(rho_bar < gb.gamma_bar);
    const double s = chord(c, gamma, gb.gamma_bar).slope;
    auto h = [&](double t) { return c.phi_at(t) - c.phi_at(gamma) - s * (t - gamma); };
    CHECK(std::abs(h(rho_bar)) <= 1e-8);
    double first = NAN;
    for (double t = gamma + 1e-3; t < gb.gamma_bar; t += 1e-3) {
      if (h(t) > 0.0) {
        first = t;
        break;
      }
    }
    CHECK(std::abs(rho_bar - first) <= 1e-2);
  }

  TEST_CASE("crossing point needs a curve below its chord") {
    LadderCurve c;
    c.t0 = 10.0;
    c.t1 = 20.0;
    c.step = 0.01;
    c.anchor = 10.0;
    c.phi.resize(1001);
    for (std::size_t i = 0; i < c.phi.size(); ++i) {
      const double x = c.t_at(i) - 10.0;
      c.phi[i] = x * (10.0 - x);  // concave: above every chord
    }
    try {
      crossing_point(c, 10.0, 20.0);
      FAIL("expected a geometry error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Geometry);
    }
  }

  TEST_CASE("corollaries") {
    const LadderCurve& c = low_curve();
    ZeroGeometry g = pair(0);
    g.rho = find_inflection(g, c);
    const CorollaryReport inflect = verify_corollaries(g, c, CorollaryMode::Inflection);
    REQUIRE(!inflect.samples.empty());
    for (const auto& s : inflect.samples) CHECK(s.rel_discrepancy <= 1e-4);

    const GammaBar gb = select_gamma_bar(g.gamma, 0.0, first_zeros());
    g.gamma_bar = gb.gamma_bar;
    g.rho_bar = crossing_point(c, g.gamma, gb.gamma_bar);
    const CorollaryReport cross = verify_corollaries(g, c, CorollaryMode::Crossing);
    REQUIRE(!cross.samples.empty());
    for (const auto& s : cross.samples) CHECK(s.rel_discrepancy <= 1e-4);
  }

  TEST_CASE("corollaries without geometry") {
    const LadderCurve& c = low_curve();
    const ZeroGeometry g = pair(0);
    CHECK_THROWS_AS(verify_corollaries(g, c, CorollaryMode::Inflection), Error);
    CHECK_THROWS_AS(verify_corollaries(g, c, CorollaryMode::Crossing), Error);
  }
}
