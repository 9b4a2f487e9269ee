#include "catch_amalgamated.hpp"

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "polyco/hdw.hpp"

using namespace polyco;
using namespace fixtures;
using Catch::Matchers::WithinAbs;

namespace {

SmoothField zero_coupling() { return constant_field(3, {0.0}); }

SmoothField q_sin_x() {
  return SmoothField::make(3, 1, [](auto x, auto y) { y[0] = x[2] * polyco::sin(x[1]); });
}

StringsData traveling(SmoothField C) {
  return {std::move(C), [](double x) { return std::sin(x); }, [](double x) { return -std::cos(x); },
          [](double) { return 0.0; }, [](double) { return 0.0; }};
}

double wave_error(const SectionGrid& g, int iq, double amplitude) {
  double e = 0.0;
  for (int n = 0; n < g.nodes(); ++n) {
    auto p = g.point(n);
    e = std::max(e, std::abs(p[iq] - amplitude * std::sin(p[1] - p[0])));
  }
  return e;
}

SmoothField strings_J() {
  return SmoothField::make(8, 2, [](auto x, auto y) {
    y[0] = x[4] + x[6];
    y[1] = x[5] + x[7];
  });
}

ChartPtr reduced_chart() {
  return make_chart({"t", "x", "q", "pt", "px"}, {{0, 2}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}});
}

SmoothField unit_force() { return constant_field(1, {1.0}); }

}  // namespace

TEST_CASE("solve_hdw_strings: travelling wave converges at second order") {
  auto c = strings_chart();
  auto coarse = solve_hdw_strings(c, traveling(zero_coupling()), {101, 101});
  auto fine = solve_hdw_strings(c, traveling(zero_coupling()), {201, 201});
  const double e1 = wave_error(coarse, 2, 1.0), e2 = wave_error(fine, 2, 1.0);
  CHECK(e2 < 1e-3);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
  // q2 stays identically zero
  for (int n = 0; n < fine.nodes(); ++n) REQUIRE(fine.value(n, 3) == 0.0);
}

TEST_CASE("solve_hdw_strings: constant data is an equilibrium") {
  StringsData d{zero_coupling(), [](double) { return 0.7; }, [](double) { return 0.0; },
                [](double) { return -1.2; }, [](double) { return 0.0; }};
  auto g = solve_hdw_strings(strings_chart(), d, {33, 33});
  for (int n = 0; n < g.nodes(); ++n) {
    CHECK_THAT(g.value(n, 2), WithinAbs(0.7, 1e-14));
    CHECK_THAT(g.value(n, 3), WithinAbs(-1.2, 1e-14));
    for (int c = 4; c < 8; ++c) CHECK_THAT(g.value(n, c), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("solve_hdw_strings: discrete divergence law shrinks at second order") {
  // Initial data off any special level so q1 + q2 is a genuine wave.
  StringsData d{q_sin_x(), [](double x) { return std::sin(x); }, [](double x) { return -std::cos(x); },
                [](double x) { return 0.3 * std::cos(2 * x); }, [](double x) { return 0.5 * std::sin(x); }};
  auto c = strings_chart();
  const double r1 = divergence_residual(solve_hdw_strings(c, d, {101, 101}), strings_J());
  const double r2 = divergence_residual(solve_hdw_strings(c, d, {201, 201}), strings_J());
  CHECK(r2 < 1e-2);
  const double order = std::log2(r1 / r2);
  CHECK(order >= 1.5);
  CHECK(order <= 2.5);
}

TEST_CASE("solve_hdw_strings: HDW residuals of the computed section") {
  auto c = strings_chart();
  StringsData d = traveling(q_sin_x());
  auto sys = HamiltonianSystem(strings_structure(), strings_h([](auto x, auto q) { return q * polyco::sin(x); }));
  auto r1 = hdw_residuals(solve_hdw_strings(c, d, {101, 101}), sys);
  auto r2 = hdw_residuals(solve_hdw_strings(c, d, {201, 201}), sys);
  // q_x = -p_x holds by construction on the periodic axis; q_t = p_t only
  // away from the t ends, where momenta are extrapolated
  CHECK(r2.at("omega.p2x").max_abs <= 1e-12);
  CHECK(r2.at("omega.p1t").max_abs <= 1e-3);
  CHECK(r2.at("tau.11").max_abs <= 1e-12);
  CHECK(r2.at("tau.22").max_abs <= 1e-12);
  CHECK(r2.at("omega.q1").max_abs < r1.at("omega.q1").max_abs / 3.0);
  CHECK(r2.max() < 5e-3);
}

TEST_CASE("hdw_residuals: exact travelling wave sampled on a fine grid") {
  auto c = strings_chart();
  SectionGrid g(c, {{0, 0, 2, 401, false}, {1, 0, 2 * kPi, 401, true}});
  g.fill_base();
  for (int n = 0; n < g.nodes(); ++n) {
    const double t = g.value(n, 0), x = g.value(n, 1);
    g.value(n, 2) = std::sin(x - t);
    g.value(n, 4) = -std::cos(x - t);
    g.value(n, 5) = -std::cos(x - t);
  }
  auto sys = HamiltonianSystem(strings_structure(), strings_h([](auto, auto q) { return q * 0.0; }));
  auto r = hdw_residuals(g, sys);
  CHECK(r.max() <= 1e-3);
  CHECK(r.to_report(1e-3).passed());
}

TEST_CASE("hdw_residuals: random noise is flagged") {
  std::mt19937_64 rng(5);
  auto c = strings_chart();
  SectionGrid g(c, {{0, 0, 2, 41, false}, {1, 0, 2 * kPi, 41, true}});
  g.fill_base();
  for (int n = 0; n < g.nodes(); ++n)
    for (int k = 2; k < 8; ++k) g.value(n, k) = gen::uniform(rng, -1, 1);
  auto sys = HamiltonianSystem(strings_structure(), strings_h([](auto, auto q) { return q * 0.0; }));
  auto r = hdw_residuals(g, sys);
  // differences of O(1) noise over a step of O(0.05)
  CHECK(r.max() > 1.0);
  auto rep = r.to_report(1e-3);
  CHECK_FALSE(rep.passed());
  REQUIRE(rep.first_failure() != nullptr);
  CHECK(rep.first_failure()->name.rfind("hdw.omega", 0) == 0);
}

TEST_CASE("solve_hdw_strings: rejected configurations") {
  auto c = strings_chart();
  CHECK_THROWS_AS(solve_hdw_strings(c, traveling(zero_coupling()), {8, 201}), CflViolation);
  CHECK_THROWS_AS(solve_hdw_strings(c, traveling(zero_coupling()), {4, 4}), std::invalid_argument);
  StringsData ramp{zero_coupling(), [](double x) { return x; }, [](double) { return 0.0; },
                   [](double) { return 0.0; }, [](double) { return 0.0; }};
  CHECK_THROWS_AS(solve_hdw_strings(c, ramp, {33, 33}), UnsupportedBoundary);
  CHECK_NOTHROW(solve_hdw_strings(c, traveling(zero_coupling()), {8, 8}));
}

TEST_CASE("solve_hdw_strings: fixed ends give the standing wave") {
  StringsData d{zero_coupling(), [](double x) { return std::sin(x); }, [](double) { return 0.0; },
                [](double) { return 0.0; }, [](double) { return 0.0; }};
  auto g = solve_hdw_strings(strings_chart(), d, {201, 201, Boundary::dirichlet});
  double e = 0.0;
  for (int n = 0; n < g.nodes(); ++n) {
    auto p = g.point(n);
    e = std::max(e, std::abs(p[2] - std::sin(p[1]) * std::cos(p[0])));
  }
  CHECK(e < 1e-3);
}

TEST_CASE("solve_reduced_strings: free reduced wave converges at second order") {
  ReducedStringsData d{zero_coupling(), [](double x) { return 2 * std::sin(x); },
                       [](double x) { return -2 * std::cos(x); }};
  auto c = reduced_chart();
  const double e1 = wave_error(solve_reduced_strings(c, d, {101, 101}), 2, 2.0);
  const double e2 = wave_error(solve_reduced_strings(c, d, {201, 201}), 2, 2.0);
  CHECK(e2 < 1e-3);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("SectionGrid: CSV layout") {
  auto g = solve_hdw_strings(strings_chart(), traveling(zero_coupling()), {9, 9});
  std::ostringstream os;
  g.write_csv(os, {"note one"});
  std::istringstream is(os.str());
  std::string line;
  int comments = 0, rows = 0;
  std::string header;
  while (std::getline(is, line)) {
    if (line.rfind("#", 0) == 0) {
      ++comments;
    } else if (header.empty()) {
      header = line;
    } else {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == 7);
    }
  }
  CHECK(header == "t,x,q1,q2,p1t,p1x,p2t,p2x");
  CHECK(comments == 4);
  CHECK(rows == 81);
  CHECK(os.str().find("# scheme: leapfrog") != std::string::npos);
  CHECK_THROWS_AS(SectionGrid(strings_chart(), {{0, 0, 0, 10, false}}), std::invalid_argument);
}

TEST_CASE("solve_reduced_membrane_ode: unit force closed form") {
  auto s = solve_reduced_membrane_ode(unit_force(), 1.0, 1.0, 2.0, -0.25, 0.5, 1000);
  CHECK_THAT(s.zeta.back(), WithinAbs(-1.0, 1e-8));
  CHECK_THAT(s.pr.back(), WithinAbs(2.0, 1e-8));
  CHECK(membrane_pde_residual(s, unit_force(), 1.0) <= 1e-6);
}

TEST_CASE("solve_reduced_membrane_ode: no force and no flux keeps zeta constant") {
  auto s = solve_reduced_membrane_ode(constant_field(1, {0.0}), 2.0, 0.5, 3.0, 0.4, 0.0, 200);
  for (double z : s.zeta) CHECK(z == 0.4);
}

TEST_CASE("solve_reduced_membrane_ode: range through the axis is rejected") {
  CHECK_THROWS_AS(solve_reduced_membrane_ode(unit_force(), 1.0, -1.0, 2.0, 0.0, 0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(solve_reduced_membrane_ode(unit_force(), 1.0, 0.0, 2.0, 0.0, 0.0, 100), std::invalid_argument);
}

TEST_CASE("lift_membrane: full three-parameter residuals at discretization order") {
  auto st = membrane_structure();
  HamiltonianSystem sys(st, membrane_h());
  auto f = SmoothField::make(1, 1, [](auto r, auto y) { y[0] = polyco::cos(r[0]); });
  double prev = 0.0;
  for (int steps : {50, 100}) {
    auto rad = solve_reduced_membrane_ode(f, kMembraneC, 0.5, 3.0, 0.2, -0.1, steps);
    auto g = lift_membrane(st.chart(), rad, 0.0, 0.0, 5, 9, 1.0);
    auto r = hdw_residuals(g, sys);
    if (prev > 0.0) {
      CHECK(prev / r.max() >= 3.0);
      CHECK(r.max() < 1e-3);
    }
    prev = r.max();
  }
}

TEST_CASE("lift_membrane: nonzero lambda leaves the exact zeta_t and zeta_theta defect") {
  auto st = membrane_structure();
  HamiltonianSystem sys(st, membrane_h());
  auto f = SmoothField::make(1, 1, [](auto r, auto y) { y[0] = polyco::cos(r[0]); });
  auto rad = solve_reduced_membrane_ode(f, kMembraneC, 0.5, 3.0, 0.2, -0.1, 200);
  const double lt = 0.3, lth = -0.2;
  auto r = hdw_residuals(lift_membrane(st.chart(), rad, lt, lth, 5, 9, 1.0), sys);
  CHECK_THAT(r.at("omega.pt").max_abs, WithinAbs(lt / 0.5, 1e-12));
  CHECK_THAT(r.at("omega.ptheta").max_abs, WithinAbs(3.0 * std::abs(lth) / (kMembraneC * kMembraneC), 1e-12));
  CHECK(r.at("omega.pr").max_abs < 1e-3);
  CHECK(r.at("omega.zeta").max_abs < 1e-3);
}
