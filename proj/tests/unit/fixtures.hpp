#pragma once

#include <numbers>

#include "polyco/dynamics.hpp"

// Hand-built structures used as oracles independent of the instance catalog.
namespace fixtures {

using namespace polyco;

constexpr double kPi = std::numbers::pi;

// (t, x, q1, q2, p1t, p1x, p2t, p2x)
inline ChartPtr strings_chart() {
  return make_chart({"t", "x", "q1", "q2", "p1t", "p1x", "p2t", "p2x"},
                    {{0, 2}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}});
}

inline KPolycosymplecticStructure strings_structure() {
  auto c = strings_chart();
  DarbouxLayout L{{0, 1}, {2, 3}, {{4, 6}, {5, 7}}};
  return {VValuedForm::constant(c, 1, 2, {{0, {0}, 1.0}, {1, {1}, 1.0}}),
          VValuedForm::constant(c, 2, 2, {{0, {2, 4}, 1.0}, {0, {3, 6}, 1.0}, {1, {2, 5}, 1.0}, {1, {3, 7}, 1.0}}),
          L};
}

// Coupling enters through C(x, q) with q = q1 - q2.
template <class C>
inline SmoothField strings_h(C coupling) {
  return SmoothField::make(8, 1, [coupling](auto x, auto y) {
    y[0] = 0.5 * (x[4] * x[4] + x[6] * x[6] - x[5] * x[5] - x[7] * x[7]) + coupling(x[1], x[2] - x[3]);
  });
}

// Free momentum components [α][β][i] matching the listed gauge: only
// (X_2)^{p1x} = -C_q and (X_2)^{p2x} = +C_q.
template <class Cq>
inline SmoothField strings_paper_gauge(Cq cq) {
  return SmoothField::make(8, 8, [cq](auto x, auto y) {
    using T = std::remove_cvref_t<decltype(y[0])>;
    for (auto& v : y) v = T(0.0);
    const T d = cq(x[1], x[2] - x[3]);
    y[(1 * 2 + 1) * 2 + 0] = -d;
    y[(1 * 2 + 1) * 2 + 1] = d;
  });
}

// (t, r, θ, ζ, pt, pr, pθ)
inline KPolycosymplecticStructure membrane_structure() {
  auto c = make_chart({"t", "r", "theta", "zeta", "pt", "pr", "ptheta"},
                      {{0, 2}, {0.5, 3}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}});
  DarbouxLayout L{{0, 1, 2}, {3}, {{4}, {5}, {6}}};
  return {VValuedForm::constant(c, 1, 3, {{0, {0}, 1.0}, {1, {1}, 1.0}, {2, {2}, 1.0}}),
          VValuedForm::constant(c, 2, 3, {{0, {3, 4}, 1.0}, {1, {3, 5}, 1.0}, {2, {3, 6}, 1.0}}), L};
}

constexpr double kMembraneC = 1.3;

inline SmoothField membrane_h() {
  return SmoothField::make(7, 1, [](auto x, auto y) {
    const double c2 = kMembraneC * kMembraneC;
    const auto r = x[1];
    y[0] = (x[4] * x[4] - x[5] * x[5] / c2 - r * r * x[6] * x[6] / c2) / (2.0 * r) - r * x[3] * polyco::cos(r);
  });
}

// Unit wave speed and unit radial force.
inline SmoothField membrane_h_unit() {
  return SmoothField::make(7, 1, [](auto x, auto y) {
    const auto r = x[1];
    y[0] = (x[4] * x[4] - x[5] * x[5] - r * r * x[6] * x[6]) / (2.0 * r) - r * x[3];
  });
}

inline CosymplecticStructure darboux_txqp() {
  auto c = make_chart({"t", "q", "p"}, {{0, 1}, {-1, 1}, {-1, 1}});
  return CosymplecticStructure(VValuedForm::constant(c, 1, 1, {{0, {0}, 1.0}}),
                               VValuedForm::constant(c, 2, 1, {{0, {1, 2}, 1.0}}), DarbouxLayout{{0}, {1}, {{2}}});
}

inline CosymplecticStructure twisted_txqp() {
  auto d = darboux_txqp();
  auto phi = SmoothField::make(3, 3, [](auto x, auto y) {
    y[0] = x[0] + 0.3 * polyco::sin(x[1]);
    y[1] = x[1] + 0.2 * x[2] * x[2];
    y[2] = x[2] + 0.1 * x[1] * x[0];
  });
  const auto& c = d.tau.chart();
  return CosymplecticStructure(pullback(phi, d.tau, c), pullback(phi, d.omega, c));
}

}  // namespace fixtures
