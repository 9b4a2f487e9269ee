#include "catch_amalgamated.hpp"

#include "fixtures.hpp"
#include "polyco/instances.hpp"

using namespace polyco;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<CatalogInstance> everything() {
  return {get_instance("coupled-strings", {.coupling = "zero"}),
          get_instance("coupled-strings", {.coupling = "qsinx"}),
          get_instance("coupled-strings", {.coupling = "q2x"}),
          get_instance("product-cosymplectic"),
          get_instance("membrane-polar"),
          get_instance("membrane-polar", {.wave_speed = 1.3, .force = "cos"}),
          get_instance("cosymplectic-darboux"),
          get_instance("cosymplectic-darboux", {.variant = "phase-translations"})};
}

}  // namespace

TEST_CASE("catalog lists four instances in a fixed order") {
  auto a = list_instances();
  auto b = list_instances();
  REQUIRE(a.size() == 4);
  CHECK(a[0].name == "coupled-strings");
  CHECK(a[1].name == "product-cosymplectic");
  CHECK(a[2].name == "membrane-polar");
  CHECK(a[3].name == "cosymplectic-darboux");
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].summary == b[i].summary);
    CHECK_FALSE(a[i].summary.empty());
    CHECK(get_instance(a[i].name).name == a[i].name);
  }
}

TEST_CASE("unknown names and presets are rejected") {
  CHECK_THROWS_AS(get_instance("strings"), std::invalid_argument);
  CHECK_THROWS_AS(get_instance("coupled-strings", {.coupling = "cubic"}), std::invalid_argument);
  CHECK_THROWS_AS(get_instance("membrane-polar", {.force = "gravity"}), std::invalid_argument);
  CHECK_THROWS_AS(get_instance("membrane-polar", {.wave_speed = 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(get_instance("cosymplectic-darboux", {.variant = "boosts"}), std::invalid_argument);
}

TEST_CASE("every catalog instance passes its own checks out of the box") {
  for (const auto& inst : everything()) {
    INFO(inst.name << " " << inst.options.coupling << " " << inst.options.variant);
    auto rs = verify_structure(inst.structure, 60, 1e-9, 1);
    INFO(rs.to_text());
    CHECK(rs.passed());
    auto ra = verify_action_invariance(inst.action, inst.structure, 10, 30, 1e-10, &inst.hamiltonian);
    INFO(ra.to_text());
    CHECK(ra.passed());
    if (inst.momentum) {
      auto rm = verify_momentum_map(inst.structure, inst.action, *inst.momentum, 30);
      INFO(rm.to_text());
      CHECK(rm.passed());
    }
    auto rc = check_reduction_conditions(inst, inst.default_mu, 20);
    INFO(rc.to_text());
    CHECK(rc.passed());
  }
}

TEST_CASE("listed gauges solve the defining equations") {
  for (const auto& inst : everything()) {
    if (!inst.paper_gauge) continue;
    HamiltonianSystem sys(inst.structure, inst.hamiltonian, *inst.paper_gauge);
    auto X = instance_kvector_field(inst);
    for (const auto& x : halton_samples(*inst.structure.chart(), 30)) {
      INFO(inst.name);
      CHECK(kvector_residuals(sys, kvector_matrix(X, inst.k(), x), x).max() <= 1e-10);
    }
  }
}

TEST_CASE("catalog strings agree with the hand-built strings") {
  auto inst = get_instance("coupled-strings", {.coupling = "qsinx"});
  auto ref = fixtures::strings_structure();
  const auto pts = halton_samples(*ref.chart(), 40, 3);
  CHECK(max_abs_difference(inst.structure.omega, ref.omega, pts) == 0.0);
  CHECK(max_abs_difference(inst.structure.tau, ref.tau, pts) == 0.0);
  auto h = fixtures::strings_h([](auto x, auto q) { return q * polyco::sin(x); });
  auto G = fixtures::strings_paper_gauge([](auto x, auto) { return polyco::sin(x); });
  auto Xref = hamiltonian_kvector_field(HamiltonianSystem(ref, h, GaugeChoice::supplied(G)));
  auto X = instance_kvector_field(inst);
  for (const auto& x : pts) {
    CHECK_THAT(inst.hamiltonian.scalar(x), WithinAbs(h.scalar(x), 1e-13));
    auto a = X.eval(x), b = Xref.eval(x);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK_THAT(a[i], WithinAbs(b[i], 1e-13));
  }
}

TEST_CASE("catalog membrane agrees with the hand-built membrane") {
  auto inst = get_instance("membrane-polar", {.wave_speed = fixtures::kMembraneC, .force = "cos"});
  auto unit = get_instance("membrane-polar");
  auto ref = fixtures::membrane_structure();
  const auto pts = halton_samples(*ref.chart(), 40, 5);
  CHECK(max_abs_difference(inst.structure.omega, ref.omega, pts) == 0.0);
  auto h = fixtures::membrane_h(), hu = fixtures::membrane_h_unit();
  for (const auto& x : pts) {
    CHECK_THAT(inst.hamiltonian.scalar(x), WithinAbs(h.scalar(x), 1e-13));
    CHECK_THAT(unit.hamiltonian.scalar(x), WithinAbs(hu.scalar(x), 1e-13));
  }
  // general polar Hamiltonian with a force depending on every base coordinate
  auto F = SmoothField::make(3, 1, [](auto z, auto y) { y[0] = z[0] + z[1] * polyco::cos(z[2]); });
  auto hp = membrane_polar_hamiltonian(2.0, F);
  const Coords x{0.4, 1.5, 0.7, -0.3, 0.2, 1.1, -0.6};
  const double r = 1.5;
  const double hand = (0.04 - 1.21 / 4 - r * r * 0.36 / 4) / (2 * r) - r * -0.3 * (0.4 + r * std::cos(0.7));
  CHECK_THAT(hp.scalar(x), WithinAbs(hand, 1e-13));
}

TEST_CASE("shipped fields honour the Jacobian contract") {
  for (const auto& inst : everything()) {
    for (const auto& f : shipped_fields(inst)) {
      INFO(inst.name << " " << f.name);
      CHECK(jacobian_contract_error(f.field, halton_samples(*f.domain, 10, 2)) <= 1e-6);
    }
  }
}

TEST_CASE("expected reduced data is reproduced by reduce") {
  for (const auto& inst : everything()) {
    if (!inst.expected) continue;
    auto r = reduce(inst, inst.default_mu, 40);
    INFO(inst.name << "\n" << r.report.to_text());
    CHECK(r.report.at("expected.tau").max_residual <= 1e-9);
    CHECK(r.report.at("expected.omega").max_residual <= 1e-9);
    CHECK(r.report.at("expected.hamiltonian").max_residual <= 1e-9);
  }
}
