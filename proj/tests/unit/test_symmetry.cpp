#include "catch_amalgamated.hpp"

#include <cmath>

#include "fixtures.hpp"
#include "polyco/instances.hpp"

using namespace polyco;
using Catch::Matchers::WithinAbs;

namespace {

// Affine group of the line, x -> e^s x + b, parameters (s, b).
LieGroupModel aff1() {
  LieGroupModel G;
  G.name = "Aff(1)";
  G.dim = 2;
  G.abelian = false;
  G.multiply = [](const Coords& g, const Coords& h) { return Coords{g[0] + h[0], std::exp(g[0]) * h[1] + g[1]}; };
  G.inverse = [](const Coords& g) { return Coords{-g[0], -std::exp(-g[0]) * g[1]}; };
  G.exp = [](const Coords& xi) {
    const double f = std::abs(xi[0]) < 1e-12 ? 1.0 : std::expm1(xi[0]) / xi[0];
    return Coords{xi[0], xi[1] * f};
  };
  G.Ad = [](const Coords& g) {
    Eigen::MatrixXd A(2, 2);
    A << 1, 0, -g[1], std::exp(g[0]);
    return A;
  };
  G.bracket = [](const Coords& a, const Coords& b) { return Coords{0.0, a[0] * b[1] - b[0] * a[1]}; };
  return G;
}

std::string text(const VerificationReport& r) { return r.to_text(); }

}  // namespace

TEST_CASE("group models satisfy the group axioms") {
  for (int m : {0, 1, 3}) {
    auto rep = verify_group(abelian_group(m), 50, 2);
    INFO(text(rep));
    CHECK(rep.passed());
  }
  auto G = aff1();
  auto rep = verify_group(G, 50, 3);
  INFO(text(rep));
  CHECK(rep.passed());

  // Ad along a one-parameter subgroup differentiates to the bracket
  const Coords xi{0.3, -0.7}, eta{1.1, 0.4};
  const double s = 1e-6;
  Eigen::MatrixXd up = G.Ad(G.exp({s * xi[0], s * xi[1]})), dn = G.Ad(G.exp({-s * xi[0], -s * xi[1]}));
  Eigen::Vector2d d = (up - dn) / (2 * s) * Eigen::Vector2d(eta[0], eta[1]);
  auto br = G.bracket(xi, eta);
  CHECK_THAT(d(0), WithinAbs(br[0], 1e-8));
  CHECK_THAT(d(1), WithinAbs(br[1], 1e-8));
}

TEST_CASE("coadjoint action of a non-abelian group is a left action") {
  auto G = aff1();
  const Coords g{0.4, -1.2}, h{-0.9, 0.5}, mu{0.7, -0.3};
  auto lhs = G.coadjoint(G.multiply(g, h), mu);
  auto rhs = G.coadjoint(g, G.coadjoint(h, mu));
  CHECK_THAT(lhs[0], WithinAbs(rhs[0], 1e-12));
  CHECK_THAT(lhs[1], WithinAbs(rhs[1], 1e-12));
}

TEST_CASE("translation actions preserve the structures they ship with") {
  auto s = get_instance("coupled-strings");
  auto rep = verify_action_invariance(s.action, s.structure, 20, 30, 1e-10, &s.hamiltonian);
  INFO(text(rep));
  CHECK(rep.passed());
  CHECK(rep.at("action.pullback_omega").max_residual <= 1e-10);

  for (const char* name : {"membrane-polar", "product-cosymplectic"}) {
    auto inst = get_instance(name);
    auto r = verify_action_invariance(inst.action, inst.structure, 20, 30, 1e-10, &inst.hamiltonian);
    INFO(name << "\n" << text(r));
    CHECK(r.passed());
  }
  auto phase = get_instance("cosymplectic-darboux", {.variant = "phase-translations"});
  auto r = verify_action_invariance(phase.action, phase.structure, 20, 30, 1e-10, &phase.hamiltonian);
  INFO(text(r));
  CHECK(r.passed());
}

TEST_CASE("scaling the string displacements is not a symmetry") {
  auto s = get_instance("coupled-strings");
  ActionModel scale;
  scale.group = abelian_group(1);
  scale.chart = s.structure.chart();
  scale.phi = [](const Coords& g) {
    return SmoothField::make(8, 8, [g](auto x, auto y) {
      for (int i = 0; i < 8; ++i) y[i] = x[i];
      y[2] = x[2] * std::exp(g[0]);
      y[3] = x[3] * std::exp(g[0]);
    });
  };
  scale.generators = SmoothField::make(8, 8, [](auto x, auto y) {
    for (auto& v : y) v = x[0] * 0.0;
    y[2] = x[2];
    y[3] = x[3];
  });
  auto rep = verify_action_invariance(scale, s.structure, 10, 20);
  CHECK_FALSE(rep.passed());
  CHECK(rep.at("action.generators").pass);
  CHECK_FALSE(rep.at("action.lie_omega").pass);
  CHECK_FALSE(rep.at("action.pullback_omega").pass);
  CHECK(rep.at("action.pullback_tau").pass);
}

TEST_CASE("momentum maps of the catalog satisfy their defining equations") {
  for (auto inst : {get_instance("coupled-strings"), get_instance("product-cosymplectic"),
                    get_instance("cosymplectic-darboux"),
                    get_instance("cosymplectic-darboux", {.variant = "phase-translations"})}) {
    auto rep = verify_momentum_map(inst.structure, inst.action, *inst.momentum, 40);
    INFO(inst.name << "\n" << text(rep));
    CHECK(rep.passed());
  }
}

TEST_CASE("a sign-flipped strings momentum map fails by twice the contraction") {
  auto s = get_instance("coupled-strings");
  MomentumMapModel bad = *s.momentum;
  bad.J = scale(bad.J, -1.0);
  auto rep = verify_momentum_map(s.structure, s.action, bad, 30);
  CHECK_FALSE(rep.passed());
  // ι_ξ ω^1 = dp1t + dp2t has unit coefficients
  CHECK_THAT(rep.at("momentum.omega").max_residual, WithinAbs(2.0, 1e-12));
  CHECK(rep.at("momentum.tau").pass);
}

TEST_CASE("phase translations carry the cocycle (b, -a)") {
  auto inst = get_instance("cosymplectic-darboux", {.variant = "phase-translations"});
  const auto pts = halton_samples(*inst.structure.chart(), 16, 4);
  for (const auto& g : group_samples(inst.action.group, 25, 9, 3.0)) {
    auto c = cocycle(inst.action, *inst.momentum, g, pts);
    CHECK(c.deviation <= 1e-14);
    CHECK_THAT(c.value[0], WithinAbs(g[1], 1e-14));
    CHECK_THAT(c.value[1], WithinAbs(-g[0], 1e-14));
  }
  auto D = affine_action(inst.action, *inst.momentum);
  auto mu = D.apply({0.3, -0.8}, {1.0, 2.0});
  CHECK_THAT(mu[0], WithinAbs(1.0 - 0.8, 1e-14));
  CHECK_THAT(mu[1], WithinAbs(2.0 - 0.3, 1e-14));
  auto id = D.apply({0.0, 0.0}, {1.0, 2.0});
  CHECK(id == Coords{1.0, 2.0});
}

TEST_CASE("cocycle identity and affine equivariance over random pairs") {
  for (auto inst : {get_instance("coupled-strings"), get_instance("product-cosymplectic"),
                    get_instance("cosymplectic-darboux", {.variant = "phase-translations"})}) {
    const auto pts = halton_samples(*inst.structure.chart(), 6, 1);
    const auto gs = group_samples(inst.action.group, 400, 17, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
      worst = std::max(worst, cocycle_identity_residual(inst.action, *inst.momentum, gs[2 * i], gs[2 * i + 1], pts));
    INFO(inst.name);
    CHECK(worst <= 1e-10);
    auto rep = verify_affine_action(affine_action(inst.action, *inst.momentum), 100, 100);
    INFO(text(rep));
    CHECK(rep.passed());
  }
}

TEST_CASE("equivariant momentum maps have zero cocycle") {
  auto s = get_instance("coupled-strings");
  const auto pts = halton_samples(*s.structure.chart(), 10, 2);
  auto c = cocycle(s.action, *s.momentum, {1.7}, pts);
  CHECK(c.value == Coords{0.0, 0.0});
}

TEST_CASE("a non-constant defect is rejected as a cocycle") {
  auto inst = get_instance("cosymplectic-darboux", {.variant = "phase-translations"});
  MomentumMapModel bogus{1, 2, SmoothField::make(3, 2, [](auto x, auto y) {
                           y[0] = x[2] * x[2];
                           y[1] = -x[1];
                         })};
  CHECK_THROWS_AS(cocycle(inst.action, bogus, {0.5, 0.5}, halton_samples(*inst.structure.chart(), 8)), ReductionError);
}

TEST_CASE("reduction conditions hold for the catalog instances") {
  auto s = get_instance("coupled-strings");
  for (const Coords& mu : {Coords{1.0, 0.5}, Coords{-2.0, 0.3}, Coords{0.0, 0.0}}) {
    auto rep = check_reduction_conditions(s, mu, 30);
    INFO(text(rep));
    CHECK(rep.passed());
    CHECK(rep.at("weak_regular.rank").rank_found == 2);
    CHECK(rep.at("conditions.orbit_tangent").rank_found == 1);
    CHECK(rep.at("conditions.kernel_1").rank_found == 7);
  }
  for (auto inst : {get_instance("product-cosymplectic"), get_instance("cosymplectic-darboux"),
                    get_instance("cosymplectic-darboux", {.variant = "phase-translations"})}) {
    auto rep = check_reduction_conditions(inst, inst.default_mu, 30);
    INFO(inst.name << "\n" << text(rep));
    CHECK(rep.passed());
  }
  auto m = get_instance("membrane-polar");
  auto rep = check_reduction_conditions(m, {}, 10);
  CHECK(rep.passed());
  CHECK(rep.at("conditions.applicable").note.find("not applicable") != std::string::npos);
}

TEST_CASE("a level chart missing a tangent direction fails the conditions") {
  auto s = get_instance("coupled-strings");
  s.level->chart = make_chart({"t", "x", "q1", "p1t", "p1x"}, {{0, 2}, {0, 6}, {-5, 5}, {-5, 5}, {-5, 5}});
  s.level->embed = [](const Coords& mu) {
    return SmoothField::make(5, 8, [mu](auto y, auto x) {
      x[0] = y[0], x[1] = y[1], x[2] = y[2], x[3] = y[0] * 0.0;
      x[4] = y[3], x[5] = y[4], x[6] = mu[0] - y[3], x[7] = mu[1] - y[4];
    });
  };
  s.level->coords = [](const Coords&) { return select_outputs(identity_field(8), {0, 1, 2, 4, 5}); };
  s.quotient->project = [](const Coords& mu) {
    return SmoothField::make(5, 5, [mu](auto y, auto z) {
      z[0] = y[0], z[1] = y[1], z[2] = y[2], z[3] = 2.0 * y[3] - mu[0], z[4] = 2.0 * y[4] - mu[1];
    });
  };
  s.quotient->section = [](const Coords& mu) {
    return SmoothField::make(5, 5, [mu](auto z, auto y) {
      y[0] = z[0], y[1] = z[1], y[2] = z[2], y[3] = 0.5 * (z[3] + mu[0]), y[4] = 0.5 * (z[4] + mu[1]);
    });
  };
  auto rep = check_reduction_conditions(s, s.default_mu, 20);
  CHECK_FALSE(rep.passed());
  CHECK(rep.at("level.value").pass);
  CHECK_FALSE(rep.at("weak_regular.kernel").pass);
  CHECK_FALSE(rep.at("conditions.orbit_tangent").pass);
  REQUIRE(rep.first_failure() != nullptr);
  CHECK(rep.first_failure()->name == "weak_regular.kernel");
}

TEST_CASE("strings reduction reproduces the reduced forms and Hamiltonian") {
  for (const char* preset : {"zero", "qsinx", "q2x"}) {
    auto s = get_instance("coupled-strings", {.coupling = preset});
    for (const Coords& mu : {Coords{1.0, 0.5}, Coords{-0.4, 2.0}}) {
      auto r = reduce(s, mu, 100);
      INFO(preset << "\n" << text(r.report));
      CHECK(r.report.passed());
      CHECK(r.report.at("expected.omega").max_residual <= 1e-9);
      CHECK(r.report.at("reduce.pullback_tau").max_residual <= 1e-9);
      CHECK(r.section_gap <= 1e-9);
      CHECK(r.section_gap >= 0.0);
    }
  }
  auto s = get_instance("coupled-strings");
  auto r = reduce(s, {1.0, 0.5});
  // half-coefficient symplectic blocks in (q, pt, px)
  const Coords z{0.3, 1.1, 0.4, -0.7, 2.2};
  auto W1 = r.reduced.omega.two_form(0, z);
  auto W2 = r.reduced.omega.two_form(1, z);
  CHECK_THAT(W1(2, 3), WithinAbs(0.5, 1e-12));
  CHECK_THAT(W2(2, 4), WithinAbs(0.5, 1e-12));
  CHECK_THAT(W1(2, 4), WithinAbs(0.0, 1e-12));
  // minus sign in front of (px)^2
  const double hand = 0.25 * (-0.7 * -0.7 - 2.2 * 2.2 + 1.0 - 0.25) + 0.4 * std::sin(1.1);
  CHECK_THAT(r.h.scalar(z), WithinAbs(hand, 1e-12));
  const double plus = 0.25 * (-0.7 * -0.7 + 2.2 * 2.2 + 1.0 - 0.25) + 0.4 * std::sin(1.1);
  CHECK(std::abs(r.h.scalar(z) - plus) > 1.0);
}

TEST_CASE("in (q, p1t, p1x) level coordinates the reduced form has unit coefficients") {
  auto s = get_instance("coupled-strings");
  const Coords mu{1.0, 0.5};
  auto chart = make_chart({"t", "x", "q", "p1t", "p1x"}, {{0, 2}, {0, 6}, {-5, 5}, {-5, 5}, {-5, 5}});
  auto section = SmoothField::make(5, 6, [](auto z, auto y) {
    y[0] = z[0], y[1] = z[1], y[2] = z[2], y[3] = z[2] * 0.0, y[4] = z[3], y[5] = z[4];
  });
  auto om = pullback(compose(s.level->embed(mu), section), s.structure.omega, chart);
  auto expected = VValuedForm::constant(chart, 2, 2, {{0, {2, 3}, 1.0}, {1, {2, 4}, 1.0}});
  CHECK(max_abs_difference(om, expected, halton_samples(*chart, 50)) <= 1e-12);
}

TEST_CASE("reduction of the product, trivial and phase-translation instances") {
  for (auto inst : {get_instance("product-cosymplectic"), get_instance("cosymplectic-darboux"),
                    get_instance("cosymplectic-darboux", {.variant = "phase-translations"})}) {
    auto r = reduce(inst, inst.default_mu, 60);
    INFO(inst.name << "\n" << text(r.report));
    CHECK(r.report.passed());
  }
  // trivial group: reduced data is the input data
  auto t = get_instance("cosymplectic-darboux");
  auto r = reduce(t, {}, 30);
  const auto pts = halton_samples(*t.structure.chart(), 30);
  CHECK(max_abs_difference(r.reduced.omega, t.structure.omega, pts) == 0.0);
  CHECK(max_abs_difference(r.reduced.tau, t.structure.tau, pts) == 0.0);
  CHECK(r.section_gap == -1.0);
}

TEST_CASE("reduction without a quotient chart is refused") {
  auto m = get_instance("membrane-polar");
  CHECK_THROWS_AS(reduce(m, {}), ReductionError);
}

TEST_CASE("strings dynamics reduce to the reduced HDW field") {
  auto s = get_instance("coupled-strings");
  const Coords mu{1.0, 0.5};
  auto red = reduce(s, mu, 40);
  for (bool paper : {true, false}) {
    auto X = instance_kvector_field(s, paper);
    auto rd = reduce_dynamics(s, mu, X, red, 12);
    INFO(text(rd.report));
    CHECK(rd.report.passed());
    for (const auto& z : halton_samples(*s.quotient->chart, 15, 3)) {
      const double cq = std::sin(z[1]);
      auto v = rd.X.eval(z);
      // X_1 = ∂t + pt ∂q + a ∂pt, X_2 = ∂x − px ∂q + b ∂px
      CHECK_THAT(v[0], WithinAbs(1.0, 1e-12));
      CHECK_THAT(v[2], WithinAbs(z[3], 1e-12));
      CHECK_THAT(v[5 + 1], WithinAbs(1.0, 1e-12));
      CHECK_THAT(v[5 + 2], WithinAbs(-z[4], 1e-12));
      if (paper) {
        CHECK_THAT(v[3], WithinAbs(0.0, 1e-12));
        CHECK_THAT(v[5 + 4], WithinAbs(-2.0 * cq, 1e-12));
      } else {
        CHECK_THAT(v[3], WithinAbs(-cq, 1e-12));
        CHECK_THAT(v[5 + 4], WithinAbs(-cq, 1e-12));
      }
    }
  }
}

TEST_CASE("a fibre-dependent field is not projectable") {
  auto s = get_instance("coupled-strings");
  const Coords mu{1.0, 0.5};
  auto red = reduce(s, mu, 20);
  // tangent to the level set but not invariant along the orbit
  auto X = SmoothField::make(8, 16, [](auto x, auto y) {
    for (auto& v : y) v = x[0] * 0.0;
    y[0] = x[0] * 0.0 + 1.0;
    y[2] = x[2];
    y[8 + 1] = x[0] * 0.0 + 1.0;
  });
  CHECK_THROWS_AS(reduce_dynamics(s, mu, X, red, 10), ReductionError);
}

TEST_CASE("trivial group reduction leaves the dynamics unchanged") {
  auto t = get_instance("cosymplectic-darboux");
  auto red = reduce(t, {}, 20);
  auto X = instance_kvector_field(t);
  auto rd = reduce_dynamics(t, {}, X, red, 10);
  INFO(text(rd.report));
  CHECK(rd.report.passed());
  for (const auto& x : halton_samples(*t.structure.chart(), 10)) {
    auto a = X.eval(x), b = rd.X.eval(x);
    for (int i = 0; i < 3; ++i) CHECK_THAT(a[i], WithinAbs(b[i], 1e-12));
  }
}

TEST_CASE("extended action and momentum map on the fibred extension") {
  auto s = get_instance("coupled-strings");
  auto fib = extend_to_fibred(s.structure);
  auto ext = extend_action_momentum(s, fib, 30);
  INFO(text(ext.report));
  CHECK(ext.report.passed());
  CHECK(ext.report.at("extended.u_independence").max_residual == 0.0);
  CHECK(ext.level.chart->dim() == 8);
  auto y = halton_samples(*ext.level.chart, 1, 5)[0];
  auto x = ext.level.embed(s.default_mu).eval(y);
  CHECK(x[0] == y[0]);
  CHECK(x[1] == y[1]);
  const auto pts = halton_samples(*fib.extended_chart, 20);
  for (const auto& g : group_samples(ext.action.group, 5)) {
    auto phi = ext.action.phi(g);
    CHECK(max_abs_difference(pullback(phi, fib.omega_tilde, fib.extended_chart), fib.omega_tilde, pts) <= 1e-12);
  }
  // the membrane has no momentum map to extend
  auto m = get_instance("membrane-polar");
  auto em = extend_action_momentum(m, extend_to_fibred(m.structure), 10);
  CHECK(em.report.at("extended.applicable").note.find("not applicable") != std::string::npos);
}

TEST_CASE("extended Hamiltonian k-vector field") {
  // time-dependent coupling so that R_1 h = ∂C/∂t
  auto C = SmoothField::make(3, 1, [](auto z, auto y) { y[0] = z[0] * z[2] * polyco::sin(z[1]); });
  auto s = make_strings(C);
  auto fib = extend_to_fibred(s.structure);
  auto X = instance_kvector_field(s);
  auto eh = extended_hamiltonian(fib, s.hamiltonian, X, 40);
  CHECK(eh.residual <= 1e-10);
  for (const auto& x : halton_samples(*fib.extended_chart, 10, 2)) {
    auto v = eh.X.eval(x);
    const int N = 10;
    CHECK_THAT(v[0], WithinAbs((x[4] - x[5]) * std::sin(x[3]), 1e-12));  // q sin x
    CHECK_THAT(v[1], WithinAbs(0.0, 1e-15));
    CHECK_THAT(v[N + 1], WithinAbs(x[2] * (x[4] - x[5]) * std::cos(x[3]), 1e-12));  // ∂C/∂x
    CHECK_THAT(eh.h.scalar(x), WithinAbs(s.hamiltonian.scalar(std::vector<double>(x.begin() + 2, x.end())) - x[0] - x[1], 1e-12));
  }
  // base-independent h leaves the u slots empty
  auto z = get_instance("coupled-strings", {.coupling = "zero"});
  auto ez = extended_hamiltonian(extend_to_fibred(z.structure), z.hamiltonian, instance_kvector_field(z), 20);
  CHECK(ez.residual <= 1e-10);
  for (const auto& x : halton_samples(*extend_to_fibred(z.structure).extended_chart, 10)) {
    auto v = ez.X.eval(x);
    CHECK(v[0] == 0.0);
    CHECK(v[10 + 1] == 0.0);
  }
  // k = 1
  auto d = get_instance("cosymplectic-darboux");
  auto ed = extended_hamiltonian(extend_to_fibred(d.structure), d.hamiltonian, instance_kvector_field(d), 20);
  CHECK(ed.residual <= 1e-10);
}

TEST_CASE("membrane space-time reduction") {
  for (const char* force : {"unit", "cos"}) {
    auto m = get_instance("membrane-polar", {.wave_speed = 1.3, .force = force});
    const Coords lambda{0.5, -0.25};
    auto X = instance_kvector_field(m);
    auto st = spacetime_reduce(m.structure, m.hamiltonian, X, m.action, *m.spacetime, lambda, 40);
    INFO(text(st.report));
    CHECK(st.report.passed());
    const auto& rc = m.spacetime->reduced_chart;
    const auto zs = halton_samples(*rc, 30, 1);
    CHECK(max_abs_difference(st.reduced.tau, VValuedForm::constant(rc, 1, 1, {{0, {0}, 1.0}}), zs) == 0.0);
    CHECK(max_abs_difference(st.reduced.omega, VValuedForm::constant(rc, 2, 1, {{0, {1, 2}, 1.0}}), zs) == 0.0);
    const double c2 = 1.3 * 1.3;
    for (const auto& z : zs) {
      const double r = z[0], f = std::string(force) == "unit" ? 1.0 : std::cos(r);
      auto v = st.X.eval(z);
      CHECK_THAT(v[0], WithinAbs(1.0, 1e-14));
      CHECK_THAT(v[1], WithinAbs(-z[2] / (c2 * r), 1e-12));
      CHECK_THAT(v[2], WithinAbs(r * f, 1e-12));
      const double k = (0.25 - z[2] * z[2] / c2 - r * r * 0.0625 / c2) / (2 * r) - r * z[1] * f;
      CHECK_THAT(st.h.scalar(z), WithinAbs(k, 1e-12));
    }
  }
}

TEST_CASE("space-time reduction refuses violated hypotheses") {
  auto m = get_instance("membrane-polar");
  const Coords lambda{0.5, 0.25};
  // h depending on t
  auto ht = add(m.hamiltonian, coordinate_field(7, 0));
  auto Xt = hamiltonian_kvector_field(HamiltonianSystem(m.structure, ht, *m.paper_gauge));
  CHECK_THROWS_AS(spacetime_reduce(m.structure, ht, Xt, m.action, *m.spacetime, lambda, 10), ReductionError);
  // nonzero suppressed momentum trace
  auto gauge = SmoothField::make(7, 9, [](auto x, auto y) {
    for (auto& v : y) v = x[0] * 0.0;
    y[0] = x[0] * 0.0 + 1.0;
    y[4] = x[1] - 1.0;
  });
  auto X = hamiltonian_kvector_field(HamiltonianSystem(m.structure, m.hamiltonian, GaugeChoice::supplied(gauge)));
  CHECK_THROWS_AS(spacetime_reduce(m.structure, m.hamiltonian, X, m.action, *m.spacetime, lambda, 10), ReductionError);
}
