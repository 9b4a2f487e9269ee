#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "polyco/config.hpp"
#include "polyco/expr.hpp"

using namespace polyco;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

double value(const std::string& text, const Coords& x, const std::vector<std::string>& vars = {"x", "y"}) {
  return compile_expression(text, vars).scalar(x);
}

Polynomial random_polynomial(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> coef(-3, 3);
  std::uniform_int_distribution<int> count(1, 6), var(0, n - 1), deg(0, 4);
  Polynomial p;
  std::vector<std::vector<int>> seen;
  for (int t = count(rng); t > 0; --t) {
    std::vector<int> e(n, 0);
    for (int d = deg(rng); d > 0; --d) ++e[var(rng)];
    if (std::find(seen.begin(), seen.end(), e) != seen.end()) continue;
    seen.push_back(e);
    // short decimals so the printed text is exact
    p.terms.push_back({std::round(coef(rng) * 1000) / 1000, e});
  }
  return p;
}

double poly_value(const Polynomial& p, const Coords& x) {
  double s = 0.0;
  for (const auto& [c, e] : p.terms) {
    double m = c;
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(x[i], e[i]);
    s += m;
  }
  return s;
}

const char* kR4 = R"(
[instance]
name = r4-broken
[chart]
coords = x, y, w, v
k = 2
[tau]
1.y = 1
2.x = 1
[omega]
1.x^w = 1
2.y^v = 1
)";

}  // namespace

TEST_CASE("expressions: precedence and constants") {
  const Coords x{0.7, -1.3};
  CHECK_THAT(value("2*x^3 - sin(y)/3 + exp(0.5*x)", x),
             WithinAbs(2 * std::pow(0.7, 3) - std::sin(-1.3) / 3 + std::exp(0.35), 1e-14));
  CHECK_THAT(value("-x^2", x), WithinAbs(-0.49, 1e-15));
  CHECK_THAT(value("2^3^2", x), WithinAbs(512.0, 1e-12));
  CHECK_THAT(value("x**2 - y**-1", x), WithinAbs(0.49 + 1 / 1.3, 1e-14));
  CHECK_THAT(value("(x + y) * (x - y)", x), WithinAbs(0.49 - 1.69, 1e-14));
  CHECK_THAT(value("pi + e", x), WithinAbs(M_PI + M_E, 1e-15));
  CHECK_THAT(value("sqrt(x) * log(x) + tan(y) + cos(x)", x),
             WithinAbs(std::sqrt(0.7) * std::log(0.7) + std::tan(-1.3) + std::cos(0.7), 1e-14));
  CHECK_THAT(value("x^0.5", x), WithinAbs(std::sqrt(0.7), 1e-14));
  CHECK_THAT(value("1/x", x), WithinAbs(1 / 0.7, 1e-14));
}

TEST_CASE("expressions: malformed text is rejected") {
  for (const char* bad : {"", "x +", "(x", "x)", "foo(x)", "z", "x y", "2**", "sin x", "3..2"}) {
    INFO(bad);
    CHECK_THROWS_AS(compile_expression(bad, {"x", "y"}), ExpressionError);
  }
}

TEST_CASE("expressions: derivatives follow the Jacobian contract") {
  auto f = compile_expression("x^3*y - sin(x*y) + exp(y)/(2 + x^2) + y^2.5", {"x", "y"});
  auto box = make_chart({"x", "y"}, {{-1, 1}, {0.2, 1.5}});
  CHECK(jacobian_contract_error(f, halton_samples(*box, 30, 4)) <= 1e-6);
  const Coords x{0.3, 0.8};
  auto J = f.jacobian(x);
  CHECK_THAT(J(0, 0), WithinAbs(3 * 0.09 * 0.8 - 0.8 * std::cos(0.24) - std::exp(0.8) * 0.6 / std::pow(2.09, 2), 1e-13));
}

TEST_CASE("polynomials: print, parse and fit round trip") {
  std::mt19937_64 rng(11);
  auto box = make_chart({"a", "b", "c"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  const auto pts = halton_samples(*box, 120, 1);
  const auto check = halton_samples(*box, 40, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_polynomial(rng, 3);
    const std::string text = format_polynomial(p, {"a", "b", "c"});
    INFO(text);
    auto f = compile_expression(text, {"a", "b", "c"});
    for (const auto& x : check) CHECK_THAT(f.scalar(x), WithinAbs(poly_value(p, x), 1e-12));
    auto [fit, dev] = fit_polynomial(f, 0, 4, pts, check);
    CHECK(dev <= 1e-10);
    for (const auto& x : check) CHECK_THAT(poly_value(fit, x), WithinAbs(poly_value(p, x), 1e-9));
  }
}

TEST_CASE("polynomial fit reports a large deviation for non-polynomials") {
  auto box = make_chart({"x"}, {{-3, 3}});
  auto f = compile_expression("exp(x)", {"x"});
  auto [fit, dev] = fit_polynomial(f, 0, 4, halton_samples(*box, 80, 1), halton_samples(*box, 30, 2));
  CHECK(dev > 1e-3);
}

TEST_CASE("config files: sections, comments and errors") {
  auto cfg = ConfigFile::parse("# top\n[a]\nx = 1 # trailing\ny=two words\n\n[b]\nz = 3\n");
  CHECK(cfg.sections() == std::vector<std::string>{"a", "b"});
  CHECK(cfg.get("a", "x").value() == "1");
  CHECK(cfg.get("a", "y").value() == "two words");
  CHECK_FALSE(cfg.get("b", "x"));
  CHECK(cfg.section("missing").empty());
  CHECK(cfg.section("a")[1].first == "y");
  CHECK_THROWS_WITH(ConfigFile::parse("x = 1\n"), ContainsSubstring("outside a section"));
  CHECK_THROWS_WITH(ConfigFile::parse("[a]\nx = 1\nx = 2\n"), ContainsSubstring("duplicate key"));
  CHECK_THROWS_WITH(ConfigFile::parse("[a\n"), ContainsSubstring("unterminated"));
  CHECK_THROWS_WITH(ConfigFile::parse("[a]\n[a]\n"), ContainsSubstring("duplicate section"));
  CHECK_THROWS_WITH(ConfigFile::parse("[a]\njust words\n"), ContainsSubstring("key = value"));
  CHECK_THROWS_AS(ConfigFile::load("/nonexistent/polyco.cfg"), ConfigError);
  CHECK(parse_reals(" 1.5, -2e-3 ,4", "t") == std::vector<double>{1.5, -2e-3, 4});
  CHECK_THROWS_AS(parse_reals("1, x", "t"), ConfigError);
  CHECK_THROWS_AS(parse_reals("1.5q", "t"), ConfigError);
}

TEST_CASE("config instances: the R^4 pair fails on the joint kernel") {
  auto inst = instance_from_config(ConfigFile::parse(kR4));
  CHECK(inst.name == "r4-broken");
  CHECK(inst.k() == 2);
  auto rep = verify_structure(inst.structure, 30, 1e-9);
  REQUIRE_FALSE(rep.passed());
  const auto* f = rep.first_failure();
  CHECK(f->rank_found == 0);
  CHECK(f->rank_expected == 2);
}

TEST_CASE("config instances: user structure with action and momentum map") {
  auto inst = instance_from_config(ConfigFile::parse(R"(
[instance]
name = osc
[chart]
coords = t, q1, q2, p1, p2
bounds = 0:1, -2:2, -2:2, -2:2, -2:2
[tau]
1.t = 1
[omega]
1.q1^p1 = 1
1.q2^p2 = 1
[hamiltonian]
h = 0.5*(p1^2 + p2^2) + t*sin(q1)
[action]
translate.1 = q2
[momentum]
1.1 = p2
)"));
  CHECK(verify_structure(inst.structure, 40, 1e-9).passed());
  CHECK(verify_action_invariance(inst.action, inst.structure, 5, 20, 1e-10, &inst.hamiltonian).passed());
  REQUIRE(inst.momentum);
  CHECK(verify_momentum_map(inst.structure, inst.action, *inst.momentum, 20).passed());
  const Coords x{0.5, 0.3, -1.0, 0.2, 0.7};
  CHECK_THAT(inst.hamiltonian.scalar(x), WithinAbs(0.5 * (0.04 + 0.49) + 0.5 * std::sin(0.3), 1e-15));
  CHECK(inst.structure.chart()->bounds()[0].hi == 1.0);
}

TEST_CASE("config instances: catalog references and expression couplings") {
  auto ref = instance_from_config(ConfigFile::parse("[instance]\nname = coupled-strings\ncoupling = qsinx\n"));
  auto expr = instance_from_config(ConfigFile::parse("[instance]\nname = coupled-strings\ncoupling = q*sin(x)\n"));
  for (const auto& x : halton_samples(*ref.structure.chart(), 30, 3))
    CHECK_THAT(expr.hamiltonian.scalar(x), WithinAbs(ref.hamiltonian.scalar(x), 1e-14));
  auto mem = instance_from_config(ConfigFile::parse("[instance]\nname = membrane-polar\nforce = r^2\nwave_speed = 2\n"));
  CHECK(mem.wave_speed == 2.0);
  CHECK_THAT(mem.force.scalar(Coords{1.5}), WithinAbs(2.25, 1e-15));
  auto dar = instance_from_config(ConfigFile::parse("[instance]\nname = cosymplectic-darboux\nvariant = phase-translations\n"));
  CHECK(dar.options.variant == "phase-translations");
}

TEST_CASE("config instances: invalid content is a ConfigError") {
  const char* bad[] = {
      "[instance]\nname = nothing\n",
      "[instance]\ncoupling = zero\n",
      "[instance]\nname = coupled-strings\ncoupling = q*sinh(x)\n",
      "[instance]\nname = coupled-strings\n[chart]\ncoords = a\n",
      "[chart]\ncoords = a, b\nbounds = 1:0\n",
      "[chart]\ncoords = a, b\nbounds = 0:1, 0:1, 0:1\n",
      "[chart]\ncoords = a, a\n",
      "[chart]\ncoords = a, b\n[tau]\n1.c = 1\n",
      "[chart]\ncoords = a, b\n[tau]\n2.a = 1\n",
      "[chart]\ncoords = a, b\n[tau]\n1.a^b = 1\n",
      "[chart]\ncoords = a, b\n[omega]\n1.a = 1\n",
      "[chart]\ncoords = a, b\nk = 0\n",
      "[chart]\ncoords = a, b\n[momentum]\n1.1 = a\n",
      "[chart]\ncoords = a, b\n[action]\ntranslate.2 = a\n",
      "[chart]\ncoords = a, b\n[action]\nrotate.1 = a\n",
      "[chart]\ncoords = a, b\n[hamiltonian]\nh = c\n",
      "[instance]\nname = membrane-polar\nwave_speed = 1, 2\n",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(instance_from_config(ConfigFile::parse(text)), ConfigError);
  }
}

TEST_CASE("export: reduced strings structure round trips") {
  auto inst = get_instance("coupled-strings");
  auto r = reduce(inst, inst.default_mu, 20);
  auto ex = export_structure("strings-reduced", r.reduced, r.h);
  CHECK_THAT(ex.text, ContainsSubstring("1.q^pt = 0.5"));
  CHECK_THAT(ex.text, ContainsSubstring("2.q^px = 0.5"));
  CHECK(ex.unfitted == std::vector<std::string>{"h"});
  auto back = instance_from_config(ConfigFile::parse(ex.text));
  const auto pts = halton_samples(*r.reduced.chart(), 40, 9);
  CHECK(max_abs_difference(back.structure.tau, r.reduced.tau, pts) == 0.0);
  CHECK(max_abs_difference(back.structure.omega, r.reduced.omega, pts) == 0.0);
  CHECK(verify_structure(back.structure, 40, 1e-9).passed());
}

TEST_CASE("export: polynomial Hamiltonians survive the round trip") {
  auto inst = get_instance("product-cosymplectic");
  auto r = reduce(inst, inst.default_mu, 20);
  auto ex = export_structure("product-reduced", r.reduced, r.h);
  CHECK(ex.unfitted.empty());
  CHECK(ex.worst_fit <= 1e-10);
  auto back = instance_from_config(ConfigFile::parse(ex.text));
  for (const auto& x : halton_samples(*r.reduced.chart(), 40, 9))
    CHECK_THAT(back.hamiltonian.scalar(x), WithinAbs(r.h.scalar(x), 1e-9));
  // exporting the re-imported structure gives the same text
  CHECK(export_structure("product-reduced", back.structure, back.hamiltonian).text == ex.text);
}
