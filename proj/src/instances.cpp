#include "polyco/instances.hpp"

#include <numbers>

namespace polyco {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
SmoothField field(int in, int out, F f, std::string label = {}) {
  return SmoothField::make(in, out, std::move(f), kMaxLevels, std::move(label));
}

ActionModel translation_action(ChartPtr chart, std::vector<std::vector<int>> moved) {
  const int n = chart->dim();
  const int m = static_cast<int>(moved.size());
  ActionModel a;
  a.group = abelian_group(m);
  a.chart = chart;
  a.phi = [n, moved](const Coords& g) {
    return field(n, n, [g, moved](auto x, auto y) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i];
      for (std::size_t b = 0; b < moved.size(); ++b)
        for (int c : moved[b]) y[c] = y[c] + g[b];
    }, "Phi_g");
  };
  std::vector<double> gens(static_cast<std::size_t>(m) * n, 0.0);
  for (int b = 0; b < m; ++b)
    for (int c : moved[b]) gens[b * n + c] = 1.0;
  a.generators = constant_field(n, gens).with_label("xi_M");
  return a;
}

IsotropyData full_isotropy(int m, int k) {
  std::vector<int> all(m);
  for (int i = 0; i < m; ++i) all[i] = i;
  return {all, std::vector<std::vector<int>>(k, all)};
}

// Keeps the listed outputs of the identity on `in` coordinates.
SmoothField pick(int in, std::vector<int> idx) { return select_outputs(identity_field(in), std::move(idx)); }

ChartPtr strings_chart() {
  return make_chart({"t", "x", "q1", "q2", "p1t", "p1x", "p2t", "p2x"},
                    {{0, 2}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}});
}

SmoothField strings_section(double q2, const Coords& mu) {
  return field(5, 6, [q2, mu](auto z, auto y) {
    y[0] = z[0];
    y[1] = z[1];
    y[2] = z[2] + q2;
    y[3] = z[2] * 0.0 + q2;
    y[4] = 0.5 * (z[3] + mu[0]);
    y[5] = 0.5 * (z[4] + mu[1]);
  }, "s_mu");
}

}  // namespace

SmoothField coupling_preset(const std::string& name) {
  if (name == "zero") return constant_field(3, {0.0}).with_label("C=0");
  if (name == "qsinx") return field(3, 1, [](auto z, auto y) { y[0] = z[2] * sin(z[1]); }, "C=q sin x");
  if (name == "q2x") return field(3, 1, [](auto z, auto y) { y[0] = z[2] * z[2] * z[1]; }, "C=q^2 x");
  throw std::invalid_argument("unknown coupling preset: " + name + " (zero, qsinx, q2x)");
}

SmoothField force_preset(const std::string& name) {
  if (name == "unit") return constant_field(1, {1.0}).with_label("f=1");
  if (name == "zero") return constant_field(1, {0.0}).with_label("f=0");
  if (name == "cos") return field(1, 1, [](auto r, auto y) { y[0] = cos(r[0]); }, "f=cos r");
  throw std::invalid_argument("unknown force preset: " + name + " (unit, cos, zero)");
}

CatalogInstance make_strings(const SmoothField& C, const std::string& coupling_label) {
  if (C.in_dim() != 3 || C.out_dim() != 1) throw std::invalid_argument("strings coupling must be C(t, x, q)");
  auto chart = strings_chart();
  DarbouxLayout L{{0, 1}, {2, 3}, {{4, 6}, {5, 7}}};
  KPolycosymplecticStructure s(
      VValuedForm::constant(chart, 1, 2, {{0, {0}, 1.0}, {1, {1}, 1.0}}),
      VValuedForm::constant(chart, 2, 2, {{0, {2, 4}, 1.0}, {0, {3, 6}, 1.0}, {1, {2, 5}, 1.0}, {1, {3, 7}, 1.0}}), L);

  auto h = SmoothField::make(
      8, 1,
      [C](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        const T z[3] = {x[0], x[1], x[2] - x[3]};
        y[0] = 0.5 * (x[4] * x[4] + x[6] * x[6] - x[5] * x[5] - x[7] * x[7]) + C.apply<T>(std::span<const T>(z, 3))[0];
      },
      C.levels(), "h");

  // (X_2)^{p1x} = -C_q, (X_2)^{p2x} = +C_q, all other momentum slots zero.
  auto gauge = SmoothField::make(
      8, 8,
      [C](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        for (auto& v : y) v = T(0.0);
        const T z[3] = {x[0], x[1], x[2] - x[3]};
        const T cq = C.jacobian_t<T>(std::span<const T>(z, 3))[2];
        y[(1 * 2 + 1) * 2 + 0] = -cq;
        y[(1 * 2 + 1) * 2 + 1] = cq;
      },
      C.levels() - 1, "listed gauge");

  MomentumMapModel J{2, 1, field(8, 2, [](auto x, auto y) {
                       y[0] = x[4] + x[6];
                       y[1] = x[5] + x[7];
                     }, "J")};

  LevelChart level;
  level.chart = make_chart({"t", "x", "q1", "q2", "p1t", "p1x"}, {{0, 2}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}});
  level.embed = [](const Coords& mu) {
    return field(6, 8, [mu](auto y, auto x) {
      for (int i = 0; i < 6; ++i) x[i] = y[i];
      x[6] = mu[0] - y[4];
      x[7] = mu[1] - y[5];
    }, "lambda_mu");
  };
  level.coords = [](const Coords&) { return pick(8, {0, 1, 2, 3, 4, 5}); };

  QuotientChart quotient;
  quotient.chart = make_chart({"t", "x", "q", "pt", "px"}, {{0, 2}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}});
  quotient.project = [](const Coords& mu) {
    return field(6, 5, [mu](auto y, auto z) {
      z[0] = y[0];
      z[1] = y[1];
      z[2] = y[2] - y[3];
      z[3] = 2.0 * y[4] - mu[0];
      z[4] = 2.0 * y[5] - mu[1];
    }, "pi_mu");
  };
  quotient.section = [](const Coords& mu) { return strings_section(0.0, mu); };
  quotient.alt_section = [](const Coords& mu) { return strings_section(0.7, mu); };

  auto qc = quotient.chart;
  auto expected = [qc, C](const Coords& mu) {
    ReducedData d{VValuedForm::constant(qc, 1, 2, {{0, {0}, 1.0}, {1, {1}, 1.0}}),
                  VValuedForm::constant(qc, 2, 2, {{0, {2, 3}, 0.5}, {1, {2, 4}, 0.5}}),
                  SmoothField::make(
                      5, 1,
                      [C, mu](auto z, auto y) {
                        using T = std::remove_cvref_t<decltype(y[0])>;
                        y[0] = 0.25 * (z[3] * z[3] - z[4] * z[4] + mu[0] * mu[0] - mu[1] * mu[1]) +
                               C.apply<T>(z.subspan(0, 3))[0];
                      },
                      C.levels(), "h_mu")};
    return d;
  };

  ReductionInstance base{
      .name = "coupled-strings",
      .summary = "two strings with coupling C(t,x,q1-q2); k=2, dim 8, common translation of q1 and q2",
      .structure = s,
      .action = translation_action(chart, {{2, 3}}),
      .momentum = J,
      .hamiltonian = h,
      .paper_gauge = GaugeChoice::supplied(gauge),
      .level = level,
      .quotient = quotient,
      .isotropy = [](const Coords&) { return full_isotropy(1, 2); },
      .expected = expected,
      .default_mu = {1.0, 0.5},
  };
  CatalogInstance c(std::move(base));
  c.options.coupling = coupling_label;
  c.solver = "strings";
  c.coupling = C;
  return c;
}

CatalogInstance make_product_cosymplectic() {
  auto chart = make_chart({"t1", "q11", "q12", "p11", "p12", "t2", "q21", "q22", "p21", "p22"},
                          {{0, 1}, {-2, 2}, {-2, 2}, {-2, 2}, {-2, 2}, {0, 1}, {-2, 2}, {-2, 2}, {-2, 2}, {-2, 2}});
  KPolycosymplecticStructure s(
      VValuedForm::constant(chart, 1, 2, {{0, {0}, 1.0}, {1, {5}, 1.0}}),
      VValuedForm::constant(chart, 2, 2, {{0, {1, 3}, 1.0}, {0, {2, 4}, 1.0}, {1, {6, 8}, 1.0}, {1, {7, 9}, 1.0}}));
  auto h = field(10, 1, [](auto x, auto y) {
    y[0] = 0.5 * (x[3] * x[3] + x[4] * x[4] + x[8] * x[8] + x[9] * x[9]) + 0.5 * (x[2] * x[2] + x[7] * x[7]) +
           0.1 * x[0] * x[2] - 0.2 * x[5] * x[7];
  }, "h");
  MomentumMapModel J{2, 2, field(10, 4, [](auto x, auto y) {
                       y[0] = x[3];
                       y[1] = x[3] * 0.0;
                       y[2] = x[3] * 0.0;
                       y[3] = x[8];
                     }, "J")};

  LevelChart level;
  level.chart = make_chart({"t1", "q11", "q12", "p12", "t2", "q21", "q22", "p22"},
                           {{0, 1}, {-2, 2}, {-2, 2}, {-2, 2}, {0, 1}, {-2, 2}, {-2, 2}, {-2, 2}});
  level.embed = [](const Coords& mu) {
    return field(8, 10, [mu](auto y, auto x) {
      x[0] = y[0], x[1] = y[1], x[2] = y[2], x[3] = y[0] * 0.0 + mu[0], x[4] = y[3];
      x[5] = y[4], x[6] = y[5], x[7] = y[6], x[8] = y[0] * 0.0 + mu[3], x[9] = y[7];
    }, "lambda_mu");
  };
  level.coords = [](const Coords&) { return pick(10, {0, 1, 2, 4, 5, 6, 7, 9}); };

  QuotientChart quotient;
  quotient.chart = make_chart({"t1", "q12", "p12", "t2", "q22", "p22"}, {{0, 1}, {-2, 2}, {-2, 2}, {0, 1}, {-2, 2}, {-2, 2}});
  quotient.project = [](const Coords&) { return pick(8, {0, 2, 3, 4, 6, 7}); };
  auto section = [](double offset) {
    return field(6, 8, [offset](auto z, auto y) {
      y[0] = z[0], y[1] = z[0] * 0.0 + offset, y[2] = z[1], y[3] = z[2];
      y[4] = z[3], y[5] = z[0] * 0.0 + offset, y[6] = z[4], y[7] = z[5];
    }, "s_mu");
  };
  quotient.section = [section](const Coords&) { return section(0.0); };
  quotient.alt_section = [section](const Coords&) { return section(0.7); };

  auto qc = quotient.chart;
  auto expected = [qc](const Coords& mu) {
    return ReducedData{VValuedForm::constant(qc, 1, 2, {{0, {0}, 1.0}, {1, {3}, 1.0}}),
                       VValuedForm::constant(qc, 2, 2, {{0, {1, 2}, 1.0}, {1, {4, 5}, 1.0}}),
                       field(6, 1, [mu](auto z, auto y) {
                         y[0] = 0.5 * (z[2] * z[2] + z[5] * z[5] + mu[0] * mu[0] + mu[3] * mu[3]) +
                                0.5 * (z[1] * z[1] + z[4] * z[4]) + 0.1 * z[0] * z[1] - 0.2 * z[3] * z[4];
                       }, "h_mu")};
  };

  ReductionInstance base{
      .name = "product-cosymplectic",
      .summary = "product of two cosymplectic R x T*R^2 factors; k=2, dim 10, translation of the first q in each factor",
      .structure = s,
      .action = translation_action(chart, {{1}, {6}}),
      .momentum = J,
      .hamiltonian = h,
      .paper_gauge = std::nullopt,
      .level = level,
      .quotient = quotient,
      .isotropy = [](const Coords&) { return full_isotropy(2, 2); },
      .expected = expected,
      .default_mu = {1.0, 0.0, 0.0, 0.5},
  };
  return CatalogInstance(std::move(base));
}

SmoothField membrane_polar_hamiltonian(double c, const SmoothField& F) {
  if (F.in_dim() != 3 || F.out_dim() != 1) throw std::invalid_argument("membrane force must be F(t, r, theta)");
  const double c2 = c * c;
  return SmoothField::make(
      7, 1,
      [F, c2](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        const T z[3] = {x[0], x[1], x[2]};
        const auto r = x[1];
        y[0] = (x[4] * x[4] - x[5] * x[5] / c2 - r * r * x[6] * x[6] / c2) / (2.0 * r) -
               r * x[3] * F.apply<T>(std::span<const T>(z, 3))[0];
      },
      F.levels(), "h");
}

CatalogInstance make_membrane(double c, const SmoothField& f, const std::string& force_label) {
  if (c == 0.0) throw std::invalid_argument("membrane wave speed must be nonzero");
  if (f.in_dim() != 1 || f.out_dim() != 1) throw std::invalid_argument("membrane force must be f(r)");
  auto chart = make_chart({"t", "r", "theta", "zeta", "pt", "pr", "ptheta"},
                          {{0, 2}, {0.5, 3}, {0, 2 * kPi}, {-5, 5}, {-5, 5}, {-5, 5}, {-5, 5}});
  DarbouxLayout L{{0, 1, 2}, {3}, {{4}, {5}, {6}}};
  KPolycosymplecticStructure s(VValuedForm::constant(chart, 1, 3, {{0, {0}, 1.0}, {1, {1}, 1.0}, {2, {2}, 1.0}}),
                               VValuedForm::constant(chart, 2, 3, {{0, {3, 4}, 1.0}, {1, {3, 5}, 1.0}, {2, {3, 6}, 1.0}}),
                               L);
  auto radial = SmoothField::make(
      3, 1,
      [f](auto z, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        y[0] = f.apply<T>(z.subspan(1, 1))[0];
      },
      f.levels());
  auto h = membrane_polar_hamiltonian(c, radial);

  // (X_2)^{pr} = r f(r)
  auto gauge = SmoothField::make(
      7, 9,
      [f](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        for (auto& v : y) v = T(0.0);
        y[(1 * 3 + 1) * 1 + 0] = x[1] * f.apply<T>(x.subspan(1, 1))[0];
      },
      f.levels(), "listed gauge");

  SpacetimeReductionData st;
  st.kept = {1};
  st.suppressed = {0, 2};
  st.reduced_chart = make_chart({"r", "zeta", "pr"}, {{0.5, 3}, {-5, 5}, {-5, 5}});
  st.projection = pick(7, {1, 3, 5}).with_label("pi");
  st.section = [](const Coords& lambda) {
    return field(3, 7, [lambda](auto z, auto x) {
      const auto zero = z[0] * 0.0;
      x[0] = zero, x[1] = z[0], x[2] = zero, x[3] = z[1];
      x[4] = zero + lambda[0], x[5] = z[2], x[6] = zero + lambda[1];
    }, "sigma_lambda");
  };
  st.reduced_action = [](const Coords&) { return identity_field(3); };
  st.level_samples = [chart](const Coords& lambda, int count, std::uint64_t seed) {
    auto pts = halton_samples(*chart, count, seed);
    for (auto& p : pts) p[4] = lambda[0], p[6] = lambda[1];
    return pts;
  };

  ReductionInstance base{
      .name = "membrane-polar",
      .summary = "forced membrane in polar coordinates with radial force f(r); k=3, dim 7, (t,theta) translations",
      .structure = s,
      .action = translation_action(chart, {{0}, {2}}),
      .momentum = std::nullopt,
      .hamiltonian = h,
      .paper_gauge = GaugeChoice::supplied(gauge),
      .level = std::nullopt,
      .quotient = std::nullopt,
      .isotropy = {},
      .expected = {},
      .default_mu = {},
  };
  CatalogInstance m(std::move(base));
  m.options.wave_speed = c;
  m.options.force = force_label;
  m.solver = "membrane";
  m.force = f;
  m.wave_speed = c;
  m.spacetime = st;
  m.default_lambda = {0.5, 0.25};
  return m;
}

CatalogInstance make_cosymplectic_darboux(const std::string& variant) {
  auto chart = make_chart({"t", "q", "p"}, {{0, 1}, {-1, 1}, {-1, 1}});
  KPolycosymplecticStructure s(VValuedForm::constant(chart, 1, 1, {{0, {0}, 1.0}}),
                               VValuedForm::constant(chart, 2, 1, {{0, {1, 2}, 1.0}}), DarbouxLayout{{0}, {1}, {{2}}});
  if (variant.empty()) {
    auto h = field(3, 1, [](auto x, auto y) { y[0] = 0.5 * (x[2] * x[2] + x[1] * x[1]) + x[0] * x[1]; }, "h");
    ActionModel a;
    a.group = abelian_group(0);
    a.chart = chart;
    a.phi = [](const Coords&) { return identity_field(3); };
    a.generators = constant_field(3, {});
    LevelChart level{chart, [](const Coords&) { return identity_field(3); },
                     [](const Coords&) { return identity_field(3); }};
    QuotientChart quotient{chart, [](const Coords&) { return identity_field(3); },
                           [](const Coords&) { return identity_field(3); }, {}};
    ReductionInstance base{
        .name = "cosymplectic-darboux",
        .summary = "canonical cosymplectic R x T*R with the trivial group; k=1 sandbox",
        .structure = s,
        .action = a,
        .momentum = MomentumMapModel{1, 0, constant_field(3, {})},
        .hamiltonian = h,
        .paper_gauge = std::nullopt,
        .level = level,
        .quotient = quotient,
        .isotropy = [](const Coords&) { return IsotropyData{{}, {{}}}; },
        .expected = [s, h](const Coords&) { return ReducedData{s.tau, s.omega, h}; },
        .default_mu = {},
    };
    return CatalogInstance(std::move(base));
  }
  if (variant != "phase-translations")
    throw std::invalid_argument("unknown cosymplectic-darboux variant: " + variant + " (phase-translations)");

  auto h = field(3, 1, [](auto x, auto y) { y[0] = 0.5 * x[0] * x[0]; }, "h");
  auto lc = make_chart({"t"}, {{0, 1}});
  LevelChart level{lc,
                   [](const Coords& mu) {
                     return field(1, 3, [mu](auto y, auto x) {
                       x[0] = y[0];
                       x[1] = y[0] * 0.0 - mu[1];
                       x[2] = y[0] * 0.0 + mu[0];
                     }, "lambda_mu");
                   },
                   [](const Coords&) { return pick(3, {0}); }};
  QuotientChart quotient{lc, [](const Coords&) { return identity_field(1); },
                         [](const Coords&) { return identity_field(1); }, {}};
  ReductionInstance base{
      .name = "cosymplectic-darboux",
      .summary = "R^2 phase translations on R x T*R with J = (p, -q) and cocycle (b, -a)",
      .structure = s,
      .action = translation_action(chart, {{1}, {2}}),
      .momentum = MomentumMapModel{1, 2, field(3, 2, [](auto x, auto y) {
                                     y[0] = x[2];
                                     y[1] = -x[1];
                                   }, "J")},
      .hamiltonian = h,
      .paper_gauge = std::nullopt,
      .level = level,
      .quotient = quotient,
      .isotropy = [](const Coords&) { return IsotropyData{{}, {{}}}; },
      .expected =
          [lc](const Coords&) {
            return ReducedData{VValuedForm::constant(lc, 1, 1, {{0, {0}, 1.0}}), VValuedForm::zero(lc, 2, 1),
                               field(1, 1, [](auto z, auto y) { y[0] = 0.5 * z[0] * z[0]; }, "h_mu")};
          },
      .default_mu = {0.5, -0.25},
  };
  CatalogInstance c(std::move(base));
  c.options.variant = variant;
  return c;
}

std::vector<InstanceInfo> list_instances() {
  return {
      {"coupled-strings", "two coupled vibrating strings, k=2, R acting on (q1, q2), reduced to (t, x, q, pt, px)"},
      {"product-cosymplectic", "product of two cosymplectic manifolds, k=2, componentwise momentum map"},
      {"membrane-polar", "forced membrane in polar coordinates, k=3, space-time reduction to (r, zeta, pr)"},
      {"cosymplectic-darboux", "k=1 sandbox on R x T*R; variant phase-translations carries a nonzero cocycle"},
  };
}

CatalogInstance get_instance(const std::string& name, const InstanceOptions& o) {
  if (name == "coupled-strings") return make_strings(coupling_preset(o.coupling), o.coupling);
  if (name == "product-cosymplectic") return make_product_cosymplectic();
  if (name == "membrane-polar") return make_membrane(o.wave_speed, force_preset(o.force), o.force);
  if (name == "cosymplectic-darboux") return make_cosymplectic_darboux(o.variant);
  throw std::invalid_argument("unknown instance: " + name);
}

std::vector<ShippedField> shipped_fields(const CatalogInstance& inst) {
  const auto& M = inst.structure.chart();
  std::vector<ShippedField> out{{"tau", inst.structure.tau.coefficients(), M},
                                {"omega", inst.structure.omega.coefficients(), M},
                                {"h", inst.hamiltonian, M},
                                {"xi_M", inst.action.generators, M}};
  const int m = inst.action.group.dim;
  if (m > 0) out.push_back({"Phi_g", inst.action.phi(Coords(m, 0.37)), M});
  if (inst.paper_gauge) out.push_back({"gauge", inst.paper_gauge->free_coefficients, M});
  if (inst.momentum) out.push_back({"J", inst.momentum->J, M});
  const Coords& mu = inst.default_mu;
  if (inst.level) {
    out.push_back({"lambda_mu", inst.level->embed(mu), inst.level->chart});
    out.push_back({"level_coords", inst.level->coords(mu), M});
  }
  if (inst.quotient) {
    out.push_back({"pi_mu", inst.quotient->project(mu), inst.level->chart});
    out.push_back({"s_mu", inst.quotient->section(mu), inst.quotient->chart});
    if (inst.quotient->alt_section) out.push_back({"s_mu_alt", inst.quotient->alt_section(mu), inst.quotient->chart});
  }
  if (inst.expected) {
    auto e = inst.expected(mu);
    out.push_back({"expected.tau", e.tau.coefficients(), inst.quotient->chart});
    out.push_back({"expected.omega", e.omega.coefficients(), inst.quotient->chart});
    out.push_back({"expected.h", e.h, inst.quotient->chart});
  }
  if (inst.spacetime) {
    out.push_back({"pi", inst.spacetime->projection, M});
    out.push_back({"sigma_lambda", inst.spacetime->section(inst.default_lambda), inst.spacetime->reduced_chart});
  }
  return out;
}

SmoothField instance_kvector_field(const ReductionInstance& inst, bool paper_gauge) {
  GaugeChoice g = paper_gauge && inst.paper_gauge ? *inst.paper_gauge : GaugeChoice::minimal_norm();
  return hamiltonian_kvector_field(HamiltonianSystem(inst.structure, inst.hamiltonian, g));
}

}  // namespace polyco
