#include "polyco/symmetry.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace polyco {

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Coords sub(const Coords& a, const Coords& b) {
  Coords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Coords plus(const Coords& a, const Coords& b) {
  Coords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

double max_abs(const Coords& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Eigen::MatrixXd generator_matrix(const ActionModel& a, std::span<const double> x, const std::vector<int>& which) {
  const int n = a.chart->dim();
  Eigen::MatrixXd M(n, static_cast<int>(which.size()));
  if (which.empty()) return M;
  auto g = a.generators.eval(x);
  for (std::size_t c = 0; c < which.size(); ++c)
    for (int i = 0; i < n; ++i) M(i, c) = g[which[c] * n + i];
  return M;
}

std::vector<int> all_indices(int m) {
  std::vector<int> v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Coords random_mu(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  Coords mu(size);
  for (auto& v : mu) v = d(rng);
  return mu;
}

std::string subspace_note(const SubspaceComparison& c) {
  return "dims " + std::to_string(c.dim_a) + " vs " + std::to_string(c.dim_b) + ", sum " + std::to_string(c.dim_sum);
}

}  // namespace

Coords LieGroupModel::coadjoint(const Coords& g, const Coords& mu) const {
  if (dim == 0) return mu;
  Eigen::MatrixXd A = Ad(inverse(g));
  return to_coords(A.transpose() * to_eigen(mu));
}

Coords LieGroupModel::coadjoint_k(const Coords& g, const Coords& mu) const {
  if (dim == 0) return mu;
  if (mu.size() % dim != 0) throw std::invalid_argument("coadjoint_k: size is not a multiple of the group dimension");
  Eigen::MatrixXd At = Ad(inverse(g)).transpose();
  Coords out(mu.size());
  for (std::size_t b = 0; b < mu.size(); b += dim) {
    Eigen::VectorXd v = At * Eigen::Map<const Eigen::VectorXd>(mu.data() + b, dim);
    for (int i = 0; i < dim; ++i) out[b + i] = v(i);
  }
  return out;
}

LieGroupModel abelian_group(int m) {
  LieGroupModel G;
  G.name = m == 0 ? "trivial" : "R^" + std::to_string(m);
  G.dim = m;
  G.abelian = true;
  G.multiply = [](const Coords& a, const Coords& b) { return plus(a, b); };
  G.inverse = [](const Coords& a) {
    Coords r(a);
    for (auto& v : r) v = -v;
    return r;
  };
  G.exp = [](const Coords& xi) { return xi; };
  G.Ad = [m](const Coords&) { return Eigen::MatrixXd::Identity(m, m); };
  G.bracket = [m](const Coords&, const Coords&) { return Coords(m, 0.0); };
  return G;
}

std::vector<Coords> group_samples(const LieGroupModel& G, int count, std::uint64_t seed, double radius) {
  if (G.dim == 0) return std::vector<Coords>(count);
  std::vector<std::string> names;
  for (int i = 0; i < G.dim; ++i) names.push_back("g" + std::to_string(i));
  ChartBox box(names, std::vector<Interval>(G.dim, {-radius, radius}));
  return halton_samples(box, count, seed + 101);
}

VerificationReport verify_group(const LieGroupModel& G, int samples, std::uint64_t seed) {
  VerificationReport rep("group " + G.name);
  auto gs = group_samples(G, 3 * samples, seed);
  double assoc = 0.0, inv = 0.0, hom = 0.0, ab = 0.0, unit = 0.0;
  const Coords e = G.identity();
  for (int i = 0; i < samples; ++i) {
    const auto &a = gs[3 * i], &b = gs[3 * i + 1], &c = gs[3 * i + 2];
    assoc = std::max(assoc, max_abs_diff(G.multiply(G.multiply(a, b), c), G.multiply(a, G.multiply(b, c))));
    inv = std::max(inv, max_abs(G.multiply(a, G.inverse(a))));
    unit = std::max(unit, max_abs_diff(G.multiply(e, a), a));
    if (G.dim > 0) {
      hom = std::max(hom, (G.Ad(G.multiply(a, b)) - G.Ad(a) * G.Ad(b)).lpNorm<Eigen::Infinity>());
      if (G.abelian) ab = std::max(ab, (G.Ad(a) - Eigen::MatrixXd::Identity(G.dim, G.dim)).lpNorm<Eigen::Infinity>());
    }
  }
  rep.add_residual("group.associativity", assoc, 1e-10);
  rep.add_residual("group.inverse", inv, 1e-10);
  rep.add_residual("group.identity", unit, 1e-10);
  rep.add_residual("group.ad_homomorphism", hom, 1e-10);
  if (G.abelian) rep.add_residual("group.abelian_ad", ab, 1e-12);
  return rep;
}

SmoothField ActionModel::generator(const Coords& xi) const {
  const int n = chart->dim();
  const int m = group.dim;
  const SmoothField gen = generators;
  return SmoothField::make(
      n, n,
      [gen, xi, n, m](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto g = gen.apply<T>(x);
        for (int i = 0; i < n; ++i) {
          T acc(0.0);
          for (int a = 0; a < m; ++a) acc = acc + xi[a] * g[a * n + i];
          y[i] = acc;
        }
      },
      gen.levels(), "xi_M");
}

VerificationReport verify_action_invariance(const ActionModel& a, const KPolycosymplecticStructure& s, int group_count,
                                            int point_count, double tol, const SmoothField* h, std::uint64_t seed) {
  require_same_chart(a.chart, s.chart(), "verify_action_invariance");
  VerificationReport rep("action " + a.group.name);
  const int m = a.group.dim;
  const auto pts = halton_samples(*s.chart(), point_count, seed);
  const auto gs = group_samples(a.group, group_count, seed);

  double ident = 0.0;
  auto phi_e = a.phi(a.group.identity());
  for (const auto& x : pts) ident = std::max(ident, max_abs_diff(phi_e.eval(x), x));
  rep.add_residual("action.identity", ident, tol);

  double comp = 0.0;
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    auto pg = a.phi(gs[i]), ph = a.phi(gs[i + 1]), pgh = a.phi(a.group.multiply(gs[i], gs[i + 1]));
    for (const auto& x : pts) comp = std::max(comp, max_abs_diff(pg.eval(ph.eval(x)), pgh.eval(x)));
  }
  rep.add_residual("action.composition", comp, tol);

  // ξ_M against the flow derivative of Φ along exp(sξ)
  const double step = 1e-5;
  double fd = 0.0;
  for (int b = 0; b < m; ++b) {
    Coords xi(m, 0.0);
    xi[b] = step;
    auto fwd = a.phi(a.group.exp(xi));
    xi[b] = -step;
    auto bwd = a.phi(a.group.exp(xi));
    auto gen = a.generator(b);
    for (const auto& x : pts) {
      auto up = fwd.eval(x), dn = bwd.eval(x), g = gen.eval(x);
      for (std::size_t i = 0; i < g.size(); ++i) fd = std::max(fd, std::abs((up[i] - dn[i]) / (2 * step) - g[i]));
    }
  }
  rep.add_residual("action.generators", fd, 1e-4, "central difference, step 1e-5");

  double pt = 0.0, po = 0.0, ph = 0.0;
  for (const auto& g : gs) {
    auto phi = a.phi(g);
    pt = std::max(pt, max_abs_difference(pullback(phi, s.tau, s.chart()), s.tau, pts));
    po = std::max(po, max_abs_difference(pullback(phi, s.omega, s.chart()), s.omega, pts));
    if (h)
      for (const auto& x : pts) ph = std::max(ph, std::abs(h->scalar(phi.eval(x)) - h->scalar(x)));
  }
  rep.add_residual("action.pullback_tau", pt, tol);
  rep.add_residual("action.pullback_omega", po, tol);

  double lt = 0.0, lo = 0.0;
  for (int b = 0; b < m; ++b) {
    auto gen = a.generator(b);
    lt = std::max(lt, max_abs_coefficient(lie_derivative(gen, s.tau), pts));
    lo = std::max(lo, max_abs_coefficient(lie_derivative(gen, s.omega), pts));
  }
  rep.add_residual("action.lie_tau", lt, tol);
  rep.add_residual("action.lie_omega", lo, tol);
  if (h) rep.add_residual("action.hamiltonian", ph, tol);
  return rep;
}

VerificationReport verify_momentum_map(const KPolycosymplecticStructure& s, const ActionModel& a,
                                       const MomentumMapModel& J, int samples, double tol, std::uint64_t seed) {
  VerificationReport rep("momentum map");
  const int n = s.dim(), k = s.k(), m = a.group.dim;
  if (J.k != k || J.m != m || J.J.out_dim() != k * m || J.J.in_dim() != n)
    throw std::invalid_argument("verify_momentum_map: J must have k*m outputs on the structure's chart");
  double ro = 0.0, rt = 0.0, rr = 0.0;
  for (const auto& x : halton_samples(*s.chart(), samples, seed)) {
    Eigen::MatrixXd DJ = J.J.jacobian(x);
    Eigen::MatrixXd Tau = tau_rows(s.tau, x);
    Eigen::MatrixXd R = reeb_family(s, x);
    Eigen::MatrixXd Xi = generator_matrix(a, x, all_indices(m));
    for (int al = 0; al < k; ++al) {
      Eigen::MatrixXd W = s.omega.two_form(al, x);
      for (int b = 0; b < m; ++b) {
        Eigen::VectorXd contraction = W.transpose() * Xi.col(b);
        ro = std::max(ro, (contraction - DJ.row(al * m + b).transpose()).lpNorm<Eigen::Infinity>());
      }
    }
    if (m > 0) {
      rt = std::max(rt, (Tau * Xi).lpNorm<Eigen::Infinity>());
      rr = std::max(rr, (DJ * R).lpNorm<Eigen::Infinity>());
    }
  }
  rep.add_residual("momentum.omega", ro, tol, "iota_xi omega^alpha - dJ^alpha_xi");
  rep.add_residual("momentum.tau", rt, tol, "tau(xi_M)");
  rep.add_residual("momentum.reeb", rr, tol, "R_beta J");
  return rep;
}

CocycleValue cocycle(const ActionModel& a, const MomentumMapModel& J, const Coords& g, const std::vector<Coords>& points,
                     double tol) {
  if (points.empty()) throw std::invalid_argument("cocycle: need at least one sample point");
  auto phi = a.phi(g);
  CocycleValue out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Coords v = sub(J.eval(phi.eval(points[i])), a.group.coadjoint_k(g, J.eval(points[i])));
    if (i == 0) {
      out.value = v;
    } else {
      out.deviation = std::max(out.deviation, max_abs_diff(v, out.value));
    }
  }
  if (!(out.deviation <= tol))
    throw ReductionError("cocycle: not constant on M, spread " + format_real(out.deviation));
  return out;
}

double cocycle_identity_residual(const ActionModel& a, const MomentumMapModel& J, const Coords& g1, const Coords& g2,
                                 const std::vector<Coords>& points) {
  const auto& G = a.group;
  auto s12 = cocycle(a, J, G.multiply(g1, g2), points).value;
  auto s1 = cocycle(a, J, g1, points).value;
  auto s2 = cocycle(a, J, g2, points).value;
  return max_abs(sub(s12, plus(s1, G.coadjoint_k(g1, s2))));
}

Coords AffineAction::apply(const Coords& g, const Coords& mu) const {
  return plus(action.group.coadjoint_k(g, mu), cocycle(action, momentum, g, points).value);
}

AffineAction affine_action(const ActionModel& a, const MomentumMapModel& J, int samples, std::uint64_t seed) {
  return {a, J, halton_samples(*a.chart, samples, seed)};
}

VerificationReport verify_affine_action(const AffineAction& D, int group_count, int point_count, double tol,
                                        std::uint64_t seed) {
  VerificationReport rep("affine action");
  const auto& G = D.action.group;
  const int size = D.momentum.k * D.momentum.m;
  std::mt19937_64 rng(seed + 7);
  const auto gs = group_samples(G, group_count + 1, seed);
  const auto pts = halton_samples(*D.action.chart, point_count, seed + 3);
  double ident = 0.0, comp = 0.0, eq = 0.0;
  for (int i = 0; i < group_count; ++i) {
    Coords mu = random_mu(rng, size);
    ident = std::max(ident, max_abs_diff(D.apply(G.identity(), mu), mu));
    const auto &g1 = gs[i], &g2 = gs[i + 1];
    comp = std::max(comp, max_abs_diff(D.apply(g1, D.apply(g2, mu)), D.apply(G.multiply(g1, g2), mu)));
    auto phi = D.action.phi(g1);
    for (const auto& x : pts) eq = std::max(eq, max_abs_diff(D.momentum.eval(phi.eval(x)), D.apply(g1, D.momentum.eval(x))));
  }
  rep.add_residual("affine.identity", ident, tol);
  rep.add_residual("affine.composition", comp, tol);
  rep.add_residual("affine.equivariance", eq, tol);
  return rep;
}

WeakRegularity weak_regularity(const SmoothField& J, const SmoothField& embed, const std::vector<Coords>& level_points) {
  WeakRegularity w;
  bool first = true;
  for (const auto& y : level_points) {
    auto x = embed.eval(y);
    Eigen::MatrixXd DJ = J.jacobian(x);
    const int r = numerical_rank(DJ);
    w.rank_min = first ? r : std::min(w.rank_min, r);
    w.rank_max = first ? r : std::max(w.rank_max, r);
    first = false;
    if (!compare_subspaces(nullspace(DJ), embed.jacobian(y)).equal()) w.kernel_matches = false;
  }
  return w;
}

VerificationReport check_reduction_conditions(const ReductionInstance& inst, const Coords& mu, int samples,
                                              std::uint64_t seed) {
  VerificationReport rep("reduction conditions " + inst.name);
  if (!inst.momentum) {
    rep.add_flag("conditions.applicable", true, "not applicable: no momentum map");
    return rep;
  }
  if (!inst.level || !inst.quotient) {
    rep.add_flag("conditions.applicable", true, "not applicable: no level or quotient chart");
    return rep;
  }
  if (static_cast<int>(mu.size()) != inst.mu_dim())
    throw std::invalid_argument("check_reduction_conditions: mu has " + std::to_string(mu.size()) +
                                " components, expected " + std::to_string(inst.mu_dim()));
  const auto& s = inst.structure;
  const auto& J = *inst.momentum;
  const int k = s.k(), m = J.m;
  auto embed = inst.level->embed(mu);
  auto coords = inst.level->coords(mu);
  auto project = inst.quotient->project(mu);
  auto section = inst.quotient->section(mu);
  const IsotropyData iso = inst.isotropy ? inst.isotropy(mu) : IsotropyData{all_indices(m), std::vector<std::vector<int>>(k, all_indices(m))};
  const auto ys = halton_samples(*inst.level->chart, samples, seed);

  double lv = 0.0, li = 0.0;
  for (const auto& y : ys) {
    auto x = embed.eval(y);
    lv = std::max(lv, max_abs_diff(J.eval(x), mu));
    li = std::max(li, max_abs_diff(coords.eval(x), y));
  }
  rep.add_residual("level.value", lv, 1e-10, "J o lambda_mu - mu");
  rep.add_residual("level.inverse", li, 1e-10);

  auto wr = weak_regularity(J.J, embed, ys);
  rep.add_rank("weak_regular.rank", wr.rank_min, wr.rank_max, "rank of TJ along the level chart");
  rep.add_flag("weak_regular.kernel", wr.kernel_matches, "ker TJ against the level tangent");

  double qs = 0.0;
  for (const auto& z : halton_samples(*inst.quotient->chart, samples, seed + 1))
    qs = std::max(qs, max_abs_diff(project.eval(section.eval(z)), z));
  rep.add_residual("quotient.section", qs, 1e-10, "pi o s = id");

  // π constant on isotropy orbits through the level set
  double qo = 0.0;
  if (!iso.full.empty()) {
    std::mt19937_64 rng(seed + 11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      Coords xi(m, 0.0);
      for (int b : iso.full) xi[b] = d(rng);
      auto phi = inst.action.phi(inst.action.group.exp(xi));
      auto y2 = coords.eval(phi.eval(embed.eval(ys[i])));
      qo = std::max(qo, max_abs_diff(project.eval(y2), project.eval(ys[i])));
    }
  }
  rep.add_residual("quotient.orbit", qo, 1e-10, "pi constant along isotropy orbits");

  // Subspace conditions
  bool orbit_ok = true;
  std::string orbit_note = "all samples";
  std::vector<bool> kernel_ok(k, true);
  std::vector<std::string> kernel_note(k, "all samples");
  int orbit_found = -1, orbit_expected = -1;
  std::vector<int> kf(k, -1), ke(k, -1);
  for (const auto& y : ys) {
    auto x = embed.eval(y);
    Eigen::MatrixXd TL = embed.jacobian(y);
    Eigen::MatrixXd DJ = J.J.jacobian(x);
    Eigen::MatrixXd Tau = tau_rows(s.tau, x);
    Eigen::MatrixXd Ofull = generator_matrix(inst.action, x, iso.full);
    Eigen::MatrixXd inter;
    for (int al = 0; al < k; ++al) {
      Eigen::MatrixXd W = s.omega.two_form(al, x);
      Eigen::MatrixXd A(W.rows() + 1, W.cols());
      A << W, Tau.row(al);
      Eigen::MatrixXd K = nullspace(A);
      Eigen::MatrixXd Oa = generator_matrix(inst.action, x, iso.per_alpha.at(al));
      Eigen::MatrixXd side = subspace_sum(K, Oa);
      inter = al == 0 ? side : subspace_intersection(inter, side);
      Eigen::MatrixXd kerJ = nullspace(DJ.middleRows(al * m, m));
      auto c = compare_subspaces(kerJ, subspace_sum(subspace_sum(K, TL), Oa));
      if (!c.equal() && kernel_ok[al]) {
        kernel_ok[al] = false;
        kernel_note[al] = "ker TJ_" + std::to_string(al + 1) + " vs sum: " + subspace_note(c);
      }
      if (kf[al] < 0 || !c.equal()) kf[al] = c.dim_b, ke[al] = c.dim_a;
    }
    Eigen::MatrixXd rhs = subspace_intersection(inter, TL);
    auto c = compare_subspaces(Ofull, rhs);
    if (!c.equal() && orbit_ok) {
      orbit_ok = false;
      orbit_note = "orbit tangent vs intersection: " + subspace_note(c);
    }
    if (orbit_found < 0 || !c.equal()) orbit_found = c.dim_b, orbit_expected = c.dim_a;
  }
  {
    CheckResult r;
    r.name = "conditions.orbit_tangent";
    r.rank_found = orbit_found;
    r.rank_expected = orbit_expected;
    r.pass = orbit_ok;
    r.note = orbit_note;
    rep.add(r);
  }
  for (int al = 0; al < k; ++al) {
    CheckResult r;
    r.name = "conditions.kernel_" + std::to_string(al + 1);
    r.rank_found = kf[al];
    r.rank_expected = ke[al];
    r.pass = kernel_ok[al];
    r.note = kernel_note[al];
    rep.add(r);
  }
  return rep;
}

namespace {

struct ReducedForms {
  VValuedForm tau, omega;
  SmoothField h;
};

ReducedForms pull_to_quotient(const ReductionInstance& inst, const SmoothField& embed, const SmoothField& section) {
  auto phi = compose(embed, section);
  const auto& qc = inst.quotient->chart;
  return {pullback(phi, inst.structure.tau, qc), pullback(phi, inst.structure.omega, qc),
          compose(inst.hamiltonian, phi)};
}

double field_gap(const SmoothField& a, const SmoothField& b, const std::vector<Coords>& pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, max_abs_diff(a.eval(p), b.eval(p)));
  return m;
}

}  // namespace

ReductionResult reduce(const ReductionInstance& inst, const Coords& mu, int samples, std::uint64_t seed) {
  if (!inst.level || !inst.quotient) throw ReductionError("reduce: instance " + inst.name + " has no quotient chart");
  if (inst.momentum && static_cast<int>(mu.size()) != inst.mu_dim())
    throw std::invalid_argument("reduce: mu has the wrong number of components");
  auto embed = inst.level->embed(mu);
  auto project = inst.quotient->project(mu);
  auto section = inst.quotient->section(mu);
  auto forms = pull_to_quotient(inst, embed, section);
  VerificationReport rep("reduce " + inst.name);

  const auto ys = halton_samples(*inst.level->chart, samples, seed);
  const auto zs = halton_samples(*inst.quotient->chart, samples, seed + 1);
  const auto& lc = inst.level->chart;
  rep.add_residual("reduce.pullback_tau",
                   max_abs_difference(pullback(project, forms.tau, lc), pullback(embed, inst.structure.tau, lc), ys),
                   1e-9, "pi* tau_mu - j* tau");
  rep.add_residual("reduce.pullback_omega",
                   max_abs_difference(pullback(project, forms.omega, lc), pullback(embed, inst.structure.omega, lc), ys),
                   1e-9, "pi* omega_mu - j* omega");
  double hv = 0.0;
  for (const auto& y : ys)
    hv = std::max(hv, std::abs(forms.h.scalar(project.eval(y)) - inst.hamiltonian.scalar(embed.eval(y))));
  rep.add_residual("reduce.hamiltonian", hv, 1e-10, "h_mu o pi - h o j");

  KPolycosymplecticStructure reduced(forms.tau, forms.omega);
  rep.merge(verify_structure(reduced, samples, 1e-9, seed), "reduced");

  double gap = -1.0;
  if (inst.quotient->alt_section) {
    auto alt = pull_to_quotient(inst, embed, inst.quotient->alt_section(mu));
    gap = std::max({max_abs_difference(alt.tau, forms.tau, zs), max_abs_difference(alt.omega, forms.omega, zs),
                    field_gap(alt.h, forms.h, zs)});
    rep.add_residual("reduce.section_independence", gap, 1e-9);
  }
  if (inst.expected) {
    auto e = inst.expected(mu);
    rep.add_residual("expected.tau", max_abs_difference(forms.tau, e.tau, zs), 1e-9);
    rep.add_residual("expected.omega", max_abs_difference(forms.omega, e.omega, zs), 1e-9);
    rep.add_residual("expected.hamiltonian", field_gap(forms.h, e.h, zs), 1e-9);
  }
  return {reduced, forms.h, rep, gap};
}

namespace {

// Dπ(y) · Dc(x) · X_α(x) for every α, x = λ(y).
SmoothField pushforward_field(const SmoothField& X, int k, const SmoothField& embed, const SmoothField& coords,
                              const SmoothField& project, const SmoothField& section) {
  const int nr = project.out_dim();
  const int nl = project.in_dim();
  const int n = embed.out_dim();
  return SmoothField::make(
      section.in_dim(), k * nr,
      [=](auto z, auto out) {
        using T = std::remove_cvref_t<decltype(out[0])>;
        auto y = section.apply<T>(z);
        auto x = embed.apply<T>(std::span<const T>(y));
        auto Xv = X.apply<T>(std::span<const T>(x));
        auto Jc = coords.jacobian_t<T>(std::span<const T>(x));
        auto Jp = project.jacobian_t<T>(std::span<const T>(y));
        std::vector<T> v(nl);
        for (int a = 0; a < k; ++a) {
          for (int l = 0; l < nl; ++l) {
            T acc(0.0);
            for (int i = 0; i < n; ++i) acc = acc + Jc[l * n + i] * Xv[a * n + i];
            v[l] = acc;
          }
          for (int r = 0; r < nr; ++r) {
            T acc(0.0);
            for (int l = 0; l < nl; ++l) acc = acc + Jp[r * nl + l] * v[l];
            out[a * nr + r] = acc;
          }
        }
      },
      std::min({X.levels(), embed.levels(), section.levels(), coords.levels() - 1, project.levels() - 1}),
      "pushforward");
}

}  // namespace

ReducedDynamics reduce_dynamics(const ReductionInstance& inst, const Coords& mu, const SmoothField& X,
                                const ReductionResult& red, int samples, std::uint64_t seed) {
  if (!inst.level || !inst.quotient) throw ReductionError("reduce_dynamics: instance has no quotient chart");
  const int k = inst.k(), n = inst.dim();
  if (X.in_dim() != n || X.out_dim() != k * n) throw std::invalid_argument("reduce_dynamics: X must be a k-vector field");
  auto embed = inst.level->embed(mu);
  auto coords = inst.level->coords(mu);
  auto project = inst.quotient->project(mu);
  auto section = inst.quotient->section(mu);
  VerificationReport rep("reduce dynamics " + inst.name);
  const auto ys = halton_samples(*inst.level->chart, samples, seed);
  const auto zs = halton_samples(*inst.quotient->chart, samples, seed + 1);

  if (inst.momentum) {
    double tan = 0.0;
    for (const auto& y : ys) {
      auto x = embed.eval(y);
      Eigen::MatrixXd DJ = inst.momentum->J.jacobian(x);
      tan = std::max(tan, (DJ * kvector_matrix(X, k, x)).lpNorm<Eigen::Infinity>());
    }
    rep.add_residual("dynamics.tangent", tan, 1e-9, "dJ(X_alpha) on the level set");
  }
  double inv = 0.0;
  const int m = inst.action.group.dim;
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < k; ++a) {
      auto br = lie_bracket(inst.action.generator(b), kvector_component(X, k, a));
      for (const auto& y : ys) inv = std::max(inv, max_abs(br.eval(embed.eval(y))));
    }
  rep.add_residual("dynamics.orbit_invariance", inv, 1e-9, "[xi_M, X_alpha]");

  auto Xr = pushforward_field(X, k, embed, coords, project, section);
  // projectability: push from arbitrary fibre points, compare with the section route
  auto id_section = identity_field(inst.level->chart->dim());
  auto at_fibre = pushforward_field(X, k, embed, coords, project, id_section);
  double proj = 0.0;
  for (const auto& y : ys) proj = std::max(proj, max_abs_diff(at_fibre.eval(y), Xr.eval(project.eval(y))));
  rep.add_residual("dynamics.projectable", proj, 1e-9);
  if (!(proj <= 1e-6))
    throw ReductionError("reduce_dynamics: pushforward depends on the fibre point, spread " + format_real(proj));

  const double s = 0.01;
  double flow = 0.0;
  for (int a = 0; a < k; ++a) {
    auto up = flow_map(kvector_component(X, k, a), s, 10);
    auto down = flow_map(kvector_component(Xr, k, a), s, 10);
    for (std::size_t i = 0; i < std::min<std::size_t>(ys.size(), 20); ++i) {
      auto lifted = project.eval(coords.eval(up.eval(embed.eval(ys[i]))));
      flow = std::max(flow, max_abs_diff(lifted, down.eval(project.eval(ys[i]))));
    }
  }
  rep.add_residual("dynamics.flow_commutes", flow, 1e-6, "flow time 0.01");

  HamiltonianSystem sys(red.reduced, red.h);
  double def = 0.0;
  for (const auto& z : zs) def = std::max(def, kvector_residuals(sys, kvector_matrix(Xr, k, z), z).max());
  rep.add_residual("dynamics.defining", def, 1e-9, "reduced field against (tau_mu, omega_mu, h_mu)");
  return {Xr, rep};
}

ExtendedSymmetry extend_action_momentum(const ReductionInstance& inst, const FibredExtension& fibred, int samples,
                                        std::uint64_t seed) {
  const int k = inst.k(), n = inst.dim(), m = inst.action.group.dim;
  const int N = n + k;
  const auto& ec = fibred.extended_chart;
  ExtendedSymmetry out;
  out.report = VerificationReport("extended symmetry " + inst.name);
  const ActionModel base = inst.action;
  out.action.group = base.group;
  out.action.chart = ec;
  out.action.phi = [base, k, n, N](const Coords& g) {
    auto phi = base.phi(g);
    return SmoothField::make(N, N, [phi, k, n](auto x, auto y) {
      using T = std::remove_cvref_t<decltype(y[0])>;
      for (int a = 0; a < k; ++a) y[a] = x[a];
      auto v = phi.apply<T>(x.subspan(k, n));
      for (int i = 0; i < n; ++i) y[k + i] = v[i];
    }, phi.levels());
  };
  const SmoothField gen = base.generators;
  out.action.generators = SmoothField::make(
      N, m * N,
      [gen, k, n, N, m](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto g = gen.apply<T>(x.subspan(k, n));
        for (int b = 0; b < m; ++b) {
          for (int a = 0; a < k; ++a) y[b * N + a] = T(0.0);
          for (int i = 0; i < n; ++i) y[b * N + k + i] = g[b * n + i];
        }
      },
      gen.levels());
  const auto pts = halton_samples(*ec, samples, seed);
  if (!inst.momentum) {
    out.report.add_flag("extended.applicable", true, "not applicable: no momentum map");
    return out;
  }
  out.momentum = {k, m, compose(inst.momentum->J, fibred.projection)};

  // ι_ξ̃ ω̃^α = dJ̃^α_ξ
  double ro = 0.0, du = 0.0;
  for (const auto& x : pts) {
    Eigen::MatrixXd DJ = out.momentum.J.jacobian(x);
    Eigen::MatrixXd Xi = generator_matrix(out.action, x, all_indices(m));
    for (int al = 0; al < k; ++al) {
      Eigen::MatrixXd W = fibred.omega_tilde.two_form(al, x);
      for (int b = 0; b < m; ++b)
        ro = std::max(ro, (W.transpose() * Xi.col(b) - DJ.row(al * m + b).transpose()).lpNorm<Eigen::Infinity>());
    }
    if (DJ.rows() > 0) du = std::max(du, DJ.leftCols(k).lpNorm<Eigen::Infinity>());
  }
  out.report.add_residual("extended.momentum", ro, 1e-10, "iota_xi omega~ - dJ~");
  out.report.add_residual("extended.u_independence", du, 1e-12);

  // same cocycle on both sides
  double cg = 0.0;
  const auto base_pts = halton_samples(*inst.structure.chart(), 8, seed);
  for (const auto& g : group_samples(base.group, 10, seed)) {
    auto a = cocycle(out.action, out.momentum, g, {pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), 8)});
    auto b = cocycle(base, *inst.momentum, g, base_pts);
    cg = std::max(cg, max_abs_diff(a.value, b.value));
  }
  out.report.add_residual("extended.cocycle", cg, 1e-10);

  if (inst.level) {
    const auto& lv = *inst.level;
    const Coords mu = inst.default_mu;
    std::vector<std::string> names;
    std::vector<Interval> bounds;
    for (int a = 0; a < k; ++a) names.push_back(ec->name(a)), bounds.push_back(ec->bounds()[a]);
    for (int i = 0; i < lv.chart->dim(); ++i) names.push_back(lv.chart->name(i)), bounds.push_back(lv.chart->bounds()[i]);
    out.level.chart = make_chart(names, bounds);
    const int nl = lv.chart->dim();
    auto lift = [k](const SmoothField& f) {
      const int in = f.in_dim(), outd = f.out_dim();
      return SmoothField::make(in + k, outd + k, [f, k, in](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        for (int a = 0; a < k; ++a) y[a] = x[a];
        auto v = f.apply<T>(x.subspan(k, in));
        for (std::size_t i = 0; i < v.size(); ++i) y[k + i] = v[i];
      }, f.levels());
    };
    out.level.embed = [lv, lift](const Coords& mu) { return lift(lv.embed(mu)); };
    out.level.coords = [lv, lift](const Coords& mu) { return lift(lv.coords(mu)); };
    auto base_w = weak_regularity(inst.momentum->J, lv.embed(mu), halton_samples(*lv.chart, samples, seed));
    auto ext_w = weak_regularity(out.momentum.J, out.level.embed(mu), halton_samples(*out.level.chart, samples, seed));
    out.report.add_flag("extended.weak_regular_agrees", base_w.regular() == ext_w.regular(),
                        std::string("base ") + (base_w.regular() ? "regular" : "singular") + ", extended " +
                            (ext_w.regular() ? "regular" : "singular"));
    double lvl = 0.0;
    auto emb = out.level.embed(mu);
    for (const auto& y : halton_samples(*out.level.chart, samples, seed))
      lvl = std::max(lvl, max_abs_diff(out.momentum.eval(emb.eval(y)), mu));
    out.report.add_residual("extended.level_value", lvl, 1e-10);
    (void)nl;
  }
  return out;
}

ExtendedHamiltonian extended_hamiltonian(const FibredExtension& fibred, const SmoothField& h, const SmoothField& Xh,
                                         int samples, std::uint64_t seed) {
  const int k = fibred.base.k(), n = fibred.base.dim(), N = n + k;
  if (Xh.in_dim() != n || Xh.out_dim() != k * n) throw std::invalid_argument("extended_hamiltonian: X^h must be a k-vector field");
  ExtendedHamiltonian out;
  out.h = SmoothField::make(
      N, 1,
      [h, k, n](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        T acc = h.apply<T>(x.subspan(k, n))[0];
        for (int a = 0; a < k; ++a) acc = acc - x[a];
        y[0] = acc;
      },
      h.levels(), "h~");
  const SmoothField R = reeb_fields(fibred.base);
  out.X = SmoothField::make(
      N, k * N,
      [h, R, Xh, k, n, N](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto xb = x.subspan(k, n);
        auto dh = h.jacobian_t<T>(xb);
        auto rv = R.apply<T>(xb);
        auto xv = Xh.apply<T>(xb);
        for (int a = 0; a < k; ++a) {
          T Rh(0.0);
          for (int i = 0; i < n; ++i) Rh = Rh + dh[i] * rv[a * n + i];
          for (int b = 0; b < k; ++b) y[a * N + b] = b == a ? Rh : T(0.0);
          for (int i = 0; i < n; ++i) y[a * N + k + i] = xv[a * n + i];
        }
      },
      std::min({h.levels() - 1, R.levels(), Xh.levels()}), "X^h~");
  for (const auto& x : halton_samples(*fibred.extended_chart, samples, seed)) {
    Eigen::VectorXd lhs = Eigen::VectorXd::Zero(N);
    Eigen::MatrixXd X = kvector_matrix(out.X, k, x);
    for (int a = 0; a < k; ++a) lhs += fibred.omega_tilde.two_form(a, x).transpose() * X.col(a);
    Eigen::VectorXd dh = out.h.jacobian(x).row(0).transpose();
    out.residual = std::max(out.residual, (lhs - dh).lpNorm<Eigen::Infinity>());
  }
  return out;
}

SpacetimeReduction spacetime_reduce(const KPolycosymplecticStructure& s, const SmoothField& h, const SmoothField& X,
                                    const ActionModel& a, const SpacetimeReductionData& data, const Coords& lambda,
                                    int samples, std::uint64_t seed) {
  const int k = s.k(), n = s.dim(), m = a.group.dim;
  const int ell = static_cast<int>(data.kept.size());
  {
    std::vector<int> all = data.kept;
    all.insert(all.end(), data.suppressed.begin(), data.suppressed.end());
    std::sort(all.begin(), all.end());
    if (all != all_indices(k)) throw std::invalid_argument("spacetime_reduce: kept and suppressed must split 0..k-1");
  }
  if (!s.darboux) throw std::invalid_argument("spacetime_reduce: structure must carry Darboux coordinates");
  const auto& L = *s.darboux;
  VerificationReport rep("spacetime reduction");
  const auto pts = halton_samples(*s.chart(), samples, seed);

  // fundamental fields lie in ker of the kept τ's and are independent on the rest
  double van = 0.0;
  int supp_rank = 0;
  for (const auto& x : pts) {
    Eigen::MatrixXd Tau = tau_rows(s.tau, x);
    Eigen::MatrixXd Xi = generator_matrix(a, x, all_indices(m));
    for (int b : data.kept) van = std::max(van, m ? (Tau.row(b) * Xi).lpNorm<Eigen::Infinity>() : 0.0);
    Eigen::MatrixXd S(data.suppressed.size(), m);
    for (std::size_t r = 0; r < data.suppressed.size(); ++r) S.row(r) = Tau.row(data.suppressed[r]) * Xi;
    supp_rank = numerical_rank(S);
  }
  rep.add_residual("spacetime.tau_bar_vanishes", van, 1e-12);
  rep.add_rank("spacetime.suppressed_rank", supp_rank, k - ell);

  double hs = 0.0;
  for (const auto& x : pts) {
    Eigen::MatrixXd dh = h.jacobian(x);
    for (int b : data.suppressed) hs = std::max(hs, std::abs(dh(0, L.base[b])));
  }
  rep.add_residual("spacetime.h_suppressed", hs, 1e-10, "h independent of suppressed base coordinates");
  if (!(hs <= 1e-10))
    throw ReductionError("spacetime_reduce: h depends on suppressed base coordinates, residual " + format_real(hs));

  double hyp = 0.0;
  const int N = static_cast<int>(L.fields.size());
  for (const auto& x : pts) {
    Eigen::MatrixXd Xm = kvector_matrix(X, k, x);
    for (int i = 0; i < N; ++i) {
      double tr = 0.0;
      for (int b : data.suppressed) tr += Xm(L.momenta[b][i], b);
      hyp = std::max(hyp, std::abs(tr));
    }
  }
  rep.add_residual("spacetime.hypothesis", hyp, 1e-10, "suppressed momentum trace of X");
  if (!(hyp <= 1e-10))
    throw ReductionError("spacetime_reduce: suppressed momentum trace does not vanish, residual " + format_real(hyp));

  std::vector<VValuedForm> tc, oc;
  for (int b : data.kept) tc.push_back(s.tau.component(b)), oc.push_back(s.omega.component(b));
  VValuedForm tau_bar = VValuedForm::stack(tc), omega_bar = VValuedForm::stack(oc);
  auto sec = data.section(lambda);
  const auto& rc = data.reduced_chart;
  VValuedForm tau_l = pullback(sec, tau_bar, rc), omega_l = pullback(sec, omega_bar, rc);
  SmoothField h_l = compose(h, sec);
  KPolycosymplecticStructure reduced(tau_l, omega_l);

  rep.add_residual("spacetime.pullback_tau", max_abs_difference(pullback(data.projection, tau_l, s.chart()), tau_bar, pts),
                   1e-9, "pi* tau_l - tau_bar");
  rep.add_residual("spacetime.pullback_omega",
                   max_abs_difference(pullback(data.projection, omega_l, s.chart()), omega_bar, pts), 1e-9,
                   "pi* omega_l - omega_bar");
  const auto zs = halton_samples(*rc, samples, seed + 1);
  rep.add_residual("spacetime.section", field_gap(compose(data.projection, sec), identity_field(rc->dim()), zs), 1e-10);

  double eqv = 0.0;
  for (const auto& g : group_samples(a.group, 10, seed)) {
    auto phi = a.phi(g);
    auto phl = data.reduced_action(g);
    for (const auto& x : pts)
      eqv = std::max(eqv, max_abs_diff(data.projection.eval(phi.eval(x)), phl.eval(data.projection.eval(x))));
  }
  rep.add_residual("spacetime.equivariance", eqv, 1e-10, "pi o Phi_g - Phi_l,g o pi");

  double hl = 0.0;
  if (data.level_samples)
    for (const auto& x : data.level_samples(lambda, samples, seed))
      hl = std::max(hl, std::abs(h.scalar(x) - h_l.scalar(data.projection.eval(x))));
  rep.add_residual("spacetime.hamiltonian", hl, 1e-10, "h on S_lambda against h_l o pi");

  // X_ℓ,β = Dπ · X_{kept[β]} at σ_λ(z)
  const SmoothField proj = data.projection;
  const int nr = rc->dim();
  const std::vector<int> kept = data.kept;
  SmoothField Xl = SmoothField::make(
      nr, ell * nr,
      [X, sec, proj, kept, k, n, nr](auto z, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto x = sec.apply<T>(z);
        auto Xv = X.apply<T>(std::span<const T>(x));
        auto Jp = proj.jacobian_t<T>(std::span<const T>(x));
        for (std::size_t b = 0; b < kept.size(); ++b)
          for (int r = 0; r < nr; ++r) {
            T acc(0.0);
            for (int i = 0; i < n; ++i) acc = acc + Jp[r * n + i] * Xv[kept[b] * n + i];
            y[b * nr + r] = acc;
          }
        (void)k;
      },
      std::min({X.levels(), sec.levels(), proj.levels() - 1}), "X_l");

  HamiltonianSystem sys(reduced, h_l);
  double def = 0.0;
  for (const auto& z : zs) def = std::max(def, kvector_residuals(sys, kvector_matrix(Xl, ell, z), z).max());
  rep.add_residual("spacetime.dynamics", def, 1e-9, "projected field against (tau_l, omega_l, h_l)");
  rep.merge(verify_structure(reduced, samples, 1e-9, seed), "reduced");
  return {tau_bar, omega_bar, reduced, h_l, Xl, rep};
}

}  // namespace polyco
