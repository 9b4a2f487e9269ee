#include "polyco/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "polyco/config.hpp"
#include "polyco/expr.hpp"
#include "polyco/hdw.hpp"
#include "polyco/svg.hpp"

namespace polyco {

namespace fs = std::filesystem;

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  int a = 0, b = 0;
  std::size_t ua = 0, ub = 0;
  if (x != std::string::npos) {
    try {
      a = std::stoi(text.substr(0, x), &ua);
      b = std::stoi(text.substr(x + 1), &ub);
    } catch (const std::exception&) {
      ua = ub = 0;
    }
  }
  if (x == std::string::npos || ua != x || ub != text.size() - x - 1 || ua == 0 || ub == 0)
    throw UsageError("--grid expects NxM, got '" + text + "'");
  return {a, b};
}

std::vector<double> parse_mu(const std::string& text) {
  try {
    auto v = parse_reals(text, "--mu");
    if (v.empty()) throw UsageError("--mu needs at least one number");
    return v;
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

namespace {

struct Context {
  Context(std::string cmd, CatalogInstance i) : command(std::move(cmd)), inst(std::move(i)) {}

  std::string command;
  CatalogInstance inst;
  Coords mu;
  bool mu_given = false;
  int nt = 201, nx = 201;
  std::optional<double> tol;
  int samples = 100;
  std::uint64_t seed = 0;
  bool paper_gauge = true;
  fs::path out = "polyco-out";
  bool svg = false;
};

std::string real(double v) { return format_real(v); }

std::string fixed12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CatalogInstance resolve_instance(const RunConfig& rc, const std::optional<ConfigFile>& file) {
  const bool file_instance = file && (file->has_section("instance") || file->has_section("chart"));
  if (file_instance) {
    auto inst = instance_from_config(*file);
    if (!rc.instance.empty() && rc.instance != inst.name)
      throw UsageError("--instance " + rc.instance + " conflicts with the config instance " + inst.name);
    return inst;
  }
  if (rc.instance.empty()) throw UsageError("give --instance or a --config with an [instance] or [chart] section");
  try {
    return get_instance(rc.instance);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Context resolve(const RunConfig& rc) {
  std::optional<ConfigFile> file;
  if (!rc.config_path.empty()) file = ConfigFile::load(rc.config_path);
  Context c(rc.command, resolve_instance(rc, file));
  auto run = [&](const char* key) -> std::optional<std::string> {
    if (!file) return std::nullopt;
    return file->get("run", key);
  };
  if (file)
    for (const auto& [k, v] : file->section("run"))
      if (k != "mu" && k != "grid" && k != "tol" && k != "samples" && k != "seed" && k != "gauge" && k != "out" && k != "svg")
        throw ConfigError("[run] unknown key " + k);

  std::optional<std::vector<double>> mu = rc.mu;
  if (!mu)
    if (auto v = run("mu")) mu = parse_mu(*v);
  std::optional<std::pair<int, int>> grid = rc.grid;
  if (!grid)
    if (auto v = run("grid")) grid = parse_grid(*v);
  c.tol = rc.tol;
  if (!c.tol)
    if (auto v = run("tol")) {
      auto r = parse_reals(*v, "[run] tol");
      if (r.size() != 1) throw ConfigError("[run] tol takes one number");
      c.tol = r[0];
    }
  std::optional<double> samples = rc.samples;
  if (!samples)
    if (auto v = run("samples")) {
      auto r = parse_reals(*v, "[run] samples");
      if (r.size() != 1 || r[0] != std::floor(r[0])) throw ConfigError("[run] samples takes one integer");
      samples = r[0];
    }
  std::optional<double> seed = rc.seed ? std::optional<double>(static_cast<double>(*rc.seed)) : std::nullopt;
  if (!seed)
    if (auto v = run("seed")) {
      auto r = parse_reals(*v, "[run] seed");
      if (r.size() != 1 || r[0] < 0 || r[0] != std::floor(r[0])) throw ConfigError("[run] seed takes one non-negative integer");
      seed = r[0];
    }
  std::string gauge = rc.gauge.value_or(run("gauge").value_or("paper"));
  if (auto v = rc.out ? rc.out : run("out")) c.out = *v;
  c.svg = rc.svg || run("svg").value_or("false") == "true";

  if (grid) {
    if (grid->first < 8 || grid->second < 8) throw UsageError("grid sizes must be at least 8, got " + std::to_string(grid->first) + "x" + std::to_string(grid->second));
    c.nt = grid->first;
    c.nx = grid->second;
  }
  if (c.tol && !(*c.tol > 0.0 && std::isfinite(*c.tol))) throw UsageError("tolerance must be positive");
  if (samples) {
    if (*samples <= 0) throw UsageError("sample count must be positive");
    c.samples = static_cast<int>(*samples);
  }
  if (seed) c.seed = static_cast<std::uint64_t>(*seed);
  if (gauge != "paper" && gauge != "minimal") throw UsageError("--gauge must be minimal or paper");
  c.paper_gauge = gauge == "paper";

  const auto& inst = c.inst;
  std::size_t expected = 0;
  if (inst.momentum) {
    expected = static_cast<std::size_t>(inst.mu_dim());
    c.mu = inst.default_mu;
  } else if (inst.spacetime) {
    expected = inst.spacetime->suppressed.size();
    c.mu = inst.default_lambda;
  }
  if (mu) {
    if (!inst.momentum && !inst.spacetime)
      throw UsageError("instance " + inst.name + " has no momentum map; --mu is not accepted");
    if (mu->size() != expected)
      throw UsageError("--mu has " + std::to_string(mu->size()) + " components, instance " + inst.name + " expects " +
                       std::to_string(expected));
    c.mu = *mu;
    c.mu_given = true;
  }
  return c;
}

void print_checks(std::ostream& out, const VerificationReport& rep) {
  for (const auto& ch : rep.checks()) {
    out << "  " << (ch.pass ? "ok   " : "FAIL ") << ch.name;
    if (ch.has_residual()) out << "  residual " << real(ch.max_residual) << " (tol " << real(ch.tolerance) << ")";
    if (ch.has_rank()) out << "  rank " << ch.rank_found << "/" << ch.rank_expected;
    if (!ch.note.empty()) out << "  [" << ch.note << "]";
    out << "\n";
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string mu_text(const Coords& mu) {
  std::string s;
  for (std::size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + real(mu[i]);
  return s;
}

int finish(const Context& c, std::ostream& out, const VerificationReport& rep, const std::string& file,
           const std::vector<std::string>& preamble = {}) {
  std::string text;
  for (const auto& l : preamble) text += "# " + l + "\n";
  text += rep.to_text();
  if (!rep.passed()) text += "# " + rep.failure_summary() + "\n";
  write_file(c.out / file, text);
  if (rep.passed()) {
    out << c.command << ": PASS\n";
    return kExitPass;
  }
  out << c.command << ": FAIL " << rep.failure_summary() << "\n";
  return kExitFail;
}

// verify

int cmd_verify(const Context& c, std::ostream& out) {
  const auto& inst = c.inst;
  const double tol = c.tol.value_or(1e-9);
  VerificationReport rep("verify " + inst.name);
  rep.merge(verify_structure(inst.structure, c.samples, tol, c.seed), "structure");
  rep.merge(verify_action_invariance(inst.action, inst.structure, 10, c.samples, tol, &inst.hamiltonian, c.seed));
  if (inst.momentum) rep.merge(verify_momentum_map(inst.structure, inst.action, *inst.momentum, c.samples, tol, c.seed));
  rep.merge(check_reduction_conditions(inst, c.mu, c.samples, c.seed));
  out << "instance " << inst.name << "  k=" << inst.k() << "  dim=" << inst.structure.dim();
  if (!c.mu.empty()) out << "  mu=" << mu_text(c.mu);
  out << "\n";
  print_checks(out, rep);
  return finish(c, out, rep, "verify_report.txt");
}

// solve

std::vector<double> axis_values(const SectionGrid& g, int coord) {
  const int rows = g.axes()[0].count, cols = g.axes().size() > 1 ? g.axes()[1].count : 1;
  std::vector<double> v(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const int m[2] = {i, j};
      v[static_cast<std::size_t>(i) * cols + j] = g.value(g.index(std::span<const int>(m, g.axes().size())), coord);
    }
  return v;
}

StringsData travelling_data(const CatalogInstance& inst) {
  return {inst.coupling, [](double x) { return std::sin(x); }, [](double x) { return -std::cos(x); },
          [](double) { return 0.0; }, [](double) { return 0.0; }};
}

int solve_strings(const Context& c, std::ostream& out) {
  const auto& inst = c.inst;
  VerificationReport rep("solve " + inst.name);
  std::optional<SectionGrid> solved;
  try {
    solved = solve_hdw_strings(inst.structure.chart(), travelling_data(inst), {c.nt, c.nx, Boundary::periodic});
  } catch (const CflViolation& e) {
    rep.add_flag("cfl", false, e.what());
    out << e.what() << "\n";
    return finish(c, out, rep, "solve_report.txt");
  }
  const SectionGrid& g = *solved;
  rep.add_flag("cfl", true);
  std::vector<std::string> comments{"instance " + inst.name, "coupling " + inst.options.coupling,
                                    "initial data q1=sin(x) q1_t=-cos(x) q2=0 q2_t=0"};
  out << "instance " << inst.name << "  coupling " << inst.options.coupling << "  grid " << c.nt << "x" << c.nx << "\n";
  if (inst.options.coupling == "zero") {
    double e = 0.0;
    for (int n = 0; n < g.nodes(); ++n) {
      auto p = g.point(n);
      e = std::max({e, std::abs(p[2] - std::sin(p[1] - p[0])), std::abs(p[3])});
    }
    out << "linf error vs sin(x-t): " << real(e) << "\n";
    comments.push_back("linf_error_vs_sin(x-t) " + real(e));
  }
  const HamiltonianSystem sys(inst.structure, inst.hamiltonian);
  const auto res = hdw_residuals(g, sys);
  for (const auto& l : res.comment_lines()) {
    out << "  " << l << "\n";
    comments.push_back(l);
  }
  if (inst.momentum && inst.momentum->J.out_dim() == inst.k()) {
    const double d = divergence_residual(g, inst.momentum->J);
    out << "  momentum divergence residual " << real(d) << "\n";
    comments.push_back("momentum_divergence " + real(d));
  }
  if (c.tol) rep.merge(res.to_report(*c.tol, "hdw"));
  {
    std::ofstream f(c.out / "solution.csv", std::ios::binary);
    g.write_csv(f, comments);
  }
  if (c.svg)
    write_file(c.out / "solution.svg",
               heat_map_svg(axis_values(g, 2), g.axes()[0].count, g.axes()[1].count, inst.name + ": q1", "t", "x"));
  return finish(c, out, rep, "solve_report.txt", comments);
}

SpacetimeReduction membrane_reduction(const Context& c) {
  const auto& inst = c.inst;
  return spacetime_reduce(inst.structure, inst.hamiltonian, instance_kvector_field(inst, c.paper_gauge), inst.action,
                          *inst.spacetime, c.mu, std::min(c.samples, 50), c.seed);
}

int solve_membrane(const Context& c, std::ostream& out) {
  const auto& inst = c.inst;
  VerificationReport rep("solve " + inst.name);
  const auto rad = solve_reduced_membrane_ode(inst.force, inst.wave_speed, 1.0, 2.0, -0.25, 0.5, c.nx - 1);
  const double z2 = rad.zeta.back();
  out << "instance " << inst.name << "  force " << inst.options.force << "  c=" << real(inst.wave_speed) << "  radial nodes "
      << c.nx << "\n";
  out << "zeta(2) = " << fixed12(z2) << "\n";
  std::vector<std::string> comments{"instance " + inst.name, "force " + inst.options.force,
                                    "radial data zeta(1)=-0.25 pr(1)=0.5", "zeta(2) " + fixed12(z2)};
  if (inst.options.force == "unit" && inst.wave_speed == 1.0) {
    rep.add_residual("closed_form.zeta2", std::abs(z2 + 1.0), 1e-8, "zeta(2) = -1");
    out << "closed form zeta(2) = -1, error " << real(std::abs(z2 + 1.0)) << "\n";
  }
  const double pde = membrane_pde_residual(rad, inst.force, inst.wave_speed);
  out << "  radial PDE residual " << real(pde) << "\n";
  comments.push_back("radial_pde_residual " + real(pde));
  if (c.tol) rep.add_residual("pde", pde, *c.tol);

  const auto sr = membrane_reduction(c);
  rep.merge(sr.report, "reduction");
  SectionGrid g(sr.reduced.chart(), {GridAxis{0, rad.r.front(), rad.r.back(), static_cast<int>(rad.r.size()), false}});
  g.scheme = "rk4 radial";
  g.boundary = Boundary::dirichlet;
  g.fill_base();
  for (int n = 0; n < g.nodes(); ++n) {
    g.value(n, 1) = rad.zeta[n];
    g.value(n, 2) = rad.pr[n];
  }
  const auto res = hdw_residuals(g, HamiltonianSystem(sr.reduced, sr.h));
  for (const auto& l : res.comment_lines()) {
    out << "  reduced " << l << "\n";
    comments.push_back("reduced " + l);
  }
  if (c.tol) rep.merge(res.to_report(*c.tol, "reduced_hdw"));
  {
    std::ofstream f(c.out / "solution.csv", std::ios::binary);
    g.write_csv(f, comments);
  }
  if (c.svg)
    write_file(c.out / "solution.svg",
               line_plot_svg(rad.r, {{"zeta", rad.zeta}, {"pr", rad.pr}}, inst.name + ": radial solution", "r"));
  return finish(c, out, rep, "solve_report.txt", comments);
}

int cmd_solve(const Context& c, std::ostream& out) {
  if (c.inst.solver == "strings") return solve_strings(c, out);
  if (c.inst.solver == "membrane") return solve_membrane(c, out);
  throw UsageError("instance " + c.inst.name + " has no solver route");
}

// reduce

double coefficient_gap(const VValuedForm& a, const VValuedForm& b, const std::vector<Coords>& pts) {
  double g = 0.0;
  for (const auto& x : pts) {
    auto u = a.coefficients().eval(x), v = b.coefficients().eval(x);
    for (std::size_t i = 0; i < u.size(); ++i) g = std::max(g, std::abs(u[i] - v[i]));
  }
  return g;
}

int cmd_reduce(const Context& c, std::ostream& out) {
  const auto& inst = c.inst;
  VerificationReport rep("reduce " + inst.name);
  std::optional<KPolycosymplecticStructure> reduced;
  SmoothField h;
  if (inst.momentum && inst.level && inst.quotient) {
    auto r = reduce(inst, c.mu, c.samples, c.seed);
    rep.merge(r.report);
    try {
      auto d = reduce_dynamics(inst, c.mu, instance_kvector_field(inst, c.paper_gauge), r, std::min(c.samples, 20), c.seed);
      rep.merge(d.report);
    } catch (const ReductionError& e) {
      rep.add_flag("dynamics.projectable", false, e.what());
    }
    reduced = r.reduced;
    h = r.h;
  } else if (inst.spacetime) {
    auto sr = membrane_reduction(c);
    rep.merge(sr.report);
    reduced = sr.reduced;
    h = sr.h;
  } else {
    throw UsageError("instance " + inst.name + " has no reduction route");
  }
  const auto ex = export_structure(inst.name + "-reduced", *reduced, h, 400, c.seed);
  bool structure_fitted = true;
  for (const auto& u : ex.unfitted)
    if (u != "h") structure_fitted = false;
  if (structure_fitted) {
    auto back = instance_from_config(ConfigFile::parse(ex.text));
    const auto pts = halton_samples(*reduced->chart(), 50, c.seed + 5);
    const double gap = std::max(coefficient_gap(back.structure.tau, reduced->tau, pts),
                                coefficient_gap(back.structure.omega, reduced->omega, pts));
    rep.add_residual("export.roundtrip", gap, 1e-8);
  }
  out << "instance " << inst.name;
  if (!c.mu.empty()) out << "  " << (inst.momentum ? "mu=" : "lambda=") << mu_text(c.mu);
  out << "\n";
  print_checks(out, rep);
  out << "exported reduced structure (" << (c.out / "reduced.cfg").generic_string() << "):\n" << ex.text;
  if (!ex.unfitted.empty()) {
    out << "not exported as polynomials:";
    for (const auto& u : ex.unfitted) out << " " << u;
    out << "\n";
  }
  write_file(c.out / "reduced.cfg", ex.text);
  return finish(c, out, rep, "reduce_report.txt");
}

// compare

}  // namespace

StringsGap compare_strings_grid(const CatalogInstance& inst, double mu1, int nt, int nx) {
  StringsData full{inst.coupling, [](double x) { return std::sin(x); }, [](double x) { return -std::cos(x); },
                   [](double x) { return -std::sin(x); }, [mu1](double x) { return mu1 + std::cos(x); }};
  ReducedStringsData red{inst.coupling, [](double x) { return 2.0 * std::sin(x); },
                         [mu1](double x) { return -2.0 * std::cos(x) - mu1; }};
  const StringsGrid grid{nt, nx, Boundary::periodic};
  const auto gf = solve_hdw_strings(inst.structure.chart(), full, grid);
  const auto gr = solve_reduced_strings(inst.quotient->chart, red, grid);
  StringsGap s;
  double sq = 0.0;
  for (int n = 0; n < gf.nodes(); ++n) {
    auto p = gf.point(n);
    auto r = gr.point(n);
    const double d[3] = {p[2] - p[3] - r[2], 2 * p[4] - mu1 - r[3], 2 * p[5] - r[4]};
    for (double v : d) {
      s.linf = std::max(s.linf, std::abs(v));
      sq += v * v;
    }
    const double exact = 2 * std::sin(p[1] - p[0]) - mu1 * p[0];
    s.err_full = std::max(s.err_full, std::abs(p[2] - p[3] - exact));
    s.err_reduced = std::max(s.err_reduced, std::abs(r[2] - exact));
  }
  s.l2 = std::sqrt(sq / (3.0 * gf.nodes()));
  return s;
}

namespace {

// other grid of the refinement pair: half resolution when that stays >= 8
std::pair<int, int> partner(int n) { return (n + 1) / 2 >= 8 ? std::pair{(n + 1) / 2, n} : std::pair{n, 2 * n - 1}; }

int compare_strings(const Context& c, std::ostream& out) {
  const auto& inst = c.inst;
  if (c.mu_given && c.mu[1] != 0.0)
    throw UsageError("compare: the periodic initial data carries mu2 = 0; got mu2 = " + real(c.mu[1]));
  const double mu1 = c.mu[0];
  const double tol = c.tol.value_or(5e-3);
  VerificationReport rep("compare " + inst.name);
  const auto [t0, t1] = partner(c.nt);
  const auto [x0, x1] = partner(c.nx);
  StringsGap coarse, fine;
  try {
    coarse = compare_strings_grid(inst, mu1, t0, x0);
    fine = compare_strings_grid(inst, mu1, t1, x1);
  } catch (const CflViolation& e) {
    rep.add_flag("cfl", false, e.what());
    out << e.what() << "\n";
    return finish(c, out, rep, "compare_report.txt");
  }
  out << "instance " << inst.name << "  coupling " << inst.options.coupling << "  mu=" << real(mu1) << ",0\n";
  auto line = [&](int nt, int nx, const StringsGap& g) {
    out << "  grid " << nt << "x" << nx << "  linf gap " << real(g.linf) << "  l2 gap " << real(g.l2);
    if (inst.options.coupling == "zero")
      out << "  full error " << real(g.err_full) << "  reduced error " << real(g.err_reduced);
    out << "\n";
  };
  line(t0, x0, coarse);
  line(t1, x1, fine);
  const double ratio = coarse.linf / fine.linf;
  out << "  refinement ratio " << real(ratio) << "  observed order " << real(std::log2(ratio)) << "\n";
  rep.add_residual("gap.linf", fine.linf, tol, "l2 " + real(fine.l2));
  rep.add_flag("gap.ratio", true, "coarse/fine " + real(ratio));
  if (inst.options.coupling == "zero")
    rep.add_residual("gap.vs_single_error", fine.linf, 2.0 * std::max(fine.err_full, fine.err_reduced),
                     "full " + real(fine.err_full) + " reduced " + real(fine.err_reduced));
  print_checks(out, rep);
  return finish(c, out, rep, "compare_report.txt");
}

struct LiftResult {
  double residual = 0.0;
  double defect_pt = 0.0, defect_ptheta = 0.0;
};

LiftResult lift_residuals(const CatalogInstance& inst, double lt, double lth, int nr) {
  const auto rad = solve_reduced_membrane_ode(inst.force, inst.wave_speed, 1.0, 2.0, -0.25, 0.5, nr - 1);
  const auto g = lift_membrane(inst.structure.chart(), rad, lt, lth, 5, 9, 1.0);
  const auto res = hdw_residuals(g, HamiltonianSystem(inst.structure, inst.hamiltonian));
  LiftResult r;
  for (const auto& e : res.equations) {
    if (e.name == "omega.pt" && lt != 0.0)
      r.defect_pt = e.max_abs;
    else if (e.name == "omega.ptheta" && lth != 0.0)
      r.defect_ptheta = e.max_abs;
    else
      r.residual = std::max(r.residual, e.max_abs);
  }
  return r;
}

int compare_membrane(const Context& c, std::ostream& out) {
  const auto& inst = c.inst;
  const double lt = c.mu[0], lth = c.mu[1];
  const double tol = c.tol.value_or(5e-3);
  VerificationReport rep("compare " + inst.name);
  const auto [r0, r1] = partner(c.nx);
  const auto coarse = lift_residuals(inst, lt, lth, r0), fine = lift_residuals(inst, lt, lth, r1);
  out << "instance " << inst.name << "  force " << inst.options.force << "  lambda=" << mu_text(c.mu) << "\n";
  out << "  radial nodes " << r0 << "  lifted residual " << real(coarse.residual) << "\n";
  out << "  radial nodes " << r1 << "  lifted residual " << real(fine.residual) << "\n";
  const double ratio = coarse.residual / fine.residual;
  out << "  refinement ratio " << real(ratio) << "  observed order " << real(std::log2(ratio)) << "\n";
  rep.add_residual("lift.residual", fine.residual, tol, "equations other than the lambda defect");
  rep.add_flag("lift.ratio", true, "coarse/fine " + real(ratio));
  // constant pt and ptheta leave an exact defect of lt/r and r*lth/c^2
  if (lt != 0.0) {
    const double exact = std::abs(lt) / 1.0;
    out << "  zeta_t defect " << real(fine.defect_pt) << " (exact " << real(exact) << ")\n";
    rep.add_residual("lift.defect_pt", std::abs(fine.defect_pt - exact), 1e-9, "defect " + real(fine.defect_pt));
  }
  if (lth != 0.0) {
    const double exact = 2.0 * std::abs(lth) / (inst.wave_speed * inst.wave_speed);
    out << "  zeta_theta defect " << real(fine.defect_ptheta) << " (exact " << real(exact) << ")\n";
    rep.add_residual("lift.defect_ptheta", std::abs(fine.defect_ptheta - exact), 1e-9, "defect " + real(fine.defect_ptheta));
  }
  print_checks(out, rep);
  return finish(c, out, rep, "compare_report.txt");
}

int cmd_compare(const Context& c, std::ostream& out) {
  if (c.inst.solver == "strings" && c.inst.quotient) return compare_strings(c, out);
  if (c.inst.solver == "membrane") return compare_membrane(c, out);
  throw UsageError("instance " + c.inst.name + " has no solver route");
}

int cmd_list(std::ostream& out) {
  for (const auto& i : list_instances()) out << i.name << "  " << i.summary << "\n";
  return kExitPass;
}

}  // namespace

int run_command(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    if (rc.command == "list") return cmd_list(out);
    if (rc.command != "verify" && rc.command != "solve" && rc.command != "reduce" && rc.command != "compare")
      throw UsageError("unknown command '" + rc.command + "'");
    const Context c = resolve(rc);
    fs::create_directories(c.out);
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "solve") return cmd_solve(c, out);
    if (c.command == "reduce") return cmd_reduce(c, out);
    return cmd_compare(c, out);
  } catch (const ReductionError& e) {
    err << "error: " << e.what() << "\n";
    out << rc.command << ": FAIL " << e.what() << "\n";
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace polyco
