#include "polyco/hdw.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace polyco {

const char* boundary_name(Boundary b) { return b == Boundary::periodic ? "periodic" : "dirichlet"; }

SectionGrid::SectionGrid(ChartPtr chart, std::vector<GridAxis> axes) : chart_(std::move(chart)), axes_(std::move(axes)) {
  if (!chart_) throw std::invalid_argument("SectionGrid: null chart");
  if (axes_.empty() || axes_.size() > 3) throw std::invalid_argument("SectionGrid: 1 to 3 parameters supported");
  nodes_ = 1;
  for (const auto& a : axes_) {
    if (a.count < 3) throw std::invalid_argument("SectionGrid: each axis needs at least 3 nodes");
    if (!(a.hi > a.lo)) throw std::invalid_argument("SectionGrid: grid spacing must be positive");
    if (a.coord < 0 || a.coord >= chart_->dim()) throw std::invalid_argument("SectionGrid: axis coordinate out of range");
    nodes_ *= a.count;
  }
  values_.assign(static_cast<std::size_t>(nodes_) * chart_->dim(), 0.0);
}

int SectionGrid::index(std::span<const int> multi) const {
  int idx = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) idx = idx * axes_[a].count + multi[a];
  return idx;
}

std::vector<int> SectionGrid::multi_index(int node) const {
  std::vector<int> m(axes_.size());
  for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
    m[a] = node % axes_[a].count;
    node /= axes_[a].count;
  }
  return m;
}

void SectionGrid::fill_base() {
  for (int n = 0; n < nodes_; ++n) {
    auto m = multi_index(n);
    for (std::size_t a = 0; a < axes_.size(); ++a) value(n, axes_[a].coord) = axes_[a].at(m[a]);
  }
}

double SectionGrid::derivative(int node, int axis, int coord) const {
  const auto& ax = axes_[axis];
  int stride = 1;
  for (std::size_t a = axis + 1; a < axes_.size(); ++a) stride *= axes_[a].count;
  const int i = (node / stride) % ax.count;
  const int base = node - i * stride;
  const double h = ax.step();
  auto at = [&](int j) { return value(base + j * stride, coord); };
  if (ax.periodic) {
    const int P = ax.count - 1;
    const int c = i % P;
    // node P duplicates node 0; only the axis coordinate itself jumps by the period
    const double shift = coord == ax.coord ? ax.hi - ax.lo : 0.0;
    const double up = at(c + 1);
    const double down = c == 0 ? at(P - 1) - shift : at(c - 1);
    return (up - down) / (2.0 * h);
  }
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (i == ax.count - 1) return (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h);
  return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

Eigen::MatrixXd SectionGrid::tangent(int node) const {
  const int k = static_cast<int>(axes_.size());
  Eigen::MatrixXd T(dim(), k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < dim(); ++c) T(c, a) = derivative(node, a, c);
  return T;
}

void SectionGrid::write_csv(std::ostream& os, const std::vector<std::string>& comments) const {
  os << "# scheme: " << scheme << "\n# boundary: " << boundary_name(boundary) << "\n# grid:";
  for (const auto& a : axes_) os << ' ' << chart_->name(a.coord) << '=' << a.count;
  os << '\n';
  for (const auto& c : comments) os << "# " << c << '\n';
  for (int c = 0; c < dim(); ++c) os << (c ? "," : "") << chart_->name(c);
  os << '\n';
  char buf[32];
  for (int n = 0; n < nodes_; ++n) {
    for (int c = 0; c < dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.10e", value(n, c));
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

double HdwResiduals::max() const {
  double m = 0.0;
  for (const auto& e : equations) m = std::max(m, e.max_abs);
  return m;
}

double HdwResiduals::rms() const {
  double s = 0.0;
  for (const auto& e : equations) s += e.rms * e.rms;
  return equations.empty() ? 0.0 : std::sqrt(s / equations.size());
}

const EquationResidual& HdwResiduals::at(const std::string& name) const {
  for (const auto& e : equations)
    if (e.name == name) return e;
  throw std::out_of_range("HdwResiduals: no equation " + name);
}

VerificationReport HdwResiduals::to_report(double tol, const std::string& prefix) const {
  VerificationReport rep;
  for (const auto& e : equations) {
    CheckResult c;
    c.name = prefix + "." + e.name;
    c.max_residual = e.max_abs;
    c.tolerance = tol;
    c.pass = e.max_abs <= tol;
    c.note = "rms " + format_real(e.rms);
    rep.add(c);
  }
  return rep;
}

std::vector<std::string> HdwResiduals::comment_lines() const {
  std::vector<std::string> out;
  for (const auto& e : equations)
    out.push_back("residual " + e.name + " max " + format_real(e.max_abs) + " rms " + format_real(e.rms));
  return out;
}

HdwResiduals hdw_residuals(const SectionGrid& section, const HamiltonianSystem& sys) {
  require_same_chart(section.chart(), sys.structure.chart(), "hdw_residuals");
  const int n = sys.dim();
  const int k = sys.k();
  if (static_cast<int>(section.axes().size()) != k)
    throw std::invalid_argument("hdw_residuals: grid parameters must match k");
  const SmoothField R = reeb_fields(sys.structure);
  const SmoothField& tau = sys.structure.tau.coefficients();
  const SmoothField& omega = sys.structure.omega.coefficients();
  const auto pairs = multi_indices(n, 2);
  const int b2 = static_cast<int>(pairs.size());
  std::vector<double> mx(n + k * k, 0.0), sq(n + k * k, 0.0);
  std::vector<double> r(n), D(k * k);
  for (int node = 0; node < section.nodes(); ++node) {
    auto x = section.point(node);
    Eigen::MatrixXd P = section.tangent(node);
    auto tv = tau.eval(x);
    auto wv = omega.eval(x);
    auto rv = R.eval(x);
    Eigen::VectorXd dh = sys.h.jacobian(x).row(0).transpose();
    for (int j = 0; j < n; ++j) r[j] = -dh(j);
    for (int a = 0; a < k; ++a) {
      double Rh = 0.0;
      for (int i = 0; i < n; ++i) Rh += dh(i) * rv[a * n + i];
      for (int j = 0; j < n; ++j) r[j] += Rh * tv[a * n + j];
      // Σ_i P^i W(i, j) with W(i, j) = c, W(j, i) = -c for i < j
      for (int pos = 0; pos < b2; ++pos) {
        const double c = wv[a * b2 + pos];
        if (c == 0.0) continue;
        const int i = pairs[pos][0], j = pairs[pos][1];
        r[j] += c * P(i, a);
        r[i] -= c * P(j, a);
      }
      for (int b = 0; b < k; ++b) {
        double v = a == b ? -1.0 : 0.0;
        for (int i = 0; i < n; ++i) v += tv[b * n + i] * P(i, a);
        D[a * k + b] = v;
      }
    }
    for (int j = 0; j < n; ++j) {
      mx[j] = std::max(mx[j], std::abs(r[j]));
      sq[j] += r[j] * r[j];
    }
    for (int e = 0; e < k * k; ++e) {
      mx[n + e] = std::max(mx[n + e], std::abs(D[e]));
      sq[n + e] += D[e] * D[e];
    }
  }
  HdwResiduals out;
  for (int j = 0; j < n + k * k; ++j) {
    EquationResidual e;
    if (j < n) {
      e.name = "omega." + section.chart()->name(j);
    } else {
      const int a = (j - n) / k, b = (j - n) % k;
      e.name = "tau." + std::to_string(a + 1) + std::to_string(b + 1);
    }
    e.max_abs = mx[j];
    e.rms = std::sqrt(sq[j] / section.nodes());
    out.equations.push_back(e);
  }
  return out;
}

double divergence_residual(const SectionGrid& section, const SmoothField& J) {
  const int k = static_cast<int>(section.axes().size());
  if (J.in_dim() != section.dim() || J.out_dim() != k)
    throw std::invalid_argument("divergence_residual: J must have one output per grid parameter");
  // Evaluate J once per node into a scratch grid sharing the axes.
  SectionGrid Jg(make_chart([&] {
                   std::vector<std::string> names;
                   for (int a = 0; a < k; ++a) names.push_back("J" + std::to_string(a + 1));
                   for (const auto& ax : section.axes()) names.push_back(section.chart()->name(ax.coord));
                   return names;
                 }(),
                            std::vector<Interval>(2 * k, {0, 1})),
                 [&] {
                   auto axes = section.axes();
                   for (int a = 0; a < k; ++a) axes[a].coord = k + a;
                   return axes;
                 }());
  for (int node = 0; node < section.nodes(); ++node) {
    auto v = J.eval(section.point(node));
    for (int a = 0; a < k; ++a) Jg.value(node, a) = v[a];
  }
  Jg.fill_base();
  double worst = 0.0;
  for (int node = 0; node < section.nodes(); ++node) {
    double div = 0.0;
    for (int a = 0; a < k; ++a) div += Jg.derivative(node, a, a);
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

namespace {

// ∂f/∂x_j for a scalar field with one dual pass.
double partial(const SmoothField& f, std::span<const double> x, int j) {
  if (f.levels() < 2) return f.jacobian(x)(0, j);
  std::vector<D1> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = D1{x[i], i == static_cast<std::size_t>(j) ? 1.0 : 0.0};
  std::vector<D1> y(1);
  f.apply<D1>(std::span<const D1>(xd), std::span<D1>(y));
  return y[0].e;
}

double coupling_q(const SmoothField& C, double t, double x, double q) {
  const double p[3] = {t, x, q};
  return partial(C, p, 2);
}

void check_grid(const StringsGrid& g, double dt, double dx) {
  if (g.nt < 8 || g.nx < 8) throw std::invalid_argument("strings grid: sizes must be at least 8");
  if (dt > dx * (1.0 + 1e-12))
    throw CflViolation("CFL violation: dt = " + format_real(dt) + " exceeds dx = " + format_real(dx));
}

void check_periodic(const std::vector<const std::function<double(double)>*>& fs, double lo, double hi) {
  for (auto* f : fs)
    if (std::abs((*f)(lo) - (*f)(hi)) > 1e-9)
      throw UnsupportedBoundary("periodic boundary needs initial data with equal end values");
}

struct Line {
  double lo, hi;
  int n;
  bool periodic;
  double h() const { return (hi - lo) / (n - 1); }
  double at(int j) const { return lo + j * h(); }
  // neighbours on a line whose last node duplicates the first
  int up(int j) const { return periodic ? (j + 1) % (n - 1) : j + 1; }
  int down(int j) const { return periodic ? (j + n - 2) % (n - 1) : j - 1; }
};

// ∂_x of one time row. Centred inside; at fixed ends the centred values are
// extrapolated quadratically so the error stays a smooth O(h²) field and a
// second difference of the momenta does not drop an order at the edge.
double dx_row(const std::vector<double>& u, const Line& L, int j) {
  const double h = L.h();
  auto c = [&](int i) { return (u[i + 1] - u[i - 1]) / (2 * h); };
  if (L.periodic) return (u[L.up(j % (L.n - 1))] - u[L.down(j % (L.n - 1))]) / (2 * h);
  if (j == 0) return 3 * c(1) - 3 * c(2) + c(3);
  if (j == L.n - 1) return 3 * c(j - 1) - 3 * c(j - 2) + c(j - 3);
  return c(j);
}

}  // namespace

SectionGrid solve_hdw_strings(const ChartPtr& chart, const StringsData& d, const StringsGrid& g) {
  const int it = chart->require("t"), ix = chart->require("x");
  const int iq1 = chart->require("q1"), iq2 = chart->require("q2");
  const int ip1t = chart->require("p1t"), ip1x = chart->require("p1x");
  const int ip2t = chart->require("p2t"), ip2x = chart->require("p2x");
  if (d.coupling.in_dim() != 3 || d.coupling.out_dim() != 1)
    throw std::invalid_argument("solve_hdw_strings: coupling must be C(t, x, q)");
  const Interval T = chart->bounds()[it], X = chart->bounds()[ix];
  const bool periodic = g.boundary == Boundary::periodic;
  Line L{X.lo, X.hi, g.nx, periodic};
  const double dt = (T.hi - T.lo) / (g.nt - 1);
  check_grid(g, dt, L.h());
  if (periodic) check_periodic({&d.q1, &d.v1, &d.q2, &d.v2}, X.lo, X.hi);

  const int nx = g.nx, nt = g.nt;
  std::vector<std::vector<double>> q1(nt, std::vector<double>(nx)), q2 = q1;
  auto lap = [&](const std::vector<double>& u, int j) {
    return (u[L.up(j)] - 2 * u[j] + u[L.down(j)]) / (L.h() * L.h());
  };
  std::vector<double> v1(nx), v2(nx);
  for (int j = 0; j < nx; ++j) {
    const double x = L.at(j);
    q1[0][j] = d.q1(x);
    q2[0][j] = d.q2(x);
    v1[j] = d.v1(x);
    v2[j] = d.v2(x);
  }
  if (periodic) q1[0][nx - 1] = q1[0][0], q2[0][nx - 1] = q2[0][0];
  auto step = [&](int n, bool first) {
    const double t = T.lo + n * dt;
    const int jmax = periodic ? nx - 1 : nx;
    for (int j = 0; j < jmax; ++j) {
      if (!periodic && (j == 0 || j == nx - 1)) {
        q1[n + 1][j] = q1[0][j];
        q2[n + 1][j] = q2[0][j];
        continue;
      }
      const double cq = coupling_q(d.coupling, t, L.at(j), q1[n][j] - q2[n][j]);
      const double a1 = lap(q1[n], j) - cq;
      const double a2 = lap(q2[n], j) + cq;
      if (first) {
        q1[n + 1][j] = q1[n][j] + dt * v1[j] + 0.5 * dt * dt * a1;
        q2[n + 1][j] = q2[n][j] + dt * v2[j] + 0.5 * dt * dt * a2;
      } else {
        q1[n + 1][j] = 2 * q1[n][j] - q1[n - 1][j] + dt * dt * a1;
        q2[n + 1][j] = 2 * q2[n][j] - q2[n - 1][j] + dt * dt * a2;
      }
    }
    if (periodic) q1[n + 1][nx - 1] = q1[n + 1][0], q2[n + 1][nx - 1] = q2[n + 1][0];
  };
  for (int n = 0; n + 1 < nt; ++n) step(n, n == 0);

  SectionGrid out(chart, {{it, T.lo, T.hi, nt, false}, {ix, X.lo, X.hi, nx, periodic}});
  out.scheme = "leapfrog";
  out.boundary = g.boundary;
  out.fill_base();
  // same edge treatment as dx_row, in t
  auto dtq = [&](const std::vector<std::vector<double>>& q, int n, int j) {
    auto c = [&](int m) { return (q[m + 1][j] - q[m - 1][j]) / (2 * dt); };
    if (n == 0) return 3 * c(1) - 3 * c(2) + c(3);
    if (n == nt - 1) return 3 * c(n - 1) - 3 * c(n - 2) + c(n - 3);
    return c(n);
  };
  for (int n = 0; n < nt; ++n)
    for (int j = 0; j < nx; ++j) {
      const int idx[2] = {n, j};
      const int node = out.index(idx);
      out.value(node, iq1) = q1[n][j];
      out.value(node, iq2) = q2[n][j];
      out.value(node, ip1t) = dtq(q1, n, j);
      out.value(node, ip2t) = dtq(q2, n, j);
      out.value(node, ip1x) = -dx_row(q1[n], L, j);
      out.value(node, ip2x) = -dx_row(q2[n], L, j);
    }
  return out;
}

SectionGrid solve_reduced_strings(const ChartPtr& chart, const ReducedStringsData& d, const StringsGrid& g) {
  const int it = chart->require("t"), ix = chart->require("x");
  const int iq = chart->require("q"), ipt = chart->require("pt"), ipx = chart->require("px");
  if (d.coupling.in_dim() != 3 || d.coupling.out_dim() != 1)
    throw std::invalid_argument("solve_reduced_strings: coupling must be C(t, x, q)");
  const Interval T = chart->bounds()[it], X = chart->bounds()[ix];
  const bool periodic = g.boundary == Boundary::periodic;
  Line L{X.lo, X.hi, g.nx, periodic};
  const double dt = (T.hi - T.lo) / (g.nt - 1);
  check_grid(g, dt, L.h());
  if (periodic) check_periodic({&d.q, &d.pt}, X.lo, X.hi);
  const int nx = g.nx, nt = g.nt;

  std::vector<std::vector<double>> Q(nt, std::vector<double>(nx)), P = Q;
  for (int j = 0; j < nx; ++j) Q[0][j] = d.q(L.at(j)), P[0][j] = d.pt(L.at(j));
  if (periodic) Q[0][nx - 1] = Q[0][0], P[0][nx - 1] = P[0][0];

  const bool fixed_ends = !periodic;
  // Right-hand side of (q, pt)' on one row.
  auto rhs = [&](double t, const std::vector<double>& q, const std::vector<double>& p, std::vector<double>& dq,
                 std::vector<double>& dp) {
    std::vector<double> qx(nx);
    for (int j = 0; j < nx; ++j) qx[j] = dx_row(q, L, j);
    for (int j = 0; j < nx; ++j) {
      if (fixed_ends && (j == 0 || j == nx - 1)) {
        dq[j] = 0.0;
        dp[j] = 0.0;
        continue;
      }
      dq[j] = p[j];
      dp[j] = dx_row(qx, L, j) - 2.0 * coupling_q(d.coupling, t, L.at(j), q[j]);
    }
  };
  std::vector<double> k1q(nx), k1p(nx), k2q(nx), k2p(nx), k3q(nx), k3p(nx), k4q(nx), k4p(nx), tq(nx), tp(nx);
  for (int n = 0; n + 1 < nt; ++n) {
    const double t = T.lo + n * dt;
    const auto& q = Q[n];
    const auto& p = P[n];
    rhs(t, q, p, k1q, k1p);
    for (int j = 0; j < nx; ++j) tq[j] = q[j] + 0.5 * dt * k1q[j], tp[j] = p[j] + 0.5 * dt * k1p[j];
    rhs(t + 0.5 * dt, tq, tp, k2q, k2p);
    for (int j = 0; j < nx; ++j) tq[j] = q[j] + 0.5 * dt * k2q[j], tp[j] = p[j] + 0.5 * dt * k2p[j];
    rhs(t + 0.5 * dt, tq, tp, k3q, k3p);
    for (int j = 0; j < nx; ++j) tq[j] = q[j] + dt * k3q[j], tp[j] = p[j] + dt * k3p[j];
    rhs(t + dt, tq, tp, k4q, k4p);
    for (int j = 0; j < nx; ++j) {
      Q[n + 1][j] = q[j] + dt / 6.0 * (k1q[j] + 2 * k2q[j] + 2 * k3q[j] + k4q[j]);
      P[n + 1][j] = p[j] + dt / 6.0 * (k1p[j] + 2 * k2p[j] + 2 * k3p[j] + k4p[j]);
    }
    if (periodic) Q[n + 1][nx - 1] = Q[n + 1][0], P[n + 1][nx - 1] = P[n + 1][0];
  }

  SectionGrid out(chart, {{it, T.lo, T.hi, nt, false}, {ix, X.lo, X.hi, nx, periodic}});
  out.scheme = "rk4-lines";
  out.boundary = g.boundary;
  out.fill_base();
  for (int n = 0; n < nt; ++n)
    for (int j = 0; j < nx; ++j) {
      const int idx[2] = {n, j};
      const int node = out.index(idx);
      out.value(node, iq) = Q[n][j];
      out.value(node, ipt) = P[n][j];
      out.value(node, ipx) = -dx_row(Q[n], L, j);
    }
  return out;
}

RadialSolution solve_reduced_membrane_ode(const SmoothField& f, double c, double r0, double r1, double zeta0,
                                          double pr0, int steps) {
  if (steps < 1) throw std::invalid_argument("solve_reduced_membrane_ode: steps must be positive");
  if (r0 <= 0.0 || r1 <= 0.0) throw std::invalid_argument("solve_reduced_membrane_ode: r range crosses 0");
  if (c == 0.0) throw std::invalid_argument("solve_reduced_membrane_ode: c must be nonzero");
  if (f.in_dim() != 1 || f.out_dim() != 1) throw std::invalid_argument("solve_reduced_membrane_ode: f must be f(r)");
  const double c2 = c * c;
  auto F = [&](double r) { return f.eval(std::span<const double>(&r, 1))[0]; };
  auto d = [&](double r, double, double pr, double& dz, double& dp) {
    dp = r * F(r);
    dz = -pr / (r * c2);
  };
  const double h = (r1 - r0) / steps;
  RadialSolution s;
  s.r.reserve(steps + 1);
  double z = zeta0, p = pr0;
  for (int i = 0; i <= steps; ++i) {
    const double r = r0 + i * h;
    s.r.push_back(r);
    s.zeta.push_back(z);
    s.pr.push_back(p);
    if (i == steps) break;
    double z1, p1, z2, p2, z3, p3, z4, p4;
    d(r, z, p, z1, p1);
    d(r + h / 2, z + h / 2 * z1, p + h / 2 * p1, z2, p2);
    d(r + h / 2, z + h / 2 * z2, p + h / 2 * p2, z3, p3);
    d(r + h, z + h * z3, p + h * p3, z4, p4);
    z += h / 6 * (z1 + 2 * z2 + 2 * z3 + z4);
    p += h / 6 * (p1 + 2 * p2 + 2 * p3 + p4);
  }
  s.r.back() = r1;
  return s;
}

double membrane_pde_residual(const RadialSolution& s, const SmoothField& f, double c) {
  const std::size_t n = s.r.size();
  if (n < 3) throw std::invalid_argument("membrane_pde_residual: need at least 3 nodes");
  const double h = s.r[1] - s.r[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = s.r[i];
    const double d1 = (s.zeta[i + 1] - s.zeta[i - 1]) / (2 * h);
    const double d2 = (s.zeta[i + 1] - 2 * s.zeta[i] + s.zeta[i - 1]) / (h * h);
    const double fr = f.eval(std::span<const double>(&r, 1))[0];
    worst = std::max(worst, std::abs(c * c * (d2 + d1 / r) + fr));
  }
  return worst;
}

SectionGrid lift_membrane(const ChartPtr& chart, const RadialSolution& s, double lambda_t, double lambda_theta, int nt,
                          int ntheta, double t_end) {
  const int it = chart->require("t"), ir = chart->require("r"), ith = chart->require("theta");
  const int iz = chart->require("zeta"), ipt = chart->require("pt"), ipr = chart->require("pr"),
            ipth = chart->require("ptheta");
  const int nr = static_cast<int>(s.r.size());
  SectionGrid out(chart, {{it, 0.0, t_end, nt, false},
                          {ir, s.r.front(), s.r.back(), nr, false},
                          {ith, 0.0, 2 * std::numbers::pi, ntheta, true}});
  out.scheme = "radial-rk4-lift";
  out.boundary = Boundary::dirichlet;
  out.fill_base();
  for (int node = 0; node < out.nodes(); ++node) {
    const int j = out.multi_index(node)[1];
    out.value(node, iz) = s.zeta[j];
    out.value(node, ipr) = s.pr[j];
    out.value(node, ipt) = lambda_t;
    out.value(node, ipth) = lambda_theta;
  }
  return out;
}

}  // namespace polyco
