#include "polyco/dynamics.hpp"

#include <cmath>

namespace polyco {

HamiltonianSystem::HamiltonianSystem(KPolycosymplecticStructure s, SmoothField hamiltonian, GaugeChoice g)
    : structure(std::move(s)), h(std::move(hamiltonian)), gauge(std::move(g)) {
  if (h.in_dim() != structure.dim() || h.out_dim() != 1)
    throw std::invalid_argument("HamiltonianSystem: h must be a scalar field on the structure's chart");
  if (gauge.mode == GaugeMode::instance_supplied) {
    if (!structure.darboux) throw std::invalid_argument("HamiltonianSystem: supplied gauge needs a Darboux chart");
    const int k = structure.k();
    const int N = static_cast<int>(structure.darboux->fields.size());
    if (gauge.free_coefficients.in_dim() != structure.dim() || gauge.free_coefficients.out_dim() != k * k * N)
      throw std::invalid_argument("HamiltonianSystem: gauge coefficients must have k*k*N outputs");
  }
}

namespace {

void require_darboux(const KPolycosymplecticStructure& s) {
  if (!s.darboux) throw std::invalid_argument("chart not tagged Darboux");
}

SmoothField minimal_norm_field(const HamiltonianSystem& sys) {
  const int n = sys.dim();
  const int k = sys.k();
  const SmoothField tau = sys.structure.tau.coefficients();
  const SmoothField omega = sys.structure.omega.coefficients();
  const SmoothField R = reeb_fields(sys.structure);
  const SmoothField h = sys.h;
  const auto pairs = multi_indices(n, 2);
  const int b2 = static_cast<int>(pairs.size());
  return SmoothField::make(
      n, k * n,
      [tau, omega, R, h, pairs, n, k, b2](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto tv = tau.apply<T>(x);
        auto wv = omega.apply<T>(x);
        auto rv = R.apply<T>(x);
        auto dh = h.jacobian_t<T>(x);
        std::vector<T> Rh(k, T(0.0));
        for (int a = 0; a < k; ++a)
          for (int i = 0; i < n; ++i) Rh[a] = Rh[a] + dh[i] * rv[a * n + i];
        const int rows = n + k * k;
        const int cols = k * n;
        std::vector<T> A(static_cast<std::size_t>(rows) * cols, T(0.0)), B(rows, T(0.0));
        for (int a = 0; a < k; ++a)
          for (int pos = 0; pos < b2; ++pos) {
            const int i = pairs[pos][0], j = pairs[pos][1];
            const T& c = wv[a * b2 + pos];
            // Row j collects Σ_i X^i W(i, j); W(i, j) = c, W(j, i) = -c.
            A[static_cast<std::size_t>(j) * cols + a * n + i] = c;
            A[static_cast<std::size_t>(i) * cols + a * n + j] = -c;
          }
        for (int j = 0; j < n; ++j) {
          T rhs = dh[j];
          for (int a = 0; a < k; ++a) rhs = rhs - Rh[a] * tv[a * n + j];
          B[j] = rhs;
        }
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) {
            const int row = n + a * k + b;
            for (int i = 0; i < n; ++i) A[static_cast<std::size_t>(row) * cols + a * n + i] = tv[b * n + i];
            B[row] = T(a == b ? 1.0 : 0.0);
          }
        auto X = solve_consistent<T>(A, rows, cols, B, 1);
        for (int c = 0; c < cols; ++c) y[c] = X[c];
      },
      std::min({tau.levels(), omega.levels(), R.levels(), h.levels() - 1}), "X^h minimal-norm");
}

SmoothField supplied_field(const HamiltonianSystem& sys) {
  require_darboux(sys.structure);
  const int n = sys.dim();
  const int k = sys.k();
  const DarbouxLayout L = *sys.structure.darboux;
  const int N = static_cast<int>(L.fields.size());
  const SmoothField h = sys.h;
  const SmoothField coef = sys.gauge.free_coefficients;
  return SmoothField::make(
      n, k * n,
      [h, coef, L, n, k, N](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto dh = h.jacobian_t<T>(x);
        auto c = coef.apply<T>(x);
        for (auto& v : y) v = T(0.0);
        for (int a = 0; a < k; ++a) {
          y[a * n + L.base[a]] = T(1.0);
          for (int i = 0; i < N; ++i) {
            y[a * n + L.fields[i]] = dh[L.momenta[a][i]];
            for (int b = 0; b < k; ++b) y[a * n + L.momenta[b][i]] = c[(a * k + b) * N + i];
          }
        }
      },
      std::min(h.levels() - 1, coef.levels()), "X^h supplied");
}

}  // namespace

SmoothField hamiltonian_kvector_field(const HamiltonianSystem& sys) {
  return sys.gauge.mode == GaugeMode::minimal_norm ? minimal_norm_field(sys) : supplied_field(sys);
}

Eigen::MatrixXd kvector_matrix(const SmoothField& X, int k, std::span<const double> x) {
  auto v = X.eval(x);
  const int n = X.in_dim();
  Eigen::MatrixXd M(n, k);
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < n; ++i) M(i, a) = v[a * n + i];
  return M;
}

DefiningResiduals kvector_residuals(const HamiltonianSystem& sys, const Eigen::MatrixXd& X, std::span<const double> x) {
  const auto& s = sys.structure;
  const int k = s.k();
  const int n = s.dim();
  Eigen::MatrixXd R = reeb_family(s, x);
  Eigen::VectorXd dh = sys.h.jacobian(x).row(0).transpose();
  Eigen::MatrixXd Tau = tau_rows(s.tau, x);
  Eigen::VectorXd lhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd rhs = dh;
  for (int a = 0; a < k; ++a) {
    lhs += s.omega.two_form(a, x).transpose() * X.col(a);
    rhs -= dh.dot(R.col(a)) * Tau.row(a).transpose();
  }
  DefiningResiduals r;
  r.omega_equation = (lhs - rhs).lpNorm<Eigen::Infinity>();
  r.tau_equation = (Tau * X - Eigen::MatrixXd::Identity(k, k)).lpNorm<Eigen::Infinity>();
  return r;
}

Eigen::MatrixXd solve_hamiltonian_kvector(const HamiltonianSystem& sys, std::span<const double> x) {
  const int n = sys.dim();
  const int k = sys.k();
  Eigen::MatrixXd X(n, k);
  if (sys.gauge.mode == GaugeMode::instance_supplied) {
    X = kvector_matrix(supplied_field(sys), k, x);
  } else {
    const auto& s = sys.structure;
    Eigen::MatrixXd R = reeb_family(s, x);
    Eigen::VectorXd dh = sys.h.jacobian(x).row(0).transpose();
    Eigen::MatrixXd Tau = tau_rows(s.tau, x);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + k * k, k * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + k * k);
    b.head(n) = dh;
    for (int a = 0; a < k; ++a) {
      A.block(0, a * n, n, n) = s.omega.two_form(a, x).transpose();
      b.head(n) -= dh.dot(R.col(a)) * Tau.row(a).transpose();
      for (int c = 0; c < k; ++c) {
        A.block(n + a * k + c, a * n, 1, n) = Tau.row(c);
        b(n + a * k + c) = (a == c) ? 1.0 : 0.0;
      }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(kRankEps);
    Eigen::VectorXd sol = cod.solve(b);
    for (int a = 0; a < k; ++a) X.col(a) = sol.segment(a * n, n);
  }
  auto r = kvector_residuals(sys, X, x);
  if (!(r.max() <= 1e-10))
    throw InconsistentSystem("solve_hamiltonian_kvector: defining residual " + format_real(r.max()) +
                             " exceeds 1e-10");
  return X;
}

DarbouxFamily darboux_family(const HamiltonianSystem& sys) {
  require_darboux(sys.structure);
  DarbouxFamily fam;
  fam.k = sys.k();
  fam.layout = *sys.structure.darboux;
  fam.fields = static_cast<int>(fam.layout.fields.size());
  const int n = sys.dim();
  const int k = fam.k;
  const int N = fam.fields;
  const DarbouxLayout L = fam.layout;
  const SmoothField h = sys.h;
  fam.fixed = SmoothField::make(
      n, k * n,
      [h, L, n, k, N](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto dh = h.jacobian_t<T>(x);
        for (auto& v : y) v = T(0.0);
        for (int a = 0; a < k; ++a) {
          y[a * n + L.base[a]] = T(1.0);
          for (int i = 0; i < N; ++i) y[a * n + L.fields[i]] = dh[L.momenta[a][i]];
        }
      },
      h.levels() - 1, "darboux-fixed");
  fam.trace_target = SmoothField::make(
      n, N,
      [h, L, N](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto dh = h.jacobian_t<T>(x);
        for (int i = 0; i < N; ++i) y[i] = -dh[L.fields[i]];
      },
      h.levels() - 1, "darboux-trace");
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int i = 0; i < N; ++i) fam.slots.push_back({a, b, i, L.momenta[b][i]});
  return fam;
}

double DarbouxFamily::membership_residual(const Eigen::MatrixXd& X, std::span<const double> x) const {
  Eigen::MatrixXd F = kvector_matrix(fixed, k, x);
  Eigen::MatrixXd D = X - F;
  for (const auto& s : slots) D(s.coord, s.alpha) = 0.0;
  double worst = D.lpNorm<Eigen::Infinity>();
  auto target = trace_target.eval(x);
  for (int i = 0; i < fields; ++i) {
    double sum = 0.0;
    for (int a = 0; a < k; ++a) sum += X(layout.momenta[a][i], a);
    worst = std::max(worst, std::abs(sum - target[i]));
  }
  return worst;
}

Eigen::MatrixXd DarbouxFamily::minimal_norm_member(std::span<const double> x) const {
  Eigen::MatrixXd X = kvector_matrix(fixed, k, x);
  auto target = trace_target.eval(x);
  for (int i = 0; i < fields; ++i)
    for (int a = 0; a < k; ++a) X(layout.momenta[a][i], a) = target[i] / k;
  return X;
}

Eigen::MatrixXd DarbouxFamily::member(std::span<const double> x, std::span<const double> comps) const {
  if (static_cast<int>(comps.size()) != k * k * fields)
    throw std::invalid_argument("DarbouxFamily::member: expected k*k*N components");
  Eigen::MatrixXd X = kvector_matrix(fixed, k, x);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int i = 0; i < fields; ++i) X(layout.momenta[b][i], a) = comps[(a * k + b) * fields + i];
  return X;
}

double check_integrability(const SmoothField& X, int k, const std::vector<Coords>& points) {
  double worst = 0.0;
  std::vector<SmoothField> comps;
  for (int a = 0; a < k; ++a) comps.push_back(kvector_component(X, k, a));
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      auto br = lie_bracket(comps[a], comps[b]);
      for (const auto& p : points)
        for (double v : br.eval(p)) worst = std::max(worst, std::abs(v));
    }
  return worst;
}

}  // namespace polyco
