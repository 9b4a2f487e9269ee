#include "polyco/structures.hpp"

#include <algorithm>
#include <cmath>

namespace polyco {

namespace {

// Fills W(i, j) = ω^α(∂_i, ∂_j) (row-major n×n) from a coefficient array.
template <class T>
void fill_two_form(const std::vector<T>& c, int alpha, int n, const std::vector<std::vector<int>>& pairs,
                   std::vector<T>& W) {
  const int b = static_cast<int>(pairs.size());
  W.assign(static_cast<std::size_t>(n) * n, T(0.0));
  for (int pos = 0; pos < b; ++pos) {
    const T& v = c[alpha * b + pos];
    W[static_cast<std::size_t>(pairs[pos][0]) * n + pairs[pos][1]] = v;
    W[static_cast<std::size_t>(pairs[pos][1]) * n + pairs[pos][0]] = -v;
  }
}

void check_pair(const VValuedForm& tau, const VValuedForm& omega, const char* what) {
  require_same_chart(tau.chart(), omega.chart(), what);
  if (tau.degree() != 1 || omega.degree() != 2) throw FormError(std::string(what) + ": need a 1-form and a 2-form");
  if (tau.k() != omega.k()) throw FormError(std::string(what) + ": value dimensions differ");
}

template <class T>
std::vector<T> flat_at(const SmoothField& tau, const SmoothField& omega, int n,
                       const std::vector<std::vector<int>>& pairs, std::span<const T> x, std::vector<T>& tv) {
  tv = tau.apply<T>(x);
  auto wv = omega.apply<T>(x);
  std::vector<T> W;
  fill_two_form(wv, 0, n, pairs, W);
  std::vector<T> F(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      F[static_cast<std::size_t>(j) * n + i] = W[static_cast<std::size_t>(i) * n + j] + tv[j] * tv[i];
  return F;
}

}  // namespace

KPolycosymplecticStructure::KPolycosymplecticStructure(VValuedForm t, VValuedForm w, std::optional<DarbouxLayout> d)
    : tau(std::move(t)), omega(std::move(w)), darboux(std::move(d)) {
  check_pair(tau, omega, "KPolycosymplecticStructure");
}

CosymplecticStructure::CosymplecticStructure(VValuedForm t, VValuedForm w, std::optional<DarbouxLayout> d)
    : tau(std::move(t)), omega(std::move(w)), darboux(std::move(d)) {
  check_pair(tau, omega, "CosymplecticStructure");
  if (tau.k() != 1) throw FormError("CosymplecticStructure: forms must be scalar-valued");
  if (tau.dim() % 2 != 1) throw FormError("CosymplecticStructure: chart dimension must be odd");
}

KPolysymplecticStructure::KPolysymplecticStructure(VValuedForm w) : omega(std::move(w)) {
  if (omega.degree() != 2) throw FormError("KPolysymplecticStructure: need a 2-form");
}

CosymplecticStructure as_cosymplectic(const KPolycosymplecticStructure& s) {
  if (s.k() != 1) throw FormError("as_cosymplectic: k must be 1");
  return CosymplecticStructure(s.tau, s.omega, s.darboux);
}

Eigen::MatrixXd stacked_omega(const VValuedForm& omega, std::span<const double> x) {
  const int n = omega.dim();
  Eigen::MatrixXd S(omega.k() * n, n);
  for (int a = 0; a < omega.k(); ++a) S.middleRows(a * n, n) = omega.two_form(a, x);
  return S;
}

Eigen::MatrixXd tau_rows(const VValuedForm& tau, std::span<const double> x) {
  const int n = tau.dim();
  Eigen::MatrixXd T(tau.k(), n);
  for (int a = 0; a < tau.k(); ++a) T.row(a) = tau.one_form(a, x).transpose();
  return T;
}

namespace {

Eigen::MatrixXd reeb_system(const KPolycosymplecticStructure& s, std::span<const double> x) {
  const int n = s.dim();
  const int k = s.k();
  Eigen::MatrixXd A(k * n + k, n);
  // ι_R ω^α = 0 reads Σ_i R^i W^α(i, j) = 0 for each j, i.e. rows of W^αᵀ.
  for (int a = 0; a < k; ++a) A.middleRows(a * n, n) = s.omega.two_form(a, x).transpose();
  A.bottomRows(k) = tau_rows(s.tau, x);
  return A;
}

double kernel_rank(const VValuedForm& omega, std::span<const double> x) {
  return static_cast<double>(nullspace(stacked_omega(omega, x)).cols());
}

struct RankScan {
  int found = -1;
  bool uniform = true;
};

template <class F>
RankScan scan_rank(const std::vector<Coords>& pts, int expected, F rank_at) {
  RankScan r;
  for (const auto& p : pts) {
    int v = rank_at(p);
    if (r.found < 0) r.found = v;
    if (v != expected) {
      r.found = v;
      r.uniform = false;
      break;
    }
  }
  return r;
}

}  // namespace

VerificationReport verify_structure(const GeometricStructure& gs, int samples, double tol, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify_structure: samples must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("verify_structure: tolerance must be positive");
  VerificationReport rep;

  auto closedness = [&](const VValuedForm& w, const std::string& name, const std::vector<Coords>& pts) {
    rep.add_residual(name, max_abs_coefficient(exterior_derivative(w), pts), tol);
  };
  auto joint = [&](const VValuedForm& tau, const VValuedForm& omega, const std::vector<Coords>& pts) {
    auto scan = scan_rank(pts, 0, [&](const Coords& p) {
      Eigen::MatrixXd A(omega.k() * omega.dim() + tau.k(), omega.dim());
      A << stacked_omega(omega, p), tau_rows(tau, p);
      return static_cast<int>(nullspace(A).cols());
    });
    rep.add_rank("joint_kernel", scan.found, 0, "dim(ker ω ∩ ker τ)");
  };

  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        const auto pts = halton_samples(*s.chart(), samples, seed);
        if constexpr (std::is_same_v<S, KPolysymplecticStructure>) {
          rep = VerificationReport("verify_structure k-polysymplectic k=" + std::to_string(s.k()));
          closedness(s.omega, "closed_omega", pts);
          auto scan = scan_rank(pts, 0, [&](const Coords& p) { return static_cast<int>(kernel_rank(s.omega, p)); });
          rep.add_rank("kernel_rank", scan.found, 0, "dim(∩ ker ω^α)");
        } else {
          const int k = s.tau.k();
          rep = VerificationReport(std::is_same_v<S, CosymplecticStructure>
                                       ? std::string("verify_structure cosymplectic")
                                       : "verify_structure k-polycosymplectic k=" + std::to_string(k));
          closedness(s.tau, "closed_tau", pts);
          closedness(s.omega, "closed_omega", pts);
          auto scan = scan_rank(pts, k, [&](const Coords& p) { return static_cast<int>(kernel_rank(s.omega, p)); });
          rep.add_rank("kernel_rank", scan.found, k, "dim(∩ ker ω^α)");
          joint(s.tau, s.omega, pts);
          if constexpr (std::is_same_v<S, CosymplecticStructure>) {
            const int n = s.dim();
            auto fs = scan_rank(pts, n, [&](const Coords& p) { return numerical_rank(flat_matrix(s, p)); });
            rep.add_rank("flat_rank", fs.found, n, "rank of Wᵀ + ττᵀ");
          }
        }
      },
      gs);
  return rep;
}

int reeb_system_rank(const KPolycosymplecticStructure& s, std::span<const double> x) {
  return numerical_rank(reeb_system(s, x));
}

Eigen::VectorXd reeb_cosymplectic(const CosymplecticStructure& s, std::span<const double> x) {
  const int n = s.dim();
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = s.omega.two_form(0, x).transpose();
  A.row(n) = s.tau.one_form(0, x).transpose();
  if (numerical_rank(A) != n) throw SingularSystem("reeb_cosymplectic: singular system (structure invalid here)");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  Eigen::VectorXd R = A.colPivHouseholderQr().solve(b);
  if ((A * R - b).lpNorm<Eigen::Infinity>() > 1e-10)
    throw SingularSystem("reeb_cosymplectic: residual above 1e-10");
  return R;
}

Eigen::MatrixXd reeb_family(const KPolycosymplecticStructure& s, std::span<const double> x) {
  const int k = s.k();
  Eigen::MatrixXd N = nullspace(stacked_omega(s.omega, x));
  if (N.cols() != k)
    throw SingularSystem("reeb_family: nullspace rank " + std::to_string(N.cols()) + " differs from k = " +
                         std::to_string(k));
  Eigen::MatrixXd A = tau_rows(s.tau, x) * N;  // k×k
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw SingularSystem("reeb_family: τ degenerate on ker ω");
  Eigen::MatrixXd R = N * lu.solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd sys = reeb_system(s, x);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(sys.rows(), k);
  rhs.bottomRows(k) = Eigen::MatrixXd::Identity(k, k);
  if ((sys * R - rhs).lpNorm<Eigen::Infinity>() > 1e-10)
    throw SingularSystem("reeb_family: residual above 1e-10");
  return R;
}

SmoothField reeb_fields(const KPolycosymplecticStructure& s) {
  const int n = s.dim();
  const int k = s.k();
  const SmoothField tau = s.tau.coefficients();
  const SmoothField omega = s.omega.coefficients();
  const auto pairs = multi_indices(n, 2);
  return SmoothField::make(
      n, k * n,
      [tau, omega, pairs, n, k](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto tv = tau.apply<T>(x);
        auto wv = omega.apply<T>(x);
        const int rows = k * n + k;
        std::vector<T> A(static_cast<std::size_t>(rows) * n, T(0.0)), B(static_cast<std::size_t>(rows) * k, T(0.0));
        std::vector<T> W;
        for (int a = 0; a < k; ++a) {
          fill_two_form(wv, a, n, pairs, W);
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) A[static_cast<std::size_t>(a * n + j) * n + i] = W[static_cast<std::size_t>(i) * n + j];
        }
        for (int b = 0; b < k; ++b) {
          for (int i = 0; i < n; ++i) A[static_cast<std::size_t>(k * n + b) * n + i] = tv[b * n + i];
          B[static_cast<std::size_t>(k * n + b) * k + b] = T(1.0);
        }
        int rank = 0;
        auto X = solve_consistent<T>(A, rows, n, B, k, &rank);
        if (rank != n) throw SingularSystem("reeb_fields: defining system lacks full column rank");
        for (int a = 0; a < k; ++a)
          for (int i = 0; i < n; ++i) y[a * n + i] = X[static_cast<std::size_t>(i) * k + a];
      },
      min_levels({&tau, &omega}), "reeb");
}

Eigen::MatrixXd flat_matrix(const CosymplecticStructure& s, std::span<const double> x) {
  Eigen::VectorXd t = s.tau.one_form(0, x);
  return s.omega.two_form(0, x).transpose() + t * t.transpose();
}

Eigen::MatrixXd flat_inverse(const CosymplecticStructure& s, std::span<const double> x) {
  Eigen::MatrixXd F = flat_matrix(s, x);
  const int n = static_cast<int>(F.rows());
  if (numerical_rank(F) != n) throw SingularSystem("flat_inverse: singular flat matrix");
  Eigen::MatrixXd Fi = F.fullPivLu().inverse();
  if ((F * Fi - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() > 1e-10)
    throw SingularSystem("flat_inverse: residual above 1e-10");
  return Fi;
}

namespace {

enum class FieldKind { gradient, hamiltonian, evolution, reeb };

SmoothField cosymplectic_field(const CosymplecticStructure& s, const SmoothField* f, FieldKind kind) {
  const int n = s.dim();
  const SmoothField tau = s.tau.coefficients();
  const SmoothField omega = s.omega.coefficients();
  const auto pairs = multi_indices(n, 2);
  int lv = min_levels({&tau, &omega});
  SmoothField fn;
  if (f) {
    if (f->in_dim() != n || f->out_dim() != 1) throw std::invalid_argument("cosymplectic field: f must be scalar on the chart");
    if (f->levels() < 2) throw DerivativeUnavailable("cosymplectic field: f lacks a Jacobian");
    fn = *f;
    lv = std::min(lv, f->levels() - 1);
  }
  return SmoothField::make(
      n, n,
      [tau, omega, pairs, n, fn, kind](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        std::vector<T> tv;
        auto F = flat_at<T>(tau, omega, n, pairs, x, tv);
        if (kind == FieldKind::reeb) {
          auto R = solve_square<T>(F, n, tv, 1);
          for (int i = 0; i < n; ++i) y[i] = R[i];
          return;
        }
        auto df = fn.jacobian_t<T>(x);
        if (kind == FieldKind::gradient) {
          auto G = solve_square<T>(F, n, df, 1);
          for (int i = 0; i < n; ++i) y[i] = G[i];
          return;
        }
        auto R = solve_square<T>(F, n, tv, 1);
        T Rf(0.0);
        for (int i = 0; i < n; ++i) Rf = Rf + df[i] * R[i];
        std::vector<T> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = df[i] - Rf * tv[i];
        auto X = solve_square<T>(F, n, rhs, 1);
        for (int i = 0; i < n; ++i) y[i] = (kind == FieldKind::evolution) ? X[i] + R[i] : X[i];
      },
      lv, "cosymplectic-field");
}

}  // namespace

SmoothField reeb_field(const CosymplecticStructure& s) { return cosymplectic_field(s, nullptr, FieldKind::reeb); }
SmoothField gradient_field(const CosymplecticStructure& s, const SmoothField& f) {
  return cosymplectic_field(s, &f, FieldKind::gradient);
}
SmoothField hamiltonian_field(const CosymplecticStructure& s, const SmoothField& f) {
  return cosymplectic_field(s, &f, FieldKind::hamiltonian);
}
SmoothField evolution_field(const CosymplecticStructure& s, const SmoothField& f) {
  return cosymplectic_field(s, &f, FieldKind::evolution);
}

SmoothField poisson_bracket(const CosymplecticStructure& s, const SmoothField& f, const SmoothField& g) {
  const int n = s.dim();
  const SmoothField Xf = hamiltonian_field(s, f);
  const SmoothField Xg = hamiltonian_field(s, g);
  const SmoothField omega = s.omega.coefficients();
  const auto pairs = multi_indices(n, 2);
  return SmoothField::make(
      n, 1,
      [Xf, Xg, omega, pairs](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto a = Xf.apply<T>(x);
        auto b = Xg.apply<T>(x);
        auto w = omega.apply<T>(x);
        T acc(0.0);
        for (std::size_t pos = 0; pos < pairs.size(); ++pos) {
          const int i = pairs[pos][0], j = pairs[pos][1];
          acc = acc + w[pos] * (a[i] * b[j] - a[j] * b[i]);
        }
        y[0] = acc;
      },
      min_levels({&Xf, &Xg, &omega}), "poisson");
}

FibredExtension extend_to_fibred(const KPolycosymplecticStructure& s) {
  const int n = s.dim();
  const int k = s.k();
  const auto& base = *s.chart();
  std::vector<std::string> names;
  std::vector<Interval> bounds;
  for (int a = 0; a < k; ++a) {
    std::string u = "u" + std::to_string(a + 1);
    while (base.index_of(u) >= 0) u = "fib_" + u;
    names.push_back(u);
    bounds.push_back({-1.0, 1.0});
  }
  names.insert(names.end(), base.names().begin(), base.names().end());
  bounds.insert(bounds.end(), base.bounds().begin(), base.bounds().end());
  auto ext = make_chart(names, bounds);

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n + k);
  P.rightCols(n) = Eigen::MatrixXd::Identity(n, n);
  SmoothField pr = affine_field(P, Eigen::VectorXd::Zero(n));

  std::vector<VValuedForm::ConstTerm> du_terms;
  for (int a = 0; a < k; ++a) du_terms.push_back({a, {a}, 1.0});
  auto du = VValuedForm::constant(ext, 1, k, du_terms);
  auto omega_tilde = pullback(pr, s.omega, ext) + barwedge(du, pullback(pr, s.tau, ext));

  // Probe the Reeb family once so an invalid structure fails here.
  reeb_family(s, halton_samples(base, 1).front());
  const SmoothField R = compose(reeb_fields(s), pr);
  const int N = n + k;
  auto reeb_tilde = SmoothField::make(
      N, k * N,
      [R, n, k, N](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto r = R.apply<T>(x);
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) y[a * N + b] = T(0.0);
          for (int i = 0; i < n; ++i) y[a * N + k + i] = r[a * n + i];
        }
      },
      R.levels(), "reeb-tilde");
  return FibredExtension{s, ext, omega_tilde, pr, reeb_tilde};
}

}  // namespace polyco
