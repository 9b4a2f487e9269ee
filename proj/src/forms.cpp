#include "polyco/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyco {

int binomial(int n, int p) {
  if (p < 0 || p > n) return 0;
  long long r = 1;
  for (int i = 1; i <= p; ++i) r = r * (n - p + i) / i;
  return static_cast<int>(r);
}

std::vector<std::vector<int>> multi_indices(int n, int p) {
  std::vector<std::vector<int>> out;
  if (p < 0 || p > n) return out;
  std::vector<int> cur(p);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[i] == n - p + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

int multi_index_position(int n, std::span<const int> sorted) {
  // Count tuples that precede `sorted` in lexicographic order.
  const int p = static_cast<int>(sorted.size());
  int pos = 0;
  int prev = -1;
  for (int i = 0; i < p; ++i) {
    for (int v = prev + 1; v < sorted[i]; ++v) pos += binomial(n - v - 1, p - i - 1);
    prev = sorted[i];
  }
  return pos;
}

int sort_with_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}

namespace {

template <class T>
using Vec = std::vector<T>;

template <class T>
T det_minor(const Vec<T>& J, int cols, std::span<const int> rows_idx, std::span<const int> cols_idx) {
  auto at = [&](int r, int c) -> const T& {
    return J[static_cast<std::size_t>(rows_idx[r]) * cols + cols_idx[c]];
  };
  switch (rows_idx.size()) {
    case 0:
      return T(1.0);
    case 1:
      return at(0, 0);
    case 2:
      return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    case 3:
      return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
             at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
             at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    default:
      throw FormError("det_minor: degree above 3");
  }
}

void check_degree(int p, const char* where) {
  if (p < 0 || p > kMaxDegree) throw FormError(std::string(where) + ": degree out of range 0..3");
}

struct Entry {
  int a;
  int b;
  int sign;
};

}  // namespace

VValuedForm::VValuedForm(ChartPtr chart, int degree, int k, SmoothField coefficients)
    : chart_(std::move(chart)), degree_(degree), k_(k), coeffs_(std::move(coefficients)) {
  if (!chart_) throw FormError("VValuedForm: null chart");
  check_degree(degree_, "VValuedForm");
  if (k_ < 1) throw FormError("VValuedForm: value dimension must be >= 1");
  if (coeffs_.in_dim() != chart_->dim())
    throw FormError("VValuedForm: coefficient input dimension differs from chart");
  if (coeffs_.out_dim() != k_ * binomial(chart_->dim(), degree_))
    throw FormError("VValuedForm: coefficient array length must be k*binomial(n,p)");
}

VValuedForm VValuedForm::zero(ChartPtr chart, int degree, int k) {
  check_degree(degree, "zero");
  const int n = chart->dim();
  return VValuedForm(chart, degree, k,
                     constant_field(n, std::vector<double>(k * binomial(n, degree), 0.0)));
}

VValuedForm VValuedForm::function(ChartPtr chart, SmoothField f) {
  const int k = f.out_dim();
  return VValuedForm(std::move(chart), 0, k, std::move(f));
}

VValuedForm VValuedForm::differential(ChartPtr chart, int coord) {
  const int n = chart->dim();
  if (coord < 0 || coord >= n) throw FormError("differential: coordinate out of range");
  std::vector<double> c(n, 0.0);
  c[coord] = 1.0;
  return VValuedForm(chart, 1, 1, constant_field(n, c));
}

VValuedForm VValuedForm::differential(ChartPtr chart, const std::string& coord) {
  int i = chart->require(coord);
  return differential(std::move(chart), i);
}

VValuedForm VValuedForm::from_terms(ChartPtr chart, int degree, int k, std::vector<FormTerm> terms) {
  check_degree(degree, "from_terms");
  const int n = chart->dim();
  const int block = binomial(n, degree);
  struct Slot {
    int out;
    int sign;
    SmoothField coeff;
  };
  std::vector<Slot> slots;
  int lv = kMaxLevels;
  for (auto& t : terms) {
    if (t.alpha < 0 || t.alpha >= k) throw FormError("from_terms: value index out of range");
    if (static_cast<int>(t.indices.size()) != degree) throw FormError("from_terms: index count");
    for (int i : t.indices)
      if (i < 0 || i >= n) throw FormError("from_terms: coordinate out of range");
    if (t.coefficient.in_dim() != n || t.coefficient.out_dim() != 1)
      throw FormError("from_terms: coefficient must be a scalar field on the chart");
    int sign = sort_with_sign(t.indices);
    if (sign == 0) continue;
    slots.push_back({t.alpha * block + multi_index_position(n, t.indices), sign, t.coefficient});
    lv = std::min(lv, t.coefficient.levels());
  }
  const int out = k * block;
  auto f = SmoothField::make(
      n, out,
      [slots](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        for (auto& v : y) v = T(0.0);
        for (const auto& s : slots) {
          auto c = s.coeff.apply<T>(x);
          y[s.out] = y[s.out] + static_cast<double>(s.sign) * c[0];
        }
      },
      lv, "form");
  return VValuedForm(std::move(chart), degree, k, std::move(f));
}

VValuedForm VValuedForm::constant(ChartPtr chart, int degree, int k, const std::vector<ConstTerm>& terms) {
  check_degree(degree, "constant");
  const int n = chart->dim();
  const int block = binomial(n, degree);
  std::vector<double> c(k * block, 0.0);
  for (auto t : terms) {
    if (t.alpha < 0 || t.alpha >= k) throw FormError("constant: value index out of range");
    if (static_cast<int>(t.indices.size()) != degree) throw FormError("constant: index count");
    for (int i : t.indices)
      if (i < 0 || i >= n) throw FormError("constant: coordinate out of range");
    int sign = sort_with_sign(t.indices);
    if (sign == 0) continue;
    c[t.alpha * block + multi_index_position(n, t.indices)] += sign * t.value;
  }
  return VValuedForm(chart, degree, k, constant_field(n, c));
}

VValuedForm VValuedForm::stack(const std::vector<VValuedForm>& components) {
  if (components.empty()) throw FormError("stack: no components");
  const auto& first = components.front();
  std::vector<SmoothField> parts;
  for (const auto& c : components) {
    require_same_chart(first.chart(), c.chart(), "stack");
    if (c.degree() != first.degree()) throw FormError("stack: degree mismatch");
    parts.push_back(c.coefficients());
  }
  int k = 0;
  for (const auto& c : components) k += c.k();
  return VValuedForm(first.chart(), first.degree(), k, concat(parts));
}

VValuedForm VValuedForm::component(int alpha) const {
  if (alpha < 0 || alpha >= k_) throw FormError("component: value index out of range");
  const int b = block();
  std::vector<int> idx(b);
  std::iota(idx.begin(), idx.end(), alpha * b);
  return VValuedForm(chart_, degree_, 1, select_outputs(coeffs_, idx));
}

double VValuedForm::coefficient(std::span<const double> x, int alpha, std::vector<int> indices) const {
  if (static_cast<int>(indices.size()) != degree_) throw FormError("coefficient: index count");
  int sign = sort_with_sign(indices);
  if (sign == 0) return 0.0;
  auto v = values(x);
  return sign * v[alpha * block() + multi_index_position(dim(), indices)];
}

Eigen::VectorXd VValuedForm::one_form(int alpha, std::span<const double> x) const {
  if (degree_ != 1) throw FormError("one_form: degree is not 1");
  auto v = values(x);
  const int n = dim();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = v[alpha * n + i];
  return out;
}

Eigen::MatrixXd VValuedForm::two_form(int alpha, std::span<const double> x) const {
  if (degree_ != 2) throw FormError("two_form: degree is not 2");
  auto v = values(x);
  const int n = dim();
  const int b = block();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  auto idx = multi_indices(n, 2);
  for (int pos = 0; pos < b; ++pos) {
    double c = v[alpha * b + pos];
    W(idx[pos][0], idx[pos][1]) = c;
    W(idx[pos][1], idx[pos][0]) = -c;
  }
  return W;
}

double VValuedForm::evaluate(int alpha, std::span<const double> x, const std::vector<Eigen::VectorXd>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) throw FormError("evaluate: need one vector per degree");
  auto v = values(x);
  const int n = dim();
  const int b = block();
  auto idx = multi_indices(n, degree_);
  double total = 0.0;
  for (int pos = 0; pos < b; ++pos) {
    const auto& I = idx[pos];
    double det = 0.0;
    if (degree_ == 0) {
      det = 1.0;
    } else if (degree_ == 1) {
      det = vectors[0](I[0]);
    } else if (degree_ == 2) {
      det = vectors[0](I[0]) * vectors[1](I[1]) - vectors[0](I[1]) * vectors[1](I[0]);
    } else {
      Eigen::Matrix3d m;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = vectors[c](I[r]);
      det = m.determinant();
    }
    total += v[alpha * b + pos] * det;
  }
  return total;
}

VValuedForm operator+(const VValuedForm& a, const VValuedForm& b) {
  require_same_chart(a.chart(), b.chart(), "form +");
  if (a.degree() != b.degree() || a.k() != b.k()) throw FormError("form +: shape mismatch");
  return VValuedForm(a.chart(), a.degree(), a.k(), add(a.coefficients(), b.coefficients()));
}

VValuedForm operator-(const VValuedForm& a, const VValuedForm& b) {
  require_same_chart(a.chart(), b.chart(), "form -");
  if (a.degree() != b.degree() || a.k() != b.k()) throw FormError("form -: shape mismatch");
  return VValuedForm(a.chart(), a.degree(), a.k(), subtract(a.coefficients(), b.coefficients()));
}

VValuedForm operator*(double c, const VValuedForm& a) {
  return VValuedForm(a.chart(), a.degree(), a.k(), scale(a.coefficients(), c));
}

VValuedForm barwedge(const VValuedForm& a, const VValuedForm& b) {
  require_same_chart(a.chart(), b.chart(), "barwedge");
  if (a.k() != b.k()) throw FormError("barwedge: value dimension mismatch");
  const int p = a.degree();
  const int q = b.degree();
  if (p + q > kMaxDegree) throw FormError("wedge: degree overflow");
  const int n = a.dim();
  const int k = a.k();
  const int ba = binomial(n, p);
  const int bb = binomial(n, q);
  const int br = binomial(n, p + q);
  // For every output multi-index K, the shuffles (I, J) of K with signs.
  std::vector<std::vector<Entry>> table(br);
  auto outs = multi_indices(n, p + q);
  auto picks = multi_indices(p + q, p);
  for (int pos = 0; pos < br; ++pos) {
    const auto& K = outs[pos];
    for (const auto& pick : picks) {
      std::vector<int> I, J, order;
      std::vector<bool> in_i(p + q, false);
      for (int s : pick) in_i[s] = true;
      for (int s = 0; s < p + q; ++s) (in_i[s] ? I : J).push_back(K[s]);
      order = I;
      order.insert(order.end(), J.begin(), J.end());
      int sign = sort_with_sign(order);
      table[pos].push_back({multi_index_position(n, I), multi_index_position(n, J), sign});
    }
  }
  const SmoothField fa = a.coefficients();
  const SmoothField fb = b.coefficients();
  auto f = SmoothField::make(
      n, k * br,
      [fa, fb, table, k, ba, bb, br](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto va = fa.apply<T>(x);
        auto vb = fb.apply<T>(x);
        for (int al = 0; al < k; ++al)
          for (int pos = 0; pos < br; ++pos) {
            T acc(0.0);
            for (const auto& e : table[pos])
              acc = acc + static_cast<double>(e.sign) * (va[al * ba + e.a] * vb[al * bb + e.b]);
            y[al * br + pos] = acc;
          }
      },
      min_levels({&fa, &fb}), "wedge");
  return VValuedForm(a.chart(), p + q, k, std::move(f));
}

VValuedForm wedge(const VValuedForm& a, const VValuedForm& b) {
  if (a.k() != 1 || b.k() != 1) throw FormError("wedge: expects scalar-valued forms");
  return barwedge(a, b);
}

namespace {

// For each (p-1)-index J: entries (i, position of sorted(i ∪ J), sign).
std::vector<std::vector<Entry>> interior_table(int n, int p) {
  auto lows = multi_indices(n, p - 1);
  std::vector<std::vector<Entry>> table(lows.size());
  for (std::size_t pos = 0; pos < lows.size(); ++pos) {
    const auto& J = lows[pos];
    for (int i = 0; i < n; ++i) {
      std::vector<int> K{i};
      K.insert(K.end(), J.begin(), J.end());
      int sign = sort_with_sign(K);
      if (sign == 0) continue;
      table[pos].push_back({i, multi_index_position(n, K), sign});
    }
  }
  return table;
}

}  // namespace

VValuedForm interior_product(const SmoothField& X, const VValuedForm& omega) {
  const int p = omega.degree();
  if (p < 1) throw FormError("interior_product: degree-0 input");
  const int n = omega.dim();
  if (X.in_dim() != n || X.out_dim() != n) throw FormError("interior_product: vector field arity");
  const int k = omega.k();
  const int bp = binomial(n, p);
  const int bl = binomial(n, p - 1);
  auto table = interior_table(n, p);
  const SmoothField fw = omega.coefficients();
  auto f = SmoothField::make(
      n, k * bl,
      [X, fw, table, k, bp, bl](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto vx = X.apply<T>(x);
        auto vw = fw.apply<T>(x);
        for (int al = 0; al < k; ++al)
          for (int pos = 0; pos < bl; ++pos) {
            T acc(0.0);
            for (const auto& e : table[pos])
              acc = acc + static_cast<double>(e.sign) * (vx[e.a] * vw[al * bp + e.b]);
            y[al * bl + pos] = acc;
          }
      },
      min_levels({&X, &fw}), "interior");
  return VValuedForm(omega.chart(), p - 1, k, std::move(f));
}

VValuedForm contract_kvector(const SmoothField& X, const VValuedForm& omega) {
  const int p = omega.degree();
  if (p < 1) throw FormError("contract_kvector: degree-0 input");
  const int n = omega.dim();
  const int k = omega.k();
  if (X.in_dim() != n || X.out_dim() != k * n) throw FormError("contract_kvector: k mismatch");
  const int bp = binomial(n, p);
  const int bl = binomial(n, p - 1);
  auto table = interior_table(n, p);
  const SmoothField fw = omega.coefficients();
  auto f = SmoothField::make(
      n, bl,
      [X, fw, table, k, n, bp, bl](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto vx = X.apply<T>(x);
        auto vw = fw.apply<T>(x);
        for (int pos = 0; pos < bl; ++pos) {
          T acc(0.0);
          for (int al = 0; al < k; ++al)
            for (const auto& e : table[pos])
              acc = acc + static_cast<double>(e.sign) * (vx[al * n + e.a] * vw[al * bp + e.b]);
          y[pos] = acc;
        }
      },
      min_levels({&X, &fw}), "contract");
  return VValuedForm(omega.chart(), p - 1, 1, std::move(f));
}

VValuedForm exterior_derivative(const VValuedForm& omega) {
  const int p = omega.degree();
  if (p + 1 > kMaxDegree) throw FormError("exterior_derivative: degree overflow");
  const SmoothField fw = omega.coefficients();
  if (fw.levels() < 2) throw DerivativeUnavailable("exterior_derivative: coefficients lack a Jacobian");
  const int n = omega.dim();
  const int k = omega.k();
  const int bp = binomial(n, p);
  const int bh = binomial(n, p + 1);
  auto highs = multi_indices(n, p + 1);
  // For each K: (coordinate K[r], position of K without K[r], (-1)^r).
  std::vector<std::vector<Entry>> table(bh);
  for (int pos = 0; pos < bh; ++pos) {
    const auto& K = highs[pos];
    for (int r = 0; r <= p; ++r) {
      std::vector<int> rest;
      for (int s = 0; s <= p; ++s)
        if (s != r) rest.push_back(K[s]);
      table[pos].push_back({K[r], multi_index_position(n, rest), (r % 2 == 0) ? 1 : -1});
    }
  }
  auto f = SmoothField::make(
      n, k * bh,
      [fw, table, k, n, bp, bh](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto J = fw.jacobian_t<T>(x);
        for (int al = 0; al < k; ++al)
          for (int pos = 0; pos < bh; ++pos) {
            T acc(0.0);
            for (const auto& e : table[pos])
              acc = acc + static_cast<double>(e.sign) * J[static_cast<std::size_t>(al * bp + e.b) * n + e.a];
            y[al * bh + pos] = acc;
          }
      },
      fw.levels() - 1, "d");
  return VValuedForm(omega.chart(), p + 1, k, std::move(f));
}

VValuedForm lie_derivative(const SmoothField& X, const VValuedForm& omega) {
  if (omega.degree() > 2) throw FormError("lie_derivative: degree above 2");
  if (omega.degree() == 0) return interior_product(X, exterior_derivative(omega));
  return exterior_derivative(interior_product(X, omega)) +
         interior_product(X, exterior_derivative(omega));
}

SmoothField lie_bracket(const SmoothField& X, const SmoothField& Y) {
  const int n = X.in_dim();
  if (X.out_dim() != n || Y.in_dim() != n || Y.out_dim() != n)
    throw std::invalid_argument("lie_bracket: vector fields on different charts");
  if (X.levels() < 2 || Y.levels() < 2)
    throw DerivativeUnavailable("lie_bracket: derivative contract unavailable");
  return SmoothField::make(
      n, n,
      [X, Y, n](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto vx = X.apply<T>(x);
        auto vy = Y.apply<T>(x);
        auto jx = X.jacobian_t<T>(x);
        auto jy = Y.jacobian_t<T>(x);
        for (int i = 0; i < n; ++i) {
          T acc(0.0);
          for (int j = 0; j < n; ++j)
            acc = acc + vx[j] * jy[static_cast<std::size_t>(i) * n + j] -
                  vy[j] * jx[static_cast<std::size_t>(i) * n + j];
          y[i] = acc;
        }
      },
      min_levels({&X, &Y}) - 1, "bracket");
}

VValuedForm pullback(const SmoothField& phi, const VValuedForm& omega, ChartPtr source) {
  const int nb = omega.dim();
  const int na = source->dim();
  if (phi.in_dim() != na || phi.out_dim() != nb) throw FormError("pullback: dimension mismatch");
  const int p = omega.degree();
  const int k = omega.k();
  const SmoothField fw = omega.coefficients();
  if (p == 0) return VValuedForm(std::move(source), 0, k, compose(fw, phi));
  if (phi.levels() < 2) throw DerivativeUnavailable("pullback: map lacks a Jacobian");
  const auto src_idx = multi_indices(na, p);
  const auto dst_idx = multi_indices(nb, p);
  const int ba = static_cast<int>(src_idx.size());
  const int bb = static_cast<int>(dst_idx.size());
  auto f = SmoothField::make(
      na, k * ba,
      [phi, fw, src_idx, dst_idx, k, na, ba, bb](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto img = phi.apply<T>(x);
        auto J = phi.jacobian_t<T>(x);
        auto w = fw.apply<T>(std::span<const T>(img));
        std::vector<T> minors(static_cast<std::size_t>(ba) * bb);
        for (int I = 0; I < ba; ++I)
          for (int Jd = 0; Jd < bb; ++Jd)
            minors[static_cast<std::size_t>(I) * bb + Jd] = det_minor<T>(J, na, dst_idx[Jd], src_idx[I]);
        for (int al = 0; al < k; ++al)
          for (int I = 0; I < ba; ++I) {
            T acc(0.0);
            for (int Jd = 0; Jd < bb; ++Jd) {
              if (value_of(w[al * bb + Jd]) == 0.0 && scalar_level_v<T> == 0) continue;
              acc = acc + w[al * bb + Jd] * minors[static_cast<std::size_t>(I) * bb + Jd];
            }
            y[al * ba + I] = acc;
          }
      },
      std::min(phi.levels() - 1, fw.levels()), "pullback");
  return VValuedForm(std::move(source), p, k, std::move(f));
}

SmoothField directional_derivative(const SmoothField& X, const SmoothField& f) {
  const int n = f.in_dim();
  if (X.in_dim() != n || X.out_dim() != n) throw std::invalid_argument("directional_derivative: arity");
  if (f.levels() < 2) throw DerivativeUnavailable("directional_derivative: no Jacobian");
  const int m = f.out_dim();
  return SmoothField::make(
      n, m,
      [X, f, n, m](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto vx = X.apply<T>(x);
        auto J = f.jacobian_t<T>(x);
        for (int r = 0; r < m; ++r) {
          T acc(0.0);
          for (int j = 0; j < n; ++j) acc = acc + J[static_cast<std::size_t>(r) * n + j] * vx[j];
          y[r] = acc;
        }
      },
      std::min(X.levels(), f.levels() - 1), "X(f)");
}

SmoothField kvector_component(const SmoothField& X, int k, int alpha) {
  const int n = X.in_dim();
  if (X.out_dim() != k * n) throw std::invalid_argument("kvector_component: layout mismatch");
  if (alpha < 0 || alpha >= k) throw std::out_of_range("kvector_component: alpha");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), alpha * n);
  return select_outputs(X, idx);
}

SmoothField kvector_from(const std::vector<SmoothField>& parts) {
  for (const auto& p : parts)
    if (p.in_dim() != p.out_dim()) throw std::invalid_argument("kvector_from: not a vector field");
  return concat(parts);
}

SmoothField flow_map(const SmoothField& X, double s, int steps) {
  const int n = X.in_dim();
  if (X.out_dim() != n) throw std::invalid_argument("flow_map: not a vector field");
  if (steps < 1) throw std::invalid_argument("flow_map: steps must be positive");
  return SmoothField::make(
      n, n,
      [X, s, steps, n](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        const double h = s / steps;
        std::vector<T> z(x.begin(), x.end()), tmp(n);
        for (int st = 0; st < steps; ++st) {
          auto k1 = X.apply<T>(std::span<const T>(z));
          for (int i = 0; i < n; ++i) tmp[i] = z[i] + (0.5 * h) * k1[i];
          auto k2 = X.apply<T>(std::span<const T>(tmp));
          for (int i = 0; i < n; ++i) tmp[i] = z[i] + (0.5 * h) * k2[i];
          auto k3 = X.apply<T>(std::span<const T>(tmp));
          for (int i = 0; i < n; ++i) tmp[i] = z[i] + h * k3[i];
          auto k4 = X.apply<T>(std::span<const T>(tmp));
          for (int i = 0; i < n; ++i) z[i] = z[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        for (int i = 0; i < n; ++i) y[i] = z[i];
      },
      X.levels(), "flow");
}

double max_abs_coefficient(const VValuedForm& omega, const std::vector<Coords>& points) {
  double worst = 0.0;
  for (const auto& p : points)
    for (double v : omega.values(p)) worst = std::max(worst, std::abs(v));
  return worst;
}

double max_abs_difference(const VValuedForm& a, const VValuedForm& b, const std::vector<Coords>& points) {
  if (a.degree() != b.degree() || a.k() != b.k() || a.dim() != b.dim())
    throw FormError("max_abs_difference: shape mismatch");
  double worst = 0.0;
  for (const auto& p : points) {
    auto va = a.values(p);
    auto vb = b.values(p);
    for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
  }
  return worst;
}

}  // namespace polyco
