#include "polyco/smooth_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyco {

Eigen::MatrixXd SmoothField::jacobian(std::span<const double> x) const {
  if (!analytic_jacobian()) return finite_difference_jacobian(*this, x);
  auto flat = jacobian_t<double>(x);
  Eigen::MatrixXd J(out_, in_);
  for (int r = 0; r < out_; ++r)
    for (int c = 0; c < in_; ++c) J(r, c) = flat[static_cast<std::size_t>(r) * in_ + c];
  return J;
}

Eigen::MatrixXd finite_difference_jacobian(const SmoothField& f, std::span<const double> x) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  const int n = f.in_dim();
  Eigen::MatrixXd J(f.out_dim(), n);
  Coords xp(x.begin(), x.end());
  for (int j = 0; j < n; ++j) {
    const double h = base * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    auto yp = f.eval(xp);
    xp[j] = x[j] - h;
    auto ym = f.eval(xp);
    xp[j] = x[j];
    const double width = 2.0 * h;
    for (int r = 0; r < f.out_dim(); ++r) J(r, j) = (yp[r] - ym[r]) / width;
  }
  return J;
}

double jacobian_contract_error(const SmoothField& f, const std::vector<Coords>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    Eigen::MatrixXd a = f.jacobian(p);
    Eigen::MatrixXd b = finite_difference_jacobian(f, p);
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c)
        worst = std::max(worst, std::abs(a(r, c) - b(r, c)) / std::max(1.0, std::abs(a(r, c))));
  }
  return worst;
}

int min_levels(std::initializer_list<const SmoothField*> fields) {
  int lv = kMaxLevels;
  for (const auto* f : fields) lv = std::min(lv, f->levels());
  return lv;
}

SmoothField constant_field(int in, std::vector<double> values) {
  const int out = static_cast<int>(values.size());
  return SmoothField::make(
      in, out,
      [values](auto, auto y) {
        for (std::size_t i = 0; i < values.size(); ++i) y[i] = values[i];
      },
      kMaxLevels, "constant");
}

SmoothField coordinate_field(int in, int index) {
  if (index < 0 || index >= in) throw std::out_of_range("coordinate_field: index");
  return SmoothField::make(in, 1, [index](auto x, auto y) { y[0] = x[index]; }, kMaxLevels,
                           "coordinate");
}

SmoothField affine_field(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size()) throw std::invalid_argument("affine_field: shape mismatch");
  const int in = static_cast<int>(A.cols());
  const int out = static_cast<int>(A.rows());
  return SmoothField::make(
      in, out,
      [A, b, in, out](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        for (int r = 0; r < out; ++r) {
          T acc(b(r));
          for (int c = 0; c < in; ++c)
            if (A(r, c) != 0.0) acc = acc + A(r, c) * x[c];
          y[r] = acc;
        }
      },
      kMaxLevels, "affine");
}

SmoothField identity_field(int n) {
  return SmoothField::make(
      n, n, [n](auto x, auto y) {
        for (int i = 0; i < n; ++i) y[i] = x[i];
      },
      kMaxLevels, "identity");
}

SmoothField compose(const SmoothField& outer, const SmoothField& inner) {
  if (outer.in_dim() != inner.out_dim())
    throw std::invalid_argument("compose: dimension mismatch");
  return SmoothField::make(
      inner.in_dim(), outer.out_dim(),
      [outer, inner](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto mid = inner.apply<T>(x);
        outer.apply<T>(std::span<const T>(mid), y);
      },
      min_levels({&outer, &inner}), outer.label() + "∘" + inner.label());
}

SmoothField concat(const std::vector<SmoothField>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no parts");
  const int in = parts.front().in_dim();
  int out = 0;
  int lv = kMaxLevels;
  for (const auto& p : parts) {
    if (p.in_dim() != in) throw std::invalid_argument("concat: input dimension mismatch");
    out += p.out_dim();
    lv = std::min(lv, p.levels());
  }
  return SmoothField::make(
      in, out,
      [parts](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        std::size_t offset = 0;
        for (const auto& p : parts) {
          p.apply<T>(x, y.subspan(offset, p.out_dim()));
          offset += p.out_dim();
        }
      },
      lv, "concat");
}

SmoothField select_outputs(const SmoothField& f, std::vector<int> indices) {
  for (int i : indices)
    if (i < 0 || i >= f.out_dim()) throw std::out_of_range("select_outputs: index");
  const int out = static_cast<int>(indices.size());
  return SmoothField::make(
      f.in_dim(), out,
      [f, indices](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto all = f.apply<T>(x);
        for (std::size_t i = 0; i < indices.size(); ++i) y[i] = all[indices[i]];
      },
      f.levels(), f.label());
}

namespace {

template <class Op>
SmoothField binary(const SmoothField& a, const SmoothField& b, Op op, const char* what) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
    throw std::invalid_argument(std::string(what) + ": arity mismatch");
  return SmoothField::make(
      a.in_dim(), a.out_dim(),
      [a, b, op](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto va = a.apply<T>(x);
        auto vb = b.apply<T>(x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = op(va[i], vb[i]);
      },
      min_levels({&a, &b}), what);
}

}  // namespace

SmoothField add(const SmoothField& a, const SmoothField& b) {
  return binary(a, b, [](const auto& u, const auto& v) { return u + v; }, "add");
}

SmoothField subtract(const SmoothField& a, const SmoothField& b) {
  return binary(a, b, [](const auto& u, const auto& v) { return u - v; }, "subtract");
}

SmoothField scale(const SmoothField& a, double c) {
  return SmoothField::make(
      a.in_dim(), a.out_dim(),
      [a, c](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        a.apply<T>(x, y);
        for (auto& v : y) v = c * v;
      },
      a.levels(), a.label());
}

SmoothField multiply(const SmoothField& scalar, const SmoothField& a) {
  if (scalar.out_dim() != 1 || scalar.in_dim() != a.in_dim())
    throw std::invalid_argument("multiply: expects a scalar field on the same chart");
  return SmoothField::make(
      a.in_dim(), a.out_dim(),
      [scalar, a](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        auto s = scalar.apply<T>(x);
        a.apply<T>(x, y);
        for (auto& v : y) v = s[0] * v;
      },
      min_levels({&scalar, &a}), "multiply");
}

}  // namespace polyco
