#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyco/dual.hpp"

namespace polyco {

using Coords = std::vector<double>;

inline constexpr int kMaxLevels = 4;

class DerivativeUnavailable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A map R^n -> R^m. The evaluator is stored once per scalar type
// (double, D1, D2, D3); `levels` says how many of those are usable, so a
// field with levels >= 2 has an exact Jacobian, >= 3 exact second
// derivatives, and so on.
class SmoothField {
 public:
  template <class T>
  using Fn = std::function<void(std::span<const T>, std::span<T>)>;

  SmoothField() = default;

  // `f` must be callable as f(std::span<const T>, std::span<T>) for every
  // scalar type T in the dual tower.
  template <class F>
  static SmoothField make(int in, int out, F f, int levels = kMaxLevels, std::string label = {}) {
    if (in < 0 || out < 0) throw std::invalid_argument("SmoothField: negative arity");
    auto impl = std::make_shared<Impl>();
    if (levels > 0) impl->f0 = f;
    if (levels > 1) impl->f1 = f;
    if (levels > 2) impl->f2 = f;
    if (levels > 3) impl->f3 = f;
    SmoothField s;
    s.impl_ = std::move(impl);
    s.in_ = in;
    s.out_ = out;
    s.levels_ = std::max(0, std::min(levels, kMaxLevels));
    s.label_ = std::move(label);
    return s;
  }

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  int levels() const { return levels_; }
  bool valid() const { return impl_ != nullptr; }
  const std::string& label() const { return label_; }
  SmoothField with_label(std::string label) const {
    SmoothField s = *this;
    s.label_ = std::move(label);
    return s;
  }

  template <class T>
  void apply(std::span<const T> x, std::span<T> y) const {
    constexpr int lvl = scalar_level_v<T>;
    if (!impl_) throw std::logic_error("SmoothField: empty field");
    if (static_cast<int>(x.size()) != in_ || static_cast<int>(y.size()) != out_)
      throw std::invalid_argument("SmoothField " + label_ + ": arity mismatch");
    if (lvl >= levels_)
      throw DerivativeUnavailable("SmoothField " + label_ + ": derivative order exhausted");
    if constexpr (lvl == 0) {
      impl_->f0(x, y);
    } else if constexpr (lvl == 1) {
      impl_->f1(x, y);
    } else if constexpr (lvl == 2) {
      impl_->f2(x, y);
    } else if constexpr (lvl == 3) {
      impl_->f3(x, y);
    } else {
      throw DerivativeUnavailable("SmoothField: scalar nesting beyond supported depth");
    }
  }

  template <class T>
  std::vector<T> apply(std::span<const T> x) const {
    std::vector<T> y(out_);
    apply<T>(x, std::span<T>(y));
    return y;
  }

  std::vector<double> eval(std::span<const double> x) const { return apply<double>(x); }
  double scalar(std::span<const double> x) const {
    if (out_ != 1) throw std::invalid_argument("SmoothField::scalar on non-scalar field");
    return eval(x)[0];
  }

  // Row-major out×in Jacobian at scalar type T, computed with Dual<T>.
  template <class T>
  std::vector<T> jacobian_t(std::span<const T> x) const {
    std::vector<T> jac(static_cast<std::size_t>(out_) * in_);
    std::vector<Dual<T>> xd(in_);
    std::vector<Dual<T>> yd(out_);
    for (int j = 0; j < in_; ++j) {
      for (int i = 0; i < in_; ++i) {
        xd[i].v = x[i];
        xd[i].e = T(i == j ? 1.0 : 0.0);
      }
      apply<Dual<T>>(std::span<const Dual<T>>(xd), std::span<Dual<T>>(yd));
      for (int r = 0; r < out_; ++r) jac[static_cast<std::size_t>(r) * in_ + j] = yd[r].e;
    }
    return jac;
  }

  bool analytic_jacobian() const { return levels_ >= 2; }

  // Exact when analytic_jacobian(), central differences otherwise.
  Eigen::MatrixXd jacobian(std::span<const double> x) const;

 private:
  struct Impl {
    Fn<double> f0;
    Fn<D1> f1;
    Fn<D2> f2;
    Fn<D3> f3;
  };
  std::shared_ptr<const Impl> impl_;
  int in_ = 0;
  int out_ = 0;
  int levels_ = 0;
  std::string label_;
};

Eigen::MatrixXd finite_difference_jacobian(const SmoothField& f, std::span<const double> x);

// Max over points and entries of |J - J_fd| / max(1, |J|).
double jacobian_contract_error(const SmoothField& f, const std::vector<Coords>& points);

SmoothField constant_field(int in, std::vector<double> values);
SmoothField coordinate_field(int in, int index);
// x -> A x + b
SmoothField affine_field(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
SmoothField identity_field(int n);
// outer ∘ inner
SmoothField compose(const SmoothField& outer, const SmoothField& inner);
// Concatenate outputs of fields sharing an input dimension.
SmoothField concat(const std::vector<SmoothField>& parts);
// Pick output components.
SmoothField select_outputs(const SmoothField& f, std::vector<int> indices);
SmoothField add(const SmoothField& a, const SmoothField& b);
SmoothField subtract(const SmoothField& a, const SmoothField& b);
SmoothField scale(const SmoothField& a, double c);
// Pointwise product of a scalar field with every component of `a`.
SmoothField multiply(const SmoothField& scalar, const SmoothField& a);

int min_levels(std::initializer_list<const SmoothField*> fields);

inline Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}
inline Coords to_coords(const Eigen::VectorXd& v) { return Coords(v.data(), v.data() + v.size()); }

}  // namespace polyco
