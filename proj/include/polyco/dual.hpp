#pragma once

#include <cmath>
#include <type_traits>

namespace polyco {

// Forward-mode dual number. Nesting Dual<Dual<double>> gives exact second
// derivatives, and so on.
template <class T>
struct Dual {
  T v{};
  T e{};

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x), e(0.0) {}  // NOLINT: implicit by design
  constexpr Dual(T value, T eps) requires(!std::is_same_v<T, double>) : v(value), e(eps) {}
  constexpr Dual(double value, double eps) : v(value), e(eps) {}

  Dual& operator+=(const Dual& o) { v += o.v; e += o.e; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; e -= o.e; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(const Dual& a) { return a; }
  friend Dual operator-(const Dual& a) { return make(-a.v, -a.e); }

  friend Dual operator+(const Dual& a, const Dual& b) { return make(a.v + b.v, a.e + b.e); }
  friend Dual operator-(const Dual& a, const Dual& b) { return make(a.v - b.v, a.e - b.e); }
  friend Dual operator*(const Dual& a, const Dual& b) { return make(a.v * b.v, a.e * b.v + a.v * b.e); }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return make(a.v * inv, (a.e - a.v * inv * b.e) * inv);
  }

  friend Dual operator+(const Dual& a, double b) { return make(a.v + b, a.e); }
  friend Dual operator+(double a, const Dual& b) { return make(a + b.v, b.e); }
  friend Dual operator-(const Dual& a, double b) { return make(a.v - b, a.e); }
  friend Dual operator-(double a, const Dual& b) { return make(a - b.v, -b.e); }
  friend Dual operator*(const Dual& a, double b) { return make(a.v * b, a.e * b); }
  friend Dual operator*(double a, const Dual& b) { return make(a * b.v, a * b.e); }
  friend Dual operator/(const Dual& a, double b) { return make(a.v / b, a.e / b); }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

 private:
  static Dual make(const T& value, const T& eps) {
    Dual d;
    d.v = value;
    d.e = eps;
    return d;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T>
struct scalar_level : std::integral_constant<int, 0> {};
template <class T>
struct scalar_level<Dual<T>> : std::integral_constant<int, 1 + scalar_level<T>::value> {};
template <class T>
inline constexpr int scalar_level_v = scalar_level<T>::value;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }

template <class T>
Dual<T> sin(const Dual<T>& x) { return Dual<T>(sin(x.v), cos(x.v) * x.e); }
template <class T>
Dual<T> cos(const Dual<T>& x) { return Dual<T>(cos(x.v), -(sin(x.v) * x.e)); }
template <class T>
Dual<T> exp(const Dual<T>& x) {
  T ev = exp(x.v);
  return Dual<T>(ev, ev * x.e);
}
template <class T>
Dual<T> log(const Dual<T>& x) { return Dual<T>(log(x.v), x.e / x.v); }
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.v);
  return Dual<T>(s, x.e / (2.0 * s));
}

// Integer power by repeated squaring; negative exponents go through 1/x.
template <class T>
T powi(const T& x, int n) {
  if (n < 0) return T(1.0) / powi(x, -n);
  T result(1.0);
  T base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

template <class T>
T recip(const T& x) { return T(1.0) / x; }

}  // namespace polyco
