#pragma once

#include <cmath>
#include <type_traits>

#include "heavenly/jet.hpp"

namespace heavenly {

// First-order dual number over an arbitrary scalar algebra T (double, Jet, or
// another Dual). Nesting Dual over Jet yields derivatives beyond the jet order.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() : v(0.0), d(0.0) {}
  Dual(double c) : v(c), d(0.0) {}  // NOLINT
  template <class U = T, class = std::enable_if_t<!std::is_same_v<U, double>>>
  Dual(const T& value) : v(value), d(0.0) {}  // NOLINT
  Dual(const T& value, const T& eps) : v(value), d(eps) {}

  Dual operator-() const { return {-v, -d}; }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    if (value_of(b) == 0.0) throw DomainError("division: zero divisor");
    T inv = T(1.0) / b.v;
    T q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
  }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> zero_like(const Dual<T>& x) {
  return {zero_like(x.v), zero_like(x.d)};
}

template <class T>
double norm_inf(const Dual<T>& x) {
  double a = norm_inf(x.v), b = norm_inf(x.d);
  return a > b ? a : b;
}

// Checked double overloads so generic code instantiated with S = double stays in
// this namespace and reports domain violations instead of returning NaN.
double exp(double x);
double log(double x);
double sqrt(double x);
double pow(double x, double p);
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }

namespace detail {
inline double checked_log(double x) {
  if (!(x > 0.0)) throw DomainError("log: non-positive argument");
  return std::log(x);
}
inline double checked_sqrt(double x) {
  if (!(x > 0.0)) throw DomainError("sqrt: non-positive argument");
  return std::sqrt(x);
}
inline double checked_exp(double x) {
  double e = std::exp(x);
  if (!std::isfinite(e)) throw DomainError("exp: overflow");
  return e;
}
template <class T>
T ulog(const T& x) {
  if constexpr (std::is_same_v<T, double>) return checked_log(x);
  else return log(x);
}
template <class T>
T usqrt(const T& x) {
  if constexpr (std::is_same_v<T, double>) return checked_sqrt(x);
  else return sqrt(x);
}
template <class T>
T uexp(const T& x) {
  if constexpr (std::is_same_v<T, double>) return checked_exp(x);
  else return exp(x);
}
template <class T>
T usin(const T& x) {
  if constexpr (std::is_same_v<T, double>) return std::sin(x);
  else return sin(x);
}
template <class T>
T ucos(const T& x) {
  if constexpr (std::is_same_v<T, double>) return std::cos(x);
  else return cos(x);
}
template <class T>
T upow(const T& x, double p) {
  if constexpr (std::is_same_v<T, double>) {
    if (!(x > 0.0) && std::floor(p) != p) throw DomainError("pow: non-positive base");
    return std::pow(x, p);
  } else {
    return pow(x, p);
  }
}
}  // namespace detail

template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = detail::uexp(a.v);
  return {e, e * a.d};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  T l = detail::ulog(a.v);
  return {l, a.d / a.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = detail::usqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
  if (p == 0.0) return Dual<T>(1.0);
  T q = detail::upow(a.v, p - 1.0);
  return {q * a.v, p * q * a.d};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {detail::usin(a.v), detail::ucos(a.v) * a.d};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {detail::ucos(a.v), -detail::usin(a.v) * a.d};
}
template <class T>
Dual<T> reciprocal(const Dual<T>& a) {
  return Dual<T>(1.0) / a;
}

// Dual nesting depth M over Jet: Nested<0> = Jet, Nested<1> = Dual<Jet>, ...
template <int M>
struct NestedT {
  using type = Dual<typename NestedT<M - 1>::type>;
};
template <>
struct NestedT<0> {
  using type = Jet;
};
template <int M>
using Nested = typename NestedT<M>::type;

// Generic integer power by repeated multiplication (valid for any sign of base).
template <class S>
S ipow(const S& x, int n) {
  if (n == 0) return S(1.0);
  S r = x;
  for (int i = 1; i < n; ++i) r = r * x;
  return r;
}

}  // namespace heavenly
