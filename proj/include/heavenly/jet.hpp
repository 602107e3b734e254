#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "heavenly/errors.hpp"

namespace heavenly {

using Point = std::array<double, 4>;

struct Coordinate4 {
  double y = 0.0;
  double z = 0.0;
  double ybar = 0.0;
  double zbar = 0.0;

  Point point() const { return {y, z, ybar, zbar}; }
  static Coordinate4 from(const Point& p) { return {p[0], p[1], p[2], p[3]}; }
  bool finite() const;
  // The y > 0, z > 0 requirement of log/sqrt families.
  bool positive_yz() const { return y > 0.0 && z > 0.0; }
};

enum Var : int { kY = 0, kZ = 1, kYbar = 2, kZbar = 3 };

// Truncated Taylor expansion of a scalar at a point: value, gradient, Hessian and
// third-derivative tensor, in up to four variables, truncated at order 0..3.
//
// Symmetric tensors are stored packed. A jet with nvars() == 0 is a broadcast
// constant: it combines with any jet and carries only a value.
class Jet {
 public:
  static constexpr int kMaxVars = 4;
  static constexpr int kMaxOrder = 3;
  static constexpr int kSize = 35;

  Jet() = default;
  // Broadcast constant (implicit so generic code can write S(2.0) or S + 1.0).
  Jet(double c) { c_[0] = c; }  // NOLINT

  static Jet constant(double value, int nvars, int order);
  static Jet variable(double value, int var, int nvars, int order);
  // Seeding on the 4D slice; order must be 2 or 3.
  static Jet seed(const Coordinate4& point, int var, int order);

  int order() const { return order_; }
  int nvars() const { return nvars_; }
  bool is_broadcast() const { return nvars_ == 0; }

  double value() const { return c_[0]; }
  double grad(int i) const;
  double hess(int i, int j) const;
  double third(int i, int j, int k) const;
  void set_value(double v) { c_[0] = v; }
  void set_grad(int i, double v);
  void set_hess(int i, int j, double v);
  void set_third(int i, int j, int k, double v);

  // Raw packed coefficient access: 0 value, 1..4 gradient, 5..14 Hessian, 15..34 third.
  double coef(int idx) const { return c_[idx]; }
  double& coef(int idx) { return c_[idx]; }

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  std::string to_string() const;

  static int hindex(int i, int j);
  static int tindex(int i, int j, int k);

 private:
  int order_ = 0;
  int nvars_ = 0;
  std::array<double, kSize> c_{};

  friend Jet compose(const Jet& u, double f0, double f1, double f2, double f3);
  friend Jet operator*(const Jet& a, const Jet& b);
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);

// f(u) given f and its first three derivatives at u.value().
Jet compose(const Jet& u, double f0, double f1, double f2, double f3);

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);
Jet pow(const Jet& u, double p);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet reciprocal(const Jet& u);

// Derivative jet: d/d(var) of the expansion, one order lower.
Jet shift(const Jet& j, int var);
Jet truncate(const Jet& j, int order);
// Rebuild a broadcast constant (or any jet) with the given shape.
Jet promote(const Jet& j, int nvars, int order);
// Substitutes x_i -> factor_i * x_i in the expansion.
Jet scale(const Jet& j, const std::array<double, 4>& factors);
double norm_inf(const Jet& j);
Jet zero_like(const Jet& j);
double value_of(const Jet& j);

inline double value_of(double x) { return x; }
inline double zero_like(double) { return 0.0; }
inline double norm_inf(double x) { return x < 0 ? -x : x; }

}  // namespace heavenly
