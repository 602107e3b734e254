#include "heavenly/jet.hpp"
#include "heavenly/dual.hpp"

#include <cmath>
#include <sstream>

namespace heavenly {

namespace {

constexpr int kGradOff = 1;
constexpr int kHessOff = 5;
constexpr int kThirdOff = 15;

struct IndexTables {
  int h[4][4];
  int t[4][4][4];
  constexpr IndexTables() : h{}, t{} {
    int n = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        h[i][j] = h[j][i] = kHessOff + n;
        ++n;
      }
    n = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j)
        for (int k = j; k < 4; ++k) {
          int idx = kThirdOff + n++;
          t[i][j][k] = t[i][k][j] = t[j][i][k] = idx;
          t[j][k][i] = t[k][i][j] = t[k][j][i] = idx;
        }
  }
};

constexpr IndexTables kIdx{};

void check_var(int i, int nvars, const char* what) {
  if (i < 0 || i >= nvars) {
    throw std::out_of_range(std::string(what) + ": variable index " + std::to_string(i) +
                            " out of range for " + std::to_string(nvars) + " variables");
  }
}

// Shape of a binary result; broadcast constants adopt the other operand's shape.
void join_shape(const Jet& a, const Jet& b, int& nvars, int& order) {
  if (a.is_broadcast()) {
    nvars = b.nvars();
    order = b.order();
    return;
  }
  if (b.is_broadcast()) {
    nvars = a.nvars();
    order = a.order();
    return;
  }
  if (a.nvars() != b.nvars() || a.order() != b.order()) {
    throw MismatchError("jet shape mismatch: (order " + std::to_string(a.order()) + ", nvars " +
                        std::to_string(a.nvars()) + ") vs (order " + std::to_string(b.order()) +
                        ", nvars " + std::to_string(b.nvars()) + ")");
  }
  nvars = a.nvars();
  order = a.order();
}

}  // namespace

bool Coordinate4::finite() const {
  return std::isfinite(y) && std::isfinite(z) && std::isfinite(ybar) && std::isfinite(zbar);
}

int Jet::hindex(int i, int j) { return kIdx.h[i][j]; }
int Jet::tindex(int i, int j, int k) { return kIdx.t[i][j][k]; }

Jet Jet::constant(double value, int nvars, int order) {
  if (nvars < 1 || nvars > kMaxVars) throw std::invalid_argument("jet nvars must be 1..4");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet order must be 0..3");
  Jet j;
  j.nvars_ = nvars;
  j.order_ = order;
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(double value, int var, int nvars, int order) {
  Jet j = constant(value, nvars, order);
  check_var(var, nvars, "Jet::variable");
  if (order >= 1) j.c_[kGradOff + var] = 1.0;
  return j;
}

Jet Jet::seed(const Coordinate4& point, int var, int order) {
  if (order != 2 && order != 3) {
    throw std::invalid_argument("jet_seed: order must be 2 or 3, got " + std::to_string(order));
  }
  check_var(var, 4, "jet_seed");
  return variable(point.point()[static_cast<std::size_t>(var)], var, 4, order);
}

double Jet::grad(int i) const {
  check_var(i, kMaxVars, "Jet::grad");
  return c_[kGradOff + i];
}
double Jet::hess(int i, int j) const {
  check_var(i, kMaxVars, "Jet::hess");
  check_var(j, kMaxVars, "Jet::hess");
  return c_[kIdx.h[i][j]];
}
double Jet::third(int i, int j, int k) const {
  check_var(i, kMaxVars, "Jet::third");
  check_var(j, kMaxVars, "Jet::third");
  check_var(k, kMaxVars, "Jet::third");
  return c_[kIdx.t[i][j][k]];
}
void Jet::set_grad(int i, double v) {
  check_var(i, nvars_, "Jet::set_grad");
  c_[kGradOff + i] = v;
}
void Jet::set_hess(int i, int j, double v) {
  check_var(i, nvars_, "Jet::set_hess");
  check_var(j, nvars_, "Jet::set_hess");
  c_[kIdx.h[i][j]] = v;
}
void Jet::set_third(int i, int j, int k, double v) {
  check_var(i, nvars_, "Jet::set_third");
  check_var(j, nvars_, "Jet::set_third");
  check_var(k, nvars_, "Jet::set_third");
  c_[kIdx.t[i][j][k]] = v;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& x : r.c_) x = -x;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  int n, ord;
  join_shape(*this, o, n, ord);
  nvars_ = n;
  order_ = ord;
  for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  int n, ord;
  join_shape(*this, o, n, ord);
  nvars_ = n;
  order_ = ord;
  for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  int n, ord;
  join_shape(a, b, n, ord);
  Jet r;
  r.nvars_ = n;
  r.order_ = ord;
  const auto& x = a.c_;
  const auto& y = b.c_;
  r.c_[0] = x[0] * y[0];
  if (a.is_broadcast() || b.is_broadcast()) {
    const double s = a.is_broadcast() ? x[0] : y[0];
    const auto& full = a.is_broadcast() ? y : x;
    for (int i = 1; i < Jet::kSize; ++i) r.c_[i] = s * full[i];
    return r;
  }
  if (ord >= 1)
    for (int i = 0; i < n; ++i) r.c_[kGradOff + i] = x[0] * y[kGradOff + i] + x[kGradOff + i] * y[0];
  if (ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const int ij = kIdx.h[i][j];
        r.c_[ij] = x[0] * y[ij] + x[ij] * y[0] + x[kGradOff + i] * y[kGradOff + j] +
                   x[kGradOff + j] * y[kGradOff + i];
      }
  if (ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const int ijk = kIdx.t[i][j][k];
          const int ij = kIdx.h[i][j], ik = kIdx.h[i][k], jk = kIdx.h[j][k];
          const int gi = kGradOff + i, gj = kGradOff + j, gk = kGradOff + k;
          r.c_[ijk] = x[0] * y[ijk] + x[ijk] * y[0] + x[gi] * y[jk] + x[gj] * y[ik] +
                      x[gk] * y[ij] + x[ij] * y[gk] + x[ik] * y[gj] + x[jk] * y[gi];
        }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.value() == 0.0) throw DomainError("division: zero divisor");
  return a * reciprocal(b);
}

Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
  Jet r;
  r.nvars_ = u.nvars_;
  r.order_ = u.order_;
  r.c_[0] = f0;
  const int n = u.nvars_;
  const int ord = u.order_;
  const auto& x = u.c_;
  if (ord >= 1)
    for (int i = 0; i < n; ++i) r.c_[kGradOff + i] = f1 * x[kGradOff + i];
  if (ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const int ij = kIdx.h[i][j];
        r.c_[ij] = f1 * x[ij] + f2 * x[kGradOff + i] * x[kGradOff + j];
      }
  if (ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          const int gi = kGradOff + i, gj = kGradOff + j, gk = kGradOff + k;
          r.c_[kIdx.t[i][j][k]] =
              f1 * x[kIdx.t[i][j][k]] +
              f2 * (x[kIdx.h[i][j]] * x[gk] + x[kIdx.h[i][k]] * x[gj] + x[kIdx.h[j][k]] * x[gi]) +
              f3 * x[gi] * x[gj] * x[gk];
        }
  return r;
}

Jet reciprocal(const Jet& u) {
  const double x = u.value();
  if (x == 0.0) throw DomainError("reciprocal: zero divisor");
  const double r = 1.0 / x;
  return compose(u, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  if (!std::isfinite(e)) throw DomainError("exp: overflow");
  return compose(u, e, e, e, e);
}

Jet log(const Jet& u) {
  const double x = u.value();
  if (!(x > 0.0)) throw DomainError("log: non-positive argument " + std::to_string(x));
  const double r = 1.0 / x;
  return compose(u, std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet sqrt(const Jet& u) {
  const double x = u.value();
  if (!(x > 0.0)) throw DomainError("sqrt: non-positive argument " + std::to_string(x));
  const double s = std::sqrt(x);
  return compose(u, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet pow(const Jet& u, double p) {
  const double x = u.value();
  const bool integral = std::floor(p) == p;
  if (!integral && !(x > 0.0)) {
    throw DomainError("pow: non-positive base " + std::to_string(x) + " with exponent " +
                      std::to_string(p));
  }
  if (x == 0.0 && p < 3.0) {
    if (p < 0.0) throw DomainError("pow: zero base with negative exponent");
    // Small non-negative integer powers at zero: exact derivatives.
    double f[4] = {0, 0, 0, 0};
    double c = 1.0;
    for (int k = 0; k <= 3; ++k) {
      if (p == static_cast<double>(k)) f[k] = c;
      c *= (p - k);
    }
    if (p == 0.0) f[0] = 1.0;
    return compose(u, f[0], f[1], f[2], f[3]);
  }
  const double f0 = std::pow(x, p);
  const double f1 = p * std::pow(x, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(x, p - 2.0);
  const double f3 = p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0);
  return compose(u, f0, f1, f2, f3);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return compose(u, s, c, -s, -c);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return compose(u, c, -s, -c, s);
}

Jet shift(const Jet& j, int var) {
  if (j.is_broadcast()) return Jet(0.0);
  check_var(var, j.nvars(), "shift");
  if (j.order() < 1) throw CapabilityError("shift: order-0 jet has no derivative");
  const int n = j.nvars();
  Jet r = Jet::constant(j.grad(var), n, j.order() - 1);
  if (r.order() >= 1)
    for (int i = 0; i < n; ++i) r.set_grad(i, j.hess(var, i));
  if (r.order() >= 2)
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) r.set_hess(i, k, j.third(var, i, k));
  return r;
}

Jet truncate(const Jet& j, int order) {
  if (j.is_broadcast()) return j;
  if (order > j.order()) throw CapabilityError("truncate: cannot raise jet order");
  return promote(j, j.nvars(), order);
}

Jet promote(const Jet& j, int nvars, int order) {
  Jet r = Jet::constant(j.value(), nvars, order);
  if (j.is_broadcast()) return r;
  if (nvars < j.nvars()) throw MismatchError("promote: cannot drop variables");
  const int n = j.nvars();
  const int ord = std::min(order, j.order());
  if (ord >= 1)
    for (int i = 0; i < n; ++i) r.set_grad(i, j.grad(i));
  if (ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) r.set_hess(i, k, j.hess(i, k));
  if (ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        for (int l = k; l < n; ++l) r.set_third(i, k, l, j.third(i, k, l));
  return r;
}

Jet scale(const Jet& j, const std::array<double, 4>& f) {
  if (j.is_broadcast()) return j;
  Jet r = j;
  const int n = j.nvars();
  for (int i = 0; i < n; ++i) {
    r.coef(kGradOff + i) *= f[i];
    for (int k = i; k < n; ++k) {
      r.coef(kIdx.h[i][k]) *= f[i] * f[k];
      for (int l = k; l < n; ++l) r.coef(kIdx.t[i][k][l]) *= f[i] * f[k] * f[l];
    }
  }
  return r;
}

double norm_inf(const Jet& j) {
  double m = 0.0;
  for (int i = 0; i < Jet::kSize; ++i) m = std::max(m, std::fabs(j.coef(i)));
  return m;
}

Jet zero_like(const Jet& j) {
  if (j.is_broadcast()) return Jet(0.0);
  return Jet::constant(0.0, j.nvars(), j.order());
}

double value_of(const Jet& j) { return j.value(); }

double exp(double x) { return detail::checked_exp(x); }
double log(double x) { return detail::checked_log(x); }
double sqrt(double x) { return detail::checked_sqrt(x); }
double pow(double x, double p) { return detail::upow(x, p); }

std::string Jet::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "Jet(order=" << order_ << ", nvars=" << nvars_ << ", value=" << c_[0];
  if (order_ >= 1) {
    os << ", grad=[";
    for (int i = 0; i < nvars_; ++i) os << (i ? ", " : "") << c_[kGradOff + i];
    os << "]";
  }
  os << ")";
  return os.str();
}

}  // namespace heavenly
