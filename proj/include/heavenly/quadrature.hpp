#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "heavenly/dual.hpp"

namespace heavenly {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subintervals = 30;
};

template <class V>
struct QuadratureResult {
  V value;
  double error = 0.0;
  int subintervals = 0;
  int evaluations = 0;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss 7-point weights on the odd Kronrod nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
  double a, b;
  V kronrod;
  double error;      // max(|K15 - G7|, rounding floor)
  double raw_error;  // |K15 - G7|
};

template <class V, class F>
Panel<V> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  V fc = f(c);
  V k = fc * kWgk[7];
  V g = fc * kWg[3];
  double absum = norm_inf(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    V f1 = f(c - dx);
    V f2 = f(c + dx);
    V s = f1 + f2;
    k = k + s * kWgk[j];
    absum += (norm_inf(f1) + norm_inf(f2)) * kWgk[j];
    if (j % 2 == 1) g = g + s * kWg[j / 2];
  }
  k = k * h;
  g = g * h;
  const double raw = norm_inf(k - g);
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * absum * std::fabs(h);
  return {a, b, k, std::max(raw, floor), raw};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature of a scalar- or jet-valued
// integrand over [a, b]. The per-panel error estimate is |K15 - G7| in the max
// norm, floored at the rounding level 50 eps int|f|. Refinement stops once the
// unfloored estimate meets the tolerance.
template <class F>
auto adaptive_quadrature(const F& f, double a, double b, const QuadratureOptions& opt = {})
    -> QuadratureResult<decltype(f(a))> {
  using V = decltype(f(a));
  QuadratureResult<V> out;
  if (a == b) {
    out.value = zero_like(f(a));
    out.evaluations = 1;
    return out;
  }
  std::vector<detail::Panel<V>> panels;
  panels.push_back(detail::gk15<V>(f, a, b));
  int evals = 15;
  for (;;) {
    V total = panels[0].kronrod;
    double err = panels[0].error, raw = panels[0].raw_error;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      total = total + panels[i].kronrod;
      err += panels[i].error;
      raw += panels[i].raw_error;
      if (panels[i].raw_error > panels[worst].raw_error) worst = i;
    }
    const double target = std::max(opt.abs_tol, opt.rel_tol * norm_inf(total));
    if (raw <= target || !std::isfinite(err)) {
      if (!std::isfinite(err)) throw QuadratureError("quadrature: non-finite integrand", value_of(total), err);
      out.value = total;
      out.error = err;
      out.subintervals = static_cast<int>(panels.size());
      out.evaluations = evals;
      return out;
    }
    if (static_cast<int>(panels.size()) >= opt.max_subintervals) {
      throw QuadratureError("quadrature: refinement budget of " + std::to_string(opt.max_subintervals) +
                                " subintervals exhausted (estimate " + std::to_string(value_of(total)) +
                                ", error " + std::to_string(err) + ")",
                            value_of(total), err);
    }
    const double pa = panels[worst].a, pb = panels[worst].b, mid = 0.5 * (pa + pb);
    panels[worst] = detail::gk15<V>(f, pa, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1, detail::gk15<V>(f, mid, pb));
    evals += 30;
  }
}

}  // namespace heavenly
