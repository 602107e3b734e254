#include "heavenly/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace heavenly {

namespace {

using State = ODETrajectory::State;

State rhs(const ForceFn& force, const ForceFn& force_x, double d, const State& y) {
  const double fx = force_x(y[0], d);
  return {y[1], force(y[0], d), y[3], fx * y[2], y[5], fx * y[4]};
}

}  // namespace

double ODETrajectory::wronskian(std::size_t i) const {
  const State& s = state.at(i);
  return s[3] * s[4] - s[5] * s[2];
}

double ODETrajectory::max_wronskian_drift() const {
  double m = 0.0;
  const double w0 = wronskian(0);
  for (std::size_t i = 1; i < state.size(); ++i) m = std::max(m, std::fabs(wronskian(i) - w0));
  return m;
}

ODETrajectory::State ODETrajectory::sample(double d) const {
  const bool forward = D.back() >= D.front();
  const double lo = forward ? D.front() : D.back(), hi = forward ? D.back() : D.front();
  if (d < lo || d > hi) throw DomainError("trajectory sample outside the integrated range");
  std::size_t i = 0;
  while (i + 2 < D.size() && (forward ? D[i + 1] < d : D[i + 1] > d)) ++i;
  if (D.size() == 1) return state[0];
  const double h = D[i + 1] - D[i];
  const double t = (d - D[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  State out;
  for (int k = 0; k < 6; ++k)
    out[k] = h00 * state[i][k] + h10 * h * rate[i][k] + h01 * state[i + 1][k] + h11 * h * rate[i + 1][k];
  return out;
}

std::vector<double> ODETrajectory::tau_grid() const {
  std::vector<double> t(D.size());
  const double span = D.back() - D.front();
  if (span == 0.0) return {0.0, 1.0};
  for (std::size_t i = 0; i < D.size(); ++i) t[i] = (D[i] - D.front()) / span;
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

ODETrajectory integrate_with_sensitivities(const ForceFn& force, const ForceFn& force_x, double c1, double c2,
                                           double D0, double D1, const IntegratorOptions& opt) {
  using T = detail::Dopri5;
  ODETrajectory tr;
  State y = {c2, c1, 0.0, 1.0, 1.0, 0.0};
  tr.D.push_back(D0);
  tr.state.push_back(y);
  tr.rate.push_back(rhs(force, force_x, D0, y));
  tr.step.push_back(0.0);
  tr.error_estimate.push_back(0.0);
  const double span = D1 - D0;
  if (span == 0.0) return tr;
  const double dir = span > 0 ? 1.0 : -1.0;

  double h;
  if (opt.fixed_steps > 0) h = std::fabs(span) / opt.fixed_steps;
  else if (opt.initial_step > 0) h = opt.initial_step;
  else h = std::min(std::fabs(span), 0.01);
  if (opt.max_step > 0 && opt.fixed_steps == 0) h = std::min(h, opt.max_step);

  double d = D0;
  int steps = 0;
  State k[7];
  while (dir * (D1 - d) > 0) {
    if (++steps > opt.max_steps) throw ConvergenceError("integrator: step budget exhausted", std::fabs(D1 - d));
    bool last = false;
    if (h >= std::fabs(D1 - d) * (1 - 1e-12)) {
      h = std::fabs(D1 - d);
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::fabs(d))) {
      throw ConvergenceError("integrator: step size underflow at D = " + std::to_string(d), h);
    }
    const double hs = dir * h;
    k[0] = tr.rate.back();
    for (int s = 1; s < 7; ++s) {
      State ys = y;
      for (int j = 0; j < s; ++j)
        for (int c = 0; c < 6; ++c) ys[c] += hs * T::a[s][j] * k[j][c];
      k[s] = rhs(force, force_x, d + T::c[s] * hs, ys);
    }
    State yn = y;
    for (int j = 0; j < 6; ++j)
      for (int c = 0; c < 6; ++c) yn[c] += hs * T::b[j] * k[j][c];
    double err = 0.0;
    for (int c = 0; c < 6; ++c) {
      double e = 0.0;
      for (int j = 0; j < 7; ++j) e += hs * T::e[j] * k[j][c];
      const double sc = opt.atol + opt.rtol * std::max(std::fabs(y[c]), std::fabs(yn[c]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 6.0);
    if (!std::isfinite(err)) throw ConvergenceError("integrator: non-finite state", err);
    if (opt.fixed_steps > 0 || err <= 1.0) {
      d = last ? D1 : d + hs;
      y = yn;
      tr.D.push_back(d);
      tr.state.push_back(y);
      tr.rate.push_back(k[6]);
      tr.step.push_back(hs);
      tr.error_estimate.push_back(err);
      if (last) break;
    }
    if (opt.fixed_steps == 0) {
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
      if (opt.max_step > 0) h = std::min(h, opt.max_step);
    }
  }
  return tr;
}

}  // namespace heavenly
