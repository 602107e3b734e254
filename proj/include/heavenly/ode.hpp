#pragma once

#include <array>
#include <functional>
#include <vector>

#include "heavenly/dual.hpp"

namespace heavenly {

struct IntegratorOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  double max_step = 0.25;
  int max_steps = 100000;
  int fixed_steps = 0;  // > 0: uniform steps without error control
};

// Second-order scalar ODE X'' = F(X, D) with initial data (X, X_D)(D0) = (c2, c1),
// integrated together with its variational equations in (c1, c2).
struct ODETrajectory {
  // State layout: X, X_D, X_c1, X_{D,c1}, X_c2, X_{D,c2}.
  using State = std::array<double, 6>;

  std::vector<double> D;
  std::vector<State> state;
  std::vector<State> rate;   // time derivative of each state, for dense output
  std::vector<double> step;  // accepted step leading to node i (0 for the first node)
  std::vector<double> error_estimate;

  double wronskian(std::size_t i) const;
  double max_wronskian_drift() const;  // max |W(D_i) - W(D_0)|
  // Cubic Hermite dense output at any D inside the integrated range.
  State sample(double d) const;
  // Node abscissae as fractions of the integrated span, from 0 to 1.
  std::vector<double> tau_grid() const;
};

using ForceFn = std::function<double(double X, double D)>;

ODETrajectory integrate_with_sensitivities(const ForceFn& force, const ForceFn& force_x, double c1, double c2,
                                           double D0, double D1, const IntegratorOptions& opt = {});

namespace detail {

struct Dopri5 {
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
  static constexpr double e[7] = {71.0 / 57600,     0,           -71.0 / 16695, 71.0 / 1920,
                                  -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
};

}  // namespace detail

// Replays the fifth-order Dormand-Prince map over a frozen step grid in an
// arbitrary scalar algebra S. The ODE is rescaled to tau in [0, 1] with
// D = D0 + tau * L, so derivatives with respect to the endpoint D0 + L propagate
// through L. force(X, D) must be generic in S. Returns X at tau = 1.
template <class S, class F>
S replay_dopri5(const F& force, const S& X0, const S& XD0, const S& D0, const S& L,
                const std::vector<double>& taus) {
  using T = detail::Dopri5;
  S x = X0;
  S w = L * XD0;  // dX/dtau
  S L2 = L * L;
  for (std::size_t n = 1; n < taus.size(); ++n) {
    const double t0 = taus[n - 1];
    const double h = taus[n] - t0;
    S kx[6], kw[6];
    for (int s = 0; s < 6; ++s) {
      S xs = x, ws = w;
      for (int j = 0; j < s; ++j) {
        if (T::a[s][j] == 0.0) continue;
        xs = xs + (h * T::a[s][j]) * kx[j];
        ws = ws + (h * T::a[s][j]) * kw[j];
      }
      kx[s] = ws;
      kw[s] = L2 * force(xs, D0 + (t0 + T::c[s] * h) * L);
    }
    S nx = x, nw = w;
    for (int j = 0; j < 6; ++j) {
      if (T::b[j] == 0.0) continue;
      nx = nx + (h * T::b[j]) * kx[j];
      nw = nw + (h * T::b[j]) * kw[j];
    }
    x = nx;
    w = nw;
  }
  return x;
}

}  // namespace heavenly
