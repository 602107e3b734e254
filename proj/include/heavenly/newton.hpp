#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "heavenly/dual.hpp"

namespace heavenly {

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
  double min_damping = 1.0 / 1024.0;
};

template <std::size_t N>
struct NewtonResult {
  std::array<double, N> x{};
  double residual_norm = 0.0;
  int iterations = 0;
  double condition = 1.0;  // infinity-norm condition estimate of the Jacobian at x
};

// Solution plus implicit derivatives with respect to the declared parameters.
template <std::size_t N>
struct NewtonJetSolution {
  NewtonResult<N> solve;
  std::array<Jet, N> x;
};

namespace detail {

template <std::size_t N>
double inf_norm(const std::array<double, N>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::fabs(v));
  return m;
}

// Solves J x = b by Gaussian elimination with partial pivoting on the value part.
template <class T, std::size_t N>
std::array<T, N> gauss_solve(std::array<std::array<T, N>, N> J, std::array<T, N> b) {
  double scale = 0.0;
  for (auto& row : J)
    for (auto& e : row) scale = std::max(scale, std::fabs(value_of(e)));
  if (scale == 0.0) throw SingularError("newton: zero Jacobian");
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::fabs(value_of(J[r][c])) > std::fabs(value_of(J[p][c]))) p = r;
    if (std::fabs(value_of(J[p][c])) <= 1e-14 * scale) throw SingularError("newton: singular Jacobian");
    std::swap(J[p], J[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < N; ++r) {
      T f = J[r][c] / J[c][c];
      for (std::size_t k = c; k < N; ++k) J[r][k] = J[r][k] - f * J[c][k];
      b[r] = b[r] - f * b[c];
    }
  }
  std::array<T, N> x;
  for (std::size_t i = N; i-- > 0;) {
    T s = b[i];
    for (std::size_t k = i + 1; k < N; ++k) s = s - J[i][k] * x[k];
    x[i] = s / J[i][i];
  }
  return x;
}

template <class T, std::size_t N, class R>
std::array<std::array<T, N>, N> jacobian(const R& residual, const std::array<T, N>& x) {
  std::array<std::array<T, N>, N> J;
  for (std::size_t c = 0; c < N; ++c) {
    std::array<Dual<T>, N> xd;
    for (std::size_t i = 0; i < N; ++i) xd[i] = Dual<T>(x[i], T(i == c ? 1.0 : 0.0));
    auto r = residual(xd);
    for (std::size_t i = 0; i < N; ++i) J[i][c] = r[i].d;
  }
  return J;
}

template <std::size_t N>
double condition_estimate(const std::array<std::array<double, N>, N>& J) {
  double nJ = 0.0, nInv = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += std::fabs(J[i][j]);
    nJ = std::max(nJ, s);
  }
  std::array<std::array<double, N>, N> inv{};
  for (std::size_t c = 0; c < N; ++c) {
    std::array<double, N> e{};
    e[c] = 1.0;
    auto col = gauss_solve<double, N>(J, e);
    for (std::size_t r = 0; r < N; ++r) inv[r][c] = col[r];
  }
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += std::fabs(inv[i][j]);
    nInv = std::max(nInv, s);
  }
  return nJ * nInv;
}

}  // namespace detail

// Damped Newton on an N-dimensional residual map. The map must be generic in its
// scalar type (it is called with double and Dual<double> for the Jacobian).
template <std::size_t N, class R>
NewtonResult<N> newton_solve(const R& residual, std::array<double, N> x0, const NewtonOptions& opt = {}) {
  std::array<double, N> x = x0;
  std::array<double, N> r = residual(x);
  double norm = detail::inf_norm(r);
  std::array<double, N> best = x;
  double best_norm = norm;
  auto best_vec = [&] { return std::vector<double>(best.begin(), best.end()); };
  for (int it = 0;; ++it) {
    if (!std::isfinite(norm)) throw ConvergenceError("newton: non-finite residual", best_norm, best_vec());
    if (norm < best_norm) {
      best = x;
      best_norm = norm;
    }
    if (norm <= opt.tolerance) {
      NewtonResult<N> out;
      out.x = x;
      out.residual_norm = norm;
      out.iterations = it;
      out.condition = detail::condition_estimate<N>(detail::jacobian<double, N>(residual, x));
      return out;
    }
    if (it >= opt.max_iterations) {
      throw ConvergenceError("newton: no convergence after " + std::to_string(opt.max_iterations) +
                                 " iterations (best residual " + std::to_string(best_norm) + ")",
                             best_norm, best_vec());
    }
    auto J = detail::jacobian<double, N>(residual, x);
    auto step = detail::gauss_solve<double, N>(J, r);
    double lambda = 1.0;
    for (;;) {
      std::array<double, N> trial;
      for (std::size_t i = 0; i < N; ++i) trial[i] = x[i] - lambda * step[i];
      bool ok = true;
      std::array<double, N> rt{};
      try {
        rt = residual(trial);
      } catch (const DomainError&) {
        ok = false;
      }
      const double nt = ok ? detail::inf_norm(rt) : INFINITY;
      if (ok && std::isfinite(nt) && (nt < norm || lambda <= opt.min_damping)) {
        x = trial;
        r = rt;
        norm = nt;
        break;
      }
      if (lambda <= opt.min_damping) {
        throw ConvergenceError("newton: damping failed to reduce the residual (best residual " +
                                   std::to_string(best_norm) + ")",
                               best_norm, best_vec());
      }
      lambda *= 0.5;
    }
  }
}

// Lifts a converged double solution into the scalar algebra S (Jet or nested Dual)
// by Newton iterations carried out in S. Each iteration doubles the number of
// correct Taylor orders; the residual's parameters must already be of type S.
template <class S, std::size_t N, class R>
std::array<S, N> newton_lift(const R& residual, const std::array<double, N>& x, int iterations = 4) {
  std::array<S, N> xs;
  for (std::size_t i = 0; i < N; ++i) xs[i] = S(x[i]);
  for (int it = 0; it < iterations; ++it) {
    auto r = residual(xs);
    auto J = detail::jacobian<S, N>(residual, xs);
    auto step = detail::gauss_solve<S, N>(J, r);
    for (std::size_t i = 0; i < N; ++i) xs[i] = xs[i] - step[i];
  }
  return xs;
}

// Solves residual(x; params) = 0 and returns x with its implicit derivatives up to
// the given jet order with respect to the parameters. make_residual(params) must
// return a residual map and be generic in the parameter scalar type.
template <std::size_t N, std::size_t P, class Factory>
NewtonJetSolution<N> newton_solve_implicit(const Factory& make_residual, const std::array<double, P>& params,
                                           const std::array<double, N>& x0, int order = 2,
                                           const NewtonOptions& opt = {}) {
  static_assert(P >= 1 && P <= 4, "parameters are seeded as jet variables (1..4)");
  NewtonJetSolution<N> out;
  out.solve = newton_solve<N>(make_residual(params), x0, opt);
  std::array<Jet, P> pj;
  for (std::size_t i = 0; i < P; ++i)
    pj[i] = Jet::variable(params[i], static_cast<int>(i), static_cast<int>(P), order);
  out.x = newton_lift<Jet, N>(make_residual(pj), out.solve.x);
  for (auto& j : out.x) j = promote(j, static_cast<int>(P), order);
  return out;
}

}  // namespace heavenly
