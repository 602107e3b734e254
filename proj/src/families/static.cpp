#include <cmath>
#include <memory>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {

namespace {

template <class T, class S>
T lift(const S& s) {
  return T(s);
}

// L and the pieces of the closed-form potential for a list of harmonic modes.
// K satisfies K_p = L_y and K_ybar = -L_p, so v = p s - K(p, y, ybar).
class StaticModel {
 public:
  explicit StaticModel(const std::vector<HarmonicMode>& modes) : modes_(modes) {
    for (const HarmonicMode& m : modes_) {
      if (m.kind == HarmonicMode::Kind::ExpTrig) {
        if (!(m.a * m.b > 0.0)) throw std::invalid_argument("exp-trig mode requires a*b > 0");
        polys_.push_back({});
        continue;
      }
      Polys ps;
      ps.L = m.poly;
      ps.Ly = m.poly.derivative(1);
      ps.Lp = m.poly.derivative(0);
      Polynomial lp0(m.poly.variables());
      for (const auto& t : ps.Lp.terms())
        if (t.powers[0] == 0) lp0.add(t.coeff, t.powers);
      ps.K = ps.Ly.antiderivative(0) + lp0.antiderivative(2) * -1.0;
      polys_.push_back(ps);
    }
  }

  template <class S>
  S L(const S& p, const S& y, const S& yb) const {
    return sum<S>(p, y, yb, [](const Polys& q) -> const Polynomial& { return q.L; },
                  [](const HarmonicMode&, const S& e, const S& c, const S&, double) { return e * c; });
  }
  template <class S>
  S Ly(const S& p, const S& y, const S& yb) const {
    return sum<S>(p, y, yb, [](const Polys& q) -> const Polynomial& { return q.Ly; },
                  [](const HarmonicMode& m, const S& e, const S& c, const S&, double) { return m.a * (e * c); });
  }
  template <class S>
  S K(const S& p, const S& y, const S& yb) const {
    return sum<S>(p, y, yb, [](const Polys& q) -> const Polynomial& { return q.K; },
                  [](const HarmonicMode& m, const S& e, const S&, const S& sn, double k) {
                    return (m.a / k) * (e * sn);
                  });
  }

  // p solving L_y(p, y, ybar) = s, lifted into S.
  template <class S>
  S solve_p(const S& s, const S& y, const S& yb, const NewtonOptions& opt) const {
    auto make = [this](auto ss, auto yy, auto yyb) {
      return [this, ss, yy, yyb](const auto& P) {
        using T = std::decay_t<decltype(P[0])>;
        return std::array<T, 1>{Ly<T>(P[0], lift<T>(yy), lift<T>(yyb)) - lift<T>(ss)};
      };
    };
    const double sv = value_of(s), yv = value_of(y), ybv = value_of(yb);
    const auto sol = newton_solve<1>(make(sv, yv, ybv), {sv}, opt);
    return newton_lift<S, 1>(make(s, y, yb), sol.x)[0];
  }

  template <class S>
  S potential(const S& s, const S& y, const S& yb, const NewtonOptions& opt) const {
    S p;
    try {
      p = solve_p(s, y, yb, opt);
    } catch (const ConvergenceError& e) {
      throw DomainError(std::string("static: Newton failed: ") + e.what());
    } catch (const SingularError& e) {
      throw DomainError(std::string("static: L_yp singular: ") + e.what());
    }
    return p * s - K(p, y, yb);
  }

 private:
  struct Polys {
    Polynomial L, Ly, Lp, K;
  };

  template <class S, class Pick, class Exp>
  S sum(const S& p, const S& y, const S& yb, Pick pick, Exp exp_term) const {
    S acc(0.0);
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      const HarmonicMode& m = modes_[i];
      if (m.kind == HarmonicMode::Kind::Polynomial) {
        const std::array<S, 3> x{p, y, yb};
        acc = acc + pick(polys_[i]).template eval<S>(x);
      } else {
        const double k = std::sqrt(m.a * m.b);
        const S e = m.amplitude * exp(m.a * y + m.b * yb);
        const S arg = k * p + m.phase;
        acc = acc + exp_term(m, e, cos(arg), sin(arg), k);
      }
    }
    return acc;
  }

  std::vector<HarmonicMode> modes_;
  std::vector<Polys> polys_;
};

}  // namespace

SolutionBundle static_build(const StaticHarmonicFamily& fam, const CertifyOptions& opt) {
  if (fam.modes.empty()) throw std::invalid_argument("static family needs at least one mode");
  auto model = std::make_shared<const StaticModel>(fam.modes);
  const NewtonOptions nopt = fam.newton;

  // Harmonicity of L in (p, y, ybar).
  Field L = make_field("L", std::vector<std::string>{"p", "y", "ybar"},
                       [model](const auto& x) { return model->L(x[0], x[1], x[2]); });
  const auto hpts = sample_region({{-1.0, 0.5, 0.5, 0.0}, {1.0, 1.5, 1.5, 0.0}}, 16, opt.seed, {});
  for (const Point& q : hpts) {
    const Jet j = L.jet(q, 2);
    const double lap = j.hess(0, 0) + j.hess(1, 2);
    if (!(std::fabs(lap) <= 1e-12 * (1.0 + std::fabs(j.hess(0, 0)) + std::fabs(j.hess(1, 2))))) {
      throw CertificationError("static: mode sum is not harmonic (L_pp + L_{y,ybar} = " + format_double(lap) + ")");
    }
  }

  // The implicit solve must be well posed at the base point; errors propagate as is.
  {
    const Point& b = fam.base_point;
    model->solve_p<double>(b[kZ] + b[kZbar], b[kY], b[kYbar], nopt);
  }

  SolutionBundle out;
  out.family = "static";
  out.v = make_field("v", 4, [model, nopt](const auto& x) { return model->potential(x[1] + x[3], x[0], x[2], nopt); });
  out.v_ybar = out.v.derivative(kYbar);
  out.v_zbar = out.v.derivative(kZbar);
  out.companions["v_reduced"] =
      make_field("v_reduced", std::vector<std::string>{"s", "y", "ybar"},
                 [model, nopt](const auto& x) { return model->potential(x[0], x[1], x[2], nopt); });
  out.companions["p"] = make_field("p", 4, [model, nopt](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    try {
      return model->solve_p<S>(x[1] + x[3], x[0], x[2], nopt);
    } catch (const ConvergenceError& e) {
      throw DomainError(e.what());
    }
  });
  out.region = fam.region;
  out.base_point = fam.base_point;
  out.provenance = {{"family", "static"}, {"modes", fam.modes.size()}};

  certify_bundle(out, opt);
  const auto pts = sample_points(out, opt.samples, opt.seed + 1);
  auto reduced = equation_functional("reduced_static", out);
  certify_points("static reduced equation", pts, reduced, opt.tolerance, opt.workers);
  certify_points(
      "static reduced-vs-full agreement", pts,
      [&](const Point& p) { return reduced(p) - plebanski_residual(out.v, p); }, std::min(opt.tolerance, 1e-9),
      opt.workers);
  return out;
}

}  // namespace heavenly
