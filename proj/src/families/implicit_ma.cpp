#include <cmath>
#include <memory>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {

namespace {

std::string where(double y, double z, double yb) {
  return "(" + format_double(y) + ", " + format_double(z) + ", " + format_double(yb) + ")";
}

// The amplitude a = -psi solves yz + F_D(D, -a) = 0; e^Delta = -F_psi - Fbar_psi at psi = -a.
class ImplicitMAModel {
 public:
  explicit ImplicitMAModel(const ImplicitMAFamily& fam)
      : fam_(fam),
        FD_(fam.F.derivative(0)),
        Fpsi_(fam.F.derivative(1)),
        Fbpsi_(fam.Fbar.derivative(1)),
        FDpsi_(FD_.derivative(1)) {
    if (fam_.F.nvars() != 2 || fam_.Fbar.nvars() != 2) throw std::invalid_argument("implicit-ma: F and Fbar take two variables");
    if (FDpsi_.terms().empty()) throw SingularError("implicit-ma: F_{D,psi} vanishes identically, no amplitude solve");
  }

  template <class S>
  S amplitude(const S& y, const S& z, const S& D) const {
    auto make = [this](auto yy, auto zz, auto dd) {
      return [this, yy, zz, dd](const auto& A) {
        using T = std::decay_t<decltype(A[0])>;
        const T psi = -A[0];
        return std::array<T, 1>{T(yy) * T(zz) + FD_.eval<T>(std::array<T, 2>{T(dd), psi})};
      };
    };
    const double yv = value_of(y), zv = value_of(z), dv = value_of(D);
    double guess = yv * zv + dv;
    if (!fam_.guess.terms().empty()) guess = fam_.guess.eval<double>(std::array<double, 3>{yv, zv, dv});
    NewtonResult<1> sol;
    try {
      sol = newton_solve<1>(make(yv, zv, dv), {guess}, fam_.newton);
    } catch (const ConvergenceError& e) {
      throw DomainError(std::string("implicit-ma: ") + e.what() + " at " + where(yv, zv, 0.0));
    } catch (const SingularError& e) {
      throw DomainError(std::string("implicit-ma: ") + e.what() + " at " + where(yv, zv, 0.0));
    }
    if (!(sol.x[0] > 0.0)) {
      throw DomainError("implicit-ma: amplitude " + format_double(sol.x[0]) + " <= 0 at " + where(yv, zv, 0.0));
    }
    return newton_lift<S, 1>(make(y, z, D), sol.x)[0];
  }

  template <class S>
  S exp_delta(const S& a, const S& D, const S& yb) const {
    const S psi = -a;
    const S e = -(Fpsi_.eval<S>(std::array<S, 2>{D, psi}) + Fbpsi_.eval<S>(std::array<S, 2>{yb, psi}));
    if (!(value_of(e) > 0.0)) {
      throw DomainError("implicit-ma: e^Delta = " + format_double(value_of(e)) + " <= 0 at D = " +
                        format_double(value_of(D)) + ", ybar = " + format_double(value_of(yb)));
    }
    return e;
  }

 private:
  ImplicitMAFamily fam_;
  Polynomial FD_, Fpsi_, Fbpsi_, FDpsi_;
};

bool positive_yz(const Point& p) { return p[kY] > 0.0 && p[kZ] > 0.0; }

}  // namespace

ImplicitMAFamily appendix_ma_family() {
  ImplicitMAFamily fam;
  // F = (D + psi)^2 / 2, Fbar = (ybar + psi)^2 / 2
  fam.F.add(0.5, {2, 0});
  fam.F.add(1.0, {1, 1});
  fam.F.add(0.5, {0, 2});
  fam.Fbar.add(0.5, {2, 0});
  fam.Fbar.add(1.0, {1, 1});
  fam.Fbar.add(0.5, {0, 2});
  return fam;
}

SolutionBundle implicit_ma_build(const ImplicitMAFamily& fam, const CertifyOptions& opt) {
  auto model = std::make_shared<const ImplicitMAModel>(fam);
  {
    const Point& b = fam.base_point;
    const double D = std::log(b[kZ] / b[kY]);
    const double a = model->amplitude<double>(b[kY], b[kZ], D);
    model->exp_delta<double>(a, D, b[kYbar]);
  }
  SolutionBundle out;
  out.family = "implicit-ma";
  out.companions["psi"] = make_field(
      "psi", 4, [model](const auto& x) { return model->amplitude(x[0], x[1], log(x[1] / x[0])); }, positive_yz);
  out.companions["exp_delta"] = make_field(
      "exp_delta", 4,
      [model](const auto& x) {
        const auto D = log(x[1] / x[0]);
        return model->exp_delta(model->amplitude(x[0], x[1], D), D, x[2]);
      },
      positive_yz);
  out.v_ybar = make_field(
      "v_ybar", 4,
      [model](const auto& x) {
        const auto D = log(x[1] / x[0]);
        const auto a = model->amplitude(x[0], x[1], D);
        return model->exp_delta(a, D, x[2]) * sqrt(a);
      },
      positive_yz);
  out.v_zbar = make_field(
      "v_zbar", 4, [model](const auto& x) { return sqrt(model->amplitude(x[0], x[1], log(x[1] / x[0]))); },
      positive_yz);
  out.v = path_integral_field("v", out.v_ybar, out.v_zbar, kYbar, kZbar, fam.base_point);
  out.region = fam.region;
  out.base_point = fam.base_point;
  out.provenance = {{"family", "implicit-ma"}, {"F", fam.F.to_string()}, {"Fbar", fam.Fbar.to_string()}};

  const auto pts = sample_points(out, opt.samples, opt.seed);
  certify_points("implicit-ma direct check", pts, equation_functional("direct_check", out), opt.tolerance,
                 opt.workers);
  certify_bundle(out, opt);
  return out;
}

}  // namespace heavenly
