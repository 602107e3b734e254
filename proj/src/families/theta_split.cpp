#include <cmath>
#include <memory>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {

namespace {

// Delta solves yz = sign * Q_D(D, Delta) with D = ln(z/y); P_Delta is the profile p
// along u = exp(-Delta/2) zbar + exp(Delta/2) ybar and P its integral from 0.
class ThetaSplitModel {
 public:
  ThetaSplitModel(const ThetaSplitFamily& fam, double sign)
      : fam_(fam), sign_(sign), QD_(fam.Q.derivative(0)), QDelta_(fam.Q.derivative(1)) {
    if (fam_.p.nvars() != 2 || fam_.Q.nvars() != 2) throw std::invalid_argument("theta-split: p and Q take two variables");
    if (QD_.terms().empty()) throw SingularError("theta-split: Q_D vanishes identically, no Delta solve");
    if (QD_.derivative(1).terms().empty()) {
      throw SingularError("theta-split: Q_D does not depend on Delta, no Delta solve");
    }
  }

  template <class S>
  S delta(const S& y, const S& z) const {
    auto make = [this](auto yy, auto zz) {
      return [this, yy, zz](const auto& X) {
        using T = std::decay_t<decltype(X[0])>;
        const T D = log(T(zz) / T(yy));
        return std::array<T, 1>{T(yy) * T(zz) - sign_ * QD_.eval<T>(std::array<T, 2>{D, X[0]})};
      };
    };
    const double yv = value_of(y), zv = value_of(z);
    double guess = yv * zv;
    if (!fam_.guess.terms().empty()) guess = fam_.guess.eval<double>(std::array<double, 3>{yv, zv, std::log(zv / yv)});
    NewtonResult<1> sol;
    try {
      sol = newton_solve<1>(make(yv, zv), {guess}, fam_.newton);
    } catch (const ConvergenceError& e) {
      throw DomainError(std::string("theta-split: ") + e.what());
    } catch (const SingularError& e) {
      throw DomainError(std::string("theta-split: ") + e.what());
    }
    return newton_lift<S, 1>(make(y, z), sol.x)[0];
  }

  template <class S>
  S profile(const S& Delta, const S& yb, const S& zb) const {
    const S u = exp(-0.5 * Delta) * zb + exp(0.5 * Delta) * yb;
    return fam_.p.eval<S>(std::array<S, 2>{u, Delta});
  }

  // P_Delta + Q_Delta, required positive.
  template <class S>
  S weight(const S& Delta, const S& D, const S& yb, const S& zb) const {
    const S w = profile(Delta, yb, zb) + QDelta_.eval<S>(std::array<S, 2>{D, Delta});
    if (!(value_of(w) > 0.0)) {
      throw DomainError("theta-split: P_Delta + Q_Delta = " + format_double(value_of(w)) + " <= 0");
    }
    return w;
  }

  template <class S>
  S P(const S& Delta, const S& yb, const S& zb) const {
    auto f = [&](double t) { return profile<S>(t * Delta, yb, zb); };
    return Delta * adaptive_quadrature(f, 0.0, 1.0, fam_.quadrature).value;
  }

  template <class S>
  S Q(const S& D, const S& Delta) const {
    return fam_.Q.eval<S>(std::array<S, 2>{D, Delta});
  }

 private:
  ThetaSplitFamily fam_;
  double sign_;
  Polynomial QD_, QDelta_;
};

bool positive_yz(const Point& p) { return p[kY] > 0.0 && p[kZ] > 0.0; }

}  // namespace

SolutionBundle theta_split_build(const ThetaSplitFamily& fam, const std::string& variant, const CertifyOptions& opt) {
  const bool literal = variant == "literal-sign";
  if (!literal && variant != "canonical") throw CapabilityError("theta-split: unknown variant '" + variant + "'");
  auto model = std::make_shared<const ThetaSplitModel>(fam, literal ? -1.0 : 1.0);
  if (!literal) {
    const Point& b = fam.base_point;
    const double Dl = model->delta<double>(b[kY], b[kZ]);
    model->weight<double>(Dl, std::log(b[kZ] / b[kY]), b[kYbar], b[kZbar]);
  }

  SolutionBundle out;
  out.family = "theta-split";
  out.variant = variant;
  out.companions["Delta"] =
      make_field("Delta", 4, [model](const auto& x) { return model->delta(x[0], x[1]); }, positive_yz);
  out.v_ybar = make_field(
      "v_ybar", 4,
      [model](const auto& x) {
        const auto Dl = model->delta(x[0], x[1]);
        return sqrt(exp(Dl) * model->weight(Dl, log(x[1] / x[0]), x[2], x[3]));
      },
      positive_yz);
  out.v_zbar = make_field(
      "v_zbar", 4,
      [model](const auto& x) {
        const auto Dl = model->delta(x[0], x[1]);
        return sqrt(exp(-Dl) * model->weight(Dl, log(x[1] / x[0]), x[2], x[3]));
      },
      positive_yz);
  out.v = path_integral_field("v", out.v_ybar, out.v_zbar, kYbar, kZbar, fam.base_point);
  out.companions["Theta"] = make_field(
      "Theta", std::vector<std::string>{"Delta", "d", "ybar", "zbar"},
      [model](const auto& x) { return model->P(x[0], x[2], x[3]) + model->Q(log(x[1]), x[0]); },
      [](const Point& q) { return q[1] > 0.0; });
  out.region = fam.region;
  out.base_point = fam.base_point;
  out.provenance = {{"family", "theta-split"}, {"variant", variant}, {"p", fam.p.to_string()}, {"Q", fam.Q.to_string()}};
  if (literal) return out;

  const auto pts = sample_points(out, opt.samples, opt.seed);
  const Field Delta = out.companions["Delta"], Theta = out.companions["Theta"];
  certify_points(
      "theta-split gr2 (scaled)", pts,
      [&](const Point& p) {
        const Point q{Delta.value(p), p[kZ] / p[kY], p[kYbar], p[kZbar]};
        return gr2_scaled_residual(Theta, q);
      },
      opt.tolerance, opt.workers);
  certify_bundle(out, opt);
  return out;
}

}  // namespace heavenly
