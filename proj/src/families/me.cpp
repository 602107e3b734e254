#include <cmath>
#include <memory>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {

namespace {

class MEModel {
 public:
  explicit MEModel(const MEFamily& fam) : fam_(fam), force_x_(fam.force.derivative(0)) {
    if (fam_.solver == "closed") {
      closed_ = true;
      const auto& t = fam_.force.terms();
      if (t.empty()) {
        omega_ = 0.0;
      } else if (t.size() == 1 && t[0].powers == std::vector<int>{1, 0} && t[0].coeff < 0.0) {
        omega_ = std::sqrt(-t[0].coeff);
      } else {
        throw std::invalid_argument("me: closed solver needs force 0 or -w^2 X, got " + fam_.force.to_string());
      }
    } else if (fam_.solver != "numeric") {
      throw std::invalid_argument("me: solver must be 'numeric' or 'closed'");
    }
    for (const auto& s : fam_.cmap)
      if (s.poly.nvars() != 1) throw std::invalid_argument("me: shear polynomial must have one variable");
  }

  template <class S>
  std::array<S, 2> cmap(const S& yb, const S& zb) const {
    S c1 = zb, c2 = yb;
    for (const ShearStep& s : fam_.cmap) {
      if (s.shift_c1) c1 = c1 + s.poly.eval<S>(std::array<S, 1>{c2});
      else c2 = c2 + s.poly.eval<S>(std::array<S, 1>{c1});
    }
    return {c1, c2};
  }

  template <class S>
  S force(const S& X, const S& D) const {
    return fam_.force.eval<S>(std::array<S, 2>{X, D});
  }

  ODETrajectory trajectory(double c1, double c2, double D1) const {
    ForceFn f = [this](double X, double D) { return force<double>(X, D); };
    ForceFn fx = [this](double X, double D) { return force_x_.eval<double>(std::array<double, 2>{X, D}); };
    return integrate_with_sensitivities(f, fx, c1, c2, fam_.D0, D1, fam_.integrator);
  }

  template <class S>
  S X(const S& D, const S& yb, const S& zb) const {
    const auto c = cmap(yb, zb);
    const S t = D - fam_.D0;
    if (closed_) {
      if (omega_ == 0.0) return c[1] + c[0] * t;
      return c[1] * cos(omega_ * t) + c[0] * sin(omega_ * t) * (1.0 / omega_);
    }
    const ODETrajectory tr = trajectory(value_of(c[0]), value_of(c[1]), value_of(D));
    return replay_dopri5<S>([this](const S& x, const S& d) { return force<S>(x, d); }, c[1], c[0], S(fam_.D0), t,
                            tr.tau_grid());
  }

  // dX/dybar and dX/dzbar at (D, ybar, zbar), in S.
  template <class S>
  S X_bar(const S& D, const S& yb, const S& zb, int which) const {
    using T = Dual<S>;
    const T d(D), a(yb, which == 0 ? S(1.0) : S(0.0)), b(zb, which == 1 ? S(1.0) : S(0.0));
    return X<T>(d, a, b).d;
  }

  const MEFamily& family() const { return fam_; }
  bool closed() const { return closed_; }

 private:
  MEFamily fam_;
  Polynomial force_x_;
  bool closed_ = false;
  double omega_ = 0.0;
};

bool positive_yz(const Point& p) { return p[kY] > 0.0 && p[kZ] > 0.0; }

Point me_chart(const Point& p) { return {std::log(p[kZ] / p[kY]), p[kYbar], p[kZbar], 0.0}; }

std::vector<Point> chart_samples(const MEFamily& fam, int n, std::uint64_t seed, bool with_delta) {
  const Region& r = fam.region;
  const double dlo = std::log(r.lo[kZ] / r.hi[kY]), dhi = std::log(r.hi[kZ] / r.lo[kY]);
  Region c{{dlo, r.lo[kYbar], r.lo[kZbar], -0.5}, {dhi, r.hi[kYbar], r.hi[kZbar], 0.5}};
  auto pts = sample_region(c, n, seed, {});
  if (with_delta) {
    // Reorder to the Theta chart (Delta, d, ybar, zbar).
    for (Point& p : pts) p = {p[3], std::exp(p[0]), p[1], p[2]};
  } else {
    for (Point& p : pts) p[3] = 0.0;
  }
  return pts;
}

}  // namespace

Field me_x_field(const MEFamily& fam) {
  auto model = std::make_shared<const MEModel>(fam);
  return make_field("X", std::vector<std::string>{"D", "ybar", "zbar"},
                    [model](const auto& x) { return model->X(x[0], x[1], x[2]); });
}

SolutionBundle me_build(const MEFamily& fam, const CertifyOptions& opt) {
  auto model = std::make_shared<const MEModel>(fam);
  SolutionBundle b;
  b.family = "me";
  b.companions["X"] = make_field("X", std::vector<std::string>{"D", "ybar", "zbar"},
                                 [model](const auto& x) { return model->X(x[0], x[1], x[2]); });
  b.v_ybar = make_field(
      "v_ybar", 4,
      [model](const auto& x) {
        const auto D = log(x[1] / x[0]);
        return sqrt(x[0] * x[1]) * model->X_bar(D, x[2], x[3], 0);
      },
      positive_yz);
  b.v_zbar = make_field(
      "v_zbar", 4,
      [model](const auto& x) {
        const auto D = log(x[1] / x[0]);
        return 1.0 + sqrt(x[0] * x[1]) * model->X_bar(D, x[2], x[3], 1);
      },
      positive_yz);
  b.v = path_integral_field("v", b.v_ybar, b.v_zbar, kYbar, kZbar, fam.base_point);
  b.companions["v_potential"] = make_field(
      "v_potential", 4,
      [model](const auto& x) { return sqrt(x[0] * x[1]) * model->X(log(x[1] / x[0]), x[2], x[3]) + x[3]; },
      positive_yz);
  b.companions["theta"] = -1.0 * b.v_ybar;
  b.companions["c1"] = make_field("c1", 4, [model](const auto& x) { return model->cmap(x[2], x[3])[0]; });
  b.companions["c2"] = make_field("c2", 4, [model](const auto& x) { return model->cmap(x[2], x[3])[1]; });
  b.region = fam.region;
  b.base_point = fam.base_point;
  b.provenance = {{"family", "me"},
                  {"force", fam.force.to_string()},
                  {"solver", fam.solver},
                  {"D0", fam.D0},
                  {"shears", fam.cmap.size()}};

  const auto pts = sample_points(b, opt.samples, opt.seed);
  const Field c1 = b.companions["c1"], c2 = b.companions["c2"];
  certify_points(
      "me unit Jacobian d(c2,c1)/d(ybar,zbar)", pts,
      [&](const Point& p) {
        const Jet a = c1.jet(p, 1), q = c2.jet(p, 1);
        return q.grad(kYbar) * a.grad(kZbar) - q.grad(kZbar) * a.grad(kYbar) - 1.0;
      },
      1e-10, opt.workers);
  if (!model->closed()) {
    certify_points(
        "me Wronskian drift", pts,
        [&](const Point& p) {
          const auto c = model->cmap(p[kYbar], p[kZbar]);
          return model->trajectory(c[0], c[1], std::log(p[kZ] / p[kY])).max_wronskian_drift();
        },
        fam.wronskian_tolerance, opt.workers);
  }
  const Field X = b.companions["X"];
  certify_points("me residual", pts, [&](const Point& p) { return me_residual(X, me_chart(p)); }, opt.tolerance,
                 opt.workers);
  certify_bundle(b, opt);
  return b;
}

RFamily r_family_build(const MEFamily& fam, const std::string& variant, const CertifyOptions& opt) {
  const bool literal = variant == "literal-theta";
  if (!literal && variant != "canonical") throw CapabilityError("r-family: unknown variant '" + variant + "'");
  auto model = std::make_shared<const MEModel>(fam);
  RFamily out;
  out.variant = variant;
  out.X = make_field("X", std::vector<std::string>{"D", "ybar", "zbar"},
                     [model](const auto& x) { return model->X(x[0], x[1], x[2]); });
  auto r_of = [model](const auto& D, const auto& yb, const auto& zb) {
    return -model->X_bar(D, yb, zb, 1) / model->X_bar(D, yb, zb, 0);
  };
  out.r = make_field("r", std::vector<std::string>{"D", "ybar", "zbar"},
                     [r_of](const auto& x) { return r_of(x[0], x[1], x[2]); });
  const double sign = literal ? -1.0 : 1.0;
  out.Theta = make_field(
      "Theta", std::vector<std::string>{"Delta", "d", "ybar", "zbar"},
      [r_of, sign](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        const S r = r_of(log(x[1]), x[2], x[3]);
        return S(1.0) / (exp(-x[0]) + sign * r);
      },
      [](const Point& p) { return p[1] > 0.0; });

  const auto pts = chart_samples(fam, opt.samples, opt.seed, false);
  const Field Xy = out.X.derivative(1);
  for (const Point& q : pts) {
    if (std::fabs(Xy.value(q)) < 1e-12) throw SingularError("r-family: X_ybar vanishes on the region");
  }
  if (literal) return out;
  certify_points("r-equation", pts, [&](const Point& q) { return r_equation_residual(out.r, q); }, opt.tolerance,
                 opt.workers);
  certify_points(
      "r_D X_ybar^2 = -1", pts,
      [&](const Point& q) {
        const double xy = Xy.value(q);
        return out.r.jet(q, 1).grad(0) * xy * xy + 1.0;
      },
      opt.tolerance, opt.workers);
  const auto tpts = chart_samples(fam, opt.samples, opt.seed + 7, true);
  certify_points("Theta gr2 (scaled)", tpts, [&](const Point& q) { return gr2_scaled_residual(out.Theta, q); }, opt.tolerance,
                 opt.workers);
  out.certified = true;
  return out;
}

}  // namespace heavenly
