#include <cmath>

#include "heavenly/residuals.hpp"

namespace heavenly {

namespace {

double signed_max(const double* v, std::size_t n) {
  double best = v[0];
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs(v[i]) > std::fabs(best) || std::isnan(v[i])) best = v[i];
  return best;
}

}  // namespace

std::vector<std::string> equation_names() {
  return {"plebanski", "integrability", "divergence", "first_order", "symmetry_seeds", "direct_check",
          "reduced_static", "me"};
}

PointResidual equation_functional(const std::string& eq, const SolutionBundle& b) {
  if (eq == "plebanski") return [&b](const Point& p) { return plebanski_residual(b.v, p); };
  if (eq == "integrability") {
    return [&b](const Point& p) { return integrability_residual(b.v_ybar, b.v_zbar, kYbar, kZbar, p); };
  }
  if (eq == "divergence") {
    return [&b](const Point& p) {
      auto r = divergence_form_residual(b.v, p);
      return signed_max(r.data(), r.size());
    };
  }
  if (eq == "first_order") {
    const Field& theta = b.companion("theta");
    const Field v = b.has("v_potential") ? b.companion("v_potential") : b.v;
    return [theta, v](const Point& p) {
      auto r = first_order_relations_residual(v, theta, p);
      return signed_max(r.data(), r.size());
    };
  }
  if (eq == "symmetry_seeds") {
    return [&b](const Point& p) {
      double r[4];
      for (int w = 0; w < 4; ++w) r[w] = symmetry_residual(b.v, b.v.derivative(w), p);
      return signed_max(r, 4);
    };
  }
  if (eq == "direct_check") {
    const Field& e = b.companion("exp_delta");
    const Field& a = b.companion("psi");
    return [e, a](const Point& p) {
      const Jet je = e.jet(p, 1), ja = a.jet(p, 1);
      return 0.5 * (je.grad(kY) * ja.grad(kZ) - je.grad(kZ) * ja.grad(kY)) - 1.0;
    };
  }
  if (eq == "reduced_static") {
    const Field& vr = b.companion("v_reduced");
    return [vr](const Point& p) {
      const Point q{p[kZ] + p[kZbar], p[kY], p[kYbar], 0.0};
      const Jet j = vr.jet(q, 2);
      return j.hess(1, 2) * j.hess(0, 0) - j.hess(1, 0) * j.hess(0, 2) - 1.0;
    };
  }
  if (eq == "me") {
    const Field& X = b.companion("X");
    return [X](const Point& p) {
      if (!(p[kY] > 0.0 && p[kZ] > 0.0)) throw DomainError("me chart needs y > 0 and z > 0");
      return me_residual(X, {std::log(p[kZ] / p[kY]), p[kYbar], p[kZbar], 0.0});
    };
  }
  throw CapabilityError("unknown equation '" + eq + "'");
}

ResidualReport scan_points(const std::string& equation, const std::string& bundle_name, const PointResidual& fn,
                           const std::vector<Point>& pts, int workers) {
  ResidualReport rep;
  rep.equation = equation;
  rep.bundle = bundle_name;
  rep.sampling = "sample";
  rep.points.resize(pts.size());
  parallel_for(pts.size(), workers, [&](std::size_t i) {
    rep.points[i].point = pts[i];
    try {
      rep.points[i].value = fn(pts[i]);
    } catch (const DomainError& e) {
      rep.points[i].excluded = true;
      rep.points[i].reason = e.what();
    }
  });
  if (!pts.empty()) {
    rep.region.lo = rep.region.hi = pts[0];
    for (const Point& p : pts)
      for (int i = 0; i < 4; ++i) {
        rep.region.lo[i] = std::min(rep.region.lo[i], p[i]);
        rep.region.hi[i] = std::max(rep.region.hi[i], p[i]);
      }
  }
  rep.resolution = {static_cast<int>(pts.size()), 1, 1, 1};
  rep.finalize();
  return rep;
}

ResidualReport scan(const std::string& equation, const SolutionBundle& bundle, const Region& region,
                    const Resolution& resolution, int workers) {
  PointResidual fn = equation_functional(equation, bundle);
  ResidualReport rep;
  rep.equation = equation;
  rep.bundle = bundle.family + (bundle.variant == "canonical" ? "" : ":" + bundle.variant);
  rep.region = region;
  rep.resolution = resolution;
  rep.points = grid_scan(fn, region, resolution, workers);
  rep.finalize();
  return rep;
}

}  // namespace heavenly
