#include <cmath>
#include <random>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {

std::vector<Point> sample_region(const Region& r, int n, std::uint64_t seed, const DomainFn& accept) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> out;
  const long max_attempts = 200L * std::max(n, 1);
  for (long attempt = 0; static_cast<int>(out.size()) < n && attempt < max_attempts; ++attempt) {
    Point p;
    for (int i = 0; i < 4; ++i) p[i] = r.lo[i] + u(rng) * (r.hi[i] - r.lo[i]);
    if (!accept || accept(p)) out.push_back(p);
  }
  if (static_cast<int>(out.size()) < n) {
    throw DomainError("sampling: only " + std::to_string(out.size()) + " of " + std::to_string(n) +
                      " points found inside the domain");
  }
  return out;
}

std::vector<Point> sample_points(const SolutionBundle& b, int n, std::uint64_t seed) {
  return sample_region(b.region, n, seed, [&b](const Point& p) {
    try {
      b.v_ybar.value(p);
      b.v_zbar.value(p);
      return true;
    } catch (const DomainError&) {
      return false;
    }
  });
}

void certify_points(const std::string& what, const std::vector<Point>& pts,
                    const std::function<double(const Point&)>& fn, double tol, int workers) {
  std::vector<double> r(pts.size());
  parallel_for(pts.size(), workers, [&](std::size_t i) { r[i] = fn(pts[i]); });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(std::fabs(r[i]) <= tol)) {
      const Point& p = pts[i];
      throw CertificationError(what + ": residual " + format_double(r[i]) + " exceeds tolerance " +
                               format_double(tol) + " at (" + format_double(p[0]) + ", " + format_double(p[1]) +
                               ", " + format_double(p[2]) + ", " + format_double(p[3]) + ")");
    }
  }
}

void certify_bundle(SolutionBundle& b, const CertifyOptions& opt) {
  const auto pts = sample_points(b, opt.samples, opt.seed);
  certify_points(b.family + " integrability of (v_ybar, v_zbar)", pts,
                 [&](const Point& p) { return integrability_residual(b.v_ybar, b.v_zbar, kYbar, kZbar, p); },
                 opt.tolerance, opt.workers);
  certify_points(b.family + " plebanski", pts, [&](const Point& p) { return plebanski_residual(b.v, p); },
                 opt.tolerance, opt.workers);
  b.certified = true;
}

SolutionBundle trivial_solution() {
  SolutionBundle b;
  b.family = "trivial";
  b.v = make_field("v", 4, [](const auto& x) { return x[0] * x[2] + x[1] * x[3]; });
  b.v_ybar = b.v.derivative(kYbar);
  b.v_zbar = b.v.derivative(kZbar);
  b.companions["theta"] = constant_field(0.0, 4, "theta");
  b.region = {{1.0, 1.0, 1.0, 1.0}, {2.0, 2.0, 2.0, 2.0}};
  b.base_point = {0.0, 0.0, 0.0, 0.0};
  b.provenance = {{"family", "trivial"}, {"form", "y*ybar + z*zbar"}};
  b.certified = true;
  return b;
}

SolutionBundle appendix_solution(const std::string& variant, const CertifyOptions& opt) {
  const bool literal = variant == "literal-d";
  if (!literal && variant != "canonical") throw CapabilityError("appendix: unknown variant '" + variant + "'");
  auto branch = [literal](double y, double z) { return y * z + (literal ? z / y : std::log(z / y)); };
  DomainFn domain = [branch](const Point& p) { return p[0] > 0 && p[1] > 0 && branch(p[0], p[1]) > 0; };
  SolutionBundle b;
  b.family = "appendix";
  b.variant = variant;
  b.v = make_field(
      "v", 4,
      [literal](const auto& x) {
        using S = std::decay_t<decltype(x[0])>;
        const S D = literal ? x[1] / x[0] : log(x[1] / x[0]);
        const S yz = x[0] * x[1];
        return ((2.0 * yz + D) * x[2] - 0.5 * x[2] * x[2] + x[3]) * sqrt(yz + D);
      },
      domain);
  b.v_ybar = b.v.derivative(kYbar);
  b.v_zbar = b.v.derivative(kZbar);
  b.companions["psi"] = make_field(
      "psi", 4,
      [literal](const auto& x) { return x[0] * x[1] + (literal ? x[1] / x[0] : log(x[1] / x[0])); }, domain);
  b.companions["exp_delta"] = make_field(
      "exp_delta", 4,
      [literal](const auto& x) { return 2.0 * x[0] * x[1] + (literal ? x[1] / x[0] : log(x[1] / x[0])) - x[2]; },
      domain);
  b.region = {{0.5, 0.5, 0.5, 0.5}, {3.0, 3.0, 2.0, 2.0}};
  b.base_point = {1.0, 1.0, 1.0, 1.0};
  b.provenance = {{"family", "appendix"}, {"variant", variant}};
  if (!literal) {
    CertifyOptions o = opt;
    o.tolerance = std::min(opt.tolerance, 1e-10);
    certify_bundle(b, o);
  }
  return b;
}

}  // namespace heavenly
