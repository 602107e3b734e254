#include "heavenly/symmetry.hpp"

#include <cmath>

namespace heavenly {

std::string to_string(Recurrence r) { return r == Recurrence::SE1 ? "SE1" : "SE2"; }

Recurrence parse_recurrence(const std::string& s) {
  if (s == "SE1" || s == "se1") return Recurrence::SE1;
  if (s == "SE2" || s == "se2") return Recurrence::SE2;
  throw std::invalid_argument("unknown recurrence '" + s + "' (SE1, SE2)");
}

namespace {

const char* kSeedNames[4] = {"v_y", "v_z", "v_ybar", "v_zbar"};

int seed_var(const std::string& seed) {
  for (int i = 0; i < 4; ++i)
    if (seed == kSeedNames[i]) return i;
  throw std::invalid_argument("unknown seed '" + seed + "' (v_y, v_z, v_ybar, v_zbar)");
}

Field d2(const Field& f, int a, int b) { return f.derivative(MultiIndex{a, b}); }

}  // namespace

SymmetrySolution seed_symmetry(const SolutionBundle& b, const std::string& seed) {
  SymmetrySolution s;
  s.theta = b.v.derivative(seed_var(seed));
  s.seed = seed;
  s.base_point = b.base_point;
  return s;
}

std::array<SymmetrySolution, 4> seed_symmetries(const SolutionBundle& b, const CertifyOptions& opt) {
  std::array<SymmetrySolution, 4> out;
  const auto pts = sample_points(b, opt.samples, opt.seed);
  for (int i = 0; i < 4; ++i) {
    out[i] = seed_symmetry(b, kSeedNames[i]);
    const Field th = out[i].theta;
    certify_points(std::string("symmetry seed ") + kSeedNames[i], pts,
                   [&](const Point& p) { return symmetry_residual(b.v, th, p); }, opt.tolerance, opt.workers);
  }
  return out;
}

GradientPair recurrence_step(const SolutionBundle& b, const SymmetrySolution& theta, Recurrence variant) {
  const Field& v = b.v;
  const Field& th = theta.theta;
  GradientPair g;
  if (variant == Recurrence::SE1) {
    g.first = d2(v, kYbar, kY) * th.derivative(kZ) - d2(v, kYbar, kZ) * th.derivative(kY);
    g.second = d2(v, kZbar, kY) * th.derivative(kZ) - d2(v, kZbar, kZ) * th.derivative(kY);
    g.var_first = kYbar;
    g.var_second = kZbar;
  } else {
    g.first = d2(v, kYbar, kY) * th.derivative(kZbar) - d2(v, kZbar, kY) * th.derivative(kYbar);
    g.second = d2(v, kYbar, kZ) * th.derivative(kZbar) - d2(v, kZbar, kZ) * th.derivative(kYbar);
    g.var_first = kY;
    g.var_second = kZ;
  }
  return g;
}

namespace {

void check_segment(const GradientPair& pair, const Point& base, const Point& target, const PathOptions& opt) {
  for (int k = 0; k < 4; ++k) {
    if (k != pair.var_first && k != pair.var_second && base[k] != target[k]) {
      throw std::invalid_argument("path reconstruction: base and target must agree off the integration plane");
    }
  }
  const int n = std::max(opt.integrability_checks, 1);
  for (int i = 0; i <= n + 1; ++i) {
    const double t = static_cast<double>(i) / (n + 1);
    Point q = base;
    for (int k = 0; k < 4; ++k) q[k] = base[k] + t * (target[k] - base[k]);
    if (!pair.first.in_domain(q) || !pair.second.in_domain(q)) {
      throw DomainError("path reconstruction: segment leaves the domain at t = " + format_double(t));
    }
    if (i == 0 || i == n + 1) continue;
    const double r = integrability_residual(pair.first, pair.second, pair.var_first, pair.var_second, q);
    if (!(std::fabs(r) <= opt.integrability_tolerance)) {
      throw IntegrabilityError("path reconstruction: pair is not a gradient (integrability residual " +
                               format_double(r) + " at t = " + format_double(t) + ")");
    }
  }
}

double segment_integral(const GradientPair& pair, const Point& from, const Point& to, const PathOptions& opt) {
  const double di = to[pair.var_first] - from[pair.var_first];
  const double dj = to[pair.var_second] - from[pair.var_second];
  if (di == 0.0 && dj == 0.0) return 0.0;
  auto f = [&](double t) {
    Point q = from;
    q[pair.var_first] += t * di;
    q[pair.var_second] += t * dj;
    double s = 0.0;
    if (di != 0.0) s += pair.first.value(q) * di;
    if (dj != 0.0) s += pair.second.value(q) * dj;
    return s;
  };
  const auto r = adaptive_quadrature(f, 0.0, 1.0, opt.quadrature);
  if (!(r.error <= opt.max_quadrature_error)) {
    throw QuadratureError("path reconstruction: quadrature error " + format_double(r.error) + " above " +
                              format_double(opt.max_quadrature_error),
                          r.value, r.error);
  }
  return r.value;
}

}  // namespace

double reconstruct_by_path(const GradientPair& pair, const Point& base, const Point& target, const PathOptions& opt) {
  check_segment(pair, base, target, opt);
  return segment_integral(pair, base, target, opt);
}

double reconstruct_by_l_path(const GradientPair& pair, const Point& base, const Point& target, const PathOptions& opt) {
  Point corner = base;
  corner[pair.var_first] = target[pair.var_first];
  check_segment(pair, base, corner, opt);
  check_segment(pair, corner, target, opt);
  return segment_integral(pair, base, corner, opt) + segment_integral(pair, corner, target, opt);
}

SymmetrySolution next_symmetry(const SolutionBundle& b, const SymmetrySolution& theta, Recurrence variant) {
  const GradientPair g = recurrence_step(b, theta, variant);
  SymmetrySolution s;
  s.depth = theta.depth + 1;
  s.seed = theta.seed;
  s.variant = variant;
  s.base_point = theta.base_point;
  s.theta = path_integral_field("theta_" + std::to_string(s.depth), g.first, g.second, g.var_first, g.var_second,
                                s.base_point);
  return s;
}

int chain_depth_cap(const SymmetrySolution& seed) {
  // Each level loses one derivative; certification needs second derivatives.
  return std::max(seed.theta.derivative_budget() - 2, 0);
}

std::vector<SymmetrySolution> build_chain(const SolutionBundle& b, const SymmetrySolution& seed, Recurrence variant,
                                          int depth) {
  if (depth < 1) throw std::invalid_argument("chain depth must be at least 1, got " + std::to_string(depth));
  const int cap = chain_depth_cap(seed);
  if (depth > cap) {
    throw CapabilityError("chain depth " + std::to_string(depth) + " exceeds the derivative budget of seed " +
                          seed.seed + " (cap " + std::to_string(cap) + ")");
  }
  std::vector<SymmetrySolution> out;
  SymmetrySolution cur = seed;
  for (int k = 1; k <= depth; ++k) {
    cur = next_symmetry(b, cur, variant);
    out.push_back(cur);
  }
  return out;
}

ResidualReport chain_level_report(const SolutionBundle& b, const SymmetrySolution& level, const std::vector<Point>& pts,
                                  int workers) {
  const Field th = level.theta;
  ResidualReport r = scan_points(
      "symmetry", b.family, [&](const Point& p) { return symmetry_residual(b.v, th, p); }, pts, workers);
  r.level = level.depth;
  r.theta.assign(pts.size(), std::nan(""));
  parallel_for(pts.size(), workers, [&](std::size_t i) {
    if (r.points[i].excluded) return;
    r.theta[i] = th.value(pts[i]);
  });
  r.extra["seed"] = level.seed;
  r.extra["recurrence"] = to_string(level.variant);
  return r;
}

std::vector<ResidualReport> verify_chain(const SolutionBundle& b, const SymmetrySolution& seed, Recurrence variant,
                                         int depth, const ChainOptions& opt) {
  const auto levels = build_chain(b, seed, variant, depth);
  const auto pts = sample_points(b, opt.samples, opt.seed);
  std::vector<ResidualReport> out;
  for (const SymmetrySolution& s : levels) {
    out.push_back(chain_level_report(b, s, pts, opt.workers));
    const ResidualReport& r = out.back();
    if (!(r.max_abs <= opt.tolerance)) {
      throw CertificationError("symmetry chain level " + std::to_string(s.depth) + ": residual " +
                               format_double(r.max_abs) + " exceeds tolerance " + format_double(opt.tolerance));
    }
  }
  return out;
}

}  // namespace heavenly
