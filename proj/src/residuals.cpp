#include "heavenly/residuals.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace heavenly {

const Field& SolutionBundle::companion(const std::string& name) const {
  auto it = companions.find(name);
  if (it == companions.end()) throw CapabilityError("bundle '" + family + "' has no companion field '" + name + "'");
  return it->second;
}

double plebanski_residual(const Field& v, const Point& p) {
  const Jet a = v.derivative(kYbar).jet(p, 1);
  const Jet b = v.derivative(kZbar).jet(p, 1);
  return a.grad(kY) * b.grad(kZ) - b.grad(kY) * a.grad(kZ) - 1.0;
}

double symmetry_residual(const Field& v, const Field& theta, const Point& p) {
  const Jet va = v.derivative(kYbar).jet(p, 1);
  const Jet vb = v.derivative(kZbar).jet(p, 1);
  const Jet ta = theta.derivative(kYbar).jet(p, 1);
  const Jet tb = theta.derivative(kZbar).jet(p, 1);
  return va.grad(kY) * tb.grad(kZ) + ta.grad(kY) * vb.grad(kZ) - vb.grad(kY) * ta.grad(kZ) -
         tb.grad(kY) * va.grad(kZ);
}

namespace {

std::array<double, 4> first_order_from(double vy, double vz, double vyb, double vzb, double vyyb, double vzyb,
                                       double vyzb, double vzzb, const Jet& th, const Point& p) {
  const double y = p[kY], z = p[kZ], yb = p[kYbar], zb = p[kZbar];
  const double ty = th.grad(kY), tz = th.grad(kZ), tyb = th.grad(kYbar), tzb = th.grad(kZbar);
  return {vyb - (vyyb * tz - vzyb * ty + z * vzyb + y * vyyb), vzb - (vyzb * tz - vzzb * ty + z * vzzb + y * vyzb),
          vy - (vyyb * tzb - vyzb * tyb + zb * vyzb + yb * vyyb), vz - (vzyb * tzb - vzzb * tyb + zb * vzzb + yb * vzyb)};
}

double gr2_from(const Jet& t, double delta) {
  const double TDD = t.hess(0, 0), TDd = t.hess(0, 1), TD = t.grad(0);
  const double Tdyb = t.hess(1, 2), Tdzb = t.hess(1, 3), TDyb = t.hess(0, 2), TDzb = t.hess(0, 3);
  return std::exp(delta) * (TDD * Tdzb - TDd * TDzb + TD * Tdzb) - (TDD * Tdyb - TDd * TDyb - TD * Tdyb);
}

double gr2_scale_from(const Jet& t, double delta) {
  const double TDD = t.hess(0, 0), TDd = t.hess(0, 1), TD = t.grad(0);
  const double Tdyb = t.hess(1, 2), Tdzb = t.hess(1, 3), TDyb = t.hess(0, 2), TDzb = t.hess(0, 3);
  return std::exp(delta) * (std::fabs(TDD * Tdzb) + std::fabs(TDd * TDzb) + std::fabs(TD * Tdzb)) +
         std::fabs(TDD * Tdyb) + std::fabs(TDd * TDyb) + std::fabs(TD * Tdyb);
}

}  // namespace

std::array<double, 4> first_order_relations_residual(const Field& v, const Field& theta, const Point& p) {
  const Jet vj = v.jet(p, 1);
  const Jet a = v.derivative(kYbar).jet(p, 1);
  const Jet b = v.derivative(kZbar).jet(p, 1);
  const Jet th = theta.jet(p, 1);
  return first_order_from(vj.grad(kY), vj.grad(kZ), a.value(), b.value(), a.grad(kY), a.grad(kZ), b.grad(kY),
                          b.grad(kZ), th, p);
}

std::array<double, 2> divergence_form_residual(const Field& v, const Point& p) {
  if (v.derivative_budget() < 3) {
    throw CapabilityError("divergence form of " + v.name() + " needs order-3 derivatives; budget is " +
                          std::to_string(v.derivative_budget()));
  }
  const Jet a = v.derivative(kYbar).jet(p, 2);
  const Jet b = v.derivative(kZbar).jet(p, 2);
  const Jet vy = v.derivative(kY).jet(p, 2);
  const Jet vz = v.derivative(kZ).jet(p, 2);
  const Jet a1 = truncate(a, 1), b1 = truncate(b, 1), vy1 = truncate(vy, 1), vz1 = truncate(vz, 1);
  const Jet g1 = a1 * shift(b, kZ) - b1 * shift(a, kZ);
  const Jet g2 = shift(a, kY) * b1 - shift(b, kY) * a1;
  const Jet h1 = vy1 * shift(vz, kZbar) - vz1 * shift(vy, kZbar);
  const Jet h2 = shift(vy, kYbar) * vz1 - shift(vz, kYbar) * vy1;
  return {g1.grad(kY) + g2.grad(kZ) - 2.0, h1.grad(kYbar) + h2.grad(kZbar) - 2.0};
}

double me_residual(const Field& X, const Point& p) {
  const Jet xa = X.derivative(1).jet(p, 1);
  const Jet xb = X.derivative(2).jet(p, 1);
  return xa.value() * xb.grad(0) - xb.value() * xa.grad(0) - 1.0;
}

double gr2_residual(const Field& Theta, const Point& p) { return gr2_from(Theta.jet(p, 2), p[0]); }

double gr2_scaled_residual(const Field& Theta, const Point& p) {
  const Jet t = Theta.jet(p, 2);
  return gr2_from(t, p[0]) / std::max(1.0, gr2_scale_from(t, p[0]));
}

double r_equation_residual(const Field& r, const Point& p) {
  const Jet j = r.jet(p, 2);
  if (j.value() == 0.0) throw SingularError("r-equation: r vanishes at the point");
  const Jet inv = reciprocal(j);
  const double r3 = j.value() * j.value() * j.value();
  return r3 * inv.hess(0, 1) - j.hess(0, 2);
}

double integrability_residual(const Field& g1, const Field& g2, int var1, int var2, const Point& p) {
  return g1.jet(p, 1).grad(var2) - g2.jet(p, 1).grad(var1);
}

Jet fd_oracle(const std::function<double(const Point&)>& f, int arity, const Point& p, double h,
              const DomainFn& domain) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_oracle: step must be positive");
  auto at = [&](int i, double si, int j, double sj) {
    Point q = p;
    if (i >= 0) q[i] += si;
    if (j >= 0) q[j] += sj;
    return q;
  };
  if (domain) {
    for (int i = 0; i < arity; ++i)
      for (double s : {-2 * h, 2 * h})
        if (!domain(at(i, s, -1, 0))) throw DomainError("fd_oracle: stencil leaves the domain");
    if (!domain(p)) throw DomainError("fd_oracle: point outside the domain");
  }
  Jet j = Jet::constant(f(p), arity, 2);
  const double f0 = j.value();
  for (int i = 0; i < arity; ++i) {
    const double fp = f(at(i, h, -1, 0)), fm = f(at(i, -h, -1, 0));
    j.set_grad(i, (fp - fm) / (2 * h));
    j.set_hess(i, i, (fp - 2 * f0 + fm) / (h * h));
    for (int k = i + 1; k < arity; ++k) {
      const double fpp = f(at(i, h, k, h)), fpm = f(at(i, h, k, -h));
      const double fmp = f(at(i, -h, k, h)), fmm = f(at(i, -h, k, -h));
      j.set_hess(i, k, (fpp - fpm - fmp + fmm) / (4 * h * h));
    }
  }
  return j;
}

Jet fd_oracle(const Field& field, const Point& p, double h) {
  return fd_oracle([&](const Point& q) { return field.value(q); }, field.arity(), p, h,
                   [&](const Point& q) { return field.in_domain(q); });
}

namespace fd {

double plebanski(const Field& v, const Point& p, double h) {
  const Jet j = fd_oracle(v, p, h);
  return j.hess(kY, kYbar) * j.hess(kZ, kZbar) - j.hess(kY, kZbar) * j.hess(kZ, kYbar) - 1.0;
}

double symmetry(const Field& v, const Field& theta, const Point& p, double h) {
  const Jet a = fd_oracle(v, p, h);
  const Jet t = fd_oracle(theta, p, h);
  return a.hess(kYbar, kY) * t.hess(kZ, kZbar) + t.hess(kYbar, kY) * a.hess(kZ, kZbar) -
         a.hess(kY, kZbar) * t.hess(kYbar, kZ) - t.hess(kY, kZbar) * a.hess(kYbar, kZ);
}

std::array<double, 4> first_order(const Field& v, const Field& theta, const Point& p, double h) {
  const Jet j = fd_oracle(v, p, h);
  const Jet t = fd_oracle(theta, p, h);
  return first_order_from(j.grad(kY), j.grad(kZ), j.grad(kYbar), j.grad(kZbar), j.hess(kY, kYbar),
                          j.hess(kZ, kYbar), j.hess(kY, kZbar), j.hess(kZ, kZbar), t, p);
}

std::array<double, 2> divergence(const Field& v, const Point& p, double h) {
  auto jet_at = [&](int var, double s) {
    Point q = p;
    q[var] += s;
    return fd_oracle(v, q, h);
  };
  auto g1 = [](const Jet& j) {
    return j.grad(kYbar) * j.hess(kZ, kZbar) - j.grad(kZbar) * j.hess(kZ, kYbar);
  };
  auto g2 = [](const Jet& j) {
    return j.hess(kY, kYbar) * j.grad(kZbar) - j.hess(kY, kZbar) * j.grad(kYbar);
  };
  auto h1 = [](const Jet& j) { return j.grad(kY) * j.hess(kZ, kZbar) - j.grad(kZ) * j.hess(kZbar, kY); };
  auto h2 = [](const Jet& j) { return j.hess(kY, kYbar) * j.grad(kZ) - j.hess(kYbar, kZ) * j.grad(kY); };
  auto d = [&](auto g, int var) { return (g(jet_at(var, h)) - g(jet_at(var, -h))) / (2 * h); };
  return {d(g1, kY) + d(g2, kZ) - 2.0, d(h1, kYbar) + d(h2, kZbar) - 2.0};
}

double me(const Field& X, const Point& p, double h) {
  const Jet j = fd_oracle(X, p, h);
  return j.grad(1) * j.hess(2, 0) - j.grad(2) * j.hess(1, 0) - 1.0;
}

double gr2(const Field& Theta, const Point& p, double h) { return gr2_from(fd_oracle(Theta, p, h), p[0]); }

double r_equation(const Field& r, const Point& p, double h) {
  const Jet j = fd_oracle(r, p, h);
  const Jet inv = fd_oracle([&](const Point& q) { return 1.0 / r.value(q); }, r.arity(), p, h);
  return j.value() * j.value() * j.value() * inv.hess(0, 1) - j.hess(0, 2);
}

double integrability(const Field& g1, const Field& g2, int var1, int var2, const Point& p, double h) {
  return fd_oracle(g1, p, h).grad(var2) - fd_oracle(g2, p, h).grad(var1);
}

}  // namespace fd

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ResidualReport::finalize() {
  evaluated = excluded = 0;
  max_abs = 0.0;
  double sum = 0.0;
  for (const ScanPoint& sp : points) {
    if (sp.excluded) {
      ++excluded;
      continue;
    }
    ++evaluated;
    const double a = std::fabs(sp.value);
    if (!(a <= max_abs)) max_abs = a;  // propagates NaN
    sum += a;
  }
  if (evaluated == 0) throw DomainError(equation + ": empty effective grid (every point excluded)");
  mean_abs = sum / static_cast<double>(evaluated);
}

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json j;
  j["schema"] = 1;
  j["equation"] = equation;
  j["bundle"] = bundle;
  j["sampling"] = sampling;
  j["region"] = {{"lo", region.lo}, {"hi", region.hi}};
  j["resolution"] = resolution;
  if (level >= 0) j["level"] = level;
  j["max_abs"] = max_abs;
  j["mean_abs"] = mean_abs;
  j["evaluated"] = evaluated;
  j["excluded"] = excluded;
  j["grid_size"] = points.size();
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ScanPoint& sp = points[i];
    nlohmann::json e = {{"y", sp.point[0]}, {"z", sp.point[1]}, {"ybar", sp.point[2]}, {"zbar", sp.point[3]}};
    e["residual"] = sp.excluded ? nlohmann::json(nullptr) : nlohmann::json(sp.value);
    e["excluded"] = sp.excluded;
    if (i < theta.size()) e["theta"] = std::isnan(theta[i]) ? nlohmann::json(nullptr) : nlohmann::json(theta[i]);
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

std::string ResidualReport::to_csv() const {
  std::ostringstream os;
  os << "y,z,ybar,zbar,residual,excluded";
  const bool chain = level >= 0;
  if (chain) os << ",level,theta";
  os << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ScanPoint& sp = points[i];
    os << format_double(sp.point[0]) << ',' << format_double(sp.point[1]) << ',' << format_double(sp.point[2])
       << ',' << format_double(sp.point[3]) << ',' << (sp.excluded ? "nan" : format_double(sp.value)) << ','
       << (sp.excluded ? 1 : 0);
    if (chain) os << ',' << level << ',' << (i < theta.size() ? format_double(theta[i]) : "nan");
    os << "\n";
  }
  return os.str();
}

}  // namespace heavenly
