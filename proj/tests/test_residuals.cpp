#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "heavenly/errors.hpp"
#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {
namespace {

// Anchors below come from tests/oracles/derive.py (sympy).
const Point kOnes{1, 1, 1, 1};
const Point kP0{1.2, 1.3, 0.9, 1.1};
const Point kQ1{0.2, 1.5, 0.9, 1.1};

Field flat() {
  return make_field("v", 4, [](const auto& x) { return x[0] * x[2] + x[1] * x[3]; });
}
Field quartic_theta() {
  return make_field("theta", 4, [](const auto& x) { return x[0] * x[3] * x[1] * x[2]; });
}

// ---- plebanski

TEST(Plebanski, FlatSolutionVanishes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(plebanski_residual(flat(), {u(rng), u(rng), u(rng), u(rng)}), 0.0);
}

TEST(Plebanski, RankDeficientIsMinusOne) {
  const Field v = make_field("v", 4, [](const auto& x) { return x[0] * x[2]; });
  EXPECT_EQ(plebanski_residual(v, kP0), -1.0);
}

TEST(Plebanski, AppendixClosedFormAtOnes) {
  const SolutionBundle b = appendix_solution();
  EXPECT_NEAR(plebanski_residual(b.v, kOnes), 0.0, 1e-10);
  EXPECT_NEAR(b.v.value(kOnes), 2.5, 1e-14);
}

// ---- symmetry

TEST(Symmetry, ObviousSeedOfFlatSolution) {
  const Field th = make_field("theta", 4, [](const auto& x) { return -x[3]; });
  EXPECT_EQ(symmetry_residual(flat(), th, kP0), 0.0);
}

TEST(Symmetry, ConstantThetaVanishesOnAnySolution) {
  const SolutionBundle b = appendix_solution();
  EXPECT_EQ(symmetry_residual(b.v, constant_field(3.0), kP0), 0.0);
}

TEST(Symmetry, QuarticThetaAnchors) {
  EXPECT_NEAR(symmetry_residual(flat(), quartic_theta(), kOnes), 2.0, 1e-14);
  EXPECT_NEAR(symmetry_residual(flat(), quartic_theta(), kP0), 2.51, 1e-13);
  EXPECT_NEAR(fd::symmetry(flat(), quartic_theta(), kOnes, 1e-3), 2.0, 1e-6);
}

// ---- first-order relations

TEST(FirstOrder, FlatSolutionWithZeroTheta) {
  const auto c = first_order_relations_residual(flat(), constant_field(0.0), kP0);
  for (double x : c) EXPECT_EQ(x, 0.0);
}

TEST(FirstOrder, QuarticThetaAnchors) {
  const auto c = first_order_relations_residual(flat(), quartic_theta(), kP0);
  const double want[4] = {-1.188, 1.287, -1.404, 1.716};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(c[i], want[i], 1e-13) << i;
}

TEST(FirstOrder, LinearInThetaPerturbation) {
  // theta = eps * y moves only the second component, by exactly eps.
  for (double eps : {-0.5, 0.25, 1.0, 2.0}) {
    const Field th = make_field("theta", 4, [eps](const auto& x) { return eps * x[0]; });
    const auto c = first_order_relations_residual(flat(), th, kP0);
    EXPECT_NEAR(c[0], 0.0, 1e-14);
    EXPECT_NEAR(c[1], eps, 1e-14);
    EXPECT_NEAR(c[2], 0.0, 1e-14);
    EXPECT_NEAR(c[3], 0.0, 1e-14);
  }
}

// ---- divergence forms

TEST(Divergence, FlatAndDegenerate) {
  const auto a = divergence_form_residual(flat(), kP0);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 0.0);
  const Field v = make_field("v", 4, [](const auto& x) { return x[0] * x[2]; });
  const auto b = divergence_form_residual(v, kP0);
  EXPECT_EQ(b[0], -2.0);
  EXPECT_EQ(b[1], -2.0);
}

TEST(Divergence, PolynomialAnchor) {
  const Field v = make_field("v", 4, [](const auto& x) {
    return x[0] * x[2] + x[1] * x[1] * x[3] * x[3] / 4.0 + x[0] * x[3] * x[3] * x[3];
  });
  const auto r = divergence_form_residual(v, kP0);
  EXPECT_NEAR(r[0], 0.86, 1e-13);
  EXPECT_NEAR(r[1], 0.86, 1e-13);
}

TEST(Divergence, NeedsThirdOrder) {
  // A derivative of a jet-only field has budget 2.
  const Field w = make_jet_field("w", 4, [](const std::array<Jet, 4>& x) { return x[0] * (x[0] * x[2] + x[1] * x[3]); });
  const Field v = w.derivative(kY);
  EXPECT_EQ(v.derivative_budget(), 2);
  EXPECT_THROW(divergence_form_residual(v, kP0), CapabilityError);
}

// ---- reduced equations

TEST(ME, Anchors) {
  const Field lin = make_field("X", 3, [](const auto& x) { return x[2] * x[0] + x[1]; });
  const Field trig = make_field("X", 3, [](const auto& x) { return x[2] * sin(x[0]) + x[1] * cos(x[0]); });
  const Field swapped = make_field("X", 3, [](const auto& x) { return x[1] * x[0] + x[2]; });
  const Point p{0.3, 0.9, 1.1, 0.0};
  EXPECT_EQ(me_residual(lin, p), 0.0);
  EXPECT_NEAR(me_residual(trig, p), 0.0, 1e-15);
  EXPECT_EQ(me_residual(swapped, p), -2.0);
}

TEST(GR2, Anchors) {
  const Field bars_free = make_field("T", 4, [](const auto& x) { return x[0] * x[0] * x[1] + x[1] * x[1]; });
  EXPECT_EQ(gr2_residual(bars_free, kQ1), 0.0);
  // Theta_d vanishes identically, so every term does too.
  const Field dy = make_field("T", 4, [](const auto& x) { return x[0] * x[2]; });
  EXPECT_EQ(gr2_residual(dy, kQ1), 0.0);
  const Field mixed = make_field("T", 4, [](const auto& x) { return x[0] * x[1] * x[2] + x[0] * x[0] * x[3]; });
  EXPECT_NEAR(gr2_residual(mixed, kQ1), 0.82829500706233886, 1e-14);
}

TEST(GR2, FlatMapThetaVanishes) {
  // X = zbar D + ybar: r = -D, Theta = 1 / (exp(-Delta) - ln d).
  const Field T = make_field("T", 4, [](const auto& x) { return 1.0 / (exp(-x[0]) - log(x[1])); });
  EXPECT_NEAR(gr2_residual(T, kQ1), 0.0, 1e-9);
}

TEST(REquation, Anchors) {
  const Field rc = constant_field(-1.7, 3);
  EXPECT_EQ(r_equation_residual(rc, {0.3, 0.9, 1.1, 0}), 0.0);
  const Field rlin = make_field("r", 3, [](const auto& x) { return -x[0]; });  // flat map
  EXPECT_NEAR(r_equation_residual(rlin, {0.3, 0.9, 1.1, 0}), 0.0, 1e-15);
  const Field rq = make_field("r", 3, [](const auto& x) { return x[0] * x[1] * x[2]; });
  EXPECT_NEAR(r_equation_residual(rq, {0.3, 0.9, 1.1, 0}), -0.5733, 1e-14);
  EXPECT_THROW(r_equation_residual(rq, {0.0, 0.9, 1.1, 0}), SingularError);
}

TEST(Integrability, Anchors) {
  const Field yb = make_field("g1", 4, [](const auto& x) { return x[2]; });
  const Field y = make_field("g2", 4, [](const auto& x) { return x[0]; });
  const Field zb = make_field("g1", 4, [](const auto& x) { return x[3]; });
  EXPECT_EQ(integrability_residual(yb, y, kYbar, kZbar, kP0), 0.0);
  EXPECT_EQ(integrability_residual(zb, constant_field(0.0), kYbar, kZbar, kP0), 1.0);
}

// ---- oracle equivalence on random smooth fields

struct RandomField {
  std::array<std::array<double, 4>, 3> a{};
  std::array<double, 3> c{}, phase{};
  std::array<std::array<double, 4>, 4> q{};
  double shift = 0.0;

  template <class S>
  S operator()(const std::array<S, 4>& x) const {
    S out = S(shift);
    for (int k = 0; k < 3; ++k) {
      S arg = S(phase[k]);
      for (int i = 0; i < 4; ++i) arg = arg + a[k][i] * x[i];
      out = out + c[k] * sin(arg);
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) out = out + q[i][j] * x[i] * x[j];
    return out;
  }
};

RandomField random_field(std::mt19937_64& rng, double shift = 0.0) {
  std::uniform_real_distribution<double> u(-1, 1);
  RandomField f;
  for (auto& row : f.a)
    for (auto& e : row) e = u(rng);
  for (int k = 0; k < 3; ++k) {
    f.c[k] = u(rng);
    f.phase[k] = 3 * u(rng);
  }
  for (auto& row : f.q)
    for (auto& e : row) e = 0.5 * u(rng);
  f.shift = shift;
  return f;
}

TEST(OracleEquivalence, EveryFunctionalMatchesItsFiniteDifferenceTwin) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  const double h = 1e-3;
  const double tol = std::max(1e-6, 1e3 * h * h);
  for (int trial = 0; trial < 50; ++trial) {
    const Field v = make_field("v", 4, random_field(rng));
    const Field th = make_field("theta", 4, random_field(rng));
    const Field X3 = make_field("X", 3, random_field(rng));
    const Field r3 = make_field("r", 3, random_field(rng, 6.0));
    const Field T = make_field("T", 4, random_field(rng));
    const Point p{u(rng), u(rng), u(rng), u(rng)};
    const Point p3{p[0], p[1], p[2], 0.0};
    EXPECT_NEAR(plebanski_residual(v, p), fd::plebanski(v, p, h), tol) << trial;
    EXPECT_NEAR(symmetry_residual(v, th, p), fd::symmetry(v, th, p, h), tol) << trial;
    const auto a = first_order_relations_residual(v, th, p);
    const auto b = fd::first_order(v, th, p, h);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], tol) << trial;
    const auto da = divergence_form_residual(v, p);
    const auto db = fd::divergence(v, p, h);
    EXPECT_NEAR(da[0], db[0], tol) << trial;
    EXPECT_NEAR(da[1], db[1], tol) << trial;
    EXPECT_NEAR(me_residual(X3, p3), fd::me(X3, p3, h), tol) << trial;
    EXPECT_NEAR(gr2_residual(T, p), fd::gr2(T, p, h), tol) << trial;
    EXPECT_NEAR(r_equation_residual(r3, p3), fd::r_equation(r3, p3, h), tol) << trial;
    EXPECT_NEAR(integrability_residual(v, th, kYbar, kZbar, p), fd::integrability(v, th, kYbar, kZbar, p, h), tol);
  }
}

// ---- bundle properties

std::vector<SolutionBundle> verified_bundles() {
  std::vector<SolutionBundle> out;
  out.push_back(trivial_solution());
  out.push_back(appendix_solution());
  for (const char* name : {"me-f0", "me-harmonic"}) out.push_back(build_family(builtin_descriptor(name), "canonical", {}));
  return out;
}

TEST(BundleProperty, DivergenceFormsVanishOnSolutions) {
  for (const SolutionBundle& b : verified_bundles()) {
    for (const Point& p : sample_points(b, 6, 5)) {
      const auto d = divergence_form_residual(b.v, p);
      EXPECT_LE(std::fabs(d[0]), 1e-7) << b.family;
      EXPECT_LE(std::fabs(d[1]), 1e-7) << b.family;
    }
  }
}

TEST(BundleProperty, DerivativeFieldsAreSymmetries) {
  for (const SolutionBundle& b : verified_bundles()) {
    for (const Point& p : sample_points(b, 4, 9)) {
      for (int w = 0; w < 4; ++w) EXPECT_LE(std::fabs(symmetry_residual(b.v, b.v.derivative(w), p)), 1e-7) << b.family;
    }
  }
}

// ---- scans and reports

TEST(Scan, TrivialGrid) {
  const ResidualReport r = scan("plebanski", trivial_solution(), {{1, 1, 1, 1}, {2, 2, 2, 2}}, {5, 5, 5, 5});
  EXPECT_EQ(r.points.size(), 625u);
  EXPECT_EQ(r.excluded, 0u);
  EXPECT_LE(r.max_abs, 1e-12);
}

TEST(Scan, AppendixAcrossTheBranch) {
  const Region wide{{0.2, 0.2, 0.5, 0.5}, {2.0, 2.0, 1.5, 1.5}};
  const ResidualReport r = scan("plebanski", appendix_solution(), wide, {5, 5, 3, 3});
  EXPECT_GT(r.excluded, 0u);
  EXPECT_GT(r.evaluated, 0u);
  EXPECT_LE(r.max_abs, 1e-9);
  for (const ScanPoint& sp : r.points) {
    const double s = sp.point[0] * sp.point[1] + std::log(sp.point[1] / sp.point[0]);
    EXPECT_EQ(sp.excluded, !(s > 0)) << s;
  }
}

TEST(Scan, EmptyEffectiveGridIsAnError) {
  const Region bad{{2.0, 0.01, 1, 1}, {3.0, 0.02, 2, 2}};  // yz + ln(z/y) < 0 everywhere
  EXPECT_THROW(scan("plebanski", appendix_solution(), bad, {3, 3, 2, 2}), DomainError);
}

TEST(Scan, UnknownEquationIsRejected) {
  EXPECT_THROW(equation_functional("no-such-equation", trivial_solution()), CapabilityError);
}

TEST(ReportProperty, AggregatesAreConsistent) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point> pts(1 + rng() % 40);
    for (auto& p : pts) p = {u(rng), u(rng), u(rng), u(rng)};
    auto fn = [](const Point& p) {
      if (p[0] < -0.5) throw DomainError("cut");
      return p[1] * p[2] - p[3];
    };
    bool any = false;
    for (const auto& p : pts) any = any || p[0] >= -0.5;
    if (!any) {
      EXPECT_THROW(scan_points("t", "b", fn, pts), DomainError);
      continue;
    }
    const ResidualReport r = scan_points("t", "b", fn, pts, 1 + trial % 4);
    EXPECT_GE(r.max_abs, r.mean_abs);
    EXPECT_GE(r.mean_abs, 0.0);
    EXPECT_EQ(r.evaluated + r.excluded, pts.size());
  }
}

TEST(Report, JsonAndCsvLayout) {
  const ResidualReport r = scan("plebanski", appendix_solution(), {{0.2, 0.2, 0.5, 0.5}, {2, 2, 1.5, 1.5}}, {3, 3, 2, 2});
  const auto j = r.to_json();
  for (const char* key : {"equation", "bundle", "region", "resolution", "max_abs", "mean_abs", "evaluated", "excluded",
                          "grid_size", "points"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["points"].size(), 36u);
  EXPECT_EQ(j["grid_size"], 36);
  std::istringstream csv(r.to_csv());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "y,z,ybar,zbar,residual,excluded");
  int rows = 0, excluded = 0;
  while (std::getline(csv, line)) {
    ++rows;
    if (line.substr(line.size() - 2) == ",1") ++excluded;
  }
  EXPECT_EQ(rows, 36);
  EXPECT_EQ(static_cast<std::size_t>(excluded), r.excluded);
}

TEST(Report, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(x)), x);
}

}  // namespace
}  // namespace heavenly
