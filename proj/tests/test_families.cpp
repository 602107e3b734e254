#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heavenly/errors.hpp"
#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"

namespace heavenly {
namespace {

using nlohmann::json;

// Anchors come from tests/oracles/derive.py (sympy / mpmath).
const Point kOnes{1, 1, 1, 1};
const Point kP0{1.2, 1.3, 0.9, 1.1};
const Point kQ1{0.2, 1.5, 0.9, 1.1};

json poly(std::initializer_list<std::pair<double, std::vector<int>>> terms) {
  json t = json::array();
  for (const auto& [c, pw] : terms) t.push_back({{"c", c}, {"pow", pw}});
  return {{"terms", t}};
}

SolutionBundle build(const json& doc, const std::string& variant = "canonical", CertifyOptions opt = {}) {
  return build_family(doc, variant, opt);
}

// ---- appendix closed form

TEST(Appendix, ValueAndDerivativeFields) {
  const SolutionBundle b = appendix_solution();
  EXPECT_TRUE(b.certified);
  EXPECT_NEAR(b.v.value(kOnes), 2.5, 1e-14);
  EXPECT_NEAR(plebanski_residual(b.v, kOnes), 0.0, 1e-12);
  const double y = kP0[0], z = kP0[1], yb = kP0[2];
  const double s = y * z + std::log(z / y);
  EXPECT_NEAR(b.v_zbar.value(kP0), std::sqrt(s), 1e-14);
  EXPECT_NEAR(b.v_ybar.value(kP0), (2 * y * z + std::log(z / y) - yb) * std::sqrt(s), 1e-14);
  EXPECT_NEAR(b.v.derivative(kZbar).value(kP0), b.v_zbar.value(kP0), 1e-14);
}

TEST(Appendix, OutsideBranchIsADomainError) {
  const SolutionBundle b = appendix_solution();
  EXPECT_THROW(b.v.value({1.0, 0.1, 1.0, 1.0}), DomainError);
}

TEST(Appendix, LiteralVariantIsUncertifiedAndFails) {
  const SolutionBundle b = appendix_solution("literal-d");
  EXPECT_FALSE(b.certified);
  EXPECT_NEAR(plebanski_residual(b.v, kOnes), 0.0, 1e-12);
  EXPECT_NEAR(plebanski_residual(b.v, kP0), 0.083333333333333333, 1e-12);
  EXPECT_THROW(appendix_solution("no-such-variant"), CapabilityError);
}

// ---- static family

json static_doc(json modes) { return {{"kind", "static"}, {"modes", modes}}; }

TEST(Static, LinearGeneratorGivesQuadraticPotential) {
  const SolutionBundle b = build(builtin_descriptor("static-linear"));
  // v = (z + zbar)^2 / 2 + y ybar up to an additive constant.
  const double s = kP0[1] + kP0[3];
  const double want = s * s / 2 + kP0[0] * kP0[2];
  const double c = b.v.value(kOnes) - 2.0 - 1.0;
  EXPECT_NEAR(b.v.value(kP0) - c, want, 1e-12);
  EXPECT_NEAR(plebanski_residual(b.v, kP0), 0.0, 1e-12);
}

TEST(Static, GeneratorWithoutMomentumCouplingIsSingular) {
  // L = p^2 ybar - y ybar^2: L_y = -ybar^2 has no p dependence.
  const json modes = json::array({{{"type", "polynomial"}, {"poly", poly({{1.0, {2, 0, 1}}, {-1.0, {0, 1, 2}}})}}});
  EXPECT_THROW(build(static_doc(modes)), SingularError);
}

TEST(Static, CoupledQuadraticGeneratorCertifies) {
  // L = p y + p^2 ybar - y ybar^2 is harmonic and solvable; v is the closed form from the oracle.
  const json modes = json::array(
      {{{"type", "polynomial"}, {"poly", poly({{1.0, {1, 1, 0}}, {1.0, {2, 0, 1}}, {-1.0, {0, 1, 2}}})}}});
  const SolutionBundle b = build(static_doc(modes));
  EXPECT_TRUE(b.certified);
  auto closed = [](const Point& p) {
    const double y = p[0], z = p[1], yb = p[2], zb = p[3];
    return y * yb + std::pow(yb, 4) / 2 + yb * yb * z + yb * yb * zb + z * z / 2 + z * zb + zb * zb / 2;
  };
  const double c = b.v.value(kOnes) - closed(kOnes);
  EXPECT_NEAR(b.v.value(kP0) - c, closed(kP0), 1e-10);
  EXPECT_NEAR(closed(kP0), 6.23205, 1e-12);
}

TEST(Static, ExpTrigModeCertifies) {
  // L = p y + exp(y + ybar) cos p.
  const json modes = json::array({{{"type", "polynomial"}, {"poly", poly({{1.0, {1, 1, 0}}})}},
                                  {{"type", "exp-trig"}, {"amplitude", 1.0}, {"a", 1.0}, {"b", 1.0}}});
  json doc = static_doc(modes);
  doc["region"] = {{"lo", {0.9, 0.9, 0.9, 0.9}}, {"hi", {1.1, 1.1, 1.1, 1.1}}};
  const SolutionBundle b = build(doc);
  EXPECT_TRUE(b.certified);
  for (const Point& p : sample_points(b, 20, 4)) {
    EXPECT_LE(std::fabs(plebanski_residual(b.v, p)), 1e-8);
    const double pv = b.companion("p").value(p);
    EXPECT_NEAR(pv + std::exp(p[0] + p[2]) * std::cos(pv), p[1] + p[3], 1e-12);
  }
}

TEST(Static, NonHarmonicModesAreRejected) {
  const json modes = json::array({{{"type", "polynomial"}, {"poly", poly({{1.0, {1, 1, 0}}, {1.0, {2, 0, 0}}})}}});
  EXPECT_THROW(build(static_doc(modes)), CertificationError);
}

TEST(Static, ReducedAndFullResidualsAgree) {
  const json modes = json::array(
      {{{"type", "polynomial"}, {"poly", poly({{1.0, {1, 1, 0}}, {1.0, {2, 0, 1}}, {-1.0, {0, 1, 2}}})}}});
  const SolutionBundle b = build(static_doc(modes));
  const auto reduced = equation_functional("reduced_static", b);
  for (const Point& p : sample_points(b, 30, 8)) EXPECT_NEAR(reduced(p), plebanski_residual(b.v, p), 1e-9);
}

// ---- second-order ODE family

TEST(ME, FlatForceClosedForm) {
  const SolutionBundle b = build(builtin_descriptor("me-f0"));
  EXPECT_NEAR(b.v_ybar.value(kP0), 1.2489995996796796, 1e-14);
  EXPECT_NEAR(b.v_zbar.value(kP0), 1.0999733098415246, 1e-14);
  EXPECT_NEAR(plebanski_residual(b.v, kP0), 0.0, 1e-10);
  const auto fs = first_order_relations_residual(b.companion("v_potential"), b.companion("theta"), kP0);
  for (double c : fs) EXPECT_NEAR(c, 0.0, 1e-12);
  // The same field against an independent finite-difference evaluation.
  EXPECT_NEAR(fd::plebanski(b.v, kP0, 1e-3), 0.0, 1e-6);
}

TEST(ME, HarmonicNumericMatchesClosedForm) {
  const SolutionBundle num = build(builtin_descriptor("me-harmonic"));
  json closed = builtin_descriptor("me-harmonic");
  closed["solver"] = "closed";
  const SolutionBundle cf = build(closed);
  const Field& Xn = num.companion("X");
  const Field& Xc = cf.companion("X");
  for (double D : {-2.0, -1.3, -0.4, 0.0, 0.7, 1.5, 2.0}) {
    const Point q{D, 0.9, 1.1, 0.0};
    EXPECT_NEAR(Xn.value(q), 1.1 * std::sin(D) + 0.9 * std::cos(D), 1e-9) << D;
    EXPECT_NEAR(Xc.value(q), Xn.value(q), 1e-9) << D;
  }
  EXPECT_NEAR(me_residual(Xn, {0.3, 0.9, 1.1, 0.0}), 0.0, 1e-9);
  for (const Point& p : sample_points(num, 10, 3)) {
    EXPECT_LE(std::fabs(plebanski_residual(num.v, p)), 1e-8);
    EXPECT_NEAR(num.v_ybar.value(p), cf.v_ybar.value(p), 1e-9);
  }
}

TEST(ME, GaugeDoesNotAffectTheResidual) {
  const SolutionBundle b = build(builtin_descriptor("me-f0"));
  const Field f = make_field("gauge", 4, [](const auto& x) { return sin(x[0] * x[1]) + x[0] * x[0] * x[1]; });
  const Field vg = b.v + f;
  for (const Point& p : sample_points(b, 8, 2)) EXPECT_NEAR(plebanski_residual(vg, p), plebanski_residual(b.v, p), 1e-12);
}

TEST(MEProperty, ShearStacksKeepUnitJacobian) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    json doc = builtin_descriptor("me-f0");
    doc["cmap"] = json::array();
    const int steps = 1 + trial % 3;
    for (int k = 0; k < steps; ++k) {
      doc["cmap"].push_back({{"shift", (k + trial) % 2 ? "c2" : "c1"},
                             {"poly", poly({{u(rng), {1}}, {u(rng), {2}}, {0.1 * u(rng), {3}}})}});
    }
    const SolutionBundle b = build(doc);
    const Field c1 = b.companion("c1"), c2 = b.companion("c2");
    for (const Point& p : sample_points(b, 5, trial)) {
      const Jet j1 = c1.jet(p, 1), j2 = c2.jet(p, 1);
      EXPECT_NEAR(j2.grad(kYbar) * j1.grad(kZbar) - j2.grad(kZbar) * j1.grad(kYbar), 1.0, 1e-10);
    }
  }
}

TEST(ME, NonlinearForceCertifiesWithConservedWronskian) {
  json doc = builtin_descriptor("me-harmonic");
  doc["force"] = poly({{-1.0, {1, 0}}, {-0.1, {3, 0}}, {0.05, {0, 1}}});
  doc["wronskian_tolerance"] = 1e-8;
  const SolutionBundle b = build(doc);
  EXPECT_TRUE(b.certified);
  for (const Point& p : sample_points(b, 10, 6)) EXPECT_LE(std::fabs(plebanski_residual(b.v, p)), 1e-8);
}

TEST(ME, NonPositiveYZIsADomainError) {
  const SolutionBundle b = build(builtin_descriptor("me-f0"));
  EXPECT_THROW(b.v_ybar.value({-1.0, 1.0, 1.0, 1.0}), DomainError);
}

// ---- r-family

MEFamily me_from(const json& doc) { return me_family_from_json(doc); }

TEST(RFamily, FlatForceIdentities) {
  const RFamily rf = r_family_build(me_from(builtin_descriptor("me-f0")));
  EXPECT_TRUE(rf.certified);
  const Point q{0.3, 0.9, 1.1, 0.0};
  EXPECT_NEAR(rf.r.value(q), -0.3, 1e-14);
  const Jet r = rf.r.jet(q, 1);
  const Jet X = rf.X.jet(q, 1);
  EXPECT_NEAR(r.grad(0) * X.grad(1) * X.grad(1), -1.0, 1e-12);
  EXPECT_NEAR(rf.Theta.value(kQ1), 2.4197511024005738, 1e-13);
  EXPECT_NEAR(gr2_residual(rf.Theta, kQ1), 0.0, 1e-10);
}

TEST(RFamily, HarmonicForce) {
  const RFamily rf = r_family_build(me_from(builtin_descriptor("me-harmonic")));
  EXPECT_NEAR(rf.r.value({0.3, 1.0, 1.0, 0.0}), -0.30933624960962323, 1e-9);
  for (double D : {-0.4, 0.1, 0.5})
    EXPECT_LE(std::fabs(r_equation_residual(rf.r, {D, 0.95, 1.05, 0.0})), 1e-9);
}

json two_shear() {
  json doc = builtin_descriptor("me-f0");
  doc["cmap"] = json::array({{{"shift", "c1"}, {"poly", poly({{1.0, {2}}})}},
                             {{"shift", "c2"}, {"poly", poly({{1.0, {2}}})}}});
  return doc;
}

TEST(RFamily, TwoShearMapSelectsTheThetaSign) {
  const RFamily canon = r_family_build(me_from(two_shear()));
  EXPECT_TRUE(canon.certified);
  EXPECT_NEAR(canon.r.value({0.3, 0.9, 1.1, 0.0}), -0.48954372623574144, 1e-12);
  EXPECT_NEAR(gr2_residual(canon.Theta, kQ1), 0.0, 1e-10);
  const RFamily lit = r_family_build(me_from(two_shear()), "literal-theta");
  EXPECT_FALSE(lit.certified);
  EXPECT_NEAR(gr2_residual(lit.Theta, kQ1), 0.0063996027059847003, 1e-11);
}

TEST(RFamily, TwoShearBundleCertifies) {
  const SolutionBundle b = build(two_shear());
  EXPECT_NEAR(me_residual(b.companion("X"), {0.3, 0.9, 1.1, 0.0}), 0.0, 1e-12);
  for (const Point& p : sample_points(b, 6, 1)) EXPECT_LE(std::fabs(plebanski_residual(b.v, p)), 1e-8);
}

// ---- implicit Monge-Ampere family

TEST(ImplicitMA, AppendixInstance) {
  const SolutionBundle b = build(builtin_descriptor("implicit-ma"));
  EXPECT_NEAR(b.companion("exp_delta").value(kOnes), 1.0, 1e-12);
  EXPECT_NEAR(b.companion("psi").value(kOnes), 1.0, 1e-12);
  EXPECT_NEAR(b.v_ybar.value(kOnes), 1.0, 1e-12);
  EXPECT_NEAR(b.v_zbar.value(kOnes), 1.0, 1e-12);
  const auto direct = equation_functional("direct_check", b);
  for (const Point& p : sample_points(b, 20, 12)) {
    const double y = p[0], z = p[1], yb = p[2], D = std::log(z / y);
    EXPECT_NEAR(b.companion("psi").value(p), y * z + D, 1e-9);
    EXPECT_NEAR(b.companion("exp_delta").value(p), 2 * y * z + D - yb, 1e-9);
    EXPECT_NEAR(direct(p), 0.0, 1e-10);
  }
}

TEST(ImplicitMA, AgreesWithAppendixClosedForm) {
  const SolutionBundle ma = build(builtin_descriptor("implicit-ma"));
  const SolutionBundle ap = appendix_solution();
  for (const Point& p : sample_points(ma, 20, 13)) {
    EXPECT_NEAR(ma.v_ybar.value(p), ap.v_ybar.value(p), 1e-9);
    EXPECT_NEAR(ma.v_zbar.value(p), ap.v_zbar.value(p), 1e-9);
  }
}

TEST(ImplicitMA, ShiftedForce) {
  // F = (D + psi)^2 / 2 + psi.
  // e^Delta = 2yz + D - ybar - 1 vanishes at (1,1,1,1), so anchor elsewhere.
  json doc = {{"kind", "implicit-ma"},
              {"F", poly({{0.5, {2, 0}}, {1.0, {1, 1}}, {0.5, {0, 2}}, {1.0, {0, 1}}})},
              {"base_point", {1.2, 1.3, 0.9, 1.1}}};
  const SolutionBundle b = build(doc);
  EXPECT_TRUE(b.certified);
  for (const Point& p : sample_points(b, 20, 14)) {
    const double y = p[0], z = p[1], yb = p[2], D = std::log(z / y);
    EXPECT_NEAR(b.companion("exp_delta").value(p), 2 * y * z + D - yb - 1, 1e-9);
    EXPECT_LE(std::fabs(plebanski_residual(b.v, p)), 1e-8);
  }
}

TEST(ImplicitMA, BranchViolationNamesThePoint) {
  const SolutionBundle b = build(builtin_descriptor("implicit-ma"));
  try {
    b.v_ybar.value({1.0, 0.1, 1.0, 1.0});  // yz + D < 0
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("at (1, 0.1"), std::string::npos) << e.what();
  }
}

TEST(ImplicitMA, NoCouplingIsSingular) {
  json doc = {{"kind", "implicit-ma"}, {"F", poly({{0.5, {2, 0}}, {0.5, {0, 2}}})}};
  EXPECT_THROW(build(doc), SingularError);
}

// ---- Theta-split family

TEST(ThetaSplit, LinearProfile) {
  const SolutionBundle b = build(builtin_descriptor("theta-split"));
  EXPECT_TRUE(b.certified);
  EXPECT_NEAR(b.v_ybar.value(kP0), 3.4819019710930785, 1e-12);
  EXPECT_NEAR(b.v_zbar.value(kP0), 0.73167320051169823, 1e-12);
  EXPECT_NEAR(b.companion("Delta").value(kP0), kP0[0] * kP0[1], 1e-12);
  EXPECT_NEAR(b.companion("Theta").value(kQ1), 0.47975835447868754, 1e-11);
  EXPECT_NEAR(gr2_residual(b.companion("Theta"), kQ1), 0.0, 1e-9);
  EXPECT_NEAR(plebanski_residual(b.v, kP0), 0.0, 1e-9);
}

TEST(ThetaSplit, LiteralSignDeterminantFlips) {
  // Q = -Delta ln d with yz + Q_D = 0 also gives Delta = yz, but the
  // determinant is -1.
  json doc = builtin_descriptor("theta-split");
  doc["Q"] = poly({{-1.0, {1, 1}}});
  const SolutionBundle b = build(doc, "literal-sign");
  EXPECT_FALSE(b.certified);
  EXPECT_NEAR(b.companion("Delta").value(kP0), kP0[0] * kP0[1], 1e-12);
  EXPECT_NEAR(plebanski_residual(b.v, kP0), -2.0, 1e-9);
}

TEST(ThetaSplit, FlatProfileGivesBarIndependentTheta) {
  // p = 0: Theta = Q(ln d, Delta) carries no bar dependence, so gr2 vanishes term by term.
  json doc = builtin_descriptor("theta-split");
  doc["p"] = {{"terms", json::array()}};
  doc["Q"] = poly({{1.0, {1, 1}}, {1.0, {0, 2}}});
  const SolutionBundle b = build(doc);
  EXPECT_TRUE(b.certified);
  const Field& T = b.companion("Theta");
  EXPECT_EQ(gr2_residual(T, kQ1), 0.0);
  EXPECT_EQ(T.jet(kQ1, 1).grad(kYbar), 0.0);
  EXPECT_EQ(T.jet(kQ1, 1).grad(kZbar), 0.0);
}

TEST(ThetaSplit, QWithoutDDependenceIsSingular) {
  json doc = builtin_descriptor("theta-split");
  doc["Q"] = poly({{1.0, {0, 2}}});
  EXPECT_THROW(build(doc), SingularError);
}

// ---- descriptors

TEST(Descriptors, UnknownKeysCarryTheirPointer) {
  json doc = two_shear();
  doc["cmap"][1]["sheer"] = 1;
  try {
    build(doc);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/cmap/1/sheer");
  }
  try {
    build({{"kind", "static"}, {"modes", json::array({{{"type", "exp-trig"}, {"a", 1.0}, {"b", -1.0}}})}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer().rfind("/modes/0", 0), 0u) << e.pointer();
  }
}

TEST(Descriptors, KindAndShapeErrors) {
  EXPECT_THROW(build({{"kind", "nope"}}), ConfigError);
  EXPECT_THROW(build(json::object()), ConfigError);
  EXPECT_THROW(build({{"kind", "me"}, {"solver", "rk4"}}), ConfigError);
  EXPECT_THROW(build({{"kind", "me"}, {"force", {{"terms", {{{"c", 1.0}, {"pow", {1}}}}}}}}), ConfigError);
  EXPECT_THROW(build({{"kind", "theta-split"}, {"p", poly({{1.0, {1, 0}}})}}), ConfigError);
  EXPECT_THROW(build({{"kind", "trivial"}}, "literal-d"), CapabilityError);
}

TEST(Descriptors, EveryBuiltinBuildsAndCertifies) {
  for (const std::string& name : builtin_names()) {
    const SolutionBundle b = build(builtin_descriptor(name));
    EXPECT_TRUE(b.certified) << name;
  }
  EXPECT_THROW(builtin_descriptor("nope"), ConfigError);
}

// ---- invariants over every certified bundle

std::vector<SolutionBundle> all_bundles() {
  std::vector<SolutionBundle> out;
  for (const std::string& name : builtin_names()) out.push_back(build(builtin_descriptor(name)));
  out.push_back(build(two_shear()));
  return out;
}

TEST(FamilyProperty, PairIsIntegrableOnRandomPoints) {
  for (const SolutionBundle& b : all_bundles()) {
    for (const Point& p : sample_points(b, 100, 77))
      EXPECT_LE(std::fabs(integrability_residual(b.v_ybar, b.v_zbar, kYbar, kZbar, p)), 1e-8) << b.family;
  }
}

TEST(FamilyProperty, PlebanskiOnRandomPoints) {
  for (const SolutionBundle& b : all_bundles()) {
    ASSERT_TRUE(b.certified) << b.family;
    for (const Point& p : sample_points(b, 200, 78))
      EXPECT_LE(std::fabs(plebanski_residual(b.v, p)), 1e-8) << b.family << " at " << p[0] << "," << p[1];
  }
}

}  // namespace
}  // namespace heavenly
