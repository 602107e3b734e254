#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heavenly/bundle.hpp"
#include "heavenly/newton.hpp"
#include "heavenly/ode.hpp"
#include "heavenly/polynomial.hpp"
#include "heavenly/quadrature.hpp"

namespace heavenly {

struct CertifyOptions {
  double tolerance = 1e-8;
  int samples = 24;
  std::uint64_t seed = 20240531;
  int workers = 1;
};

// Deterministic random points of the bundle's region where v_ybar and v_zbar evaluate.
std::vector<Point> sample_points(const SolutionBundle& b, int n, std::uint64_t seed);
std::vector<Point> sample_region(const Region& r, int n, std::uint64_t seed, const DomainFn& accept);

// Checks plebanski and (v_ybar, v_zbar) integrability at sampled points and marks
// the bundle certified; throws CertificationError naming the failing check.
void certify_bundle(SolutionBundle& b, const CertifyOptions& opt);

// Throws CertificationError when max |fn(p)| over the points exceeds tol.
void certify_points(const std::string& what, const std::vector<Point>& pts, const std::function<double(const Point&)>& fn,
                    double tol, int workers = 1);

// --- trivial and closed-form solutions --------------------------------------

SolutionBundle trivial_solution();

// Closed-form solution on yz + ln(z/y) > 0. Variant "literal-d" replaces
// ln(z/y) by z/y and is returned uncertified.
SolutionBundle appendix_solution(const std::string& variant = "canonical", const CertifyOptions& opt = {});

// --- static (s = z + zbar) family ---------------------------------------------

// One separable harmonic term of L(p, y, ybar):
//   polynomial: sum of c * p^i y^j ybar^k;
//   exp-trig:   A exp(a y + b ybar) cos(k p + phase) with k = sqrt(a b), a b > 0.
struct HarmonicMode {
  enum class Kind { Polynomial, ExpTrig };
  Kind kind = Kind::Polynomial;
  Polynomial poly{std::vector<std::string>{"p", "y", "ybar"}};
  double amplitude = 1.0, a = 1.0, b = 1.0, phase = 0.0;
};

struct StaticHarmonicFamily {
  std::vector<HarmonicMode> modes;
  NewtonOptions newton;
  Region region{{0.6, 0.6, 0.6, 0.6}, {1.4, 1.4, 1.4, 1.4}};
  Point base_point{1.0, 1.0, 1.0, 1.0};
};

SolutionBundle static_build(const StaticHarmonicFamily& fam, const CertifyOptions& opt = {});

// --- second-order ODE family ------------------------------------------------

// Area-preserving shear applied to (c1, c2), starting from (zbar, ybar):
// c1 += poly(c2) when shift_c1, otherwise c2 += poly(c1). poly has one variable.
struct ShearStep {
  bool shift_c1 = true;
  Polynomial poly{std::vector<std::string>{"c"}};
};

struct MEFamily {
  Polynomial force{std::vector<std::string>{"X", "D"}};
  double D0 = 0.0;
  std::vector<ShearStep> cmap;
  // numeric: integrate X_DD = F with sensitivities; closed: use the closed form
  // for F = 0 or F = -w^2 X.
  std::string solver = "numeric";
  IntegratorOptions integrator;
  double wronskian_tolerance = 1e-8;
  Region region{{0.8, 0.8, 0.5, 0.5}, {1.6, 1.6, 1.5, 1.5}};
  Point base_point{1.0, 1.0, 1.0, 1.0};
};

// Field X(D, ybar, zbar) of the family (chart D, ybar, zbar).
Field me_x_field(const MEFamily& fam);
SolutionBundle me_build(const MEFamily& fam, const CertifyOptions& opt = {});

struct RFamily {
  Field X;      // chart (D, ybar, zbar)
  Field r;      // chart (D, ybar, zbar)
  Field Theta;  // chart (Delta, d, ybar, zbar)
  std::string variant = "canonical";
  bool certified = false;
};

// r = -X_zbar / X_ybar and Theta = 1 / (exp(-Delta) + r); variant "literal-theta"
// uses 1 / (exp(-Delta) - r) and is returned uncertified.
RFamily r_family_build(const MEFamily& fam, const std::string& variant = "canonical", const CertifyOptions& opt = {});

// --- implicit Monge-Ampere family ----------------------------------------------

struct ImplicitMAFamily {
  Polynomial F{std::vector<std::string>{"D", "psi"}};
  Polynomial Fbar{std::vector<std::string>{"ybar", "psi"}};
  Polynomial guess{std::vector<std::string>{"y", "z", "D"}};  // initial amplitude; empty means yz + D
  NewtonOptions newton;
  Region region{{0.8, 0.8, 0.5, 0.5}, {1.6, 1.6, 1.5, 1.5}};
  Point base_point{1.0, 1.0, 1.0, 1.0};
};

ImplicitMAFamily appendix_ma_family();
SolutionBundle implicit_ma_build(const ImplicitMAFamily& fam, const CertifyOptions& opt = {});

// --- Theta-split family ---------------------------------------------------------

struct ThetaSplitFamily {
  Polynomial p{std::vector<std::string>{"u", "delta"}};
  Polynomial Q{std::vector<std::string>{"D", "Delta"}};
  Polynomial guess{std::vector<std::string>{"y", "z", "D"}};  // initial Delta; empty means yz
  NewtonOptions newton;
  QuadratureOptions quadrature;
  Region region{{1.0, 1.5, 0.5, 0.5}, {1.5, 2.5, 1.5, 1.5}};
  Point base_point{1.2, 2.0, 1.0, 1.0};
};

// Canonical: solve yz - Q_D(D, Delta) = 0. Variant "literal-sign" solves
// yz + Q_D = 0 and is returned uncertified.
SolutionBundle theta_split_build(const ThetaSplitFamily& fam, const std::string& variant = "canonical",
                                 const CertifyOptions& opt = {});

// --- JSON descriptors -----------------------------------------------------------

// Builds the bundle described by a family document ({"kind": ...}); unknown keys
// raise ConfigError carrying the JSON pointer of the offending entry.
SolutionBundle build_family(const nlohmann::json& doc, const std::string& variant, const CertifyOptions& opt);
MEFamily me_family_from_json(const nlohmann::json& doc);
std::vector<std::string> family_kinds();

// Builtin named instances: trivial, appendix, me-f0, me-harmonic, static-linear.
std::vector<std::string> builtin_names();
nlohmann::json builtin_descriptor(const std::string& name);

}  // namespace heavenly
