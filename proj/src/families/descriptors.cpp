#include "heavenly/families.hpp"
#include "heavenly/strict_json.hpp"

namespace heavenly {

namespace {

using nlohmann::json;
using Reader = StrictObject;

// {"terms": [{"c": 1.5, "pow": [1, 0]}, ...]} over fixed variable names.
Polynomial read_polynomial(const json& j, const std::string& ptr, const std::vector<std::string>& vars) {
  Reader r(j, ptr);
  Polynomial out(vars);
  if (r.has("vars")) {
    const json& v = r.raw("vars");
    if (!v.is_array() || v.size() != vars.size()) r.fail("expected " + std::to_string(vars.size()) + " variable names", "vars");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!v[i].is_string() || v[i].get<std::string>() != vars[i]) {
        r.fail("variable " + std::to_string(i) + " must be '" + vars[i] + "'", "vars/" + std::to_string(i));
      }
    }
  }
  if (!r.has("terms")) r.fail("missing 'terms'");
  const json& terms = r.raw("terms");
  if (!terms.is_array()) r.fail("expected an array", "terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Reader t(terms[i], r.child("terms") + "/" + std::to_string(i));
    if (!t.has("c")) t.fail("missing 'c'");
    const double c = t.number("c", 0.0);
    if (!t.has("pow")) t.fail("missing 'pow'");
    const json& pw = t.raw("pow");
    if (!pw.is_array() || pw.size() != vars.size()) t.fail("expected " + std::to_string(vars.size()) + " exponents", "pow");
    std::vector<int> powers;
    for (std::size_t k = 0; k < pw.size(); ++k) {
      if (!pw[k].is_number_integer() || pw[k].get<int>() < 0) {
        t.fail("exponent must be a non-negative integer", "pow/" + std::to_string(k));
      }
      powers.push_back(pw[k].get<int>());
    }
    t.done();
    out.add(c, powers);
  }
  r.done();
  return out;
}

Polynomial optional_polynomial(Reader& r, const std::string& k, const std::vector<std::string>& vars) {
  if (!r.has(k)) return Polynomial(vars);
  return read_polynomial(r.raw(k), r.child(k), vars);
}

NewtonOptions read_newton(Reader& parent) {
  NewtonOptions o;
  if (!parent.has("newton")) return o;
  Reader r(parent.raw("newton"), parent.child("newton"));
  o.tolerance = r.number("tolerance", o.tolerance);
  o.max_iterations = r.integer("max_iterations", o.max_iterations);
  o.min_damping = r.number("min_damping", o.min_damping);
  r.done();
  if (!(o.tolerance > 0.0)) throw ConfigError(parent.child("newton") + ": tolerance must be positive", 0, 0, parent.child("newton/tolerance"));
  return o;
}

IntegratorOptions read_integrator(Reader& parent) {
  IntegratorOptions o;
  if (!parent.has("integrator")) return o;
  Reader r(parent.raw("integrator"), parent.child("integrator"));
  o.rtol = r.number("rtol", o.rtol);
  o.atol = r.number("atol", o.atol);
  o.initial_step = r.number("initial_step", o.initial_step);
  o.max_step = r.number("max_step", o.max_step);
  o.max_steps = r.integer("max_steps", o.max_steps);
  o.fixed_steps = r.integer("fixed_steps", o.fixed_steps);
  r.done();
  return o;
}

QuadratureOptions read_quadrature(Reader& parent) {
  QuadratureOptions o;
  if (!parent.has("quadrature")) return o;
  Reader r(parent.raw("quadrature"), parent.child("quadrature"));
  o.abs_tol = r.number("abs_tol", o.abs_tol);
  o.rel_tol = r.number("rel_tol", o.rel_tol);
  o.max_subintervals = r.integer("max_subintervals", o.max_subintervals);
  r.done();
  return o;
}

Region read_region(Reader& parent, const Region& def) {
  if (!parent.has("region")) return def;
  Reader r(parent.raw("region"), parent.child("region"));
  Region out{r.point("lo", def.lo), r.point("hi", def.hi)};
  r.done();
  for (int i = 0; i < 4; ++i) {
    if (!(out.lo[i] <= out.hi[i])) r.fail("lo must not exceed hi in every coordinate");
  }
  return out;
}

std::vector<HarmonicMode> read_modes(Reader& parent) {
  if (!parent.has("modes")) parent.fail("missing 'modes'");
  const json& m = parent.raw("modes");
  if (!m.is_array() || m.empty()) parent.fail("expected a non-empty array", "modes");
  std::vector<HarmonicMode> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string ptr = parent.child("modes") + "/" + std::to_string(i);
    Reader r(m[i], ptr);
    HarmonicMode mode;
    const std::string type = r.string("type", "polynomial");
    if (type == "polynomial") {
      if (!r.has("poly")) r.fail("missing 'poly'");
      mode.poly = read_polynomial(r.raw("poly"), r.child("poly"), {"p", "y", "ybar"});
    } else if (type == "exp-trig") {
      mode.kind = HarmonicMode::Kind::ExpTrig;
      mode.amplitude = r.number("amplitude", 1.0);
      mode.a = r.number("a", 1.0);
      mode.b = r.number("b", 1.0);
      mode.phase = r.number("phase", 0.0);
      if (!(mode.a * mode.b > 0.0)) r.fail("exp-trig mode requires a*b > 0");
    } else {
      r.fail("unknown mode type '" + type + "' (polynomial, exp-trig)", "type");
    }
    r.done();
    out.push_back(mode);
  }
  return out;
}

MEFamily read_me(Reader& r) {
  MEFamily fam;
  if (r.has("force")) fam.force = read_polynomial(r.raw("force"), r.child("force"), {"X", "D"});
  fam.D0 = r.number("D0", fam.D0);
  fam.solver = r.string("solver", fam.solver);
  if (fam.solver != "numeric" && fam.solver != "closed") r.fail("solver must be 'numeric' or 'closed'", "solver");
  if (r.has("cmap")) {
    const json& c = r.raw("cmap");
    if (!c.is_array()) r.fail("expected an array", "cmap");
    for (std::size_t i = 0; i < c.size(); ++i) {
      Reader s(c[i], r.child("cmap") + "/" + std::to_string(i));
      ShearStep step;
      const std::string target = s.string("shift", "c1");
      if (target != "c1" && target != "c2") s.fail("shift must be 'c1' or 'c2'", "shift");
      step.shift_c1 = target == "c1";
      if (!s.has("poly")) s.fail("missing 'poly'");
      step.poly = read_polynomial(s.raw("poly"), s.child("poly"), {"c"});
      s.done();
      fam.cmap.push_back(step);
    }
  }
  fam.integrator = read_integrator(r);
  fam.wronskian_tolerance = r.number("wronskian_tolerance", fam.wronskian_tolerance);
  fam.region = read_region(r, fam.region);
  fam.base_point = r.point("base_point", fam.base_point);
  return fam;
}

void reject_variant(const std::string& kind, const std::string& variant) {
  if (variant != "canonical") throw CapabilityError(kind + ": unknown variant '" + variant + "'");
}

}  // namespace

std::vector<std::string> family_kinds() { return {"trivial", "appendix", "static", "me", "implicit-ma", "theta-split"}; }

MEFamily me_family_from_json(const nlohmann::json& doc) {
  Reader r(doc, "");
  const std::string kind = r.string("kind", "me");
  if (kind != "me") r.fail("expected kind 'me'", "kind");
  MEFamily fam = read_me(r);
  r.done();
  return fam;
}

SolutionBundle build_family(const nlohmann::json& doc, const std::string& variant, const CertifyOptions& opt) {
  Reader r(doc, "");
  if (!r.has("kind")) r.fail("missing 'kind'");
  const std::string kind = r.string("kind", "");
  if (kind == "trivial") {
    r.done();
    reject_variant(kind, variant);
    return trivial_solution();
  }
  if (kind == "appendix") {
    r.done();
    return appendix_solution(variant, opt);
  }
  if (kind == "static") {
    StaticHarmonicFamily fam;
    fam.modes = read_modes(r);
    fam.newton = read_newton(r);
    fam.region = read_region(r, fam.region);
    fam.base_point = r.point("base_point", fam.base_point);
    r.done();
    reject_variant(kind, variant);
    return static_build(fam, opt);
  }
  if (kind == "me") {
    MEFamily fam = read_me(r);
    r.done();
    reject_variant(kind, variant);
    return me_build(fam, opt);
  }
  if (kind == "implicit-ma") {
    ImplicitMAFamily fam = appendix_ma_family();
    if (r.has("F")) fam.F = read_polynomial(r.raw("F"), r.child("F"), {"D", "psi"});
    if (r.has("Fbar")) fam.Fbar = read_polynomial(r.raw("Fbar"), r.child("Fbar"), {"ybar", "psi"});
    fam.guess = optional_polynomial(r, "guess", {"y", "z", "D"});
    fam.newton = read_newton(r);
    fam.region = read_region(r, fam.region);
    fam.base_point = r.point("base_point", fam.base_point);
    r.done();
    reject_variant(kind, variant);
    return implicit_ma_build(fam, opt);
  }
  if (kind == "theta-split") {
    ThetaSplitFamily fam;
    if (!r.has("p")) r.fail("missing 'p'");
    fam.p = read_polynomial(r.raw("p"), r.child("p"), {"u", "delta"});
    if (!r.has("Q")) r.fail("missing 'Q'");
    fam.Q = read_polynomial(r.raw("Q"), r.child("Q"), {"D", "Delta"});
    fam.guess = optional_polynomial(r, "guess", {"y", "z", "D"});
    fam.newton = read_newton(r);
    fam.quadrature = read_quadrature(r);
    fam.region = read_region(r, fam.region);
    fam.base_point = r.point("base_point", fam.base_point);
    r.done();
    return theta_split_build(fam, variant, opt);
  }
  std::string known;
  for (const auto& k : family_kinds()) known += (known.empty() ? "" : ", ") + k;
  r.fail("unknown family kind '" + kind + "' (known: " + known + ")", "kind");
}

std::vector<std::string> builtin_names() {
  return {"trivial", "appendix", "me-f0", "me-harmonic", "static-linear", "implicit-ma", "theta-split"};
}

nlohmann::json builtin_descriptor(const std::string& name) {
  if (name == "trivial") return {{"kind", "trivial"}};
  if (name == "appendix") return {{"kind", "appendix"}};
  if (name == "me-f0") return {{"kind", "me"}, {"force", {{"terms", json::array()}}}, {"solver", "closed"}};
  if (name == "me-harmonic") {
    return {{"kind", "me"}, {"force", {{"terms", {{{"c", -1.0}, {"pow", {1, 0}}}}}}}, {"solver", "numeric"}};
  }
  if (name == "static-linear") {
    return {{"kind", "static"},
            {"modes", {{{"type", "polynomial"}, {"poly", {{"terms", {{{"c", 1.0}, {"pow", {1, 1, 0}}}}}}}}}}};
  }
  if (name == "implicit-ma") return {{"kind", "implicit-ma"}};
  if (name == "theta-split") {
    return {{"kind", "theta-split"},
            {"p", {{"terms", {{{"c", 1.0}, {"pow", {1, 0}}}}}}},
            {"Q", {{"terms", {{{"c", 1.0}, {"pow", {1, 1}}}}}}}};
  }
  throw ConfigError("unknown builtin '" + name + "'");
}

}  // namespace heavenly
