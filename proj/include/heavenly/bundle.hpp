#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "heavenly/field.hpp"
#include "heavenly/grid.hpp"

namespace heavenly {

// A candidate Plebanski solution with its companion fields. v_ybar and v_zbar
// are always present; v may be a closed form or a path reconstruction from them.
struct SolutionBundle {
  std::string family;
  std::string variant = "canonical";
  Field v;
  Field v_ybar;
  Field v_zbar;
  // Named companions: theta, X (chart D,ybar,zbar), psi, exp_delta, Delta,
  // Theta (chart Delta,d,ybar,zbar), r, v_potential, ...
  std::map<std::string, Field> companions;
  Region region;       // default sampling and scan region
  Point base_point{};  // quadrature anchor
  nlohmann::json provenance = nlohmann::json::object();
  bool certified = false;

  bool has(const std::string& name) const { return companions.count(name) > 0; }
  const Field& companion(const std::string& name) const;
};

}  // namespace heavenly
