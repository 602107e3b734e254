#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heavenly/grid.hpp"

namespace heavenly {

struct SymmetryConfig {
  std::string seed = "v_ybar";
  std::string recurrence = "SE1";
  int depth = 1;
  int samples = 100;
  double tolerance = 1e-6;
};

// Everything a CLI run needs. Either `family` (a descriptor document) or
// `builtin` names the bundle.
struct RunConfig {
  std::optional<nlohmann::json> family;
  std::string builtin;
  std::string variant = "canonical";
  std::vector<std::string> equations{"plebanski", "integrability"};
  std::optional<Region> region;  // defaults to the bundle's region
  Resolution resolution{5, 5, 5, 5};
  int samples = 0;  // > 0: random sampling with this many points instead of the grid
  std::uint64_t seed = 20240531;
  double tolerance = 1e-8;
  double certify_tolerance = 1e-8;
  int certify_samples = 24;
  std::string out_dir = "heavenly-out";
  std::string format = "both";  // json | csv | both
  int workers = 1;
  SymmetryConfig symmetry;
  std::string source_text;  // original document, for locating family errors
};

// Parses a RunConfig document. Syntax and schema errors raise ConfigError with
// the 1-based line and column of the offending text.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Validates ranges (positive tolerances, resolution >= 1, depth >= 1, known
// format); throws ConfigError.
void validate(const RunConfig& cfg);

// Byte offset of the value addressed by a JSON pointer in the document text, or
// of the member key when the pointer names an object member; npos if absent.
std::size_t locate_pointer(const std::string& text, const std::string& pointer);
std::pair<int, int> line_column(const std::string& text, std::size_t offset);

}  // namespace heavenly
