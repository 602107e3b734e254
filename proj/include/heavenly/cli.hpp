#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "heavenly/config.hpp"

namespace heavenly {

enum ExitCode : int {
  kExitPass = 0,
  kExitConfig = 1,
  kExitConstruction = 2,
  kExitVerification = 3,
};

// Each command writes its reports below cfg.out_dir and returns an ExitCode.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_symmetry(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_families_list(const std::string& format, std::ostream& out);

// Full command line: verb, flags, HEAVENLY_LOG handling.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heavenly
