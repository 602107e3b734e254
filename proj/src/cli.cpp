#include "heavenly/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "heavenly/families.hpp"
#include "heavenly/residuals.hpp"
#include "heavenly/symmetry.hpp"

namespace heavenly {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_logger_mt("heavenly");
    l->set_level(spdlog::level::warn);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return log;
}

void configure_logging() {
  const char* env = std::getenv("HEAVENLY_LOG");
  if (!env || !*env) return;
  const auto level = spdlog::level::from_str(env);
  if (level == spdlog::level::off && std::string(env) != "off") {
    logger()->warn("HEAVENLY_LOG='{}' is not a log level; keeping 'warn'", env);
    return;
  }
  logger()->set_level(level);
}

std::string family_kind(const RunConfig& cfg) {
  const json doc = cfg.family ? *cfg.family : builtin_descriptor(cfg.builtin);
  return doc.value("kind", "");
}

std::vector<std::string> known_variants(const std::string& kind) {
  if (kind == "appendix") return {"canonical", "literal-d"};
  if (kind == "theta-split") return {"canonical", "literal-sign"};
  return {"canonical"};
}

// Location-annotated message for a config error raised while building the family.
std::string describe(const RunConfig& cfg, const ConfigError& e) {
  if (e.line() > 0 || cfg.source_text.empty() || !cfg.family) return e.what();
  const std::string ptr = "/family" + e.pointer();
  std::size_t off = locate_pointer(cfg.source_text, ptr);
  if (off == std::string::npos) off = locate_pointer(cfg.source_text, "/family");
  if (off == std::string::npos) return e.what();
  const auto [line, col] = line_column(cfg.source_text, off);
  return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": /family" + e.what();
}

struct Built {
  SolutionBundle bundle;
  int code = kExitPass;
};

Built build_bundle(const RunConfig& cfg, std::ostream& err) {
  Built out;
  try {
    validate(cfg);
    const std::string kind = family_kind(cfg);
    const auto variants = known_variants(kind);
    if (std::find(variants.begin(), variants.end(), cfg.variant) == variants.end()) {
      std::string list;
      for (const auto& v : variants) list += (list.empty() ? "" : ", ") + v;
      throw ConfigError("variant '" + cfg.variant + "' is not available for family '" + kind + "' (" + list + ")");
    }
    CertifyOptions opt;
    opt.tolerance = cfg.certify_tolerance;
    opt.samples = cfg.certify_samples;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    logger()->info("building family '{}' (variant {})", kind, cfg.variant);
    out.bundle = build_family(cfg.family ? *cfg.family : builtin_descriptor(cfg.builtin), cfg.variant, opt);
    logger()->info("bundle '{}' built, certified = {}", out.bundle.family, out.bundle.certified);
  } catch (const ConfigError& e) {
    err << "config error: " << describe(cfg, e) << "\n";
    out.code = kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    out.code = kExitConfig;
  } catch (const Error& e) {
    err << "construction failed: " << e.what() << "\n";
    out.code = kExitConstruction;
  }
  return out;
}

std::string bundle_label(const SolutionBundle& b) {
  return b.family + (b.variant == "canonical" ? "" : ":" + b.variant);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory '" + dir + "'");
}

void write_report(const RunConfig& cfg, const std::string& stem, const ResidualReport& r) {
  const fs::path dir(cfg.out_dir);
  if (cfg.format != "csv") write_file(dir / (stem + ".json"), r.to_json().dump(2) + "\n");
  if (cfg.format != "json") write_file(dir / (stem + ".csv"), r.to_csv());
}

ResidualReport run_equation(const RunConfig& cfg, const SolutionBundle& b, const std::string& eq) {
  const Region region = cfg.region ? *cfg.region : b.region;
  if (cfg.samples > 0) {
    auto fn = equation_functional(eq, b);
    const auto pts = sample_region(region, cfg.samples, cfg.seed, [&b](const Point& p) {
      return b.v_ybar.in_domain(p) && b.v_zbar.in_domain(p);
    });
    return scan_points(eq, bundle_label(b), fn, pts, cfg.workers);
  }
  return scan(eq, b, region, cfg.resolution, cfg.workers);
}

bool known_equation(const std::string& eq) {
  const auto names = equation_names();
  return std::find(names.begin(), names.end(), eq) != names.end();
}

int check_equations(const RunConfig& cfg, std::ostream& err) {
  for (const auto& eq : cfg.equations) {
    if (!known_equation(eq)) {
      std::string list;
      for (const auto& n : equation_names()) list += (list.empty() ? "" : ", ") + n;
      err << "config error: unknown equation '" << eq << "' (" << list << ")\n";
      return kExitConfig;
    }
  }
  return kExitPass;
}

// Shared body of verify and scan: one report per equation.
int run_reports(const RunConfig& cfg, const std::string& verb, bool gate, std::ostream& out, std::ostream& err) {
  if (int c = check_equations(cfg, err)) return c;
  Built built = build_bundle(cfg, err);
  if (built.code != kExitPass) return built.code;
  const SolutionBundle& b = built.bundle;
  try {
    prepare_dir(cfg.out_dir);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  json summary = {{"schema", 1},
                  {"command", verb},
                  {"bundle", bundle_label(b)},
                  {"certified", b.certified},
                  {"provenance", b.provenance},
                  {"tolerance", cfg.tolerance},
                  {"results", json::array()}};
  bool pass = true;
  for (const auto& eq : cfg.equations) {
    ResidualReport r;
    try {
      r = run_equation(cfg, b, eq);
    } catch (const CapabilityError& e) {
      err << "config error: equation '" << eq << "' is not available for " << bundle_label(b) << ": " << e.what()
          << "\n";
      return kExitConfig;
    } catch (const DomainError& e) {
      err << "verification failed: " << eq << ": " << e.what() << "\n";
      pass = false;
      summary["results"].push_back({{"equation", eq}, {"error", e.what()}, {"pass", false}});
      continue;
    }
    const bool ok = r.max_abs <= cfg.tolerance;
    pass = pass && ok;
    try {
      write_report(cfg, verb + "_" + eq, r);
    } catch (const std::exception& e) {
      err << "output error: " << e.what() << "\n";
      return kExitConfig;
    }
    summary["results"].push_back({{"equation", eq},
                                  {"max_abs", r.max_abs},
                                  {"mean_abs", r.mean_abs},
                                  {"evaluated", r.evaluated},
                                  {"excluded", r.excluded},
                                  {"pass", ok}});
    out << verb << " " << bundle_label(b) << " " << eq << ": max_abs " << format_double(r.max_abs) << " over "
        << r.evaluated << " points (" << r.excluded << " excluded) " << (ok ? "PASS" : "FAIL") << "\n";
  }
  summary["pass"] = pass;
  try {
    write_file(fs::path(cfg.out_dir) / (verb + "_summary.json"), summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  return (gate && !pass) ? kExitVerification : kExitPass;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_reports(cfg, "verify", true, out, err);
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_reports(cfg, "scan", false, out, err);
}

int cmd_symmetry(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SymmetryConfig& sc = cfg.symmetry;
  const std::vector<std::string> seeds{"v_y", "v_z", "v_ybar", "v_zbar"};
  if (std::find(seeds.begin(), seeds.end(), sc.seed) == seeds.end()) {
    err << "config error: unknown seed '" << sc.seed << "' (v_y, v_z, v_ybar, v_zbar)\n";
    return kExitConfig;
  }
  Built built = build_bundle(cfg, err);
  if (built.code != kExitPass) return built.code;
  const SolutionBundle& b = built.bundle;
  const Recurrence rec = parse_recurrence(sc.recurrence);
  const SymmetrySolution seed = seed_symmetry(b, sc.seed);
  std::vector<SymmetrySolution> levels{seed};
  std::vector<Point> pts;
  try {
    for (auto& s : build_chain(b, seed, rec, sc.depth)) levels.push_back(s);
    pts = sample_points(b, sc.samples, cfg.seed);
  } catch (const Error& e) {
    err << "construction failed: " << e.what() << "\n";
    return kExitConstruction;
  }
  try {
    prepare_dir(cfg.out_dir);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  json summary = {{"schema", 1},
                  {"command", "symmetry"},
                  {"bundle", bundle_label(b)},
                  {"seed", sc.seed},
                  {"recurrence", to_string(rec)},
                  {"depth", sc.depth},
                  {"tolerance", sc.tolerance},
                  {"levels", json::array()}};
  bool pass = true;
  for (const SymmetrySolution& s : levels) {
    ResidualReport r;
    try {
      r = chain_level_report(b, s, pts, cfg.workers);
    } catch (const Error& e) {
      err << "verification failed: level " << s.depth << ": " << e.what() << "\n";
      pass = false;
      summary["levels"].push_back({{"level", s.depth}, {"error", e.what()}, {"pass", false}});
      break;
    }
    const bool ok = r.max_abs <= sc.tolerance;
    pass = pass && ok;
    try {
      write_report(cfg, "symmetry_level" + std::to_string(s.depth), r);
    } catch (const std::exception& e) {
      err << "output error: " << e.what() << "\n";
      return kExitConfig;
    }
    summary["levels"].push_back({{"level", s.depth},
                                 {"max_abs", r.max_abs},
                                 {"evaluated", r.evaluated},
                                 {"excluded", r.excluded},
                                 {"pass", ok}});
    out << "symmetry " << bundle_label(b) << " " << sc.seed << " " << to_string(rec) << " level " << s.depth
        << ": max_abs " << format_double(r.max_abs) << " " << (ok ? "PASS" : "FAIL") << "\n";
  }
  summary["pass"] = pass;
  try {
    write_file(fs::path(cfg.out_dir) / "symmetry_summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  return pass ? kExitPass : kExitVerification;
}

int cmd_families_list(const std::string& format, std::ostream& out) {
  if (format == "json") {
    json j = {{"schema", 1}, {"kinds", family_kinds()}, {"builtins", json::object()}};
    for (const auto& n : builtin_names()) j["builtins"][n] = builtin_descriptor(n);
    out << j.dump(2) << "\n";
    return kExitPass;
  }
  out << "family kinds:\n";
  for (const auto& k : family_kinds()) {
    out << "  " << k;
    const auto v = known_variants(k);
    if (v.size() > 1) {
      out << " (variants:";
      for (const auto& s : v) out << " " << s;
      out << ")";
    }
    out << "\n";
  }
  out << "builtins:\n";
  for (const auto& n : builtin_names()) out << "  " << n << "  " << builtin_descriptor(n).dump() << "\n";
  return kExitPass;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Build and verify solution families of the heavenly equation."};
  app.require_subcommand(1);

  std::string config_path, builtin, variant, out_dir, format, seed_name, recurrence;
  double tolerance = 0.0;
  int workers = 1, depth = 1;
  long long seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run configuration (JSON)");
    sub->add_option("--builtin", builtin, "builtin family instance");
    sub->add_option("--variant", variant, "family variant");
    sub->add_option("--tolerance", tolerance, "pass threshold for max |residual|");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads");
    sub->add_option("--format", format, "json, csv or both");
    sub->add_option("--seed", seed, "random seed for sampling");
  };
  CLI::App* verify = app.add_subcommand("verify", "build a family and check its residuals");
  CLI::App* scan_cmd = app.add_subcommand("scan", "per-point residual tables");
  CLI::App* sym = app.add_subcommand("symmetry", "verify a chain of symmetry solutions");
  CLI::App* fam = app.add_subcommand("families", "family catalogue");
  CLI::App* fam_list = fam->add_subcommand("list", "list family kinds and builtins");
  fam->require_subcommand(1);
  fam_list->add_option("--format", format, "text or json");
  add_common(verify);
  add_common(scan_cmd);
  add_common(sym);
  sym->add_option("--depth", depth, "chain depth (>= 1)");
  sym->add_option("--recurrence", recurrence, "SE1 or SE2");
  sym->add_option("--symmetry-seed", seed_name, "v_y, v_z, v_ybar or v_zbar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (fam->parsed()) return cmd_families_list(format.empty() ? "text" : format, out);

  CLI::App* active = verify->parsed() ? verify : (scan_cmd->parsed() ? scan_cmd : sym);
  auto given = [active](const char* name) { return active->count(name) > 0; };
  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (given("--builtin")) {
      cfg.builtin = builtin;
      cfg.family.reset();
    }
    if (given("--variant")) cfg.variant = variant;
    if (given("--tolerance")) {
      cfg.tolerance = tolerance;
      cfg.symmetry.tolerance = tolerance;
    }
    if (given("--out")) cfg.out_dir = out_dir;
    if (given("--workers")) cfg.workers = workers;
    if (given("--format")) cfg.format = format;
    if (given("--seed")) {
      if (seed < 0) throw ConfigError("--seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (active == sym) {
      if (given("--depth")) cfg.symmetry.depth = depth;
      if (given("--recurrence")) cfg.symmetry.recurrence = recurrence;
      if (given("--symmetry-seed")) cfg.symmetry.seed = seed_name;
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  logger()->debug("workers {}, output '{}', format {}", cfg.workers, cfg.out_dir, cfg.format);
  if (active == verify) return cmd_verify(cfg, out, err);
  if (active == scan_cmd) return cmd_scan(cfg, out, err);
  return cmd_symmetry(cfg, out, err);
}

}  // namespace heavenly
