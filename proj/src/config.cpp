#include "heavenly/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "heavenly/strict_json.hpp"

namespace heavenly {

namespace {

using nlohmann::json;

// Records, for every JSON pointer in a syntactically valid document, the offset
// of its value and (for object members) of its key.
class Locator {
 public:
  explicit Locator(const std::string& text) : t_(text) {
    std::size_t pos = 0;
    value(pos, "");
  }

  std::size_t find(const std::string& ptr) const {
    auto k = keys_.find(ptr);
    if (k != keys_.end()) return k->second;
    auto v = values_.find(ptr);
    return v == values_.end() ? std::string::npos : v->second;
  }

 private:
  void ws(std::size_t& pos) const {
    while (pos < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos]))) ++pos;
  }

  std::string string(std::size_t& pos) const {
    std::string out;
    ++pos;  // opening quote
    while (pos < t_.size() && t_[pos] != '"') {
      if (t_[pos] == '\\' && pos + 1 < t_.size()) {
        out += t_[pos + 1];
        pos += 2;
      } else {
        out += t_[pos++];
      }
    }
    ++pos;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void value(std::size_t& pos, const std::string& ptr) {
    ws(pos);
    if (pos >= t_.size()) return;
    values_.emplace(ptr, pos);
    const char c = t_[pos];
    if (c == '{') {
      ++pos;
      for (;;) {
        ws(pos);
        if (pos >= t_.size() || t_[pos] == '}') break;
        const std::size_t key_pos = pos;
        const std::string child = ptr + "/" + escape(string(pos));
        keys_.emplace(child, key_pos);
        ws(pos);
        ++pos;  // ':'
        value(pos, child);
        ws(pos);
        if (pos < t_.size() && t_[pos] == ',') ++pos;
      }
      ++pos;
    } else if (c == '[') {
      ++pos;
      for (int i = 0;; ++i) {
        ws(pos);
        if (pos >= t_.size() || t_[pos] == ']') break;
        value(pos, ptr + "/" + std::to_string(i));
        ws(pos);
        if (pos < t_.size() && t_[pos] == ',') ++pos;
      }
      ++pos;
    } else if (c == '"') {
      string(pos);
    } else {
      while (pos < t_.size() && t_[pos] != ',' && t_[pos] != '}' && t_[pos] != ']' &&
             !std::isspace(static_cast<unsigned char>(t_[pos])))
        ++pos;
    }
  }

  const std::string& t_;
  std::map<std::string, std::size_t> values_, keys_;
};

Region read_region(StrictObject& parent) {
  StrictObject r(parent.raw("region"), parent.child("region"));
  if (!r.has("lo") || !r.has("hi")) r.fail("region needs 'lo' and 'hi'");
  Region out{r.point("lo", {}), r.point("hi", {})};
  r.done();
  for (int i = 0; i < 4; ++i)
    if (!(out.lo[i] <= out.hi[i])) r.fail("lo must not exceed hi in every coordinate");
  return out;
}

Resolution read_resolution(StrictObject& parent) {
  const json& v = parent.raw("resolution");
  const std::string ptr = parent.child("resolution");
  auto bad = [&](const std::string& at) {
    throw ConfigError(at + ": resolution must be an integer or an array of 4 integers", 0, 0, at);
  };
  if (v.is_number_integer()) {
    const int n = v.get<int>();
    return {n, n, n, n};
  }
  if (!v.is_array() || v.size() != 4) bad(ptr);
  Resolution r{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number_integer()) bad(ptr + "/" + std::to_string(i));
    r[i] = v[i].get<int>();
  }
  return r;
}

RunConfig from_json(const json& doc) {
  StrictObject r(doc, "");
  RunConfig cfg;
  if (r.has("family")) {
    const json& f = r.raw("family");
    if (!f.is_object()) r.fail("expected an object", "family");
    cfg.family = f;
  }
  cfg.builtin = r.string("builtin", "");
  cfg.variant = r.string("variant", cfg.variant);
  if (r.has("equations")) {
    const json& e = r.raw("equations");
    if (!e.is_array() || e.empty()) r.fail("expected a non-empty array of equation names", "equations");
    cfg.equations.clear();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i].is_string()) r.fail("expected a string", "equations/" + std::to_string(i));
      cfg.equations.push_back(e[i].get<std::string>());
    }
  }
  if (r.has("region")) cfg.region = read_region(r);
  if (r.has("resolution")) cfg.resolution = read_resolution(r);
  cfg.samples = r.integer("samples", cfg.samples);
  if (r.has("seed")) {
    const json& s = r.raw("seed");
    if (!s.is_number_unsigned()) r.fail("expected a non-negative integer", "seed");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.tolerance = r.number("tolerance", cfg.tolerance);
  if (r.has("certify")) {
    StrictObject c(r.raw("certify"), r.child("certify"));
    cfg.certify_tolerance = c.number("tolerance", cfg.certify_tolerance);
    cfg.certify_samples = c.integer("samples", cfg.certify_samples);
    c.done();
  }
  if (r.has("output")) {
    StrictObject o(r.raw("output"), r.child("output"));
    cfg.out_dir = o.string("dir", cfg.out_dir);
    cfg.format = o.string("format", cfg.format);
    o.done();
  }
  cfg.workers = r.integer("workers", cfg.workers);
  if (r.has("symmetry")) {
    StrictObject s(r.raw("symmetry"), r.child("symmetry"));
    cfg.symmetry.seed = s.string("seed", cfg.symmetry.seed);
    cfg.symmetry.recurrence = s.string("recurrence", cfg.symmetry.recurrence);
    cfg.symmetry.depth = s.integer("depth", cfg.symmetry.depth);
    cfg.symmetry.samples = s.integer("samples", cfg.symmetry.samples);
    cfg.symmetry.tolerance = s.number("tolerance", cfg.symmetry.tolerance);
    s.done();
  }
  r.done();
  return cfg;
}

void check(bool ok, const std::string& ptr, const std::string& msg) {
  if (!ok) throw ConfigError(ptr + ": " + msg, 0, 0, ptr);
}

}  // namespace

std::size_t locate_pointer(const std::string& text, const std::string& pointer) {
  return Locator(text).find(pointer);
}

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void validate(const RunConfig& cfg) {
  check(cfg.family.has_value() != !cfg.builtin.empty(), cfg.family ? "/family" : "",
        "exactly one of 'family' or 'builtin' is required");
  check(cfg.tolerance > 0.0, "/tolerance", "tolerance must be positive");
  check(cfg.certify_tolerance > 0.0, "/certify/tolerance", "tolerance must be positive");
  check(cfg.certify_samples >= 1, "/certify/samples", "samples must be at least 1");
  for (int i = 0; i < 4; ++i) check(cfg.resolution[i] >= 1, "/resolution", "resolution must be at least 1");
  check(cfg.samples >= 0, "/samples", "samples must be non-negative");
  check(cfg.workers >= 1, "/workers", "workers must be at least 1");
  check(cfg.format == "json" || cfg.format == "csv" || cfg.format == "both", "/output/format",
        "format must be json, csv or both");
  check(cfg.symmetry.depth >= 1, "/symmetry/depth", "depth must be at least 1");
  check(cfg.symmetry.samples >= 1, "/symmetry/samples", "samples must be at least 1");
  check(cfg.symmetry.tolerance > 0.0, "/symmetry/tolerance", "tolerance must be positive");
  check(cfg.symmetry.recurrence == "SE1" || cfg.symmetry.recurrence == "SE2", "/symmetry/recurrence",
        "recurrence must be SE1 or SE2");
}

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                          e.what(),
                      line, col);
  }
  try {
    RunConfig cfg = from_json(doc);
    cfg.source_text = text;
    validate(cfg);
    return cfg;
  } catch (const ConfigError& e) {
    const std::size_t off = e.pointer().empty() ? 0 : locate_pointer(text, e.pointer());
    const auto [line, col] = line_column(text, off == std::string::npos ? 0 : off);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what(), line,
                      col, e.pointer());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace heavenly
