#pragma once

#include <array>
#include <set>
#include <string>

#include <json.hpp>

#include "heavenly/errors.hpp"

namespace heavenly {

// Strict view of a JSON object: every key must be consumed or declared, and type
// errors carry the pointer of the entry.
class StrictObject {
 public:
  StrictObject(const nlohmann::json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg, const std::string& key = "") const {
    const std::string at = key.empty() ? ptr_ : ptr_ + "/" + key;
    throw ConfigError((at.empty() ? std::string("/") : at) + ": " + msg, 0, 0, at);
  }

  bool has(const std::string& k) const { return j_.contains(k); }
  std::string child(const std::string& k) const { return ptr_ + "/" + k; }
  const nlohmann::json& raw(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  double number(const std::string& k, double def) {
    if (!has(k)) return def;
    const nlohmann::json& v = raw(k);
    if (!v.is_number()) fail("expected a number", k);
    return v.get<double>();
  }
  int integer(const std::string& k, int def) {
    if (!has(k)) return def;
    const nlohmann::json& v = raw(k);
    if (!v.is_number_integer()) fail("expected an integer", k);
    return v.get<int>();
  }
  std::string string(const std::string& k, const std::string& def) {
    if (!has(k)) return def;
    const nlohmann::json& v = raw(k);
    if (!v.is_string()) fail("expected a string", k);
    return v.get<std::string>();
  }
  std::array<double, 4> point(const std::string& k, const std::array<double, 4>& def) {
    if (!has(k)) return def;
    const nlohmann::json& v = raw(k);
    if (!v.is_array() || v.size() != 4) fail("expected an array of 4 numbers", k);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!v[i].is_number()) fail("expected a number", k + "/" + std::to_string(i));
      out[i] = v[i].get<double>();
    }
    return out;
  }

  void done() const {
    for (const auto& [k, v] : j_.items()) {
      (void)v;
      if (!seen_.count(k)) fail("unknown key '" + k + "'", k);
    }
  }

  const std::string& ptr() const { return ptr_; }

 private:
  const nlohmann::json& j_;
  std::string ptr_;
  std::set<std::string> seen_;
};

}  // namespace heavenly
