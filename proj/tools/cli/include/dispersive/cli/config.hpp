#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dispersive/dispersion.hpp"
#include "json.hpp"

namespace dispersive::cli {

/// Invalid configuration; the message starts with the offending location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a JSON file, reporting syntax errors as "path:line:column: ...".
nlohmann::json load_json(const std::string& path);

/// Typed, defaulted access to one JSON object. Every key read is recorded so
/// that finish() can reject keys no command understands.
class Params {
 public:
  /// Relative paths in the object resolve against `base`.
  Params(nlohmann::json object, std::string location, std::filesystem::path base = {});

  bool has(const std::string& key) const;
  /// Numbers, or the strings "inf" / "-inf".
  double number(const std::string& key, double fallback);
  double number(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, const std::string& fallback);
  /// A string resolved against the base directory.
  std::filesystem::path path(const std::string& key);
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback);
  std::vector<int> integers(const std::string& key, std::vector<int> fallback);
  /// Either an explicit list or {"lo", "hi", "count"} for geometric spacing.
  std::vector<double> times(const std::string& key, double lo, double hi, std::size_t count);
  /// A builtin name, or an object {"name", "builtin" | "phi"/"dphi"/"d2phi",
  /// "m1", "m2", "alpha1", "alpha2"}.
  DispersionRelation relation(const std::string& key, const std::string& fallback);
  Params child(const std::string& key);
  std::vector<Params> children(const std::string& key);

  /// Throws ConfigError naming the first unused key.
  void finish() const;

  std::string where(const std::string& key) const;
  const std::string& location() const { return location_; }
  const nlohmann::json& raw() const { return object_; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const nlohmann::json* find(const std::string& key);

  nlohmann::json object_;
  std::string location_;
  std::filesystem::path base_;
  std::set<std::string> used_;
};

}  // namespace dispersive::cli
