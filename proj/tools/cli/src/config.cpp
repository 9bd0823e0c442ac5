#include "dispersive/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "dispersive/decay_fit.hpp"

namespace dispersive::cli {

namespace {

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return std::to_string(line) + ":" + std::to_string(column);
}

}  // namespace

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ":" + position(text, e.byte) + ": " + e.what());
  }
}

Params::Params(nlohmann::json object, std::string location, std::filesystem::path base)
    : object_(std::move(object)), location_(std::move(location)), base_(std::move(base)) {
  if (!object_.is_object()) throw ConfigError(location_ + ": expected an object");
}

std::string Params::where(const std::string& key) const { return location_ + "." + key; }

void Params::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(where(key) + ": " + message);
}

bool Params::has(const std::string& key) const { return object_.contains(key); }

const nlohmann::json* Params::find(const std::string& key) {
  used_.insert(key);
  const auto it = object_.find(key);
  return it == object_.end() ? nullptr : &*it;
}

double Params::number(const std::string& key, double fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (v->is_number()) return v->get<double>();
  if (v->is_string()) {
    const std::string s = v->get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(key, "expected a number or \"inf\"");
}

double Params::number(const std::string& key) {
  if (!has(key)) fail(key, "required");
  return number(key, 0.0);
}

int Params::integer(const std::string& key, int fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer()) fail(key, "expected an integer");
  return v->get<int>();
}

std::uint64_t Params::unsigned_integer(const std::string& key, std::uint64_t fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
  return v->get<std::uint64_t>();
}

bool Params::boolean(const std::string& key, bool fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) fail(key, "expected true or false");
  return v->get<bool>();
}

std::string Params::string(const std::string& key, const std::string& fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) fail(key, "expected a string");
  return v->get<std::string>();
}

std::filesystem::path Params::path(const std::string& key) {
  const std::filesystem::path p = string(key, "");
  if (p.empty()) fail(key, "required");
  return p.is_absolute() ? p : base_ / p;
}

std::vector<double> Params::numbers(const std::string& key, std::vector<double> fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (!v->is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const auto& e = (*v)[i];
    if (e.is_number()) {
      out.push_back(e.get<double>());
    } else if (e == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
    } else {
      fail(key + "[" + std::to_string(i) + "]", "expected a number");
    }
  }
  return out;
}

std::vector<int> Params::integers(const std::string& key, std::vector<int> fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return fallback;
  if (!v->is_array()) fail(key, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number_integer()) fail(key + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back((*v)[i].get<int>());
  }
  return out;
}

std::vector<double> Params::times(const std::string& key, double lo, double hi, std::size_t count) {
  const nlohmann::json* v = find(key);
  std::vector<double> out;
  if (v == nullptr) {
    out = geometric_times(lo, hi, count);
  } else if (v->is_array()) {
    used_.erase(key);
    out = numbers(key, {});
  } else if (v->is_object()) {
    Params range(*v, where(key), base_);
    const double a = range.number("lo", lo);
    const double b = range.number("hi", hi);
    const int c = range.integer("count", static_cast<int>(count));
    range.finish();
    if (!(a > 0.0) || !(b > a) || !std::isfinite(b) || c < 2) fail(key, "need 0 < lo < hi < inf and count >= 2");
    out = geometric_times(a, b, static_cast<std::size_t>(c));
  } else {
    fail(key, "expected a list of times or {lo, hi, count}");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0) || !std::isfinite(out[i]) || (i > 0 && !(out[i] > out[i - 1]))) {
      fail(key, "times must be positive, finite and increasing");
    }
  }
  return out;
}

DispersionRelation Params::relation(const std::string& key, const std::string& fallback) {
  const nlohmann::json* v = find(key);
  if (v == nullptr || v->is_string()) {
    const std::string name = v == nullptr ? fallback : v->get<std::string>();
    try {
      return builtin(name);
    } catch (const std::invalid_argument&) {
      fail(key, "unknown relation '" + name + "'");
    }
  }
  if (!v->is_object()) fail(key, "expected a relation name or object");
  Params spec(*v, where(key), base_);
  DispersionRelation rel;
  if (spec.has("builtin")) {
    rel = spec.relation("builtin", "");
    rel.name = spec.string("name", rel.name);
    rel.m1 = spec.number("m1", rel.m1);
    rel.m2 = spec.number("m2", rel.m2);
  } else {
    const std::string name = spec.string("name", "custom");
    const std::string phi = spec.string("phi", "");
    const std::string dphi = spec.string("dphi", "");
    const std::string d2phi = spec.string("d2phi", "");
    if (phi.empty() || dphi.empty() || d2phi.empty()) {
      fail(key, "custom relation needs phi, dphi and d2phi (or builtin)");
    }
    const double m1 = spec.number("m1");
    const double m2 = spec.number("m2");
    try {
      rel = custom_relation(name, phi, dphi, d2phi, m1, m2, std::nullopt, std::nullopt);
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  }
  if (spec.has("alpha1")) rel.alpha1 = spec.raw()["alpha1"].is_null() ? std::nullopt : std::optional(spec.number("alpha1"));
  if (spec.has("alpha2")) rel.alpha2 = spec.raw()["alpha2"].is_null() ? std::nullopt : std::optional(spec.number("alpha2"));
  spec.used_.insert({"alpha1", "alpha2"});
  spec.finish();
  return rel;
}

Params Params::child(const std::string& key) {
  const nlohmann::json* v = find(key);
  if (v == nullptr) return Params(nlohmann::json::object(), where(key), base_);
  if (!v->is_object()) fail(key, "expected an object");
  return Params(*v, where(key), base_);
}

std::vector<Params> Params::children(const std::string& key) {
  const nlohmann::json* v = find(key);
  std::vector<Params> out;
  if (v == nullptr) return out;
  if (!v->is_array()) fail(key, "expected an array of objects");
  for (std::size_t i = 0; i < v->size(); ++i) {
    out.emplace_back((*v)[i], where(key) + "[" + std::to_string(i) + "]", base_);
  }
  return out;
}

void Params::finish() const {
  for (const auto& item : object_.items()) {
    if (!used_.contains(item.key())) throw ConfigError(where(item.key()) + ": unknown key");
  }
}

}  // namespace dispersive::cli
