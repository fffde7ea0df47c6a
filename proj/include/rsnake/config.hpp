/*
 * rsnake: resolution-adaptive deformable contours
 *
 * Copyright 2026 The rsnake Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "rsnake/geometry.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace rsnake {

/// Flat `key = value` configuration. Blank lines and text after `#` are ignored.
class Config {
 public:
  static Config parse(std::string_view text) {
    Config c;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (!line.empty()) {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
          throw ParseError("config line " + std::to_string(line_no) + ": expected key = value", pos);
        const std::string_view key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key", pos);
        c.values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
      }
      pos = end + 1;
    }
    return c;
  }

  static Config load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  bool has(const std::string &key) const { return values_.count(key) != 0; }
  void set(const std::string &key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string> &values() const noexcept { return values_; }

  std::optional<std::string> get(const std::string &key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  /// Overlay `other` on top of this config.
  void merge(const Config &other) {
    for (const auto &[k, v] : other.values_) values_[k] = v;
  }

  static double to_double(const std::string &key, const std::string &v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ParameterError("config key '" + key + "': not a number: " + v);
    return out;
  }

  static long long to_int(const std::string &key, const std::string &v) {
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw ParameterError("config key '" + key + "': not an integer: " + v);
    return out;
  }

  static bool to_bool(const std::string &key, const std::string &v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ParameterError("config key '" + key + "': not a boolean: " + v);
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  std::map<std::string, std::string> values_;
};

/// Binds named fields of a parameter struct to a Config. `Fields` is a callable taking a
/// visitor and calling `visit(name, field_ref)` for every exposed field.
template <typename Params, typename Fields>
void apply_config(const Config &cfg, Params &params, Fields &&fields, bool reject_unknown = true) {
  std::map<std::string, bool> seen;
  fields(params, [&](const char *name, auto &field) {
    seen[name] = true;
    const auto v = cfg.get(name);
    if (!v) return;
    using T = std::decay_t<decltype(field)>;
    if constexpr (std::is_same_v<T, bool>)
      field = Config::to_bool(name, *v);
    else if constexpr (std::is_integral_v<T>)
      field = static_cast<T>(Config::to_int(name, *v));
    else if constexpr (std::is_floating_point_v<T>)
      field = Config::to_double(name, *v);
    else
      field = *v;
  });
  if (reject_unknown)
    for (const auto &[k, v] : cfg.values())
      if (!seen.count(k)) throw ParameterError("unknown config key: " + k);
}

/// Writes every bound field as `key = value`, one per line, in binding order.
template <typename Params, typename Fields>
void dump_config(const Params &params, Fields &&fields, std::ostream &os) {
  Params copy = params;
  fields(copy, [&](const char *name, auto &field) {
    using T = std::decay_t<decltype(field)>;
    os << name << " = ";
    if constexpr (std::is_same_v<T, bool>)
      os << (field ? "true" : "false");
    else if constexpr (std::is_floating_point_v<T>) {
      std::ostringstream v;
      v.precision(17);
      v << field;
      os << v.str();
    } else
      os << field;
    os << '\n';
  });
}

}  // namespace rsnake
