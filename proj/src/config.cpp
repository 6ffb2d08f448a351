// Copyright 2026 The ontoenrich Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ontoenrich/config.hpp"

#include <cstdlib>
#include <cerrno>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

extern char** environ;

namespace ontoenrich {

std::string canonical_key(std::string_view key) {
  std::string out = to_lower(trim(key));
  for (char& c : out) {
    if (c == '-') c = '_';
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
  KeyValueConfig cfg;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line = trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(std::string(source), n + 1, "expected 'key = value'");
    }
    const std::string key = canonical_key(line.substr(0, eq));
    if (key.empty()) throw ParseError(std::string(source), n + 1, "empty key");
    cfg.set(key, trim(std::string_view(line).substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

void KeyValueConfig::set(std::string key, std::string value) {
  entries_[canonical_key(key)] = std::move(value);
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

void KeyValueConfig::merge_environment(std::string_view prefix) {
  const std::string p = std::string(prefix) + "_";
  for (char** env = environ; env && *env; ++env) {
    const std::string_view entry(*env);
    if (entry.substr(0, p.size()) != p) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos || eq == p.size()) continue;
    set(std::string(entry.substr(p.size(), eq - p.size())), std::string(entry.substr(eq + 1)));
  }
}

bool KeyValueConfig::contains(std::string_view key) const {
  return entries_.find(canonical_key(key)) != entries_.end();
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  auto it = entries_.find(canonical_key(key));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string_view fallback) const {
  auto v = get(key);
  return v ? *v : std::string(fallback);
}

long long KeyValueConfig::get_int(std::string_view key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v->c_str(), &end, 10);
  if (v->empty() || *end != '\0' || errno == ERANGE) {
    throw ArgumentError("config key '" + std::string(key) + "' expects an integer, got '" + *v + "'");
  }
  return x;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v->c_str(), &end);
  if (v->empty() || *end != '\0' || errno == ERANGE) {
    throw ArgumentError("config key '" + std::string(key) + "' expects a number, got '" + *v + "'");
  }
  return x;
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  const std::string s = to_lower(*v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ArgumentError("config key '" + std::string(key) + "' expects a boolean, got '" + *v + "'");
}

std::string KeyValueConfig::format() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace ontoenrich
