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

#pragma once

// Line-oriented `key = value` configuration. Blank lines and lines starting
// with '#' are ignored; later assignments override earlier ones.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ontoenrich {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  // Copies every entry of `other` over this one.
  void merge(const KeyValueConfig& other);
  // Reads PREFIX_SOME_KEY variables as `some_key` from the environment.
  void merge_environment(std::string_view prefix);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  // Typed accessors throw ArgumentError naming the key on malformed values.
  long long get_int(std::string_view key, long long fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  std::string format() const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Keys are compared after lowercasing and mapping '-' to '_'.
std::string canonical_key(std::string_view key);

}  // namespace ontoenrich
