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

// Command-line driver. Every setting is a schema key that can come from a
// `key = value` file (--config), an ONTOENRICH_<KEY> environment variable or
// a --key-name flag, in increasing order of precedence.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontoenrich/config.hpp"

namespace ontoenrich {

enum class KeyType { kString, kPath, kSource, kInt, kDouble, kBool, kChoice };

struct KeySpec {
  std::string name;
  KeyType type = KeyType::kString;
  // Empty means required when consumed. Relative path defaults live under
  // work_dir.
  std::string fallback;
  std::string help;
  std::vector<std::string> commands;
  std::vector<std::string> choices;  // kChoice only
};

const std::vector<KeySpec>& run_config_schema();
const KeySpec* find_key_spec(std::string_view name);

// Layered run configuration validated against the schema.
class RunConfig {
 public:
  // Throws ArgumentError for unknown keys or values of the wrong type.
  // Relative paths in the value resolve against `base`.
  void set(std::string_view key, std::string value, std::filesystem::path base,
           std::string origin);
  void load_file(const std::filesystem::path& path);
  // Unknown ONTOENRICH_* variables are ignored with a warning.
  void load_environment(std::string_view prefix = "ONTOENRICH");

  bool has(std::string_view key) const;
  std::string str(std::string_view key) const;
  long long integer(std::string_view key) const;
  double real(std::string_view key) const;
  bool boolean(std::string_view key) const;
  // Resolved path; defaults resolve against work_dir.
  std::filesystem::path path(std::string_view key) const;
  std::optional<std::filesystem::path> optional_path(std::string_view key) const;
  // Comma-separated paths, each resolved.
  std::vector<std::filesystem::path> path_list(std::string_view key) const;
  // URL as given, or a resolved file path.
  std::string source(std::string_view key) const;
  // Descriptor with its file part resolved ("table:<path>", "preparsed:<path>").
  std::string descriptor(std::string_view key) const;

  // Explicitly set model keys, for hyperparams_from_config.
  KeyValueConfig model_keys() const;

  // `key = value  # origin` for every explicitly set key.
  std::string describe() const;

 private:
  struct Value {
    std::string text;
    std::filesystem::path base;
    std::string origin;
  };
  const Value* find(std::string_view key) const;
  std::string raw(std::string_view key) const;
  std::map<std::string, Value> values_;
};

// Runs the tool; returns the exit code: 0 success, 1 usage, 2 data error,
// 3 upstream-service error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ontoenrich
