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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ontoenrich {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Lowercases, maps underscores to spaces and collapses runs of whitespace.
// Idempotent.
std::string normalize_label(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// Lowercase alphanumeric word tokens; used by bag-of-words scorers and the
// hash embedding provider.
std::vector<std::string> word_tokens(std::string_view s);

// Stable 64-bit FNV-1a; std::hash is not stable across implementations.
std::uint64_t fnv1a64(std::string_view s,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::string percent_decode(std::string_view s);

// Tab-separated fields with `\t`, `\n` and `\\` escaped so any label
// survives a round trip through a TSV line.
std::string escape_tsv(std::string_view s);
std::string unescape_tsv(std::string_view s);

}  // namespace ontoenrich
