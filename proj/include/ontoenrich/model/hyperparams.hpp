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
#include <unordered_map>
#include <vector>

#include "ontoenrich/config.hpp"

namespace ontoenrich {

struct Hyperparams {
  int hiddenDim = 180;
  int ffnInputDim = 120;
  int numLayers = 2;
  double embeddingDropout = 0.35;
  double hiddenDropout = 0.8;
  int epochs = 200;
  double learningRate = 0.001;
  double weightDecay = 0.001;
  std::uint64_t seed = 0;
  int posDim = 8;
  int depDim = 8;
  int dirDim = 4;
  // Divide the count-weighted path sum by the total count.
  bool normalizePathWeights = true;

  // Throws ArgumentError on non-positive dims or out-of-range rates.
  void validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Reads the keys named like the fields in snake_case (hidden_dim, ...);
// absent keys keep `base` values. Unknown model keys are ignored.
Hyperparams hyperparams_from_config(const KeyValueConfig& cfg, Hyperparams base = {});
KeyValueConfig hyperparams_to_config(const Hyperparams& h);

// Tag vocabulary with a reserved UNK entry at id 0.
class TagVocab {
 public:
  static constexpr std::string_view kUnk = "<unk>";

  TagVocab();
  explicit TagVocab(const std::vector<std::string>& tags);

  int id(std::string_view tag) const;
  const std::string& tag(int id) const { return tags_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(tags_.size()); }
  const std::vector<std::string>& tags() const { return tags_; }

  friend bool operator==(const TagVocab& a, const TagVocab& b) { return a.tags_ == b.tags_; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> ids_;
};

struct TagVocabs {
  TagVocab pos;
  TagVocab dep;
  TagVocab dir;

  friend bool operator==(const TagVocabs&, const TagVocabs&) = default;
};

// The direction vocabulary is fixed: <unk>, +, ~, -.
TagVocab direction_vocab();

}  // namespace ontoenrich
