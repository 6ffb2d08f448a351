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

#include "ontoenrich/model/hyperparams.hpp"

#include <cstdio>

#include "ontoenrich/common.hpp"

namespace ontoenrich {

void Hyperparams::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw ArgumentError(std::string(name) + " must be positive, got " + std::to_string(v));
  };
  positive(hiddenDim, "hidden_dim");
  positive(ffnInputDim, "ffn_input_dim");
  positive(numLayers, "num_layers");
  positive(posDim, "pos_dim");
  positive(depDim, "dep_dim");
  positive(dirDim, "dir_dim");
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw ArgumentError(std::string(name) + " must lie in [0, 1), got " + std::to_string(p));
    }
  };
  probability(embeddingDropout, "embedding_dropout");
  probability(hiddenDropout, "hidden_dropout");
  if (epochs < 0) throw ArgumentError("epochs must be non-negative");
  if (!(learningRate > 0.0)) throw ArgumentError("learning_rate must be positive");
  if (!(weightDecay >= 0.0)) throw ArgumentError("weight_decay must be non-negative");
}

Hyperparams hyperparams_from_config(const KeyValueConfig& cfg, Hyperparams h) {
  auto as_int = [&](const char* key, int fallback) {
    return static_cast<int>(cfg.get_int(key, fallback));
  };
  h.hiddenDim = as_int("hidden_dim", h.hiddenDim);
  h.ffnInputDim = as_int("ffn_input_dim", h.ffnInputDim);
  h.numLayers = as_int("num_layers", h.numLayers);
  h.embeddingDropout = cfg.get_double("embedding_dropout", h.embeddingDropout);
  h.hiddenDropout = cfg.get_double("hidden_dropout", h.hiddenDropout);
  h.epochs = as_int("epochs", h.epochs);
  h.learningRate = cfg.get_double("learning_rate", h.learningRate);
  h.weightDecay = cfg.get_double("weight_decay", h.weightDecay);
  h.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(h.seed)));
  h.posDim = as_int("pos_dim", h.posDim);
  h.depDim = as_int("dep_dim", h.depDim);
  h.dirDim = as_int("dir_dim", h.dirDim);
  h.normalizePathWeights = cfg.get_bool("normalize_path_weights", h.normalizePathWeights);
  h.validate();
  return h;
}

KeyValueConfig hyperparams_to_config(const Hyperparams& h) {
  auto real = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  KeyValueConfig cfg;
  cfg.set("hidden_dim", std::to_string(h.hiddenDim));
  cfg.set("ffn_input_dim", std::to_string(h.ffnInputDim));
  cfg.set("num_layers", std::to_string(h.numLayers));
  cfg.set("embedding_dropout", real(h.embeddingDropout));
  cfg.set("hidden_dropout", real(h.hiddenDropout));
  cfg.set("epochs", std::to_string(h.epochs));
  cfg.set("learning_rate", real(h.learningRate));
  cfg.set("weight_decay", real(h.weightDecay));
  cfg.set("seed", std::to_string(h.seed));
  cfg.set("pos_dim", std::to_string(h.posDim));
  cfg.set("dep_dim", std::to_string(h.depDim));
  cfg.set("dir_dim", std::to_string(h.dirDim));
  cfg.set("normalize_path_weights", h.normalizePathWeights ? "true" : "false");
  return cfg;
}

TagVocab::TagVocab() : TagVocab(std::vector<std::string>{}) {}

TagVocab::TagVocab(const std::vector<std::string>& tags) {
  tags_.emplace_back(kUnk);
  ids_.emplace(std::string(kUnk), 0);
  for (const auto& t : tags) {
    if (ids_.emplace(t, static_cast<int>(tags_.size())).second) tags_.push_back(t);
  }
}

int TagVocab::id(std::string_view tag) const {
  auto it = ids_.find(std::string(tag));
  return it == ids_.end() ? 0 : it->second;
}

TagVocab direction_vocab() { return TagVocab({"+", "~", "-"}); }

}  // namespace ontoenrich
