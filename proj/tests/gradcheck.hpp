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

// Central finite-difference check of the analytic gradients of the pair
// loss, on a random slice of every parameter group.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ontoenrich/model/network.hpp"

namespace ontoenrich::testing {

struct GroupCheck {
  std::string group;
  std::size_t checked = 0;
  double maxRelError = 0.0;
};

// The slice is drawn from entries whose analytic gradient is at least
// `minMagnitude` when the group has any; smaller entries are dominated by
// cancellation in the difference quotient. When `dropoutSeed` is set, every
// evaluation replays the same dropout masks.
inline std::vector<GroupCheck> gradient_check(RelationModel<double>& model, const PairPaths& pp,
                                              const EmbeddingProvider& provider,
                                              std::uint64_t sliceSeed, std::size_t slice = 20,
                                              std::optional<std::uint64_t> dropoutSeed = {},
                                              double eps = 1e-5, double minMagnitude = 1e-5) {
  auto loss = [&] {
    std::optional<Rng> rng;
    if (dropoutSeed) rng.emplace(*dropoutSeed);
    const auto tr = model.forward(pp.pair, pp, provider, rng ? &*rng : nullptr);
    return -tr.logProbs(label_index(pp.pair.label));
  };
  ModelParams<double> grad = model.params().zeros_like();
  {
    std::optional<Rng> rng;
    if (dropoutSeed) rng.emplace(*dropoutSeed);
    const auto tr = model.forward(pp.pair, pp, provider, rng ? &*rng : nullptr);
    model.backward(tr, pp.pair.label, grad);
  }
  auto params = model.params().tensors();
  auto grads = grad.tensors();

  struct Entry {
    std::size_t tensor;
    Eigen::Index index;
  };
  std::map<std::string, std::vector<Entry>> large;
  std::map<std::string, std::vector<Entry>> nonzero;
  std::map<std::string, std::vector<Entry>> all;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index i = 0; i < params[k].size(); ++i) {
      all[params[k].group].push_back({k, i});
      const double g = std::abs(grads[k].data[i]);
      if (g >= minMagnitude) large[params[k].group].push_back({k, i});
      if (g > 1e-12) nonzero[params[k].group].push_back({k, i});
    }
  }

  Rng rng(sliceSeed);
  std::vector<GroupCheck> out;
  for (auto& [group, entries] : all) {
    auto& pool = !large[group].empty() ? large[group] : !nonzero[group].empty() ? nonzero[group] : entries;
    rng.shuffle(std::span<Entry>(pool));
    GroupCheck check{group, 0, 0.0};
    for (std::size_t s = 0; s < std::min(slice, pool.size()); ++s) {
      double& p = params[pool[s].tensor].data[pool[s].index];
      const double analytic = grads[pool[s].tensor].data[pool[s].index];
      const double saved = p;
      p = saved + eps;
      const double up = loss();
      p = saved - eps;
      const double down = loss();
      p = saved;
      const double numeric = (up - down) / (2 * eps);
      const double scale = std::max(std::abs(analytic), std::abs(numeric));
      const double rel = scale < 1e-9 ? std::abs(analytic - numeric) : std::abs(analytic - numeric) / scale;
      check.maxRelError = std::max(check.maxRelError, rel);
      ++check.checked;
    }
    out.push_back(check);
  }
  return out;
}

}  // namespace ontoenrich::testing
