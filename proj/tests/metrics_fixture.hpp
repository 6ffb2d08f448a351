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

// Hand-built 5x5 confusion fixture with its macro scores worked out as exact
// fractions (rows gold, columns predicted, label order H, Hy, I, C, N):
//   per-class precision 8/11, 5/9, 2/3, 3/5, 3/4
//   per-class recall    4/5, 1/2, 3/4, 1/2, 3/4
//   per-class F1        16/21, 10/19, 12/17, 6/11, 3/4
//   accuracy 34/50, macro P 6533/9900, macro R 33/50, macro F1 196355/298452

#include "ontoenrich/eval.hpp"

namespace ontoenrich::testing {

inline constexpr std::size_t kFixtureConfusion[5][5] = {
    {8, 1, 0, 0, 1}, {2, 5, 1, 0, 2}, {0, 1, 6, 1, 0}, {0, 0, 2, 3, 1}, {1, 2, 0, 1, 12}};

inline constexpr double kFixtureAccuracy = 34.0 / 50.0;
inline constexpr double kFixturePrecisionMacro = 6533.0 / 9900.0;
inline constexpr double kFixtureRecallMacro = 33.0 / 50.0;
inline constexpr double kFixtureF1Macro = 196355.0 / 298452.0;

// An EvalRun realizing the fixture matrix, rows emitted in a fixed order.
inline EvalRun fixture_run() {
  EvalRun run;
  int n = 0;
  for (int g = 0; g < kNumLabels; ++g) {
    for (int p = 0; p < kNumLabels; ++p) {
      for (std::size_t k = 0; k < kFixtureConfusion[g][p]; ++k) {
        run.pairs.push_back({"a" + std::to_string(n), "b" + std::to_string(n), label_from_index(g),
                             PairSource::kEndpoint});
        run.predictions.push_back({label_from_index(p), 0.5});
        ++n;
      }
    }
  }
  return run;
}

// One document whose top five ranked triples have four correct.
inline RankedJudgments four_of_five_document() { return {true, true, false, true, true, false}; }

}  // namespace ontoenrich::testing
