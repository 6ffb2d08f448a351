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

// Evaluation: confusion matrix, accuracy and macro precision/recall/F1,
// per-class accuracy, P@k over ranked per-document triples, and the
// knockout test set built from the seed ontology.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontoenrich/dataset.hpp"
#include "ontoenrich/embedding.hpp"
#include "ontoenrich/labels.hpp"
#include "ontoenrich/model/network.hpp"
#include "ontoenrich/ontology.hpp"
#include "ontoenrich/paths.hpp"

namespace ontoenrich {

enum class EvalKind { kHoldout, kKnockout, kWebpage };

std::string_view to_string(EvalKind k);
std::optional<EvalKind> parse_eval_kind(std::string_view token);

struct Prediction {
  LabelKind predicted = LabelKind::kNone;
  double confidence = 0.0;
};

struct EvalRun {
  EvalKind kind = EvalKind::kHoldout;
  std::vector<TermPair> pairs;  // gold labels
  std::vector<Prediction> predictions;  // aligned with pairs
};

using ConfusionMatrix = std::array<std::array<std::size_t, kNumLabels>, kNumLabels>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold = 0;
  std::size_t predicted = 0;
};

struct Metrics {
  std::size_t total = 0;
  double accuracy = 0.0;
  double precisionMacro = 0.0;
  double recallMacro = 0.0;
  double f1Macro = 0.0;
  std::map<LabelKind, ClassMetrics> perClass;  // every class
  ConfusionMatrix confusion{};  // [gold][predicted]
  // Classes with gold support; the macro averages run over these.
  std::vector<LabelKind> averagedClasses;
};

ConfusionMatrix confusion_matrix(const EvalRun& run);

// Metrics from a confusion matrix alone. Precision of a class never
// predicted is 0. Throws DataError when the matrix is empty.
Metrics metrics_from_confusion(const ConfusionMatrix& confusion);

// Throws DataError when the run is empty or predictions and pairs differ in
// length.
Metrics compute_metrics(const EvalRun& run);

// correct-c / gold-c; nullopt for classes without gold pairs.
std::map<LabelKind, std::optional<double>> per_class_accuracy(const EvalRun& run);

// Gold flags of one document's triples in rank order (confidence descending).
using RankedJudgments = std::vector<bool>;

// Mean over documents of correct-in-top-k / min(k, |document|); a document
// without triples contributes 0. Throws ArgumentError on an empty document
// list or a non-positive k.
std::map<int, double> precision_at_k(const std::vector<RankedJudgments>& documents,
                                     const std::vector<int>& ks);

// `rank<TAB>correct(0|1)` lines; ranks must be 1..n without gaps in any
// order.
RankedJudgments parse_answers(std::string_view text, const std::string& source = "<answers>");
RankedJudgments load_answers(const std::filesystem::path& path);

// Classifies every pair with its collected paths.
EvalRun evaluate_pairs(const std::vector<PairPaths>& data, const RelationModel<double>& model,
                       const EmbeddingProvider& provider, EvalKind kind);

struct KnockoutEval {
  EvalRun run;  // gold pairs from the held-out relations, no predictions yet
  OntologyGraph seed;  // ontology with the held-out relations removed
  CuratedDataset training;  // dataset minus pairs overlapping a gold pair
};

// Held-out relations with a relation label become gold pairs (subject, object,
// label). Throws ArgumentError when the fraction yields no gold pairs.
KnockoutEval make_knockout_eval(const OntologyGraph& graph, double fraction, std::uint64_t seed,
                                const CuratedDataset& dataset);

std::string format_metrics_table(const Metrics& m);
std::string metrics_to_json(const Metrics& m);
std::string format_precision_at_k(const std::map<int, double>& pk);

}  // namespace ontoenrich
