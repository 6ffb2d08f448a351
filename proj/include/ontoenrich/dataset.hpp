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

// Labeled term-pair dataset: harvesting related terms from a SPARQL
// endpoint, expert curation overrides, NONE-pair thinning and the
// stratified holdout split.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontoenrich/labels.hpp"
#include "ontoenrich/ontology.hpp"
#include "ontoenrich/sparql.hpp"

namespace ontoenrich {

struct CuratedDataset {
  std::vector<TermPair> pairs;
  std::map<LabelKind, std::size_t> provenanceCounts;

  // Validates key uniqueness and a != b; computes counts.
  static CuratedDataset from_pairs(std::vector<TermPair> pairs);
  std::size_t size() const { return pairs.size(); }
};

struct RelatedTerm {
  std::string term;
  LabelKind relation = LabelKind::kHypernym;  // HYPERNYM or HYPONYM only

  friend bool operator==(const RelatedTerm&, const RelatedTerm&) = default;
};

// The two query templates with `$concept` substituted.
std::string hypernym_query(std::string_view resource);
std::string hyponym_query(std::string_view resource);

// "real-time adaptive security" -> "Real-time_adaptive_security".
std::string dbpedia_resource_name(std::string_view concept_label);
// "http://dbpedia.org/resource/Access_control" -> "Access control".
std::string label_from_resource(std::string_view uri);

// Hypernyms from the forward query, hyponyms from the inverse query,
// deduplicated in result order.
std::vector<RelatedTerm> fetch_related_terms(std::string_view concept_label,
                                             SparqlEndpoint& endpoint);

// Offline endpoint answering the two hypernym query templates from a TSV of
// `resource<TAB>hypernym_resource` edges ('#' starts a comment). Any other
// query has no solutions.
class HypernymTableEndpoint final : public SparqlEndpoint {
 public:
  explicit HypernymTableEndpoint(const std::filesystem::path& path);
  std::vector<SparqlRow> select(const std::string& query) override;

 private:
  std::map<std::string, std::vector<SparqlRow>> answers_;
};

struct FetchFailure {
  std::string concept_label;
  std::string message;
};

struct RawDataset {
  std::vector<TermPair> pairs;
  std::vector<FetchFailure> failures;
};

// Queries every concept (in label order) with at most `parallelism`
// concurrent fetches; failures are collected, the batch continues.
RawDataset build_raw_dataset(const OntologyGraph& graph, SparqlEndpoint& endpoint,
                             unsigned parallelism = 4);

struct CurationRow {
  std::string a;
  std::string b;
  LabelKind label = LabelKind::kNone;
};

// `a<TAB>b<TAB>new_label`; an unknown label token is a ParseError.
std::vector<CurationRow> parse_curation(std::string_view text,
                                        const std::string& source = "<curation>");

CuratedDataset apply_curation(std::span<const TermPair> raw,
                              std::span<const CurationRow> curation);

enum class NoneRetention { kKeepLeastSimilar, kKeepMostSimilar };

using TermSimilarity = std::function<double(const std::string&, const std::string&)>;

// Keeps every non-NONE pair and exactly floor(fraction * |NONE|) NONE pairs
// from the chosen end of the similarity order. Ties break on (a, b).
CuratedDataset filter_none_pairs(const CuratedDataset& dataset, double fraction,
                                 const TermSimilarity& similarity,
                                 NoneRetention strategy = NoneRetention::kKeepLeastSimilar);

struct HoldoutSplit {
  CuratedDataset train;
  CuratedDataset test;
};

// Stratified by label: floor(fraction * |class|) of each class goes to test.
HoldoutSplit split_holdout(const CuratedDataset& dataset, double fraction, std::uint64_t seed);

std::string format_dataset(const CuratedDataset& dataset);
CuratedDataset parse_dataset(std::string_view text, const std::string& source = "<dataset>");
void save_dataset(const CuratedDataset& dataset, const std::filesystem::path& path);
CuratedDataset load_dataset(const std::filesystem::path& path);

}  // namespace ontoenrich
