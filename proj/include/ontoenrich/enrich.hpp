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

// Web page to candidate ontology triples: ingest, sufficiency gate, noun
// chunks, pairing, two-stage similarity filter, classification and triple
// emission.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontoenrich/embedding.hpp"
#include "ontoenrich/labels.hpp"
#include "ontoenrich/model/network.hpp"
#include "ontoenrich/ontology.hpp"
#include "ontoenrich/paths.hpp"

namespace ontoenrich {

struct WebDocument {
  std::string source;
  std::string text;
  std::vector<std::string> sentences;
  std::vector<ParsedSentence> parsed;
  std::vector<std::string> chunks;  // normalized, unique, first-seen order
};

struct Thresholds {
  double domainSim = 0.25;
  double pairSim = 0.40;
  double sufficiency = 0.10;

  // Throws ArgumentError unless every value lies in [0, 1].
  void validate() const;
};

// Text of paragraph-level elements only; script, style, nav, header, footer
// and aside blocks are dropped before paragraphs are collected. Entities are
// decoded and whitespace collapsed; paragraphs are separated by newlines.
std::string extract_paragraph_text(std::string_view html);

bool looks_like_html(std::string_view text);

// Fetches http(s) URLs (UpstreamError on failure) or reads a local file
// (DataError when unreadable). HTML keeps paragraph text only; plain text
// passes through unchanged. A document without text is a DataError.
WebDocument ingest(const std::string& source);

// Same as ingest for already-loaded content.
WebDocument ingest_text(std::string source, std::string_view content);

// Replaces mentions before chunking; the default leaves sentences untouched.
using CoreferenceResolver =
    std::function<std::vector<ParsedSentence>(std::vector<ParsedSentence>)>;

// Noun chunks of one parsed sentence: each NOUN/PROPN/PRON token with an
// argument-like dependency spans its left subtree; leading determiners and
// possessives are dropped and pronoun-only chunks discarded.
std::vector<std::string> noun_chunks(const std::vector<ParsedToken>& tokens);

// Parses the document sentences and fills `parsed` and `chunks`. Sentences
// the parser rejects are skipped with a warning.
void analyze_document(WebDocument& doc, const DependencyParser& parser,
                      const CoreferenceResolver& coref = {});

struct SufficiencyReport {
  std::size_t chunks = 0;
  std::size_t domainChunks = 0;
  std::size_t newDomainChunks = 0;
  double ratio = 0.0;
  bool enabled = true;
  bool passed = false;
};

SufficiencyReport sufficiency_gate(const WebDocument& doc, const OntologyGraph& graph,
                                   std::string_view anchorText, const EmbeddingProvider& provider,
                                   const Thresholds& t, bool enabled);

// All unordered pairs (chunks[i], chunks[j]) with i < j.
std::vector<std::pair<std::string, std::string>> generate_pairs(
    const std::vector<std::string>& chunks);

std::vector<std::pair<std::string, std::string>> filter_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs, std::string_view anchorText,
    const EmbeddingProvider& provider, const Thresholds& t);

enum class EnrichMode { kAuto, kReview };

std::string_view to_string(EnrichMode m);
std::optional<EnrichMode> parse_enrich_mode(std::string_view token);

struct EnrichOptions {
  std::string anchorText = "information security";
  Thresholds thresholds;
  bool sufficiencyEnabled = false;
  PathOptions paths;
};

struct EnrichSummary {
  std::size_t sentences = 0;
  std::size_t chunks = 0;
  std::size_t pairs = 0;
  std::size_t survivingPairs = 0;
  std::size_t noneDiscarded = 0;
  std::size_t failures = 0;
  SufficiencyReport sufficiency;
};

struct EnrichResult {
  std::vector<CandidateTriple> candidates;
  OntologyGraph graph;  // merged in auto mode, the input graph otherwise
  EnrichSummary summary;
};

// Each surviving pair is classified in both orderings from paths in the
// document's own sentences; the higher-confidence non-NONE ordering wins and
// pairs classified NONE both ways are discarded. Candidates are sorted by
// confidence descending. Auto mode merges them into the returned graph;
// review mode leaves them pending and the graph untouched.
EnrichResult enrich(const WebDocument& doc, const RelationModel<double>& model,
                    const EmbeddingProvider& provider, const OntologyGraph& graph, EnrichMode mode,
                    const EnrichOptions& options = {});

// `subject<TAB>predicate<TAB>object<TAB>confidence<TAB>source` per line.
std::string format_triples_tsv(const std::vector<CandidateTriple>& triples);
// Readable by parse_turtle_subset.
std::string format_triples_turtle(const std::vector<CandidateTriple>& triples);

struct CalibrationExample {
  std::string a;
  std::string b;
  bool related = false;
};

// `a<TAB>b<TAB>label` where label is 0/1 or a relation label (NONE means
// unrelated).
std::vector<CalibrationExample> parse_calibration(std::string_view text,
                                                  const std::string& source = "<calibration>");

struct CalibrationPoint {
  double domainSim = 0.0;
  double pairSim = 0.0;
  double accuracy = 0.0;
};

struct CalibrationReport {
  std::vector<CalibrationPoint> grid;
  CalibrationPoint best;
};

// Sweeps both similarity thresholds over {0, step, 2 step, ..., 1} and
// scores how often "survives filter_pairs" agrees with `related`. Ties keep
// the earliest point (lowest domain threshold, then lowest pair threshold).
CalibrationReport calibrate_thresholds(const std::vector<CalibrationExample>& examples,
                                       std::string_view anchorText,
                                       const EmbeddingProvider& provider, double step = 0.05);

}  // namespace ontoenrich
