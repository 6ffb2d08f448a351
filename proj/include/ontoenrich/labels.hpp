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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ontoenrich {

// Integer codes are the row indices of the classifier head.
enum class LabelKind : int {
  kHypernym = 0,
  kHyponym = 1,
  kInstance = 2,
  kConcept = 3,
  kNone = 4,
};

inline constexpr int kNumLabels = 5;
inline constexpr std::array<LabelKind, kNumLabels> kAllLabels = {
    LabelKind::kHypernym, LabelKind::kHyponym, LabelKind::kInstance,
    LabelKind::kConcept, LabelKind::kNone};

constexpr int label_index(LabelKind k) { return static_cast<int>(k); }
constexpr LabelKind label_from_index(int i) { return static_cast<LabelKind>(i); }

std::string_view to_string(LabelKind k);
// Accepts the canonical upper-case names and common lower-case spellings
// ("hypernym", "instances", "none", ...).
std::optional<LabelKind> parse_label(std::string_view token);

// Predicates stored in the ontology graph.
enum class Predicate { kHypernym, kHyponym, kInstanceOf, kConceptOf, kDomainVerb };

std::string_view to_string(Predicate p);
std::optional<Predicate> parse_predicate(std::string_view token);

// NONE has no predicate.
std::optional<Predicate> predicate_for(LabelKind k);
std::optional<LabelKind> label_for(Predicate p);

enum class PairSource { kEndpoint, kCuration, kKnockout, kWebpage };

std::string_view to_string(PairSource s);
std::optional<PairSource> parse_source(std::string_view token);

// (a, b, label): a is the ontology-side term, b the related term. For
// HYPERNYM, b is a hypernym of a.
struct TermPair {
  std::string a;
  std::string b;
  LabelKind label = LabelKind::kNone;
  PairSource source = PairSource::kEndpoint;

  friend bool operator==(const TermPair&, const TermPair&) = default;
};

enum class TripleStatus { kPending, kAccepted, kRejected, kAutoMerged };

std::string_view to_string(TripleStatus s);
std::optional<TripleStatus> parse_status(std::string_view token);

struct Provenance {
  std::string source;
  // Sentence ids of the contributing paths; empty means the pair was
  // classified from the NULL path alone.
  std::vector<std::string> sentenceIds;
  bool nullPath = false;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct CandidateTriple {
  std::string subject;
  LabelKind predicate = LabelKind::kHypernym;
  std::string object;
  double confidence = 1.0;
  Provenance provenance;
  TripleStatus status = TripleStatus::kPending;

  friend bool operator==(const CandidateTriple&, const CandidateTriple&) = default;
};

}  // namespace ontoenrich
