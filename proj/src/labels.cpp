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

#include "ontoenrich/labels.hpp"

#include "ontoenrich/text.hpp"

namespace ontoenrich {

std::string_view to_string(LabelKind k) {
  switch (k) {
    case LabelKind::kHypernym: return "HYPERNYM";
    case LabelKind::kHyponym: return "HYPONYM";
    case LabelKind::kInstance: return "INSTANCE";
    case LabelKind::kConcept: return "CONCEPT";
    case LabelKind::kNone: return "NONE";
  }
  return "NONE";
}

std::optional<LabelKind> parse_label(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "hypernym" || t == "hypernymy" || t == "hypernyms") return LabelKind::kHypernym;
  if (t == "hyponym" || t == "hyponymy" || t == "hyponyms") return LabelKind::kHyponym;
  if (t == "instance" || t == "instances") return LabelKind::kInstance;
  if (t == "concept" || t == "concepts") return LabelKind::kConcept;
  if (t == "none") return LabelKind::kNone;
  if (t.size() == 1 && t[0] >= '0' && t[0] <= '4') return label_from_index(t[0] - '0');
  return std::nullopt;
}

std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::kHypernym: return "hypernym";
    case Predicate::kHyponym: return "hyponym";
    case Predicate::kInstanceOf: return "instanceOf";
    case Predicate::kConceptOf: return "conceptOf";
    case Predicate::kDomainVerb: return "domain-verb";
  }
  return "hypernym";
}

std::optional<Predicate> parse_predicate(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "hypernym") return Predicate::kHypernym;
  if (t == "hyponym") return Predicate::kHyponym;
  if (t == "instanceof") return Predicate::kInstanceOf;
  if (t == "conceptof") return Predicate::kConceptOf;
  if (t == "domain-verb") return Predicate::kDomainVerb;
  return std::nullopt;
}

std::optional<Predicate> predicate_for(LabelKind k) {
  switch (k) {
    case LabelKind::kHypernym: return Predicate::kHypernym;
    case LabelKind::kHyponym: return Predicate::kHyponym;
    case LabelKind::kInstance: return Predicate::kInstanceOf;
    case LabelKind::kConcept: return Predicate::kConceptOf;
    case LabelKind::kNone: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<LabelKind> label_for(Predicate p) {
  switch (p) {
    case Predicate::kHypernym: return LabelKind::kHypernym;
    case Predicate::kHyponym: return LabelKind::kHyponym;
    case Predicate::kInstanceOf: return LabelKind::kInstance;
    case Predicate::kConceptOf: return LabelKind::kConcept;
    case Predicate::kDomainVerb: return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(PairSource s) {
  switch (s) {
    case PairSource::kEndpoint: return "endpoint";
    case PairSource::kCuration: return "curation";
    case PairSource::kKnockout: return "knockout";
    case PairSource::kWebpage: return "webpage";
  }
  return "endpoint";
}

std::optional<PairSource> parse_source(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "endpoint") return PairSource::kEndpoint;
  if (t == "curation") return PairSource::kCuration;
  if (t == "knockout") return PairSource::kKnockout;
  if (t == "webpage") return PairSource::kWebpage;
  return std::nullopt;
}

std::string_view to_string(TripleStatus s) {
  switch (s) {
    case TripleStatus::kPending: return "pending";
    case TripleStatus::kAccepted: return "accepted";
    case TripleStatus::kRejected: return "rejected";
    case TripleStatus::kAutoMerged: return "auto-merged";
  }
  return "pending";
}

std::optional<TripleStatus> parse_status(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "pending") return TripleStatus::kPending;
  if (t == "accepted") return TripleStatus::kAccepted;
  if (t == "rejected") return TripleStatus::kRejected;
  if (t == "auto-merged") return TripleStatus::kAutoMerged;
  return std::nullopt;
}

}  // namespace ontoenrich
