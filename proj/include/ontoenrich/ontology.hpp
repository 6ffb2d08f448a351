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

// Seed ontology store: concepts, relations and an append-only changelog.
//
// The graph is a value type. Mutations are not internally synchronized; a
// single writer may mutate while no reader holds a reference, after which
// the value may be copied or moved to other threads freely.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ontoenrich/labels.hpp"

namespace ontoenrich {

struct ConceptId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;
};

struct Concept {
  ConceptId id;
  std::string label;  // normalized
  std::set<std::string> aliases;  // surface forms seen for this label

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct OntologyRelation {
  ConceptId subject;
  Predicate predicate = Predicate::kHypernym;
  ConceptId object;

  friend bool operator==(const OntologyRelation&, const OntologyRelation&) = default;
};

// A relation addressed by label rather than id; stable across graphs.
struct LabeledRelation {
  std::string subject;
  Predicate predicate = Predicate::kHypernym;
  std::string object;

  friend auto operator<=>(const LabeledRelation&, const LabeledRelation&) = default;
};

struct ChangeRecord {
  std::uint64_t version = 0;
  std::string op;
  std::string subject;  // raw surface form as submitted
  Predicate predicate = Predicate::kHypernym;
  std::string object;

  friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

class OntologyGraph {
 public:
  const std::map<ConceptId, Concept>& concepts() const { return concepts_; }
  const std::vector<OntologyRelation>& relations() const { return relations_; }
  std::uint64_t version() const { return version_; }
  const std::vector<ChangeRecord>& changelog() const { return changelog_; }

  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t relation_count() const { return relations_.size(); }

  std::optional<ConceptId> find(std::string_view label) const;
  const Concept& concept_at(ConceptId id) const;
  bool contains(std::string_view subject, Predicate predicate,
                std::string_view object) const;

  LabeledRelation labeled(const OntologyRelation& r) const;
  std::vector<LabeledRelation> labeled_relations() const;

  // Applies the triples as a single version tagged `op`. Duplicates are
  // skipped. The version advances only when at least one triple applies.
  // Returns the number applied. Labels must be nonempty after normalization.
  std::size_t apply(std::string_view op, std::span<const LabeledRelation> triples);

  static OntologyGraph replay(std::span<const ChangeRecord> changelog);

  // Deterministic text form of concepts, relations and version; two graphs
  // with equal canonical() are byte-identical in every observable.
  std::string canonical() const;

  // Content equality (concepts and relations; ignores history).
  friend bool operator==(const OntologyGraph& x, const OntologyGraph& y) {
    return x.concepts_ == y.concepts_ && x.relations_ == y.relations_;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::tuple<std::uint32_t, int, std::uint32_t>& k) const {
      return (static_cast<std::size_t>(std::get<0>(k)) * 1000003u) ^
             (static_cast<std::size_t>(std::get<1>(k)) * 7919u) ^
             static_cast<std::size_t>(std::get<2>(k));
    }
  };

  ConceptId intern(std::string_view surface);

  std::map<ConceptId, Concept> concepts_;
  std::unordered_map<std::string, ConceptId> by_label_;
  std::vector<OntologyRelation> relations_;
  std::unordered_set<std::tuple<std::uint32_t, int, std::uint32_t>, KeyHash> keys_;
  std::uint64_t version_ = 0;
  std::vector<ChangeRecord> changelog_;
  std::uint32_t next_id_ = 1;
};

enum class OntologyFormat { kTripleTsv, kTurtleSubset };

std::optional<OntologyFormat> parse_ontology_format(std::string_view token);

// Triples from a TSV/Turtle-subset file, in file order. Malformed input
// raises ParseError with the line number.
std::vector<LabeledRelation> read_triples(const std::filesystem::path& path,
                                          OntologyFormat format);
std::vector<LabeledRelation> parse_triple_tsv(std::string_view text,
                                              const std::string& source = "<input>");
std::vector<LabeledRelation> parse_turtle_subset(std::string_view text,
                                                 const std::string& source = "<input>");

OntologyGraph load_ontology(const std::filesystem::path& path,
                            OntologyFormat format = OntologyFormat::kTripleTsv);

void save_ontology(const OntologyGraph& graph, const std::filesystem::path& path);

std::string format_changelog(std::span<const ChangeRecord> records);
std::vector<ChangeRecord> parse_changelog(std::string_view text,
                                          const std::string& source = "<changelog>");
void save_changelog(const OntologyGraph& graph, const std::filesystem::path& path);
std::vector<ChangeRecord> load_changelog(const std::filesystem::path& path);

enum class MergeMode { kAuto, kAcceptedOnly };

struct MergeRejection {
  std::size_t index = 0;
  std::string reason;
};

struct MergeOutcome {
  OntologyGraph graph;
  std::size_t applied = 0;
  std::size_t duplicates = 0;
  std::vector<MergeRejection> rejected;
};

// In kAcceptedOnly mode only triples with status accepted are considered.
MergeOutcome merge_triples(const OntologyGraph& graph,
                           std::span<const CandidateTriple> triples,
                           MergeMode mode);

struct KnockoutResult {
  OntologyGraph reduced;
  std::vector<LabeledRelation> heldOut;
};

// Holds out round(fraction * |relations|) relations chosen by a seeded
// shuffle. Concepts left isolated disappear from the reduced graph, which
// starts a fresh history.
KnockoutResult knockout(const OntologyGraph& graph, double fraction,
                        std::uint64_t seed);

}  // namespace ontoenrich
