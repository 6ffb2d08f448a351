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

// Review queue for candidate triples. State lives in a store directory:
//
//   changelog.tsv    authoritative ontology history (replayed on start)
//   ontology.tsv     snapshot of the current relations
//   queue.jsonl      one record per enqueued candidate, append-only
//   decisions.jsonl  one record per decision, append-only
//
// Restarting from the same directory restores every pending and decided
// entry. An accepted triple is merged under the changelog operation
// "review:<entry id>", which makes the merge exactly-once across retries and
// crashes between logging a decision and persisting the ontology.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ontoenrich/common.hpp"
#include "ontoenrich/enrich.hpp"
#include "ontoenrich/labels.hpp"
#include "ontoenrich/ontology.hpp"

namespace ontoenrich {

class NotFoundError : public DataError {
 public:
  explicit NotFoundError(const std::string& what) : DataError(what) {}
};

// A decision contradicting an earlier one on the same entry.
class ConflictError : public DataError {
 public:
  explicit ConflictError(const std::string& what) : DataError(what) {}
};

struct ProvenanceSentence {
  std::string id;
  std::string text;
  friend bool operator==(const ProvenanceSentence&, const ProvenanceSentence&) = default;
};

struct ReviewEntry {
  std::string id;
  CandidateTriple triple;  // status tracks the review state
  std::vector<ProvenanceSentence> sentences;
  std::optional<LabelKind> originalPredicate;  // set when accepted with an edit
  std::optional<std::string> decidedBy;
  std::optional<std::string> decidedAt;
  std::uint64_t enqueuedSeq = 0;

  bool decided() const { return triple.status == TripleStatus::kAccepted ||
                                 triple.status == TripleStatus::kRejected; }
  friend bool operator==(const ReviewEntry&, const ReviewEntry&) = default;
};

enum class DecisionKind { kAccept, kReject, kAcceptWithPredicate };

std::string_view to_string(DecisionKind k);
std::optional<DecisionKind> parse_decision_kind(std::string_view token);

struct Decision {
  std::string entryId;
  DecisionKind kind = DecisionKind::kAccept;
  std::optional<LabelKind> predicate;  // required for kAcceptWithPredicate
  std::string reviewer;
};

struct DecisionOutcome {
  ReviewEntry entry;
  bool replayed = false;  // identical to the recorded decision; nothing changed
  std::uint64_t version = 0;
};

struct QueuedCandidate {
  CandidateTriple triple;
  std::vector<ProvenanceSentence> sentences;
};

// Sentence texts of the doc's parsed sentences cited by the triple.
QueuedCandidate queued_candidate(const CandidateTriple& triple, const WebDocument& doc);

struct ListQuery {
  std::optional<TripleStatus> status = TripleStatus::kPending;  // nullopt: any
  std::optional<LabelKind> predicate;
  std::optional<std::string> source;
  double minConfidence = 0.0;
  double maxConfidence = 1.0;
  std::size_t offset = 0;
  std::size_t limit = 50;
};

struct ListPage {
  std::size_t total = 0;  // matches before pagination
  std::vector<ReviewEntry> entries;  // confidence descending, then id
};

struct OntologyStats {
  std::size_t concepts = 0;
  std::size_t relations = 0;
  std::uint64_t version = 0;
  std::size_t pending = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

struct ReviewStoreOptions {
  std::filesystem::path dir;
  // Loaded when the store has no changelog yet.
  std::optional<std::filesystem::path> seedOntology;
  OntologyFormat seedFormat = OntologyFormat::kTripleTsv;
};

using Clock = std::function<std::string()>;

// ISO-8601 UTC timestamp of the system clock.
std::string utc_timestamp();

// Stable entry id from source, subject, predicate and object.
std::string entry_id(const CandidateTriple& triple);

// Thread-safe: readers share a lock; enqueue, decide and merge serialize.
class ReviewService {
 public:
  explicit ReviewService(ReviewStoreOptions options, Clock clock = utc_timestamp);

  // Adds pending entries; ids already present are skipped. NONE candidates
  // are refused with a warning. Returns the number added.
  std::size_t enqueue(const std::vector<QueuedCandidate>& candidates);

  // Auto-mode merge of already-classified triples, persisted like accepted
  // decisions. Returns the number of relations applied.
  std::size_t merge_auto(const std::vector<CandidateTriple>& triples);

  // Throws NotFoundError, ArgumentError (malformed decision) or
  // ConflictError (entry already decided differently).
  DecisionOutcome decide(const Decision& decision);

  ListPage list(const ListQuery& query) const;
  std::optional<ReviewEntry> get(std::string_view id) const;
  OntologyStats stats() const;
  // Changelog records with version > `since`.
  std::vector<ChangeRecord> changes_since(std::uint64_t since) const;
  OntologyGraph graph() const;

  const std::filesystem::path& dir() const { return options_.dir; }

 private:
  void load();
  void persist_graph();
  void apply_decision(ReviewEntry& entry, const Decision& d, const std::string& at);
  bool merge_entry(const ReviewEntry& entry);

  ReviewStoreOptions options_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  OntologyGraph graph_;
  std::vector<ReviewEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// JSON records shared by the store files and the HTTP API.
std::string entry_to_json(const ReviewEntry& e);
ReviewEntry entry_from_json(std::string_view text);

}  // namespace ontoenrich
