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

#include "ontoenrich/review.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>

#include "ontoenrich/config.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

using nlohmann::json;

std::string_view to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::kAccept: return "accept";
    case DecisionKind::kReject: return "reject";
    case DecisionKind::kAcceptWithPredicate: return "accept-with-predicate";
  }
  return "accept";
}

std::optional<DecisionKind> parse_decision_kind(std::string_view token) {
  const std::string t = canonical_key(trim(token));
  if (t == "accept") return DecisionKind::kAccept;
  if (t == "reject") return DecisionKind::kReject;
  if (t == "accept_with_predicate" || t == "edit") return DecisionKind::kAcceptWithPredicate;
  return std::nullopt;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string entry_id(const CandidateTriple& triple) {
  const std::string key = triple.provenance.source + '\x1f' + normalize_label(triple.subject) +
                          '\x1f' + std::string(to_string(triple.predicate)) + '\x1f' +
                          normalize_label(triple.object);
  return "c" + hex64(fnv1a64(key));
}

QueuedCandidate queued_candidate(const CandidateTriple& triple, const WebDocument& doc) {
  QueuedCandidate q{triple, {}};
  for (const auto& id : triple.provenance.sentenceIds) {
    auto it = std::find_if(doc.parsed.begin(), doc.parsed.end(),
                           [&](const ParsedSentence& s) { return s.id == id; });
    if (it == doc.parsed.end()) continue;
    std::string text = it->text();
    // Prefer the original sentence over the space-joined tokens.
    if (id.size() > 1 && id[0] == 's') {
      const std::size_t k = std::strtoul(id.c_str() + 1, nullptr, 10);
      if (k >= 1 && k <= doc.sentences.size()) text = doc.sentences[k - 1];
    }
    q.sentences.push_back({id, std::move(text)});
  }
  return q;
}

std::string entry_to_json(const ReviewEntry& e) {
  json sentences = json::array();
  for (const auto& s : e.sentences) sentences.push_back({{"id", s.id}, {"text", s.text}});
  json j = {{"id", e.id},
            {"subject", e.triple.subject},
            {"predicate", std::string(to_string(e.triple.predicate))},
            {"object", e.triple.object},
            {"confidence", e.triple.confidence},
            {"status", std::string(to_string(e.triple.status))},
            {"source", e.triple.provenance.source},
            {"sentence_ids", e.triple.provenance.sentenceIds},
            {"null_path", e.triple.provenance.nullPath},
            {"sentences", sentences},
            {"seq", e.enqueuedSeq}};
  j["original_predicate"] =
      e.originalPredicate ? json(std::string(to_string(*e.originalPredicate))) : json(nullptr);
  j["decided_by"] = e.decidedBy ? json(*e.decidedBy) : json(nullptr);
  j["decided_at"] = e.decidedAt ? json(*e.decidedAt) : json(nullptr);
  return j.dump();
}

namespace {

LabelKind label_field(const json& j, const char* key) {
  const auto label = parse_label(j.at(key).get<std::string>());
  if (!label) throw DataError(std::string("unknown label in field ") + key);
  return *label;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

ReviewEntry entry_from_json(std::string_view text) {
  const json j = json::parse(text);
  ReviewEntry e;
  e.id = j.at("id").get<std::string>();
  e.triple.subject = j.at("subject").get<std::string>();
  e.triple.predicate = label_field(j, "predicate");
  e.triple.object = j.at("object").get<std::string>();
  e.triple.confidence = j.at("confidence").get<double>();
  const auto status = parse_status(j.at("status").get<std::string>());
  if (!status) throw DataError("unknown status in review entry " + e.id);
  e.triple.status = *status;
  e.triple.provenance.source = j.at("source").get<std::string>();
  e.triple.provenance.sentenceIds = j.at("sentence_ids").get<std::vector<std::string>>();
  e.triple.provenance.nullPath = j.at("null_path").get<bool>();
  for (const auto& s : j.at("sentences")) {
    e.sentences.push_back({s.at("id").get<std::string>(), s.at("text").get<std::string>()});
  }
  e.enqueuedSeq = j.value("seq", std::uint64_t{0});
  if (auto p = optional_string(j, "original_predicate")) {
    const auto label = parse_label(*p);
    if (!label) throw DataError("unknown label in field original_predicate");
    e.originalPredicate = *label;
  }
  e.decidedBy = optional_string(j, "decided_by");
  e.decidedAt = optional_string(j, "decided_at");
  return e;
}

ReviewService::ReviewService(ReviewStoreOptions options, Clock clock)
    : options_(std::move(options)), clock_(std::move(clock)) {
  if (options_.dir.empty()) throw ArgumentError("review store directory is required");
  std::filesystem::create_directories(options_.dir);
  load();
}

namespace {

// Lines of an append-only JSON log. A malformed final line is a torn write
// from an interrupted append and is dropped with a warning.
std::vector<json> read_log(const std::filesystem::path& path) {
  std::vector<json> out;
  if (!std::filesystem::exists(path)) return out;
  const auto lines = lines_of(read_file(path));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    try {
      out.push_back(json::parse(lines[n]));
    } catch (const json::exception& e) {
      if (n + 1 == lines.size()) {
        warn(path.string() + ":" + std::to_string(n + 1) + ": dropping torn final record");
        break;
      }
      throw ParseError(path.string(), n + 1, std::string("malformed record: ") + e.what());
    }
  }
  return out;
}

}  // namespace

void ReviewService::load() {
  const auto changelog = options_.dir / "changelog.tsv";
  if (std::filesystem::exists(changelog)) {
    const auto records = load_changelog(changelog);
    graph_ = OntologyGraph::replay(records);
  } else if (options_.seedOntology) {
    graph_ = load_ontology(*options_.seedOntology, options_.seedFormat);
    persist_graph();
  }

  const auto queuePath = options_.dir / "queue.jsonl";
  std::size_t n = 0;
  for (const auto& record : read_log(queuePath)) {
    ++n;
    ReviewEntry e;
    try {
      e = entry_from_json(record.dump());
    } catch (const std::exception& ex) {
      throw ParseError(queuePath.string(), n, ex.what());
    }
    if (index_.count(e.id)) continue;
    index_[e.id] = entries_.size();
    entries_.push_back(std::move(e));
  }

  bool merged = false;
  const auto decisionsPath = options_.dir / "decisions.jsonl";
  n = 0;
  for (const auto& record : read_log(decisionsPath)) {
    ++n;
    try {
      Decision d;
      d.entryId = record.at("id").get<std::string>();
      const auto kind = parse_decision_kind(record.at("decision").get<std::string>());
      if (!kind) throw DataError("unknown decision");
      d.kind = *kind;
      if (auto p = optional_string(record, "predicate")) d.predicate = parse_label(*p);
      d.reviewer = record.value("reviewer", "");
      auto it = index_.find(d.entryId);
      if (it == index_.end()) {
        warn(decisionsPath.string() + ":" + std::to_string(n) + ": decision for unknown entry " +
             d.entryId);
        continue;
      }
      ReviewEntry& entry = entries_[it->second];
      if (entry.decided()) continue;
      apply_decision(entry, d, record.value("at", ""));
    } catch (const json::exception& ex) {
      throw ParseError(decisionsPath.string(), n, ex.what());
    }
  }
  // Accepted entries whose merge did not reach the changelog before a crash.
  for (const auto& entry : entries_) {
    if (entry.triple.status == TripleStatus::kAccepted) merged = merge_entry(entry) || merged;
  }
  if (merged) persist_graph();
}

void ReviewService::persist_graph() {
  save_changelog(graph_, options_.dir / "changelog.tsv");
  save_ontology(graph_, options_.dir / "ontology.tsv");
}

void ReviewService::apply_decision(ReviewEntry& entry, const Decision& d, const std::string& at) {
  if (d.kind == DecisionKind::kReject) {
    entry.triple.status = TripleStatus::kRejected;
  } else {
    entry.triple.status = TripleStatus::kAccepted;
    if (d.kind == DecisionKind::kAcceptWithPredicate && d.predicate &&
        *d.predicate != entry.triple.predicate) {
      entry.originalPredicate = entry.triple.predicate;
      entry.triple.predicate = *d.predicate;
    }
  }
  if (!d.reviewer.empty()) entry.decidedBy = d.reviewer;
  if (!at.empty()) entry.decidedAt = at;
}

bool ReviewService::merge_entry(const ReviewEntry& entry) {
  const auto pred = predicate_for(entry.triple.predicate);
  if (!pred) return false;
  if (graph_.contains(entry.triple.subject, *pred, entry.triple.object)) return false;
  const LabeledRelation rel{entry.triple.subject, *pred, entry.triple.object};
  return graph_.apply("review:" + entry.id, std::span(&rel, 1)) > 0;
}

std::size_t ReviewService::enqueue(const std::vector<QueuedCandidate>& candidates) {
  std::unique_lock lock(mu_);
  std::size_t added = 0;
  for (const auto& c : candidates) {
    if (c.triple.predicate == LabelKind::kNone) {
      warn("review queue: refusing NONE candidate (" + c.triple.subject + ", " + c.triple.object +
           ")");
      continue;
    }
    ReviewEntry e;
    e.id = entry_id(c.triple);
    if (index_.count(e.id)) continue;
    e.triple = c.triple;
    e.triple.status = TripleStatus::kPending;
    e.sentences = c.sentences;
    e.enqueuedSeq = entries_.size() + 1;
    append_line(options_.dir / "queue.jsonl", entry_to_json(e));
    index_[e.id] = entries_.size();
    entries_.push_back(std::move(e));
    ++added;
  }
  return added;
}

std::size_t ReviewService::merge_auto(const std::vector<CandidateTriple>& triples) {
  std::unique_lock lock(mu_);
  auto outcome = merge_triples(graph_, triples, MergeMode::kAuto);
  if (outcome.applied > 0) {
    graph_ = std::move(outcome.graph);
    persist_graph();
  }
  return outcome.applied;
}

namespace {

bool same_decision(const ReviewEntry& e, const Decision& d) {
  switch (d.kind) {
    case DecisionKind::kReject:
      return e.triple.status == TripleStatus::kRejected;
    case DecisionKind::kAccept:
      return e.triple.status == TripleStatus::kAccepted && !e.originalPredicate;
    case DecisionKind::kAcceptWithPredicate:
      return e.triple.status == TripleStatus::kAccepted && d.predicate &&
             e.triple.predicate == *d.predicate;
  }
  return false;
}

}  // namespace

DecisionOutcome ReviewService::decide(const Decision& d) {
  if (d.kind == DecisionKind::kAcceptWithPredicate &&
      (!d.predicate || *d.predicate == LabelKind::kNone)) {
    throw ArgumentError("accept-with-predicate needs a non-NONE predicate");
  }
  std::unique_lock lock(mu_);
  auto it = index_.find(d.entryId);
  if (it == index_.end()) throw NotFoundError("no review entry " + d.entryId);
  ReviewEntry& entry = entries_[it->second];
  if (entry.decided()) {
    if (same_decision(entry, d)) return {entry, true, graph_.version()};
    throw ConflictError("entry " + entry.id + " is already " +
                        std::string(to_string(entry.triple.status)));
  }
  const std::string at = clock_ ? clock_() : std::string();
  json record = {{"id", entry.id}, {"decision", std::string(to_string(d.kind))},
                 {"reviewer", d.reviewer}, {"at", at}};
  if (d.predicate) record["predicate"] = std::string(to_string(*d.predicate));
  // Logged before the in-memory state changes.
  append_line(options_.dir / "decisions.jsonl", record.dump());
  apply_decision(entry, d, at);
  if (entry.triple.status == TripleStatus::kAccepted && merge_entry(entry)) persist_graph();
  return {entry, false, graph_.version()};
}

ListPage ReviewService::list(const ListQuery& q) const {
  std::shared_lock lock(mu_);
  std::vector<const ReviewEntry*> matches;
  for (const auto& e : entries_) {
    if (q.status && e.triple.status != *q.status) continue;
    if (q.predicate && e.triple.predicate != *q.predicate) continue;
    if (q.source && e.triple.provenance.source != *q.source) continue;
    if (e.triple.confidence < q.minConfidence || e.triple.confidence > q.maxConfidence) continue;
    matches.push_back(&e);
  }
  std::sort(matches.begin(), matches.end(), [](const ReviewEntry* a, const ReviewEntry* b) {
    if (a->triple.confidence != b->triple.confidence) {
      return a->triple.confidence > b->triple.confidence;
    }
    return a->id < b->id;
  });
  ListPage page;
  page.total = matches.size();
  for (std::size_t k = q.offset; k < matches.size() && page.entries.size() < q.limit; ++k) {
    page.entries.push_back(*matches[k]);
  }
  return page;
}

std::optional<ReviewEntry> ReviewService::get(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second];
}

OntologyStats ReviewService::stats() const {
  std::shared_lock lock(mu_);
  OntologyStats s;
  s.concepts = graph_.concept_count();
  s.relations = graph_.relation_count();
  s.version = graph_.version();
  for (const auto& e : entries_) {
    switch (e.triple.status) {
      case TripleStatus::kPending: ++s.pending; break;
      case TripleStatus::kAccepted: ++s.accepted; break;
      case TripleStatus::kRejected: ++s.rejected; break;
      case TripleStatus::kAutoMerged: break;
    }
  }
  return s;
}

std::vector<ChangeRecord> ReviewService::changes_since(std::uint64_t since) const {
  std::shared_lock lock(mu_);
  std::vector<ChangeRecord> out;
  for (const auto& r : graph_.changelog()) {
    if (r.version > since) out.push_back(r);
  }
  return out;
}

OntologyGraph ReviewService::graph() const {
  std::shared_lock lock(mu_);
  return graph_;
}

}  // namespace ontoenrich
