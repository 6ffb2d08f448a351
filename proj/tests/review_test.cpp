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

#include <gtest/gtest.h>

#include <fstream>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/review.hpp"
#include "test_util.hpp"

namespace ontoenrich {
namespace {

using testing::TempDir;

CandidateTriple triple(std::string s, LabelKind p, std::string o, double conf,
                       std::string source = "https://example.org/a") {
  CandidateTriple t;
  t.subject = std::move(s);
  t.predicate = p;
  t.object = std::move(o);
  t.confidence = conf;
  t.provenance = {std::move(source), {"s1"}, false};
  return t;
}

QueuedCandidate queued(CandidateTriple t) {
  return {std::move(t), {{"s1", "Acme Shield is a firewall."}}};
}

Clock fixed_clock() {
  return [] { return std::string("2026-01-02T03:04:05Z"); };
}

ReviewStoreOptions store(const TempDir& tmp) {
  ReviewStoreOptions o;
  o.dir = tmp / "store";
  o.seedOntology = tmp.write("seed.tsv", "firewall\thypernym\tsecurity control\n");
  return o;
}

std::vector<QueuedCandidate> three() {
  return {queued(triple("acme shield", LabelKind::kHypernym, "firewall", 0.9)),
          queued(triple("phishing", LabelKind::kHypernym, "social engineering", 0.7)),
          queued(triple("malware", LabelKind::kHyponym, "ransomware", 0.8))};
}

TEST(Review, DecisionKindRoundTrip) {
  for (auto k : {DecisionKind::kAccept, DecisionKind::kReject, DecisionKind::kAcceptWithPredicate}) {
    EXPECT_EQ(parse_decision_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_decision_kind("edit"), DecisionKind::kAcceptWithPredicate);
  EXPECT_FALSE(parse_decision_kind("maybe"));
}

TEST(Review, EntryIdIsStableAndDistinguishesSource) {
  const auto a = triple("Acme Shield", LabelKind::kHypernym, "Firewall", 0.9);
  const auto b = triple("acme  shield", LabelKind::kHypernym, "firewall", 0.1);
  const auto c = triple("acme shield", LabelKind::kHypernym, "firewall", 0.9, "other");
  EXPECT_EQ(entry_id(a), entry_id(b));
  EXPECT_NE(entry_id(a), entry_id(c));
  EXPECT_EQ(entry_id(a).size(), 17u);
}

TEST(Review, EntryJsonRoundTrip) {
  ReviewEntry e;
  e.id = "c1";
  e.triple = triple("a", LabelKind::kConcept, "b", 0.25);
  e.triple.status = TripleStatus::kAccepted;
  e.sentences = {{"s1", "A \"quoted\" sentence."}};
  e.originalPredicate = LabelKind::kInstance;
  e.decidedBy = "ann";
  e.decidedAt = "t";
  e.enqueuedSeq = 4;
  EXPECT_EQ(entry_from_json(entry_to_json(e)), e);
}

TEST(Review, SeedsGraphOnFirstOpen) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  EXPECT_EQ(svc.stats().relations, 1u);
  EXPECT_TRUE(std::filesystem::exists(tmp / "store" / "changelog.tsv"));
  EXPECT_TRUE(std::filesystem::exists(tmp / "store" / "ontology.tsv"));
}

TEST(Review, EnqueueRefusesNoneAndSkipsDuplicates) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  ScopedWarningCapture warnings;
  auto batch = three();
  batch.push_back(queued(triple("x", LabelKind::kNone, "y", 0.99)));
  EXPECT_EQ(svc.enqueue(batch), 3u);
  EXPECT_EQ(svc.enqueue(three()), 0u);
  EXPECT_EQ(warnings.messages().size(), 1u);
  EXPECT_EQ(svc.stats().pending, 3u);
  ListQuery any;
  any.status.reset();
  for (const auto& e : svc.list(any).entries) EXPECT_NE(e.triple.predicate, LabelKind::kNone);
}

TEST(Review, ListSortsFiltersAndPaginates) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  svc.enqueue(three());
  ListQuery q;
  auto page = svc.list(q);
  ASSERT_EQ(page.total, 3u);
  EXPECT_EQ(page.entries[0].triple.subject, "acme shield");
  EXPECT_EQ(page.entries[1].triple.subject, "malware");
  EXPECT_EQ(page.entries[2].triple.subject, "phishing");

  q.offset = 1;
  q.limit = 1;
  page = svc.list(q);
  EXPECT_EQ(page.total, 3u);
  ASSERT_EQ(page.entries.size(), 1u);
  EXPECT_EQ(page.entries[0].triple.subject, "malware");

  ListQuery byPred;
  byPred.predicate = LabelKind::kHyponym;
  EXPECT_EQ(svc.list(byPred).total, 1u);
  ListQuery byConf;
  byConf.minConfidence = 0.75;
  EXPECT_EQ(svc.list(byConf).total, 2u);
  ListQuery bySource;
  bySource.source = "nowhere";
  EXPECT_EQ(svc.list(bySource).total, 0u);
}

TEST(Review, AcceptMergesExactlyOnce) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  svc.enqueue(three());
  const auto id = entry_id(three()[0].triple);
  Decision d{id, DecisionKind::kAccept, std::nullopt, "ann"};
  const auto first = svc.decide(d);
  EXPECT_FALSE(first.replayed);
  EXPECT_EQ(first.entry.triple.status, TripleStatus::kAccepted);
  EXPECT_EQ(first.entry.decidedBy, "ann");
  EXPECT_EQ(first.entry.decidedAt, "2026-01-02T03:04:05Z");
  EXPECT_TRUE(svc.graph().contains("acme shield", Predicate::kHypernym, "firewall"));
  const auto version = svc.stats().version;

  const auto again = svc.decide(d);
  EXPECT_TRUE(again.replayed);
  EXPECT_EQ(svc.stats().version, version);
  EXPECT_EQ(svc.stats().relations, 2u);
  EXPECT_EQ(svc.changes_since(version - 1).size(), 1u);
  EXPECT_EQ(svc.changes_since(version - 1)[0].op, "review:" + id);
}

TEST(Review, ConflictingDecisionThrows) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  svc.enqueue(three());
  const auto id = entry_id(three()[1].triple);
  svc.decide({id, DecisionKind::kReject, std::nullopt, "ann"});
  EXPECT_THROW(svc.decide({id, DecisionKind::kAccept, std::nullopt, "bob"}), ConflictError);
  EXPECT_EQ(svc.get(id)->triple.status, TripleStatus::kRejected);
  EXPECT_EQ(svc.stats().relations, 1u);
}

TEST(Review, UnknownEntryAndMalformedDecision) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  svc.enqueue(three());
  EXPECT_THROW(svc.decide({"cdeadbeef", DecisionKind::kAccept, std::nullopt, ""}), NotFoundError);
  const auto id = entry_id(three()[0].triple);
  EXPECT_THROW(svc.decide({id, DecisionKind::kAcceptWithPredicate, std::nullopt, ""}),
               ArgumentError);
  EXPECT_THROW(svc.decide({id, DecisionKind::kAcceptWithPredicate, LabelKind::kNone, ""}),
               ArgumentError);
  EXPECT_EQ(svc.get(id)->triple.status, TripleStatus::kPending);
}

TEST(Review, AcceptWithPredicateRecordsOriginal) {
  TempDir tmp;
  ReviewService svc(store(tmp), fixed_clock());
  svc.enqueue(three());
  const auto id = entry_id(three()[2].triple);
  const auto out = svc.decide({id, DecisionKind::kAcceptWithPredicate, LabelKind::kHypernym, "ann"});
  EXPECT_EQ(out.entry.triple.predicate, LabelKind::kHypernym);
  EXPECT_EQ(out.entry.originalPredicate, LabelKind::kHyponym);
  EXPECT_TRUE(svc.graph().contains("malware", Predicate::kHypernym, "ransomware"));
  EXPECT_FALSE(svc.graph().contains("malware", Predicate::kHyponym, "ransomware"));
  EXPECT_TRUE(
      svc.decide({id, DecisionKind::kAcceptWithPredicate, LabelKind::kHypernym, "ann"}).replayed);
  EXPECT_THROW(svc.decide({id, DecisionKind::kAccept, std::nullopt, "ann"}), ConflictError);
}

TEST(Review, RestartRestoresQueueDecisionsAndGraph) {
  TempDir tmp;
  std::string canonical;
  {
    ReviewService svc(store(tmp), fixed_clock());
    svc.enqueue(three());
    svc.decide({entry_id(three()[0].triple), DecisionKind::kAccept, std::nullopt, "ann"});
    svc.decide({entry_id(three()[1].triple), DecisionKind::kReject, std::nullopt, "ann"});
    canonical = svc.graph().canonical();
  }
  ReviewService reopened(store(tmp), fixed_clock());
  const auto s = reopened.stats();
  EXPECT_EQ(s.pending, 1u);
  EXPECT_EQ(s.accepted, 1u);
  EXPECT_EQ(s.rejected, 1u);
  EXPECT_EQ(reopened.graph().canonical(), canonical);
  EXPECT_EQ(reopened.get(entry_id(three()[0].triple))->decidedBy, "ann");
  EXPECT_EQ(reopened.get(entry_id(three()[0].triple))->sentences.size(), 1u);
}

TEST(Review, CrashBeforeGraphPersistIsRepairedOnce) {
  TempDir tmp;
  const auto id = entry_id(three()[0].triple);
  {
    ReviewService svc(store(tmp), fixed_clock());
    svc.enqueue(three());
  }
  // The decision reached the log but the ontology files did not.
  append_line(tmp / "store" / "decisions.jsonl",
              R"({"id":")" + id + R"(","decision":"accept","reviewer":"ann","at":"t"})");
  std::uint64_t version = 0;
  {
    ReviewService svc(store(tmp), fixed_clock());
    EXPECT_TRUE(svc.graph().contains("acme shield", Predicate::kHypernym, "firewall"));
    version = svc.stats().version;
  }
  ReviewService again(store(tmp), fixed_clock());
  EXPECT_EQ(again.stats().version, version);
  EXPECT_EQ(again.stats().relations, 2u);
}

TEST(Review, TornFinalRecordIsDroppedWithWarning) {
  TempDir tmp;
  {
    ReviewService svc(store(tmp), fixed_clock());
    svc.enqueue(three());
  }
  {
    std::ofstream out(tmp / "store" / "queue.jsonl", std::ios::app);
    out << R"({"id":"cpartial","subj)";
  }
  ScopedWarningCapture warnings;
  ReviewService svc(store(tmp), fixed_clock());
  EXPECT_EQ(svc.stats().pending, 3u);
  ASSERT_EQ(warnings.messages().size(), 1u);
  EXPECT_NE(warnings.messages()[0].find("torn"), std::string::npos);
}

TEST(Review, CorruptMiddleRecordIsParseError) {
  TempDir tmp;
  {
    ReviewService svc(store(tmp), fixed_clock());
    svc.enqueue(three());
  }
  auto text = read_file(tmp / "store" / "queue.jsonl");
  text.insert(0, "{not json\n");
  std::ofstream(tmp / "store" / "queue.jsonl", std::ios::trunc) << text;
  try {
    ReviewService svc(store(tmp), fixed_clock());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Review, MergeAutoPersists) {
  TempDir tmp;
  {
    ReviewService svc(store(tmp), fixed_clock());
    auto t = triple("worm", LabelKind::kHypernym, "malware", 0.6);
    EXPECT_EQ(svc.merge_auto({t, t}), 1u);
  }
  ReviewService svc(store(tmp), fixed_clock());
  EXPECT_TRUE(svc.graph().contains("worm", Predicate::kHypernym, "malware"));
}

TEST(Review, QueuedCandidateUsesOriginalSentenceText) {
  WebDocument doc;
  doc.source = "page";
  doc.sentences = {"First one.", "Acme Shield is a firewall."};
  ParsedSentence p;
  p.id = "s2";
  p.tokens.push_back({0, "Acme", "acme", "PROPN", "ROOT", 0});
  doc.parsed.push_back(p);
  auto t = triple("acme shield", LabelKind::kHypernym, "firewall", 0.9);
  t.provenance.sentenceIds = {"s2", "s9"};
  const auto q = queued_candidate(t, doc);
  ASSERT_EQ(q.sentences.size(), 1u);
  EXPECT_EQ(q.sentences[0].text, "Acme Shield is a firewall.");
}

}  // namespace
}  // namespace ontoenrich
