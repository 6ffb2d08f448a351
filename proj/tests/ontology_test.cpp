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

#include "ontoenrich/ontology.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ontoenrich/common.hpp"
#include "ontoenrich/text.hpp"
#include "test_util.hpp"

using namespace ontoenrich;
using ontoenrich::testing::TempDir;

namespace {

CandidateTriple triple(std::string s, LabelKind p, std::string o) {
  CandidateTriple t;
  t.subject = std::move(s);
  t.predicate = p;
  t.object = std::move(o);
  return t;
}

OntologyGraph random_graph(Rng& rng, std::size_t relations) {
  const std::size_t vocab = 3 + rng.index(40);
  std::vector<LabeledRelation> rels;
  for (std::size_t i = 0; i < relations; ++i) {
    rels.push_back({"term " + std::to_string(rng.index(vocab)),
                    static_cast<Predicate>(rng.index(4)),
                    "Term " + std::to_string(rng.index(vocab))});
  }
  OntologyGraph g;
  g.apply("load", rels);
  return g;
}

}  // namespace

TEST(LabelNormalization, IdempotentAndCaseInsensitive) {
  const std::vector<std::string> samples = {
      "Real-time_adaptive_security", "  Access   Control ", "ISO\t27001",
      "model", "", "A__B", "Ünïcode Term"};
  for (const auto& s : samples) {
    EXPECT_EQ(normalize_label(normalize_label(s)), normalize_label(s)) << s;
  }
  EXPECT_EQ(normalize_label("Real-time_adaptive_security"), "real-time adaptive security");
  EXPECT_EQ(normalize_label("ACCESS control"), normalize_label("access Control"));

  OntologyGraph g;
  std::vector<LabeledRelation> rels = {{"Firewall", Predicate::kHypernym, "Device"},
                                       {"firewall", Predicate::kHyponym, "DEVICE"}};
  g.apply("load", rels);
  EXPECT_EQ(g.concept_count(), 2u);
  EXPECT_EQ(g.concept_at(*g.find("FIREWALL")).aliases.size(), 2u);
}

TEST(LoadOntology, TsvCountsDistinctLabels) {
  TempDir dir;
  const auto p = dir.write("seed.tsv",
                           "# seed\n"
                           "access control\thypernym\tcontrol\n"
                           "Cryptography\thypernym\tcontrol\n"
                           "\n"
                           "firewall\tinstanceOf\tnetwork device\n");
  const auto g = load_ontology(p);
  EXPECT_EQ(g.concept_count(), 5u);
  EXPECT_EQ(g.relation_count(), 3u);
  EXPECT_EQ(g.version(), 1u);
}

TEST(LoadOntology, EmptyFile) {
  TempDir dir;
  const auto g = load_ontology(dir.write("empty.tsv", ""));
  EXPECT_EQ(g.concept_count(), 0u);
  EXPECT_EQ(g.relation_count(), 0u);
  EXPECT_EQ(g.version(), 0u);
}

TEST(LoadOntology, MalformedLineReportsLineNumber) {
  TempDir dir;
  const auto p = dir.write("bad.tsv", "a\thypernym\tb\n# ok\na\tb\n");
  try {
    load_ontology(p);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  const auto q = dir.write("badpred.tsv", "a\tpartOf\tb\n");
  EXPECT_THROW(load_ontology(q), ParseError);
}

TEST(LoadOntology, DuplicateTripleWarnsAndDedups) {
  TempDir dir;
  const auto p = dir.write("dup.tsv", "a\thypernym\tb\nA\thypernym\tB\n");
  ScopedWarningCapture capture;
  const auto g = load_ontology(p);
  EXPECT_EQ(g.relation_count(), 1u);
  ASSERT_EQ(capture.messages().size(), 1u);
  EXPECT_NE(capture.messages()[0].find("duplicate"), std::string::npos);
}

TEST(LoadOntology, TurtleSubset) {
  TempDir dir;
  const auto p = dir.write("seed.ttl",
                           "@prefix sec: <http://example.org/security#> .\n"
                           "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
                           "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
                           "sec:Firewall a owl:Class ;\n"
                           "    rdfs:subClassOf sec:Network_Device ;\n"
                           "    rdfs:label \"Firewall\"@en .\n"
                           "sec:pfSense a sec:Firewall .\n"
                           "<http://example.org/security#Access_control> sec:hypernym sec:Control, sec:Safeguard .\n");
  ScopedWarningCapture capture;
  const auto triples = read_triples(p, OntologyFormat::kTurtleSubset);
  ASSERT_EQ(triples.size(), 4u);
  EXPECT_EQ(triples[0].subject, "Firewall");
  EXPECT_EQ(triples[0].predicate, Predicate::kHypernym);
  EXPECT_EQ(normalize_label(triples[0].object), "network device");
  EXPECT_EQ(triples[1].predicate, Predicate::kInstanceOf);
  EXPECT_EQ(triples[3].object, "Safeguard");
  EXPECT_EQ(capture.messages().size(), 1u);  // rdfs:label ignored once

  const auto bad = dir.write("bad.ttl", "sec:a sec:hypernym sec:b\nsec:c sec:hypernym ; .\n");
  try {
    read_triples(bad, OntologyFormat::kTurtleSubset);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(MergeTriples, CreatesMissingConcept) {
  OntologyGraph g;
  std::vector<LabeledRelation> seed = {{"Real-time adaptive security", Predicate::kHypernym, "security"}};
  g.apply("load", seed);
  ASSERT_FALSE(g.find("model"));

  const std::vector<CandidateTriple> in = {
      triple("Real-time adaptive security", LabelKind::kHypernym, "model")};
  const auto out = merge_triples(g, in, MergeMode::kAuto);
  EXPECT_TRUE(out.graph.find("model"));
  EXPECT_EQ(out.graph.relation_count(), g.relation_count() + 1);
  EXPECT_EQ(out.graph.version(), g.version() + 1);
}

TEST(MergeTriples, ExistingTripleIsNoOp) {
  OntologyGraph g;
  std::vector<LabeledRelation> seed = {{"a", Predicate::kHypernym, "b"}};
  g.apply("load", seed);
  const std::vector<CandidateTriple> in = {triple("A", LabelKind::kHypernym, "B")};
  const auto out = merge_triples(g, in, MergeMode::kAuto);
  EXPECT_EQ(out.applied, 0u);
  EXPECT_EQ(out.graph.version(), g.version());
  EXPECT_EQ(out.graph.changelog().size(), g.changelog().size());
  EXPECT_EQ(out.graph.canonical(), g.canonical());
}

TEST(MergeTriples, ChangelogGrowsBySetDifference) {
  OntologyGraph g;
  std::vector<LabeledRelation> seed = {{"a", Predicate::kHypernym, "b"},
                                       {"c", Predicate::kInstanceOf, "d"}};
  g.apply("load", seed);
  const std::vector<CandidateTriple> in = {triple("a", LabelKind::kHypernym, "b"),
                                           triple("x", LabelKind::kHyponym, "y"),
                                           triple("c", LabelKind::kConcept, "d")};
  // Oracle: triples not already in the graph's labeled relation set.
  const auto existing = g.labeled_relations();
  std::set<LabeledRelation> have(existing.begin(), existing.end());
  std::size_t expected = 0;
  for (const auto& t : in) {
    if (!have.count({normalize_label(t.subject), *predicate_for(t.predicate),
                     normalize_label(t.object)})) {
      ++expected;
    }
  }
  ASSERT_EQ(expected, 2u);
  const auto out = merge_triples(g, in, MergeMode::kAuto);
  EXPECT_EQ(out.graph.changelog().size() - g.changelog().size(), expected);
  EXPECT_EQ(out.graph.version(), g.version() + 1);
  EXPECT_EQ(out.duplicates, 1u);
}

TEST(MergeTriples, EmptyLabelRejectedWithoutAbortingBatch) {
  OntologyGraph g;
  std::vector<CandidateTriple> in = {triple("  ", LabelKind::kHypernym, "b"),
                                     triple("a", LabelKind::kHypernym, "b"),
                                     triple("a", LabelKind::kNone, "c")};
  ScopedWarningCapture capture;
  const auto out = merge_triples(g, in, MergeMode::kAuto);
  EXPECT_EQ(out.applied, 1u);
  ASSERT_EQ(out.rejected.size(), 2u);
  EXPECT_EQ(out.rejected[0].index, 0u);
  EXPECT_EQ(out.rejected[1].index, 2u);
}

TEST(MergeTriples, AcceptedOnlyMode) {
  OntologyGraph g;
  std::vector<CandidateTriple> in = {triple("a", LabelKind::kHypernym, "b"),
                                     triple("c", LabelKind::kHypernym, "d")};
  in[1].status = TripleStatus::kAccepted;
  const auto out = merge_triples(g, in, MergeMode::kAcceptedOnly);
  EXPECT_EQ(out.applied, 1u);
  EXPECT_TRUE(out.graph.contains("c", Predicate::kHypernym, "d"));
  EXPECT_FALSE(out.graph.contains("a", Predicate::kHypernym, "b"));
}

TEST(MergeTriples, IdempotentAndReplayable) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    OntologyGraph g = random_graph(rng, 1 + rng.index(30));
    std::vector<CandidateTriple> batch;
    for (std::size_t i = 0, n = rng.index(10); i < n; ++i) {
      batch.push_back(triple("term " + std::to_string(rng.index(20)),
                             label_from_index(static_cast<int>(rng.index(4))),
                             "new " + std::to_string(rng.index(5))));
    }
    const auto once = merge_triples(g, batch, MergeMode::kAuto).graph;
    const auto twice = merge_triples(once, batch, MergeMode::kAuto).graph;
    EXPECT_EQ(once.canonical(), twice.canonical());

    const auto replayed = OntologyGraph::replay(once.changelog());
    EXPECT_EQ(replayed.canonical(), once.canonical());
    EXPECT_EQ(replayed.changelog(), once.changelog());
  }
}

TEST(Changelog, PersistsAndReplays) {
  TempDir dir;
  OntologyGraph g;
  std::vector<LabeledRelation> seed = {{"A\tB", Predicate::kHypernym, "c"}};
  g.apply("load", seed);
  g = merge_triples(g, std::vector<CandidateTriple>{triple("x", LabelKind::kInstance, "y")},
                    MergeMode::kAuto)
          .graph;
  save_changelog(g, dir / "changelog.tsv");
  const auto records = load_changelog(dir / "changelog.tsv");
  EXPECT_EQ(records, g.changelog());
  EXPECT_EQ(OntologyGraph::replay(records).canonical(), g.canonical());
  EXPECT_EQ(records.back().version, 2u);
  EXPECT_EQ(records.back().op, "merge");

  save_ontology(g, dir / "out.tsv");
  EXPECT_EQ(load_ontology(dir / "out.tsv"), g);
}

TEST(Knockout, ZeroFractionKeepsEverything) {
  Rng rng(1);
  const auto g = random_graph(rng, 20);
  const auto k = knockout(g, 0.0, 3);
  EXPECT_TRUE(k.heldOut.empty());
  EXPECT_EQ(k.reduced, g);
}

TEST(Knockout, FullFractionRemovesAllRelations) {
  Rng rng(2);
  const auto g = random_graph(rng, 20);
  const auto k = knockout(g, 1.0, 3);
  EXPECT_EQ(k.reduced.relation_count(), 0u);
  EXPECT_EQ(k.reduced.concept_count(), 0u);
  EXPECT_EQ(k.heldOut.size(), g.relation_count());
}

TEST(Knockout, HundredRelationsTenPercentDeterministic) {
  OntologyGraph g;
  std::vector<LabeledRelation> rels;
  for (int i = 0; i < 100; ++i) {
    rels.push_back({"concept " + std::to_string(i), Predicate::kHypernym,
                    "parent " + std::to_string(i % 7)});
  }
  g.apply("load", rels);
  const auto first = knockout(g, 0.1, 42);
  const auto second = knockout(g, 0.1, 42);
  EXPECT_EQ(first.heldOut.size(), 10u);
  EXPECT_EQ(first.heldOut, second.heldOut);
  EXPECT_EQ(first.reduced.canonical(), second.reduced.canonical());
  EXPECT_NE(knockout(g, 0.1, 43).heldOut, first.heldOut);
}

TEST(Knockout, ArgumentErrors) {
  Rng rng(3);
  const auto g = random_graph(rng, 5);
  EXPECT_THROW(knockout(g, -0.1, 0), ArgumentError);
  EXPECT_THROW(knockout(g, 1.5, 0), ArgumentError);
  EXPECT_THROW(knockout(OntologyGraph{}, 0.5, 0), ArgumentError);
}

TEST(Knockout, PartitionAndIsolatedConceptRemoval) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng, 1 + rng.index(40));
    const double fraction = rng.uniform();
    const auto k = knockout(g, fraction, trial);
    const auto kept = k.reduced.labeled_relations();
    std::multiset<LabeledRelation> all(kept.begin(), kept.end());
    for (const auto& r : k.heldOut) {
      EXPECT_EQ(std::count(kept.begin(), kept.end(), r), 0);
      all.insert(r);
    }
    const auto original = g.labeled_relations();
    EXPECT_EQ(all, std::multiset<LabeledRelation>(original.begin(), original.end()));
    // Every remaining concept participates in a remaining relation.
    std::set<std::string> used;
    for (const auto& r : kept) {
      used.insert(r.subject);
      used.insert(r.object);
    }
    EXPECT_EQ(used.size(), k.reduced.concept_count());
  }
}
