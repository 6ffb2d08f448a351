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

#include "ontoenrich/dataset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ontoenrich/common.hpp"
#include "ontoenrich/embedding.hpp"
#include "ontoenrich/text.hpp"
#include "test_util.hpp"
// httplib pulls in <resolv.h>, whose _res macro breaks Eigen; keep it last.
#include "mock_sparql.hpp"

using namespace ontoenrich;
using namespace ontoenrich::testing;

namespace {

OntologyGraph graph_of(std::vector<LabeledRelation> rels) {
  OntologyGraph g;
  g.apply("load", rels);
  return g;
}

CuratedDataset none_dataset(std::size_t n) {
  std::vector<TermPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    pairs.push_back({"a" + std::to_string(i), "b" + std::to_string(i), LabelKind::kNone,
                     PairSource::kEndpoint});
  }
  return CuratedDataset::from_pairs(std::move(pairs));
}

}  // namespace

TEST(SparqlQueries, TemplatesSubstituteConcept) {
  const std::string q = hypernym_query("Real-time_adaptive_security");
  EXPECT_NE(q.find("<http://dbpedia.org/resource/Real-time_adaptive_security>"), std::string::npos);
  EXPECT_NE(q.find("<http://purl.org/linguistics/gold/hypernym>"), std::string::npos);
  EXPECT_EQ(q.find("$concept"), std::string::npos);
  EXPECT_TRUE(hyponym_query("X").ends_with("<http://dbpedia.org/resource/X>}"));
}

TEST(SparqlQueries, ResourceNaming) {
  EXPECT_EQ(dbpedia_resource_name("real-time adaptive security"), "Real-time_adaptive_security");
  EXPECT_EQ(dbpedia_resource_name("a<b"), "A%3Cb");
  EXPECT_EQ(label_from_resource("http://dbpedia.org/resource/Access_control"), "Access control");
  EXPECT_EQ(label_from_resource("http://dbpedia.org/resource/Caf%C3%A9"), "Caf\xC3\xA9");
}

TEST(FetchRelatedTerms, WorkedExampleHasModelHypernym) {
  InMemorySparqlEndpoint endpoint(HypernymFixture::from_file(fixture("pipeline/hypernyms.tsv")));
  const auto terms = fetch_related_terms("Real-time adaptive security", endpoint);
  EXPECT_NE(std::find(terms.begin(), terms.end(), RelatedTerm{"Model", LabelKind::kHypernym}),
            terms.end());
}

TEST(FetchRelatedTerms, AbsentConceptYieldsEmpty) {
  InMemorySparqlEndpoint endpoint(HypernymFixture{});
  EXPECT_TRUE(fetch_related_terms("no such concept", endpoint).empty());
}

TEST(FetchRelatedTerms, HttpFixtureCountsByDirection) {
  HypernymFixture f;
  for (const char* h : {"Device", "Appliance", "Device", "Network_security_system"}) f.add("Firewall", h);
  f.add("Packet_filter", "Firewall");
  f.add("Personal_firewall", "Firewall");
  MockSparqlServer server(f);
  HttpSparqlEndpoint endpoint(server.url());
  const auto terms = fetch_related_terms("firewall", endpoint);
  // Hand count: 3 distinct forward rows (Device repeats), 2 inverse rows.
  const auto hyper = std::count_if(terms.begin(), terms.end(),
                                   [](const auto& t) { return t.relation == LabelKind::kHypernym; });
  const auto hypo = std::count_if(terms.begin(), terms.end(),
                                  [](const auto& t) { return t.relation == LabelKind::kHyponym; });
  EXPECT_EQ(hyper, 3);
  EXPECT_EQ(hypo, 2);
  EXPECT_EQ(terms[3].term, "Packet filter");
}

TEST(HttpSparqlEndpoint, RetriesTransientFailures) {
  HypernymFixture f;
  f.add("Firewall", "Device");
  MockSparqlServer server(f);
  server.failures_remaining = 2;
  HttpSparqlEndpoint endpoint(server.url(), {4, std::chrono::milliseconds(1), std::chrono::seconds(5), {}});
  EXPECT_EQ(endpoint.select(hypernym_query("Firewall")).size(), 1u);
  EXPECT_EQ(server.requests.load(), 3);

  server.failures_remaining = 10;
  HttpSparqlEndpoint give_up(server.url(), {2, std::chrono::milliseconds(1), std::chrono::seconds(5), {}});
  EXPECT_THROW(give_up.select(hypernym_query("Firewall")), UpstreamError);
}

TEST(CachedSparqlEndpoint, ServesRepeatQueriesFromDisk) {
  TempDir dir;
  HypernymFixture f;
  f.add("Firewall", "Device");
  auto inner = std::make_shared<InMemorySparqlEndpoint>(f);
  CachedSparqlEndpoint cached(inner, dir / "cache");
  const auto first = cached.select(hypernym_query("Firewall"));
  const auto second = cached.select(hypernym_query("Firewall"));
  EXPECT_EQ(first, second);
  EXPECT_EQ(inner->calls.load(), 1);
  EXPECT_TRUE(std::filesystem::exists(cached.cache_path(hypernym_query("Firewall"))));

  // A fresh cache over a dead endpoint still answers from disk.
  struct Dead final : SparqlEndpoint {
    std::vector<SparqlRow> select(const std::string&) override { throw UpstreamError("down"); }
  };
  CachedSparqlEndpoint offline(std::make_shared<Dead>(), dir / "cache");
  EXPECT_EQ(offline.select(hypernym_query("Firewall")), first);
}

TEST(HypernymTableEndpoint, MatchesMockEndpointOnPipelineFixture) {
  const auto edges = fixture("pipeline/hypernyms.tsv");
  const auto graph = load_ontology(fixture("pipeline/seed.tsv"));
  HypernymTableEndpoint table(edges);
  InMemorySparqlEndpoint mock(HypernymFixture::from_file(edges));
  const auto a = build_raw_dataset(graph, table, 1);
  const auto b = build_raw_dataset(graph, mock, 1);
  EXPECT_EQ(a.pairs, b.pairs);
  EXPECT_FALSE(a.pairs.empty());
  EXPECT_TRUE(a.failures.empty());
  EXPECT_TRUE(table.select("SELECT * WHERE { ?s ?p ?o }").empty());
}

TEST(HypernymTableEndpoint, MalformedLineIsParseError) {
  TempDir dir;
  try {
    HypernymTableEndpoint bad(dir.write("e.tsv", "# edges\nFirewall\tDevice\nbroken\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(BuildRawDataset, EmptyGraph) {
  InMemorySparqlEndpoint endpoint(HypernymFixture{});
  const auto raw = build_raw_dataset(OntologyGraph{}, endpoint);
  EXPECT_TRUE(raw.pairs.empty());
  EXPECT_TRUE(raw.failures.empty());
}

TEST(BuildRawDataset, FixtureArithmetic) {
  // Concepts "firewall" and "malware": 3 + 1 endpoint rows.
  HypernymFixture f;
  f.add("Firewall", "Device");
  f.add("Firewall", "Appliance");
  f.add("Packet_filter", "Firewall");
  f.add("Malware", "Software");
  const auto g = graph_of({{"firewall", Predicate::kDomainVerb, "malware"}});
  InMemorySparqlEndpoint endpoint(f);
  const auto raw = build_raw_dataset(g, endpoint, 2);
  ASSERT_EQ(raw.pairs.size(), 4u);
  EXPECT_EQ(raw.pairs[0].a, "firewall");
  EXPECT_EQ(raw.pairs[2].b, "packet filter");
  EXPECT_EQ(raw.pairs[2].label, LabelKind::kHyponym);
  EXPECT_EQ(raw.pairs[3].a, "malware");
  for (const auto& p : raw.pairs) {
    EXPECT_TRUE(p.label == LabelKind::kHypernym || p.label == LabelKind::kHyponym);
  }
}

TEST(BuildRawDataset, FailuresAreReportedPerConcept) {
  struct Flaky final : SparqlEndpoint {
    std::vector<SparqlRow> select(const std::string& q) override {
      if (q.find("Malware") != std::string::npos) throw UpstreamError("timeout");
      return {{{"hypernyms", "http://dbpedia.org/resource/Device"}}};
    }
  };
  Flaky endpoint;
  const auto g = graph_of({{"firewall", Predicate::kDomainVerb, "malware"}});
  const auto raw = build_raw_dataset(g, endpoint);
  ASSERT_EQ(raw.failures.size(), 1u);
  EXPECT_EQ(raw.failures[0].concept_label, "malware");
  // Forward and inverse rows both name "device"; the (a, b) key dedups them.
  EXPECT_EQ(raw.pairs.size(), 1u);
}

TEST(ApplyCuration, Overrides) {
  const std::vector<TermPair> raw = {{"firewall", "device", LabelKind::kHypernym, PairSource::kEndpoint},
                                     {"firewall", "pfsense", LabelKind::kHyponym, PairSource::kEndpoint},
                                     {"malware", "software", LabelKind::kHypernym, PairSource::kEndpoint}};
  const auto rows = parse_curation("firewall\tdevice\tnone\nfirewall\tpfSense\tinstance\n");
  ScopedWarningCapture capture;
  const auto curated = apply_curation(raw, rows);
  EXPECT_EQ(curated.pairs[0].label, LabelKind::kNone);
  EXPECT_EQ(curated.pairs[1].label, LabelKind::kInstance);
  EXPECT_EQ(curated.pairs[1].source, PairSource::kCuration);
  EXPECT_EQ(curated.pairs[2].label, LabelKind::kHypernym);
  EXPECT_EQ(curated.provenanceCounts.at(LabelKind::kNone), 1u);
  EXPECT_TRUE(capture.messages().empty());

  const auto identity = apply_curation(raw, parse_curation(""));
  EXPECT_EQ(identity.pairs, raw);
}

TEST(ApplyCuration, UnknownKeyWarnsUnknownLabelFails) {
  const std::vector<TermPair> raw = {{"a", "b", LabelKind::kHypernym, PairSource::kEndpoint}};
  ScopedWarningCapture capture;
  const auto curated = apply_curation(raw, parse_curation("x\ty\tnone\n"));
  EXPECT_EQ(curated.pairs, raw);
  EXPECT_EQ(capture.messages().size(), 1u);
  EXPECT_THROW(parse_curation("a\tb\tmeronym\n"), ParseError);
}

TEST(FilterNonePairs, KeepsLeastSimilarSliceByBruteForce) {
  std::vector<TermPair> pairs;
  std::map<std::pair<std::string, std::string>, double> sims;
  // Inserted in scrambled order; similarities 0.1 .. 1.0.
  for (int k : {7, 2, 9, 0, 5, 3, 8, 1, 6, 4}) {
    pairs.push_back({"n" + std::to_string(k), "m" + std::to_string(k), LabelKind::kNone,
                     PairSource::kEndpoint});
    sims[{"n" + std::to_string(k), "m" + std::to_string(k)}] = 0.1 * (k + 1);
  }
  pairs.push_back({"h", "g", LabelKind::kHypernym, PairSource::kEndpoint});
  const auto d = CuratedDataset::from_pairs(pairs);
  const TermSimilarity sim = [&](const std::string& a, const std::string& b) { return sims.at({a, b}); };

  // Oracle: sort all similarities and take the three smallest.
  std::vector<double> all;
  for (const auto& [k, v] : sims) all.push_back(v);
  std::sort(all.begin(), all.end());
  const std::set<double> expected(all.begin(), all.begin() + 3);

  const auto out = filter_none_pairs(d, 0.3, sim, NoneRetention::kKeepLeastSimilar);
  std::set<double> got;
  for (const auto& p : out.pairs) {
    if (p.label == LabelKind::kNone) got.insert(sims.at({p.a, p.b}));
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(out.provenanceCounts.at(LabelKind::kHypernym), 1u);

  const auto most = filter_none_pairs(d, 0.3, sim, NoneRetention::kKeepMostSimilar);
  std::set<double> top;
  for (const auto& p : most.pairs) {
    if (p.label == LabelKind::kNone) top.insert(sims.at({p.a, p.b}));
  }
  EXPECT_EQ(top, std::set<double>(all.end() - 3, all.end()));

  EXPECT_EQ(filter_none_pairs(d, 1.0, sim).pairs, d.pairs);
  EXPECT_THROW(filter_none_pairs(d, 0.0, sim), ArgumentError);
}

TEST(FilterNonePairs, ReferenceScaleCount) {
  const auto d = none_dataset(89820);
  const TermSimilarity sim = [](const std::string& a, const std::string&) {
    return static_cast<double>(fnv1a64(a) % 1000) / 1000.0;
  };
  const auto out = filter_none_pairs(d, 0.05, sim);
  EXPECT_EQ(out.pairs.size(), 4491u);
}

TEST(FilterNonePairs, ProviderFailureTreatedAsZero) {
  const auto d = none_dataset(4);
  const TermSimilarity sim = [](const std::string& a, const std::string&) -> double {
    if (a == "a2") throw std::runtime_error("no vector");
    return 0.5;
  };
  ScopedWarningCapture capture;
  const auto out = filter_none_pairs(d, 0.25, sim);
  ASSERT_EQ(out.pairs.size(), 1u);
  EXPECT_EQ(out.pairs[0].a, "a2");
  EXPECT_EQ(capture.messages().size(), 1u);
}

TEST(FilterNonePairs, NeverTouchesNonNoneAndRetainsExactFloor) {
  Rng rng(5);
  HashEmbeddingProvider provider(16);
  const TermSimilarity sim = [&](const std::string& a, const std::string& b) {
    return text_similarity(provider, a, b);
  };
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<TermPair> pairs;
    const std::size_t n = 1 + rng.index(60);
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back({"x" + std::to_string(i), "y" + std::to_string(rng.index(1000)),
                       label_from_index(static_cast<int>(rng.index(5))), PairSource::kEndpoint});
    }
    const auto d = CuratedDataset::from_pairs(pairs);
    const double f = 0.01 + 0.99 * rng.uniform();
    const auto out = filter_none_pairs(d, f, sim);
    const std::size_t none_before = d.provenanceCounts.at(LabelKind::kNone);
    EXPECT_EQ(out.provenanceCounts.at(LabelKind::kNone),
              static_cast<std::size_t>(std::floor(f * static_cast<double>(none_before) + 1e-9)));
    for (LabelKind k : kAllLabels) {
      if (k != LabelKind::kNone) EXPECT_EQ(out.provenanceCounts.at(k), d.provenanceCounts.at(k));
    }
    for (const auto& p : out.pairs) {
      EXPECT_NE(std::find(d.pairs.begin(), d.pairs.end(), p), d.pairs.end());
    }
  }
}

TEST(SplitHoldout, ReferenceCompositionStratified) {
  // Per-class composition of the reference-scale dataset; the rows sum to 12,095
  // (the reported total is 12,096).
  const std::vector<std::pair<LabelKind, int>> comp = {{LabelKind::kHypernym, 2939},
                                                       {LabelKind::kHyponym, 794},
                                                       {LabelKind::kInstance, 2685},
                                                       {LabelKind::kConcept, 1187},
                                                       {LabelKind::kNone, 4490}};
  std::vector<TermPair> pairs;
  for (const auto& [k, n] : comp) {
    for (int i = 0; i < n; ++i) {
      pairs.push_back({std::string(to_string(k)) + std::to_string(i), "t" + std::to_string(i), k,
                       PairSource::kEndpoint});
    }
  }
  const auto d = CuratedDataset::from_pairs(std::move(pairs));
  ASSERT_EQ(d.size(), 12095u);
  const auto split = split_holdout(d, 0.10, 0);
  // Per-class floors: 293 + 79 + 268 + 118 + 449.
  EXPECT_EQ(split.test.size(), 1207u);
  EXPECT_LE(std::abs(static_cast<long>(split.test.size()) - 1210), kNumLabels);
  for (LabelKind k : kAllLabels) EXPECT_GT(split.test.provenanceCounts.at(k), 0u);
}

TEST(SplitHoldout, SmallAndDeterministic) {
  const auto d = CuratedDataset::from_pairs({{"a", "b", LabelKind::kHypernym, PairSource::kEndpoint},
                                             {"c", "d", LabelKind::kHypernym, PairSource::kEndpoint}});
  const auto s = split_holdout(d, 0.5, 9);
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
  EXPECT_EQ(split_holdout(d, 0.5, 9).test.pairs, s.test.pairs);
  EXPECT_THROW(split_holdout(d, 0.2, 9), ArgumentError);  // floor(0.4) = 0
  EXPECT_THROW(split_holdout(d, 1.0, 9), ArgumentError);
}

TEST(SplitHoldout, PartitionProperty) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TermPair> pairs;
    const std::size_t n = 20 + rng.index(100);
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back({"p" + std::to_string(i), "q", label_from_index(static_cast<int>(rng.index(5))),
                       PairSource::kEndpoint});
    }
    const auto d = CuratedDataset::from_pairs(pairs);
    const auto s = split_holdout(d, 0.25, trial);
    std::multiset<std::string> seen;
    for (const auto& p : s.train.pairs) seen.insert(p.a);
    for (const auto& p : s.test.pairs) seen.insert(p.a);
    EXPECT_EQ(seen.size(), n);
    EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), n);
  }
}

TEST(DatasetFile, RoundTrip) {
  TempDir dir;
  const auto d = CuratedDataset::from_pairs({{"a\tx", "b", LabelKind::kConcept, PairSource::kCuration},
                                             {"c", "d", LabelKind::kNone, PairSource::kEndpoint}});
  save_dataset(d, dir / "d.tsv");
  const auto back = load_dataset(dir / "d.tsv");
  EXPECT_EQ(back.pairs, d.pairs);
  EXPECT_THROW(parse_dataset("a\tb\tweird\tendpoint\n"), ParseError);
}
