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

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/random.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

namespace {

using PairKey = std::pair<std::string, std::string>;

// floor() with slack for products like 0.05 * 89820 that land a hair
// below an integer in binary floating point.
std::size_t floor_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace

CuratedDataset CuratedDataset::from_pairs(std::vector<TermPair> pairs) {
  CuratedDataset d;
  std::set<PairKey> seen;
  for (auto& p : pairs) {
    p.a = normalize_label(p.a);
    p.b = normalize_label(p.b);
    if (p.a.empty() || p.b.empty() || p.a == p.b) {
      throw DataError("invalid pair (" + p.a + ", " + p.b + ")");
    }
    if (!seen.insert({p.a, p.b}).second) {
      throw DataError("duplicate pair (" + p.a + ", " + p.b + ")");
    }
  }
  for (LabelKind k : kAllLabels) d.provenanceCounts[k] = 0;
  for (const auto& p : pairs) ++d.provenanceCounts[p.label];
  d.pairs = std::move(pairs);
  return d;
}

std::string hypernym_query(std::string_view resource) {
  std::string q =
      "SELECT * WHERE\n"
      "{<http://dbpedia.org/resource/$concept>\n"
      "<http://purl.org/linguistics/gold/hypernym> \n"
      "?hypernyms}";
  q.replace(q.find("$concept"), 8, resource);
  return q;
}

std::string hyponym_query(std::string_view resource) {
  std::string q =
      "SELECT * WHERE {?hypernyms \n"
      "<http://purl.org/linguistics/gold/hypernym>\n"
      "<http://dbpedia.org/resource/$concept>}";
  q.replace(q.find("$concept"), 8, resource);
  return q;
}

std::string dbpedia_resource_name(std::string_view concept_label) {
  std::string name = trim(concept_label);
  for (char& c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  }
  if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  // Characters that may not appear inside an IRIREF.
  static const std::string kUnsafe = "<>\"{}|^`\\";
  std::string out;
  for (char c : name) {
    if (kUnsafe.find(c) != std::string::npos || static_cast<unsigned char>(c) < 0x20) {
      out += url_encode(std::string_view(&c, 1));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string label_from_resource(std::string_view uri) {
  std::string_view s = uri;
  if (const auto cut = s.find_last_of("/#"); cut != std::string_view::npos) s = s.substr(cut + 1);
  std::string label = percent_decode(s);
  for (char& c : label) {
    if (c == '_') c = ' ';
  }
  return label;
}

std::vector<RelatedTerm> fetch_related_terms(std::string_view concept_label,
                                             SparqlEndpoint& endpoint) {
  const std::string resource = dbpedia_resource_name(concept_label);
  const std::string self = normalize_label(concept_label);
  std::vector<RelatedTerm> out;
  std::set<std::pair<std::string, LabelKind>> seen;
  auto collect = [&](const std::string& query, LabelKind kind) {
    for (const auto& row : endpoint.select(query)) {
      auto it = row.find("hypernyms");
      if (it == row.end()) continue;
      std::string term = label_from_resource(it->second);
      const std::string key = normalize_label(term);
      if (key.empty() || key == self) continue;
      if (seen.insert({key, kind}).second) out.push_back({std::move(term), kind});
    }
  };
  collect(hypernym_query(resource), LabelKind::kHypernym);
  collect(hyponym_query(resource), LabelKind::kHyponym);
  return out;
}

HypernymTableEndpoint::HypernymTableEndpoint(const std::filesystem::path& path) {
  const auto lines = lines_of(read_file(path));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line = trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(lines[n], '\t');
    if (f.size() != 2 || trim(f[0]).empty() || trim(f[1]).empty()) {
      throw ParseError(path.string(), n + 1, "expected resource<TAB>hypernym_resource");
    }
    const std::string from = trim(f[0]);
    const std::string to = trim(f[1]);
    answers_[hypernym_query(from)].push_back({{"hypernyms", "http://dbpedia.org/resource/" + to}});
    answers_[hyponym_query(to)].push_back({{"hypernyms", "http://dbpedia.org/resource/" + from}});
  }
}

std::vector<SparqlRow> HypernymTableEndpoint::select(const std::string& query) {
  auto it = answers_.find(query);
  return it == answers_.end() ? std::vector<SparqlRow>{} : it->second;
}

RawDataset build_raw_dataset(const OntologyGraph& graph, SparqlEndpoint& endpoint,
                             unsigned parallelism) {
  std::vector<std::string> labels;
  for (const auto& [id, c] : graph.concepts()) labels.push_back(c.label);
  std::sort(labels.begin(), labels.end());

  struct Slot {
    std::vector<RelatedTerm> terms;
    std::string error;
  };
  std::vector<Slot> slots(labels.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < labels.size(); i = next++) {
      try {
        slots[i].terms = fetch_related_terms(labels[i], endpoint);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
        if (slots[i].error.empty()) slots[i].error = "unknown error";
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(labels.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  RawDataset raw;
  std::set<PairKey> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!slots[i].error.empty()) {
      raw.failures.push_back({labels[i], slots[i].error});
      continue;
    }
    for (const auto& t : slots[i].terms) {
      std::string b = normalize_label(t.term);
      if (!seen.insert({labels[i], b}).second) continue;
      raw.pairs.push_back({labels[i], std::move(b), t.relation, PairSource::kEndpoint});
    }
  }
  return raw;
}

std::vector<CurationRow> parse_curation(std::string_view text, const std::string& source) {
  std::vector<CurationRow> rows;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty() || trim(lines[n])[0] == '#') continue;
    const auto f = split(lines[n], '\t');
    if (f.size() != 3) throw ParseError(source, n + 1, "expected a<TAB>b<TAB>label");
    const auto label = parse_label(f[2]);
    if (!label) throw ParseError(source, n + 1, "unknown label '" + f[2] + "'");
    rows.push_back({normalize_label(unescape_tsv(f[0])), normalize_label(unescape_tsv(f[1])), *label});
  }
  return rows;
}

CuratedDataset apply_curation(std::span<const TermPair> raw,
                              std::span<const CurationRow> curation) {
  std::vector<TermPair> pairs(raw.begin(), raw.end());
  std::map<PairKey, std::size_t> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    index[{normalize_label(pairs[i].a), normalize_label(pairs[i].b)}] = i;
  }
  for (const auto& row : curation) {
    auto it = index.find({row.a, row.b});
    if (it == index.end()) {
      warn("curation row (" + row.a + ", " + row.b + ") matches no pair; skipped");
      continue;
    }
    pairs[it->second].label = row.label;
    pairs[it->second].source = PairSource::kCuration;
  }
  return CuratedDataset::from_pairs(std::move(pairs));
}

CuratedDataset filter_none_pairs(const CuratedDataset& dataset, double fraction,
                                 const TermSimilarity& similarity, NoneRetention strategy) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ArgumentError("none-pair fraction must lie in (0, 1]");
  }
  struct Scored {
    double sim;
    std::size_t index;
  };
  std::vector<Scored> none;
  for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
    const TermPair& p = dataset.pairs[i];
    if (p.label != LabelKind::kNone) continue;
    double s = 0.0;
    try {
      s = similarity(p.a, p.b);
      if (!std::isfinite(s)) throw std::runtime_error("non-finite similarity");
    } catch (const std::exception& e) {
      warn("similarity failed for (" + p.a + ", " + p.b + "): " + e.what() + "; using 0");
      s = 0.0;
    }
    none.push_back({s, i});
  }
  const auto& pairs = dataset.pairs;
  std::sort(none.begin(), none.end(), [&](const Scored& x, const Scored& y) {
    if (x.sim != y.sim) return x.sim < y.sim;
    const TermPair& px = pairs[x.index];
    const TermPair& py = pairs[y.index];
    return std::tie(px.a, px.b) < std::tie(py.a, py.b);
  });
  const std::size_t keep = floor_count(fraction, none.size());
  std::vector<bool> retained(pairs.size(), true);
  for (const auto& s : none) retained[s.index] = false;
  if (strategy == NoneRetention::kKeepLeastSimilar) {
    for (std::size_t k = 0; k < keep; ++k) retained[none[k].index] = true;
  } else {
    for (std::size_t k = none.size() - keep; k < none.size(); ++k) retained[none[k].index] = true;
  }
  std::vector<TermPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (retained[i]) out.push_back(pairs[i]);
  }
  return CuratedDataset::from_pairs(std::move(out));
}

HoldoutSplit split_holdout(const CuratedDataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ArgumentError("holdout fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  std::vector<bool> in_test(dataset.pairs.size(), false);
  std::size_t test_size = 0;
  for (LabelKind k : kAllLabels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
      if (dataset.pairs[i].label == k) members.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(members));
    const std::size_t take = floor_count(fraction, members.size());
    for (std::size_t j = 0; j < take; ++j) in_test[members[j]] = true;
    test_size += take;
  }
  if (test_size == 0) {
    throw ArgumentError("holdout fraction yields an empty test set");
  }
  std::vector<TermPair> train;
  std::vector<TermPair> test;
  for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
    (in_test[i] ? test : train).push_back(dataset.pairs[i]);
  }
  return {CuratedDataset::from_pairs(std::move(train)), CuratedDataset::from_pairs(std::move(test))};
}

std::string format_dataset(const CuratedDataset& dataset) {
  std::string out;
  for (const auto& p : dataset.pairs) {
    out += escape_tsv(p.a);
    out += '\t';
    out += escape_tsv(p.b);
    out += '\t';
    out += to_string(p.label);
    out += '\t';
    out += to_string(p.source);
    out += '\n';
  }
  return out;
}

CuratedDataset parse_dataset(std::string_view text, const std::string& source) {
  std::vector<TermPair> pairs;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty() || lines[n][0] == '#') continue;
    const auto f = split(lines[n], '\t');
    if (f.size() != 4 && f.size() != 3) {
      throw ParseError(source, n + 1, "expected a<TAB>b<TAB>label<TAB>source");
    }
    const auto label = parse_label(f[2]);
    if (!label) throw ParseError(source, n + 1, "unknown label '" + f[2] + "'");
    PairSource src = PairSource::kEndpoint;
    if (f.size() == 4) {
      const auto s = parse_source(f[3]);
      if (!s) throw ParseError(source, n + 1, "unknown source '" + f[3] + "'");
      src = *s;
    }
    pairs.push_back({unescape_tsv(f[0]), unescape_tsv(f[1]), *label, src});
  }
  try {
    return CuratedDataset::from_pairs(std::move(pairs));
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

void save_dataset(const CuratedDataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, format_dataset(dataset));
}

CuratedDataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file(path), path.string());
}

}  // namespace ontoenrich
