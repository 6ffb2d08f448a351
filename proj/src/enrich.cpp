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

#include "ontoenrich/enrich.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "ontoenrich/common.hpp"
#include "ontoenrich/corpus.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/sparql.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

void Thresholds::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ArgumentError(std::string("threshold ") + name + " must lie in [0, 1]");
    }
  };
  check(domainSim, "domain_sim");
  check(pairSim, "pair_sim");
  check(sufficiency, "sufficiency");
}

namespace {

bool iequals_at(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[pos + k])) != word[k]) return false;
  }
  return true;
}

std::size_t ifind(std::string_view s, std::string_view word, std::size_t from) {
  for (std::size_t i = from; i + word.size() <= s.size(); ++i) {
    if (iequals_at(s, i, word)) return i;
  }
  return std::string_view::npos;
}

// Lowercase tag name after '<' or "</"; empty for comments and directives.
std::string tag_name(std::string_view s, std::size_t lt, bool* closing) {
  std::size_t i = lt + 1;
  *closing = i < s.size() && s[i] == '/';
  if (*closing) ++i;
  std::string name;
  while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) {
    name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
    ++i;
  }
  return name;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

const std::set<std::string, std::less<>> kSkipBlocks = {"script", "style", "nav", "header",
                                                        "footer", "aside", "noscript", "template"};
const std::set<std::string, std::less<>> kParagraphEnders = {
    "p", "div", "section", "article", "main", "ul", "ol", "table", "h1", "h2", "h3",
    "h4", "h5", "h6", "blockquote", "pre", "form", "body", "html"};

struct Url {
  std::string origin;
  std::string target;
};

Url split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string fetch_url(const std::string& url) {
  const Url u = split_url(url);
  httplib::Client client(u.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(std::chrono::seconds(15));
  client.set_read_timeout(std::chrono::seconds(30));
  auto res = client.Get(u.target);
  if (!res) throw UpstreamError("fetch " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw UpstreamError("fetch " + url + " failed: HTTP " + std::to_string(res->status));
  }
  const std::string type = to_lower(res->get_header_value("Content-Type"));
  if (!type.empty() && type.find("text") == std::string::npos &&
      type.find("html") == std::string::npos && type.find("xml") == std::string::npos) {
    throw DataError(url + ": empty document (non-text content type " + type + ")");
  }
  return res->body;
}

bool is_pronoun(const ParsedToken& t) { return t.pos == "PRON"; }

const std::set<std::string, std::less<>> kChunkDeps = {
    "nsubj", "nsubjpass", "nsubj:pass", "dobj", "obj", "iobj", "pobj", "dative", "attr",
    "appos", "oprd", "pcomp", "obl", "nmod", "ROOT", "root"};

}  // namespace

bool looks_like_html(std::string_view text) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos || text[first] != '<') return false;
  return ifind(text, "<html", 0) != std::string_view::npos ||
         ifind(text, "<!doctype html", 0) != std::string_view::npos ||
         ifind(text, "<p", 0) != std::string_view::npos ||
         ifind(text, "<body", 0) != std::string_view::npos;
}

std::string extract_paragraph_text(std::string_view html) {
  std::vector<std::string> paragraphs;
  std::string cur;
  bool inside = false;
  auto flush = [&] {
    std::string t = collapse_whitespace(decode_xml_entities(cur));
    if (!t.empty()) paragraphs.push_back(std::move(t));
    cur.clear();
  };
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      if (inside) cur.push_back(html[i]);
      ++i;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      const std::size_t end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    const std::size_t gt = html.find('>', i);
    if (gt == std::string_view::npos) break;
    bool closing = false;
    const std::string name = tag_name(html, i, &closing);
    i = gt + 1;
    if (name.empty()) continue;
    if (!closing && kSkipBlocks.count(name)) {
      // Skip to the matching close tag, honoring nesting of the same element.
      int depth = 1;
      std::size_t j = i;
      while (depth > 0) {
        const std::size_t lt = html.find('<', j);
        if (lt == std::string_view::npos) {
          j = html.size();
          break;
        }
        bool c = false;
        const std::string n = tag_name(html, lt, &c);
        const std::size_t e = html.find('>', lt);
        j = e == std::string_view::npos ? html.size() : e + 1;
        if (n == name) depth += c ? -1 : (html[j - 2] == '/' ? 0 : 1);
        if (j >= html.size()) break;
      }
      i = j;
      continue;
    }
    if (name == "p") {
      if (inside) flush();
      inside = !closing;
      continue;
    }
    if (inside && kParagraphEnders.count(name)) {
      flush();
      inside = false;
      continue;
    }
    if (inside && name == "br") cur.push_back(' ');
    // Inline tags inside a paragraph separate nothing; other text is ignored.
  }
  if (inside) flush();
  return join(paragraphs, "\n");
}

WebDocument ingest_text(std::string source, std::string_view content) {
  if (content.find('\0') != std::string_view::npos) {
    throw DataError(source + ": empty document (binary content)");
  }
  WebDocument doc;
  doc.source = std::move(source);
  doc.text = looks_like_html(content) ? extract_paragraph_text(content) : std::string(content);
  if (trim(doc.text).empty()) throw DataError(doc.source + ": empty document");
  doc.sentences = split_sentences(doc.text);
  return doc;
}

WebDocument ingest(const std::string& source) {
  if (starts_with_ci(source, "http://") || starts_with_ci(source, "https://")) {
    return ingest_text(source, fetch_url(source));
  }
  if (!std::filesystem::exists(source)) throw DataError(source + ": no such file");
  return ingest_text(source, read_file(source));
}

std::vector<std::string> noun_chunks(const std::vector<ParsedToken>& tokens) {
  const int n = static_cast<int>(tokens.size());
  std::vector<int> leftEdge(n);
  for (int k = 0; k < n; ++k) leftEdge[k] = k;
  // Propagate each token's index up its head chain.
  for (int k = 0; k < n; ++k) {
    int h = k;
    for (int steps = 0; steps < n && tokens[h].head != h; ++steps) {
      h = tokens[h].head;
      leftEdge[h] = std::min(leftEdge[h], k);
    }
  }
  auto is_np_head = [&](int k) {
    const auto& t = tokens[k];
    if (t.pos != "NOUN" && t.pos != "PROPN" && t.pos != "PRON") return false;
    if (kChunkDeps.count(t.dep)) return true;
    if (t.dep != "conj") return false;
    int h = t.head;
    while (tokens[h].dep == "conj" && tokens[h].head < h) h = tokens[h].head;
    return kChunkDeps.count(tokens[h].dep) > 0;
  };
  std::vector<std::string> out;
  int prevEnd = -1;
  for (int k = 0; k < n; ++k) {
    if (!is_np_head(k)) continue;
    int first = leftEdge[k];
    if (first <= prevEnd) continue;
    prevEnd = k;
    while (first < k && (tokens[first].pos == "DET" || tokens[first].pos == "PUNCT" ||
                         tokens[first].dep == "poss" || tokens[first].dep == "det" ||
                         tokens[first].pos == "CCONJ" || tokens[first].pos == "ADP")) {
      ++first;
    }
    bool allPronouns = true;
    for (int j = first; j <= k; ++j) allPronouns = allPronouns && is_pronoun(tokens[j]);
    if (allPronouns) continue;
    std::string text;
    for (int j = first; j <= k; ++j) {
      const bool hyphen = tokens[j].surface == "-";
      const bool afterHyphen = j > first && tokens[j - 1].surface == "-";
      if (!text.empty() && !hyphen && !afterHyphen) text.push_back(' ');
      text += tokens[j].surface;
    }
    text = normalize_label(text);
    if (!text.empty()) out.push_back(std::move(text));
  }
  return out;
}

void analyze_document(WebDocument& doc, const DependencyParser& parser,
                      const CoreferenceResolver& coref) {
  doc.parsed.clear();
  doc.chunks.clear();
  if (doc.sentences.empty()) doc.sentences = split_sentences(doc.text);
  const auto results = parser.parse_batch(doc.sentences);
  for (std::size_t k = 0; k < doc.sentences.size(); ++k) {
    if (!results[k]) continue;
    try {
      auto tokens = *results[k];
      validate_tree(tokens);
      for (auto& t : tokens) t.lemma = to_lower(t.lemma);
      doc.parsed.push_back({"s" + std::to_string(k + 1), std::move(tokens)});
    } catch (const Error& e) {
      warn(doc.source + ": sentence " + std::to_string(k + 1) + " skipped: " + e.what());
    }
  }
  if (coref) doc.parsed = coref(std::move(doc.parsed));
  std::set<std::string> seen;
  for (const auto& s : doc.parsed) {
    for (auto& c : noun_chunks(s.tokens)) {
      if (seen.insert(c).second) doc.chunks.push_back(std::move(c));
    }
  }
}

SufficiencyReport sufficiency_gate(const WebDocument& doc, const OntologyGraph& graph,
                                   std::string_view anchorText, const EmbeddingProvider& provider,
                                   const Thresholds& t, bool enabled) {
  t.validate();
  SufficiencyReport r;
  r.enabled = enabled;
  r.chunks = doc.chunks.size();
  for (const auto& c : doc.chunks) {
    if (text_similarity(provider, c, anchorText) < t.domainSim) continue;
    ++r.domainChunks;
    if (!graph.find(c)) ++r.newDomainChunks;
  }
  r.ratio = r.chunks == 0 ? 0.0
                          : static_cast<double>(r.newDomainChunks) / static_cast<double>(r.chunks);
  r.passed = !enabled || r.ratio >= t.sufficiency;
  return r;
}

std::vector<std::pair<std::string, std::string>> generate_pairs(
    const std::vector<std::string>& chunks) {
  std::vector<std::pair<std::string, std::string>> out;
  if (chunks.size() < 2) return out;
  out.reserve(chunks.size() * (chunks.size() - 1) / 2);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    for (std::size_t j = i + 1; j < chunks.size(); ++j) out.emplace_back(chunks[i], chunks[j]);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> filter_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs, std::string_view anchorText,
    const EmbeddingProvider& provider, const Thresholds& t) {
  t.validate();
  std::unordered_map<std::string, double> domain;
  auto domain_sim = [&](const std::string& c) {
    auto it = domain.find(c);
    if (it == domain.end()) it = domain.emplace(c, text_similarity(provider, c, anchorText)).first;
    return it->second;
  };
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : pairs) {
    if (std::min(domain_sim(a), domain_sim(b)) < t.domainSim) continue;
    if (text_similarity(provider, a, b) < t.pairSim) continue;
    out.emplace_back(a, b);
  }
  return out;
}

std::string_view to_string(EnrichMode m) { return m == EnrichMode::kAuto ? "auto" : "review"; }

std::optional<EnrichMode> parse_enrich_mode(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "auto") return EnrichMode::kAuto;
  if (t == "review") return EnrichMode::kReview;
  return std::nullopt;
}

EnrichResult enrich(const WebDocument& doc, const RelationModel<double>& model,
                    const EmbeddingProvider& provider, const OntologyGraph& graph, EnrichMode mode,
                    const EnrichOptions& options) {
  options.thresholds.validate();
  EnrichResult result{{}, graph, {}};
  auto& summary = result.summary;
  summary.sentences = doc.parsed.size();
  summary.chunks = doc.chunks.size();
  summary.sufficiency = sufficiency_gate(doc, graph, options.anchorText, provider,
                                         options.thresholds, options.sufficiencyEnabled);
  if (!summary.sufficiency.passed) {
    warn(doc.source + ": insufficient new domain terms (ratio " +
         std::to_string(summary.sufficiency.ratio) + "); document skipped");
    return result;
  }
  const auto pairs = generate_pairs(doc.chunks);
  summary.pairs = pairs.size();
  const auto surviving = filter_pairs(pairs, options.anchorText, provider, options.thresholds);
  summary.survivingPairs = surviving.size();
  if (surviving.empty()) return result;

  std::vector<TermPair> ordered;
  ordered.reserve(2 * surviving.size());
  for (const auto& [a, b] : surviving) {
    ordered.push_back({a, b, LabelKind::kNone, PairSource::kWebpage});
    ordered.push_back({b, a, LabelKind::kNone, PairSource::kWebpage});
  }
  const auto paths = collect_pair_paths(doc.parsed, ordered, options.paths);

  for (std::size_t k = 0; k < surviving.size(); ++k) {
    std::optional<CandidateTriple> best;
    try {
      for (std::size_t o = 0; o < 2; ++o) {
        const PairPaths& pp = paths[2 * k + o];
        const auto probs = model.classify_pair(pp.pair, pp, provider);
        if (probs.predicted == LabelKind::kNone) continue;
        if (best && probs.confidence <= best->confidence) continue;
        best = CandidateTriple{pp.pair.a,
                               probs.predicted,
                               pp.pair.b,
                               probs.confidence,
                               {doc.source, pp.sentenceIds, pp.isNull},
                               TripleStatus::kPending};
      }
    } catch (const std::exception& e) {
      ++summary.failures;
      warn("enrich: pair (" + surviving[k].first + ", " + surviving[k].second +
           ") skipped: " + e.what());
      continue;
    }
    if (best) {
      result.candidates.push_back(std::move(*best));
    } else {
      ++summary.noneDiscarded;
    }
  }
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const CandidateTriple& x, const CandidateTriple& y) {
                     if (x.confidence != y.confidence) return x.confidence > y.confidence;
                     return std::tie(x.subject, x.object) < std::tie(y.subject, y.object);
                   });
  if (mode == EnrichMode::kAuto && !result.candidates.empty()) {
    auto outcome = merge_triples(graph, result.candidates, MergeMode::kAuto);
    std::set<std::size_t> rejected;
    for (const auto& r : outcome.rejected) rejected.insert(r.index);
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      if (!rejected.count(i)) result.candidates[i].status = TripleStatus::kAutoMerged;
    }
    result.graph = std::move(outcome.graph);
  }
  return result;
}

std::string format_triples_tsv(const std::vector<CandidateTriple>& triples) {
  std::string out;
  char conf[32];
  for (const auto& t : triples) {
    std::snprintf(conf, sizeof conf, "%.6f", t.confidence);
    out += escape_tsv(t.subject) + '\t' + std::string(to_string(t.predicate)) + '\t' +
           escape_tsv(t.object) + '\t' + conf + '\t' + escape_tsv(t.provenance.source) + '\n';
  }
  return out;
}

std::string format_triples_turtle(const std::vector<CandidateTriple>& triples) {
  std::string out =
      "@prefix oe: <http://ontoenrich.org/relation#> .\n"
      "@prefix term: <http://ontoenrich.org/term/> .\n\n";
  auto iri = [](const std::string& label) {
    return "<http://ontoenrich.org/term/" + url_encode(label) + ">";
  };
  for (const auto& t : triples) {
    const auto pred = predicate_for(t.predicate);
    if (!pred) continue;
    out += iri(t.subject) + " oe:" + std::string(to_string(*pred)) + " " + iri(t.object) + " .\n";
  }
  return out;
}

std::vector<CalibrationExample> parse_calibration(std::string_view text,
                                                  const std::string& source) {
  std::vector<CalibrationExample> out;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line = trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(lines[n], '\t');
    if (f.size() != 3) throw ParseError(source, n + 1, "expected 3 tab-separated fields");
    CalibrationExample ex{unescape_tsv(f[0]), unescape_tsv(f[1]), false};
    const std::string label = trim(f[2]);
    if (label == "1") {
      ex.related = true;
    } else if (label != "0") {
      const auto parsed = parse_label(label);
      if (!parsed) throw ParseError(source, n + 1, "unknown label '" + label + "'");
      ex.related = *parsed != LabelKind::kNone;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

CalibrationReport calibrate_thresholds(const std::vector<CalibrationExample>& examples,
                                       std::string_view anchorText,
                                       const EmbeddingProvider& provider, double step) {
  if (examples.empty()) throw ArgumentError("calibrate: no labeled examples");
  if (!(step > 0.0 && step <= 1.0)) throw ArgumentError("calibrate: step must lie in (0, 1]");
  struct Sims {
    double domain;
    double pair;
  };
  std::vector<Sims> sims;
  for (const auto& ex : examples) {
    sims.push_back({std::min(text_similarity(provider, ex.a, anchorText),
                             text_similarity(provider, ex.b, anchorText)),
                    text_similarity(provider, ex.a, ex.b)});
  }
  const int steps = static_cast<int>(std::llround(1.0 / step));
  CalibrationReport report;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      CalibrationPoint p{std::min(1.0, i * step), std::min(1.0, j * step), 0.0};
      std::size_t agree = 0;
      for (std::size_t k = 0; k < examples.size(); ++k) {
        const bool survives = sims[k].domain >= p.domainSim && sims[k].pair >= p.pairSim;
        if (survives == examples[k].related) ++agree;
      }
      p.accuracy = static_cast<double>(agree) / static_cast<double>(examples.size());
      if (report.grid.empty() || p.accuracy > report.best.accuracy) report.best = p;
      report.grid.push_back(p);
    }
  }
  return report;
}

}  // namespace ontoenrich
