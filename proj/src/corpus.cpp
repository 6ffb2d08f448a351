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

#include "ontoenrich/corpus.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <unordered_map>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

namespace {

constexpr std::size_t kChunk = 1 << 16;

std::optional<std::string> element_text(std::string_view page, std::string_view name) {
  const std::string open = "<" + std::string(name);
  std::size_t b = page.find(open);
  while (b != std::string_view::npos) {
    const char after = b + open.size() < page.size() ? page[b + open.size()] : '\0';
    if (after == '>' || after == ' ' || after == '/' || after == '\t' || after == '\n') break;
    b = page.find(open, b + 1);
  }
  if (b == std::string_view::npos) return std::nullopt;
  const std::size_t gt = page.find('>', b);
  if (gt == std::string_view::npos) return std::nullopt;
  if (page[gt - 1] == '/') return std::string();
  const std::string close = "</" + std::string(name) + ">";
  const std::size_t e = page.find(close, gt + 1);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(page.substr(gt + 1, e - gt - 1));
}

}  // namespace

WikiDumpReader::WikiDumpReader(const std::filesystem::path& path) : path_(path) {
  gz_ = gzopen(path.string().c_str(), "rb");
  if (!gz_) throw DataError("cannot open dump " + path.string());
}

WikiDumpReader::~WikiDumpReader() {
  if (gz_) gzclose(static_cast<gzFile>(gz_));
}

bool WikiDumpReader::fill() {
  if (eof_) return false;
  if (pos_ > 0) {
    buffer_.erase(0, pos_);
    pos_ = 0;
  }
  const std::size_t old = buffer_.size();
  buffer_.resize(old + kChunk);
  const int n = gzread(static_cast<gzFile>(gz_), buffer_.data() + old, kChunk);
  if (n < 0) {
    buffer_.resize(old);
    eof_ = true;
    truncated_ = true;
    warn(path_.string() + ": read error in compressed stream");
    return false;
  }
  buffer_.resize(old + static_cast<std::size_t>(n));
  if (n == 0) eof_ = true;
  return n > 0;
}

std::optional<ArticleDoc> WikiDumpReader::next() {
  for (;;) {
    std::size_t start = buffer_.find("<page>", pos_);
    while (start == std::string::npos) {
      // Keep a tail in case "<page>" straddles chunks.
      if (buffer_.size() > pos_ + 6) pos_ = buffer_.size() - 6;
      if (!fill()) return std::nullopt;
      start = buffer_.find("<page>", pos_);
    }
    std::size_t end = buffer_.find("</page>", start);
    while (end == std::string::npos) {
      const std::size_t rel = start - pos_;
      if (!fill()) {
        truncated_ = true;
        warn(path_.string() + ": dump truncated inside a page");
        pos_ = buffer_.size();
        return std::nullopt;
      }
      start = pos_ + rel;
      end = buffer_.find("</page>", start);
    }
    const std::string page = buffer_.substr(start, end - start);
    pos_ = end + 7;

    if (page.find("<redirect") != std::string::npos) {
      ++redirects_;
      continue;
    }
    if (const auto ns = element_text(page, "ns"); ns && trim(*ns) != "0") continue;
    ArticleDoc doc;
    doc.title = decode_xml_entities(trim(element_text(page, "title").value_or("")));
    doc.text = strip_wikitext(decode_xml_entities(element_text(page, "text").value_or("")));
    doc.tokens = split_whitespace(doc.text).size();
    return doc;
  }
}

std::vector<ArticleDoc> extract_articles(const std::filesystem::path& dump, bool* truncated) {
  WikiDumpReader reader(dump);
  std::vector<ArticleDoc> out;
  while (auto doc = reader.next()) out.push_back(std::move(*doc));
  if (truncated) *truncated = reader.truncated();
  return out;
}

double BagOfWordsSimilarity::similarity(const ArticleDoc& a, const ArticleDoc& b) const {
  std::unordered_map<std::string, double> ta;
  std::unordered_map<std::string, double> tb;
  for (auto& w : word_tokens(a.text)) ta[std::move(w)] += 1.0;
  for (auto& w : word_tokens(b.text)) tb[std::move(w)] += 1.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [w, c] : ta) {
    na += c * c;
    if (auto it = tb.find(w); it != tb.end()) dot += c * it->second;
  }
  for (const auto& [w, c] : tb) nb += c * c;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double EmbeddingDocSimilarity::similarity(const ArticleDoc& a, const ArticleDoc& b) const {
  return text_similarity(*provider_, a.text, b.text);
}

double doc_similarity(const ArticleDoc& a, const ArticleDoc& b,
                      const DocSimilarityProvider& provider) {
  if (trim(a.text).empty() || trim(b.text).empty()) {
    warn("doc_similarity: empty text (" + a.title + ", " + b.title + "); score 0");
    return 0.0;
  }
  return std::clamp(provider.similarity(a, b), -1.0, 1.0);
}

Corpus build_corpus(const std::filesystem::path& dump, const std::set<std::string>& datasetTerms,
                    std::string_view anchorTitle, const DocSimilarityProvider& provider,
                    const CorpusOptions& options) {
  std::set<std::string> terms;
  for (const auto& t : datasetTerms) terms.insert(normalize_label(t));
  const std::string anchor_key = normalize_label(anchorTitle);

  std::optional<ArticleDoc> anchor;
  {
    WikiDumpReader reader(dump);
    while (auto doc = reader.next()) {
      if (normalize_label(doc->title) == anchor_key && !doc->text.empty()) {
        anchor = std::move(doc);
        break;
      }
    }
  }
  if (!anchor) {
    throw DataError("anchor article '" + std::string(anchorTitle) + "' not found in " +
                    dump.string());
  }

  Corpus corpus;
  corpus.anchorTitle = anchor->title;
  corpus.threshold = options.threshold;

  struct Scored {
    ArticleDoc doc;
    bool forced = false;
    std::optional<double> score;
  };
  std::set<std::string> seen_titles;
  std::vector<Scored> batch;

  auto score_batch = [&] {
    auto score_range = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        try {
          batch[i].score = doc_similarity(*anchor, batch[i].doc, provider);
        } catch (const std::exception& e) {
          warn("similarity failed for '" + batch[i].doc.title + "': " + e.what());
        }
      }
    };
    const unsigned workers = std::max(1u, options.workers);
    if (workers == 1 || batch.size() < 2) {
      score_range(0, batch.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t step = (batch.size() + workers - 1) / workers;
      for (std::size_t lo = 0; lo < batch.size(); lo += step) {
        pool.emplace_back(score_range, lo, std::min(batch.size(), lo + step));
      }
      for (auto& t : pool) t.join();
    }
    for (auto& s : batch) {
      if (!s.score) continue;  // provider failure: excluded
      if (s.forced || *s.score >= options.threshold) {
        corpus.manifest[s.doc.title] = {
            s.forced ? InclusionReason::kForced : InclusionReason::kScored, *s.score};
        corpus.articles.push_back(std::move(s.doc));
      }
    }
    batch.clear();
  };

  WikiDumpReader reader(dump);
  while (auto doc = reader.next()) {
    if (doc->text.empty()) continue;
    if (!seen_titles.insert(doc->title).second) {
      warn("duplicate article title '" + doc->title + "' skipped");
      continue;
    }
    const bool forced = terms.count(normalize_label(doc->title)) > 0;
    batch.push_back({std::move(*doc), forced, std::nullopt});
    if (batch.size() >= 256) score_batch();
  }
  score_batch();
  if (reader.truncated()) warn(dump.string() + ": corpus built from a truncated dump");

  std::sort(corpus.articles.begin(), corpus.articles.end(),
            [](const ArticleDoc& x, const ArticleDoc& y) { return x.title < y.title; });
  return corpus;
}

std::string article_file_name(std::string_view title) {
  std::string base;
  for (char c : title) {
    base.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    if (base.size() >= 64) break;
  }
  return base + "-" + hex64(fnv1a64(title)).substr(0, 8) + ".txt";
}

std::string format_manifest(const Corpus& corpus) {
  std::string out;
  char buf[32];
  for (const auto& [title, entry] : corpus.manifest) {
    std::snprintf(buf, sizeof buf, "%.6f", entry.score);
    out += escape_tsv(title);
    out += entry.reason == InclusionReason::kForced ? "\tforced\t" : "\tscored\t";
    out += buf;
    out += '\n';
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "articles");
  for (const auto& a : corpus.articles) {
    write_file_atomic(dir / "articles" / article_file_name(a.title), a.text);
  }
  write_file_atomic(dir / "manifest.tsv", format_manifest(corpus));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", corpus.threshold);
  write_file_atomic(dir / "corpus.info",
                    "anchor\t" + escape_tsv(corpus.anchorTitle) + "\nthreshold\t" + buf + "\n");
}

Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  const auto manifest_path = dir / "manifest.tsv";
  const auto lines = lines_of(read_file(manifest_path));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = split(lines[n], '\t');
    if (f.size() != 3 || (f[1] != "forced" && f[1] != "scored")) {
      throw ParseError(manifest_path.string(), n + 1, "expected title<TAB>reason<TAB>score");
    }
    const std::string title = unescape_tsv(f[0]);
    corpus.manifest[title] = {f[1] == "forced" ? InclusionReason::kForced : InclusionReason::kScored,
                              std::stod(f[2])};
    ArticleDoc doc{title, read_file(dir / "articles" / article_file_name(title)), 0};
    doc.tokens = split_whitespace(doc.text).size();
    corpus.articles.push_back(std::move(doc));
  }
  if (std::filesystem::exists(dir / "corpus.info")) {
    for (const auto& line : lines_of(read_file(dir / "corpus.info"))) {
      const auto f = split(line, '\t');
      if (f.size() != 2) continue;
      if (f[0] == "anchor") corpus.anchorTitle = unescape_tsv(f[1]);
      if (f[0] == "threshold") corpus.threshold = std::stod(f[1]);
    }
  }
  std::sort(corpus.articles.begin(), corpus.articles.end(),
            [](const ArticleDoc& x, const ArticleDoc& y) { return x.title < y.title; });
  return corpus;
}

}  // namespace ontoenrich
