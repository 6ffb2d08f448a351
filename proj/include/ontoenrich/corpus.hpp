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

// Domain corpus construction from a wiki XML dump: articles for dataset
// terms are always included, other articles only when they score at or
// above a similarity threshold against an anchor article.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontoenrich/embedding.hpp"

namespace ontoenrich {

struct ArticleDoc {
  std::string title;
  std::string text;
  std::size_t tokens = 0;
};

// Reads `<page>` elements from a MediaWiki XML export, optionally
// gzip-compressed. Redirects and non-article namespaces are skipped.
// Articles are returned in dump order with markup stripped.
class WikiDumpReader {
 public:
  explicit WikiDumpReader(const std::filesystem::path& path);
  ~WikiDumpReader();
  WikiDumpReader(const WikiDumpReader&) = delete;
  WikiDumpReader& operator=(const WikiDumpReader&) = delete;

  std::optional<ArticleDoc> next();

  // True once the input ended inside an unfinished page.
  bool truncated() const { return truncated_; }
  std::size_t redirects_skipped() const { return redirects_; }

 private:
  bool fill();

  void* gz_ = nullptr;
  std::filesystem::path path_;
  std::string buffer_;
  std::size_t pos_ = 0;
  bool eof_ = false;
  bool truncated_ = false;
  std::size_t redirects_ = 0;
};

std::vector<ArticleDoc> extract_articles(const std::filesystem::path& dump,
                                         bool* truncated = nullptr);

// Wikitext to plain text: templates, tables, references, comments, file and
// category links and emphasis are removed; links keep their visible label.
std::string strip_wikitext(std::string_view markup);
std::string decode_xml_entities(std::string_view s);

class DocSimilarityProvider {
 public:
  virtual ~DocSimilarityProvider() = default;
  // Score in [-1, 1]; may throw on failure.
  virtual double similarity(const ArticleDoc& a, const ArticleDoc& b) const = 0;
};

// Term-frequency cosine over lowercase word tokens.
class BagOfWordsSimilarity final : public DocSimilarityProvider {
 public:
  double similarity(const ArticleDoc& a, const ArticleDoc& b) const override;
};

// Cosine of whole-document embeddings from an EmbeddingProvider.
class EmbeddingDocSimilarity final : public DocSimilarityProvider {
 public:
  explicit EmbeddingDocSimilarity(std::shared_ptr<const EmbeddingProvider> provider)
      : provider_(std::move(provider)) {}
  double similarity(const ArticleDoc& a, const ArticleDoc& b) const override;

 private:
  std::shared_ptr<const EmbeddingProvider> provider_;
};

// Empty text on either side scores 0 with a warning.
double doc_similarity(const ArticleDoc& a, const ArticleDoc& b,
                      const DocSimilarityProvider& provider);

enum class InclusionReason { kForced, kScored };

struct ManifestEntry {
  InclusionReason reason = InclusionReason::kScored;
  double score = 0.0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Corpus {
  std::vector<ArticleDoc> articles;  // sorted by title
  std::string anchorTitle;
  double threshold = 0.27;
  std::map<std::string, ManifestEntry> manifest;
};

inline constexpr double kDefaultCorpusThreshold = 0.27;

struct CorpusOptions {
  double threshold = kDefaultCorpusThreshold;
  unsigned workers = 1;
};

// Titles match dataset terms case-insensitively with underscores read as
// spaces. Throws DataError when the anchor article is absent.
Corpus build_corpus(const std::filesystem::path& dump, const std::set<std::string>& datasetTerms,
                    std::string_view anchorTitle, const DocSimilarityProvider& provider,
                    const CorpusOptions& options = {});

std::string article_file_name(std::string_view title);
// Writes one text file per article under dir/articles plus dir/manifest.tsv.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);
std::string format_manifest(const Corpus& corpus);

}  // namespace ontoenrich
