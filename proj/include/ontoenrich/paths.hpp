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

// Dependency paths between co-mentioned terms. A path runs from term X's
// anchor token up to the lowest common ancestor and down to term Y's anchor;
// each node carries (lemma, POS, dependency label, direction).

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ontoenrich/corpus.hpp"
#include "ontoenrich/labels.hpp"

namespace ontoenrich {

struct ParsedToken {
  int index = 0;  // 0-based position in the sentence
  std::string surface;
  std::string lemma;
  std::string pos;
  std::string dep;
  int head = 0;  // equals index for the root

  friend bool operator==(const ParsedToken&, const ParsedToken&) = default;
};

struct ParsedSentence {
  std::string id;
  std::vector<ParsedToken> tokens;

  // Surfaces joined by single spaces.
  std::string text() const;
};

enum class Direction : char { kTowardRoot = '+', kRoot = '~', kAwayFromRoot = '-' };

struct DependencyNode {
  std::string lemma;
  std::string pos;
  std::string dep;
  Direction dir = Direction::kRoot;

  friend auto operator<=>(const DependencyNode&, const DependencyNode&) = default;
};

struct DependencyPath {
  std::vector<DependencyNode> nodes;
  std::uint64_t count = 1;

  friend bool operator==(const DependencyPath&, const DependencyPath&) = default;
};

struct PairPaths {
  TermPair pair;
  std::vector<DependencyPath> paths;  // sorted by node sequence
  bool isNull = false;
  std::vector<std::string> sentenceIds;  // sorted, unique

  std::uint64_t total_count() const;
};

inline constexpr int kDefaultMaxPathLen = 8;
inline constexpr std::string_view kUnknownToken = "UNK";

DependencyNode null_node();
DependencyPath null_path();
std::string to_string(Direction d);
Direction parse_direction(std::string_view s);
// "(lemma, POS, dep, dir)" tuples joined by ", " inside brackets.
std::string format_path(const DependencyPath& path);

// Throws DataError unless heads form one tree with exactly one self-headed
// root and indices equal positions.
void validate_tree(const std::vector<ParsedToken>& tokens);

class DependencyParser {
 public:
  virtual ~DependencyParser() = default;
  // Throws on failure for that sentence.
  virtual std::vector<ParsedToken> parse(std::string_view sentence) const = 0;
  // One result per input; nullopt marks a failed sentence.
  virtual std::vector<std::optional<std::vector<ParsedToken>>> parse_batch(
      const std::vector<std::string>& sentences) const;
};

// Serves parses from a pre-parsed corpus, keyed by sentence text with all
// whitespace removed.
class PreParsedParser final : public DependencyParser {
 public:
  explicit PreParsedParser(const std::vector<ParsedSentence>& sentences);
  std::vector<ParsedToken> parse(std::string_view sentence) const override;
  std::size_t size() const { return by_text_.size(); }

 private:
  std::unordered_map<std::string, std::vector<ParsedToken>> by_text_;
};

// Runs an external program once per batch: sentences go to stdin one per
// line, the pre-parsed token format is expected on stdout with sentence_id
// equal to the 0-based input line number.
class CommandParser final : public DependencyParser {
 public:
  explicit CommandParser(std::string command) : command_(std::move(command)) {}
  std::vector<ParsedToken> parse(std::string_view sentence) const override;
  std::vector<std::optional<std::vector<ParsedToken>>> parse_batch(
      const std::vector<std::string>& sentences) const override;

 private:
  std::string command_;
};

// Parses, validates and lowercases lemmas. Failures warn and yield nullopt.
std::optional<std::vector<ParsedToken>> parse_sentence(std::string_view text,
                                                       const DependencyParser& parser);

// Rule-based: breaks after . ! ? followed by whitespace and an uppercase
// letter, digit or quote, and at newlines.
std::vector<std::string> split_sentences(std::string_view text);

// Pre-parsed format: sentence_id, index, surface, lemma, pos, dep, head per
// line; blank line between sentences. Indices may be 0- or 1-based (a head of
// 0 in 1-based input marks the root).
std::vector<ParsedSentence> parse_preparsed(std::string_view text,
                                            std::string_view source = "<preparsed>");
std::vector<ParsedSentence> read_preparsed(const std::filesystem::path& path);
std::string format_preparsed(const std::vector<ParsedSentence>& sentences);

// Whitespace-free normalized label used for term matching.
std::string term_key(std::string_view term);

// Head token of the longest span (leftmost on ties) matching the term, where
// a span matches when its concatenated surfaces, lemmas, or surfaces with
// the final token lemmatized equal the term key.
std::optional<int> locate_term(const std::vector<ParsedToken>& tokens, std::string_view term);

// Syntactic head of tokens[first, last]: the token whose governor lies
// outside the span, shallowest first, leftmost on ties.
int span_head(const std::vector<ParsedToken>& tokens, int first, int last);

std::optional<DependencyPath> extract_path(const std::vector<ParsedToken>& tokens, int anchorX,
                                           int anchorY, int maxPathLen = kDefaultMaxPathLen);

struct PathOptions {
  int maxPathLen = kDefaultMaxPathLen;
  unsigned workers = 1;
};

// Aggregates identical node sequences per pair; pairs with no co-mention get
// the sentinel path. Output order follows `pairs`.
std::vector<PairPaths> collect_pair_paths(const std::vector<ParsedSentence>& sentences,
                                          const std::vector<TermPair>& pairs,
                                          const PathOptions& options = {});

// Splits corpus articles into sentences and parses them first; failures are
// skipped with a summary warning.
std::vector<PairPaths> collect_pair_paths(const Corpus& corpus, const std::vector<TermPair>& pairs,
                                          const DependencyParser& parser,
                                          const PathOptions& options = {});

std::vector<ParsedSentence> parse_corpus(const Corpus& corpus, const DependencyParser& parser);

std::string format_pair_paths(const PairPaths& pp);
PairPaths parse_pair_paths(std::string_view line);
void save_paths(const std::vector<PairPaths>& all, const std::filesystem::path& path);
std::vector<PairPaths> load_paths(const std::filesystem::path& path);

}  // namespace ontoenrich
