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

#include "ontoenrich/paths.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <thread>
#include <unordered_set>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

using nlohmann::json;

std::string ParsedSentence::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.surface;
  }
  return out;
}

std::uint64_t PairPaths::total_count() const {
  std::uint64_t n = 0;
  for (const auto& p : paths) n += p.count;
  return n;
}

DependencyNode null_node() {
  const std::string unk(kUnknownToken);
  return {unk, unk, unk, Direction::kRoot};
}

DependencyPath null_path() { return {{null_node()}, 1}; }

std::string to_string(Direction d) { return std::string(1, static_cast<char>(d)); }

Direction parse_direction(std::string_view s) {
  if (s == "+") return Direction::kTowardRoot;
  if (s == "~") return Direction::kRoot;
  if (s == "-") return Direction::kAwayFromRoot;
  throw DataError("unknown path direction '" + std::string(s) + "'");
}

std::string format_path(const DependencyPath& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const auto& n = path.nodes[i];
    if (i) out += ", ";
    out += "(" + n.lemma + ", " + n.pos + ", " + n.dep + ", " + to_string(n.dir) + ")";
  }
  return out + "]";
}

void validate_tree(const std::vector<ParsedToken>& tokens) {
  const int n = static_cast<int>(tokens.size());
  if (n == 0) throw DataError("empty parse");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    if (tokens[i].index != i) throw DataError("token index " + std::to_string(tokens[i].index) +
                                              " at position " + std::to_string(i));
    if (tokens[i].head < 0 || tokens[i].head >= n) {
      throw DataError("head out of range at token " + std::to_string(i));
    }
    if (tokens[i].head == i) ++roots;
  }
  if (roots != 1) throw DataError("parse has " + std::to_string(roots) + " roots");
  // Every chain must reach the root within n steps.
  for (int i = 0; i < n; ++i) {
    int cur = i;
    int steps = 0;
    while (tokens[cur].head != cur) {
      cur = tokens[cur].head;
      if (++steps > n) throw DataError("cycle through token " + std::to_string(i));
    }
  }
}

std::vector<std::optional<std::vector<ParsedToken>>> DependencyParser::parse_batch(
    const std::vector<std::string>& sentences) const {
  std::vector<std::optional<std::vector<ParsedToken>>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    try {
      out.emplace_back(parse(s));
    } catch (const std::exception&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

namespace {

std::string squeeze(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

void normalize_tokens(std::vector<ParsedToken>& tokens) {
  for (auto& t : tokens) t.lemma = to_lower(t.lemma);
}

}  // namespace

PreParsedParser::PreParsedParser(const std::vector<ParsedSentence>& sentences) {
  for (const auto& s : sentences) by_text_.emplace(squeeze(s.text()), s.tokens);
}

std::vector<ParsedToken> PreParsedParser::parse(std::string_view sentence) const {
  auto it = by_text_.find(squeeze(sentence));
  if (it == by_text_.end()) throw DataError("sentence not in pre-parsed corpus");
  return it->second;
}

std::vector<ParsedToken> CommandParser::parse(std::string_view sentence) const {
  auto out = parse_batch({std::string(sentence)});
  if (!out.front()) throw DataError("parser command produced no parse");
  return *out.front();
}

std::vector<std::optional<std::vector<ParsedToken>>> CommandParser::parse_batch(
    const std::vector<std::string>& sentences) const {
  const auto input = std::filesystem::temp_directory_path() /
                     ("ontoenrich_parse_" + hex64(fnv1a64(command_ + std::to_string(
                                                              reinterpret_cast<std::uintptr_t>(this)))) +
                      ".txt");
  std::string body;
  for (const auto& s : sentences) {
    std::string line = s;
    std::replace(line.begin(), line.end(), '\n', ' ');
    body += line + "\n";
  }
  write_file_atomic(input, body);
  const std::string cmd = command_ + " < '" + input.string() + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(input);
    throw UpstreamError("cannot run parser command: " + command_);
  }
  std::string output;
  char buf[1 << 14];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  const int status = pclose(pipe);
  std::filesystem::remove(input);
  if (status != 0) throw UpstreamError("parser command exited with status " + std::to_string(status));

  std::vector<std::optional<std::vector<ParsedToken>>> out(sentences.size());
  for (auto& s : parse_preparsed(output, "parser output")) {
    std::size_t id = 0;
    try {
      id = std::stoul(s.id);
    } catch (const std::exception&) {
      continue;
    }
    if (id < out.size()) out[id] = std::move(s.tokens);
  }
  return out;
}

std::optional<std::vector<ParsedToken>> parse_sentence(std::string_view text,
                                                       const DependencyParser& parser) {
  if (trim(text).empty()) {
    warn("parse_sentence: empty sentence skipped");
    return std::nullopt;
  }
  try {
    auto tokens = parser.parse(text);
    validate_tree(tokens);
    normalize_tokens(tokens);
    return tokens;
  } catch (const std::exception& e) {
    warn("sentence skipped (" + std::string(e.what()) + "): " + std::string(text.substr(0, 80)));
    return std::nullopt;
  }
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::string t = trim(cur);
    if (!t.empty()) out.push_back(std::move(t));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      flush();
      continue;
    }
    cur.push_back(c);
    if ((c == '.' || c == '!' || c == '?') && i + 2 < text.size() && text[i + 1] == ' ') {
      const auto next = static_cast<unsigned char>(text[i + 2]);
      if (std::isupper(next) || std::isdigit(next) || next == '"' || next == '\'') flush();
    }
  }
  flush();
  return out;
}

std::vector<ParsedSentence> parse_preparsed(std::string_view text, std::string_view source) {
  std::vector<ParsedSentence> out;
  ParsedSentence cur;
  std::size_t cur_line = 0;
  int base = -1;
  auto flush = [&] {
    if (cur.tokens.empty()) return;
    bool ok = true;
    for (auto& t : cur.tokens) {
      t.index -= base;
      t.head = (base == 1 && t.head == 0) ? t.index : t.head - base;
    }
    try {
      validate_tree(cur.tokens);
    } catch (const DataError& e) {
      warn(std::string(source) + ":" + std::to_string(cur_line) + ": sentence '" + cur.id +
           "' skipped: " + e.what());
      ok = false;
    }
    if (ok) {
      normalize_tokens(cur.tokens);
      out.push_back(std::move(cur));
    }
    cur = {};
    base = -1;
  };
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 7) {
      throw ParseError(std::string(source), n + 1, "expected 7 tab-separated fields, got " +
                                                       std::to_string(f.size()));
    }
    if (!cur.tokens.empty() && f[0] != cur.id) flush();
    ParsedToken t;
    try {
      t.index = std::stoi(f[1]);
      t.head = std::stoi(f[6]);
    } catch (const std::exception&) {
      throw ParseError(std::string(source), n + 1, "index and head must be integers");
    }
    if (cur.tokens.empty()) {
      cur.id = f[0];
      cur_line = n + 1;
      base = t.index;
      if (base != 0 && base != 1) {
        throw ParseError(std::string(source), n + 1, "first token index must be 0 or 1");
      }
    }
    t.surface = f[2];
    t.lemma = f[3];
    t.pos = f[4];
    t.dep = f[5];
    cur.tokens.push_back(std::move(t));
  }
  flush();
  return out;
}

std::vector<ParsedSentence> read_preparsed(const std::filesystem::path& path) {
  return parse_preparsed(read_file(path), path.string());
}

std::string format_preparsed(const std::vector<ParsedSentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      out += s.id + "\t" + std::to_string(t.index) + "\t" + t.surface + "\t" + t.lemma + "\t" +
             t.pos + "\t" + t.dep + "\t" + std::to_string(t.head) + "\n";
    }
    out += "\n";
  }
  return out;
}

std::string term_key(std::string_view term) { return squeeze(normalize_label(term)); }

namespace {

struct SpanMatch {
  int first = 0;
  int last = 0;
};

bool better(const SpanMatch& a, const SpanMatch& b) {
  const int la = a.last - a.first;
  const int lb = b.last - b.first;
  return la != lb ? la > lb : a.first < b.first;
}

// Calls visit(key, first, last) for every span variant whose key length is
// at most maxLen.
template <typename Visit>
void for_each_span_key(const std::vector<ParsedToken>& tokens, std::size_t maxLen, Visit&& visit) {
  const int n = static_cast<int>(tokens.size());
  std::vector<std::string> surf(n);
  std::vector<std::string> lem(n);
  for (int i = 0; i < n; ++i) {
    surf[i] = to_lower(squeeze(tokens[i].surface));
    lem[i] = to_lower(squeeze(tokens[i].lemma));
  }
  for (int i = 0; i < n; ++i) {
    std::string s;
    std::string l;
    for (int j = i; j < n; ++j) {
      const std::string mixed = s + lem[j];
      s += surf[j];
      l += lem[j];
      if (s.size() > maxLen && l.size() > maxLen && mixed.size() > maxLen) break;
      visit(s, i, j);
      if (l != s) visit(l, i, j);
      if (mixed != s && mixed != l) visit(mixed, i, j);
    }
  }
}

int depth_of(const std::vector<ParsedToken>& tokens, int i) {
  int d = 0;
  const int n = static_cast<int>(tokens.size());
  while (i >= 0 && i < n && tokens[i].head != i && d <= n) {
    i = tokens[i].head;
    ++d;
  }
  return d;
}

}  // namespace

int span_head(const std::vector<ParsedToken>& tokens, int first, int last) {
  int best = -1;
  int best_depth = 0;
  for (int i = first; i <= last; ++i) {
    const int h = tokens[i].head;
    const bool outside = h == i || h < first || h > last;
    if (!outside) continue;
    const int d = depth_of(tokens, i);
    if (best < 0 || d < best_depth) {
      best = i;
      best_depth = d;
    }
  }
  return best < 0 ? first : best;
}

std::optional<int> locate_term(const std::vector<ParsedToken>& tokens, std::string_view term) {
  const std::string key = term_key(term);
  if (key.empty()) return std::nullopt;
  std::optional<SpanMatch> best;
  for_each_span_key(tokens, key.size(), [&](const std::string& k, int i, int j) {
    if (k != key) return;
    const SpanMatch m{i, j};
    if (!best || better(m, *best)) best = m;
  });
  if (!best) return std::nullopt;
  return span_head(tokens, best->first, best->last);
}

std::optional<DependencyPath> extract_path(const std::vector<ParsedToken>& tokens, int anchorX,
                                           int anchorY, int maxPathLen) {
  const int n = static_cast<int>(tokens.size());
  if (anchorX < 0 || anchorX >= n || anchorY < 0 || anchorY >= n) {
    throw ArgumentError("extract_path: anchor out of range");
  }
  if (anchorX == anchorY) throw ArgumentError("extract_path: anchors must differ");

  auto chain = [&](int start) {
    std::vector<int> out{start};
    std::unordered_set<int> seen{start};
    int cur = start;
    while (true) {
      const int h = tokens[cur].head;
      if (h == cur || h < 0 || h >= n || !seen.insert(h).second) break;
      out.push_back(h);
      cur = h;
    }
    return out;
  };
  const auto up_x = chain(anchorX);
  const auto up_y = chain(anchorY);
  std::size_t ix = up_x.size();
  std::size_t iy = 0;
  for (; iy < up_y.size(); ++iy) {
    const auto it = std::find(up_x.begin(), up_x.end(), up_y[iy]);
    if (it != up_x.end()) {
      ix = static_cast<std::size_t>(it - up_x.begin());
      break;
    }
  }
  if (iy == up_y.size()) {
    warn("extract_path: anchors " + std::to_string(anchorX) + " and " + std::to_string(anchorY) +
         " lie in different parse fragments");
    return std::nullopt;
  }
  const std::size_t length = ix + 1 + iy;
  if (maxPathLen > 0 && length > static_cast<std::size_t>(maxPathLen)) return std::nullopt;

  auto node = [&](int i, Direction d) {
    const auto& t = tokens[i];
    return DependencyNode{to_lower(t.lemma), t.pos, t.dep, d};
  };
  DependencyPath path;
  path.nodes.reserve(length);
  for (std::size_t k = 0; k < ix; ++k) path.nodes.push_back(node(up_x[k], Direction::kTowardRoot));
  path.nodes.push_back(node(up_x[ix], Direction::kRoot));
  for (std::size_t k = iy; k-- > 0;) path.nodes.push_back(node(up_y[k], Direction::kAwayFromRoot));
  return path;
}

namespace {

using NodeSeq = std::vector<DependencyNode>;

struct PairAccumulator {
  std::map<NodeSeq, std::uint64_t> counts;
  std::set<std::string> sentences;
};

struct TermIndex {
  std::unordered_map<std::string, int> id;  // key -> term id
  std::vector<std::string> keys;
  std::vector<std::vector<std::size_t>> pairsByA;  // term id -> pairs with that a
  std::vector<int> bOf;                            // pair -> term id of b
  std::size_t maxKey = 0;

  int intern(const std::string& key) {
    auto [it, inserted] = id.emplace(key, static_cast<int>(keys.size()));
    if (inserted) {
      keys.push_back(key);
      pairsByA.emplace_back();
      maxKey = std::max(maxKey, key.size());
    }
    return it->second;
  }
};

void scan_sentence(const ParsedSentence& s, const TermIndex& index, const PathOptions& options,
                   std::vector<PairAccumulator>& acc) {
  std::map<int, std::vector<SpanMatch>> matches;
  for_each_span_key(s.tokens, index.maxKey, [&](const std::string& k, int i, int j) {
    auto it = index.id.find(k);
    if (it == index.id.end()) return;
    auto& spans = matches[it->second];
    const SpanMatch m{i, j};
    const bool dup = std::any_of(spans.begin(), spans.end(), [&](const SpanMatch& o) {
      return o.first == m.first && o.last == m.last;
    });
    if (!dup) spans.push_back(m);
  });
  if (matches.size() < 2) return;

  // Longer terms claim their spans first; a shorter term nested inside one
  // ("access control" in "mandatory access control") moves to another
  // occurrence when the sentence has one.
  std::vector<std::pair<int, std::vector<SpanMatch>>> order(matches.begin(), matches.end());
  for (auto& [term, spans] : order) std::sort(spans.begin(), spans.end(), better);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return x.second.front().last - x.second.front().first >
           y.second.front().last - y.second.front().first;
  });
  std::vector<SpanMatch> claimed;
  std::unordered_map<int, int> anchor;
  for (const auto& [term, spans] : order) {
    const SpanMatch* pick = &spans.front();
    for (const auto& m : spans) {
      const bool free = std::none_of(claimed.begin(), claimed.end(), [&](const SpanMatch& c) {
        return m.first <= c.last && c.first <= m.last;
      });
      if (free) {
        pick = &m;
        break;
      }
    }
    claimed.push_back(*pick);
    anchor[term] = span_head(s.tokens, pick->first, pick->last);
  }
  for (const auto& [term_a, ax] : anchor) {
    for (std::size_t p : index.pairsByA[term_a]) {
      auto b = anchor.find(index.bOf[p]);
      if (b == anchor.end() || b->second == ax) continue;
      auto path = extract_path(s.tokens, ax, b->second, options.maxPathLen);
      if (!path) continue;
      acc[p].counts[std::move(path->nodes)] += 1;
      acc[p].sentences.insert(s.id);
    }
  }
}

}  // namespace

std::vector<PairPaths> collect_pair_paths(const std::vector<ParsedSentence>& sentences,
                                          const std::vector<TermPair>& pairs,
                                          const PathOptions& options) {
  TermIndex index;
  index.bOf.resize(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const int a = index.intern(term_key(pairs[p].a));
    index.bOf[p] = index.intern(term_key(pairs[p].b));
    index.pairsByA[a].push_back(p);
  }

  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<PairAccumulator>> partial(workers,
                                                    std::vector<PairAccumulator>(pairs.size()));
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < sentences.size(); i += workers) {
      scan_sentence(sentences[i], index, options, partial[w]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  std::vector<PairPaths> out;
  out.reserve(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    PairAccumulator merged = std::move(partial[0][p]);
    for (unsigned w = 1; w < workers; ++w) {
      for (auto& [seq, c] : partial[w][p].counts) merged.counts[seq] += c;
      merged.sentences.insert(partial[w][p].sentences.begin(), partial[w][p].sentences.end());
    }
    PairPaths pp;
    pp.pair = pairs[p];
    if (merged.counts.empty()) {
      pp.isNull = true;
      pp.paths.push_back(null_path());
    } else {
      for (auto& [seq, c] : merged.counts) pp.paths.push_back({seq, c});
      pp.sentenceIds.assign(merged.sentences.begin(), merged.sentences.end());
    }
    out.push_back(std::move(pp));
  }
  return out;
}

std::vector<ParsedSentence> parse_corpus(const Corpus& corpus, const DependencyParser& parser) {
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  for (const auto& article : corpus.articles) {
    const auto sents = split_sentences(article.text);
    for (std::size_t i = 0; i < sents.size(); ++i) {
      texts.push_back(sents[i]);
      ids.push_back(article.title + "#" + std::to_string(i));
    }
  }
  auto parses = parser.parse_batch(texts);
  std::vector<ParsedSentence> out;
  std::size_t failed = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    bool ok = parses[i].has_value();
    if (ok) {
      try {
        validate_tree(*parses[i]);
      } catch (const DataError&) {
        ok = false;
      }
    }
    if (!ok) {
      if (failed++ == 0) first_failure = ids[i];
      continue;
    }
    normalize_tokens(*parses[i]);
    out.push_back({ids[i], std::move(*parses[i])});
  }
  if (failed > 0) {
    warn(std::to_string(failed) + " of " + std::to_string(texts.size()) +
         " sentences could not be parsed and were skipped (first: " + first_failure + ")");
  }
  return out;
}

std::vector<PairPaths> collect_pair_paths(const Corpus& corpus, const std::vector<TermPair>& pairs,
                                          const DependencyParser& parser,
                                          const PathOptions& options) {
  return collect_pair_paths(parse_corpus(corpus, parser), pairs, options);
}

std::string format_pair_paths(const PairPaths& pp) {
  json paths = json::array();
  for (const auto& p : pp.paths) {
    json nodes = json::array();
    for (const auto& n : p.nodes) nodes.push_back({n.lemma, n.pos, n.dep, to_string(n.dir)});
    paths.push_back({{"nodes", std::move(nodes)}, {"count", p.count}});
  }
  json doc = {{"a", pp.pair.a},
              {"b", pp.pair.b},
              {"label", to_string(pp.pair.label)},
              {"source", to_string(pp.pair.source)},
              {"isNull", pp.isNull},
              {"paths", std::move(paths)}};
  if (!pp.sentenceIds.empty()) doc["sentences"] = pp.sentenceIds;
  return doc.dump();
}

PairPaths parse_pair_paths(std::string_view line) {
  PairPaths pp;
  try {
    const json doc = json::parse(line);
    pp.pair.a = doc.at("a").get<std::string>();
    pp.pair.b = doc.at("b").get<std::string>();
    const auto label = parse_label(doc.at("label").get<std::string>());
    if (!label) throw DataError("unknown label " + doc.at("label").get<std::string>());
    pp.pair.label = *label;
    if (doc.contains("source")) {
      const auto src = parse_source(doc["source"].get<std::string>());
      if (!src) throw DataError("unknown source " + doc["source"].get<std::string>());
      pp.pair.source = *src;
    }
    pp.isNull = doc.at("isNull").get<bool>();
    for (const auto& p : doc.at("paths")) {
      DependencyPath path;
      path.count = p.at("count").get<std::uint64_t>();
      if (path.count == 0) throw DataError("path count must be positive");
      for (const auto& n : p.at("nodes")) {
        if (!n.is_array() || n.size() != 4) throw DataError("path node must have 4 fields");
        path.nodes.push_back({n[0].get<std::string>(), n[1].get<std::string>(),
                              n[2].get<std::string>(), parse_direction(n[3].get<std::string>())});
      }
      if (path.nodes.empty()) throw DataError("empty path");
      pp.paths.push_back(std::move(path));
    }
    if (doc.contains("sentences")) pp.sentenceIds = doc["sentences"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed paths record: ") + e.what());
  }
  if (pp.paths.empty()) throw DataError("paths record without paths");
  return pp;
}

void save_paths(const std::vector<PairPaths>& all, const std::filesystem::path& path) {
  std::string out;
  for (const auto& pp : all) out += format_pair_paths(pp) + "\n";
  write_file_atomic(path, out);
}

std::vector<PairPaths> load_paths(const std::filesystem::path& path) {
  std::vector<PairPaths> out;
  const auto lines = lines_of(read_file(path));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    try {
      out.push_back(parse_pair_paths(lines[n]));
    } catch (const DataError& e) {
      throw ParseError(path.string(), n + 1, e.what());
    }
  }
  return out;
}

}  // namespace ontoenrich
