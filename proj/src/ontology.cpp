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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/random.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

std::optional<ConceptId> OntologyGraph::find(std::string_view label) const {
  auto it = by_label_.find(normalize_label(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

const Concept& OntologyGraph::concept_at(ConceptId id) const {
  auto it = concepts_.find(id);
  if (it == concepts_.end()) {
    throw ArgumentError("unknown concept id " + std::to_string(id.value));
  }
  return it->second;
}

bool OntologyGraph::contains(std::string_view subject, Predicate predicate,
                             std::string_view object) const {
  const auto s = find(subject);
  const auto o = find(object);
  if (!s || !o) return false;
  return keys_.count({s->value, static_cast<int>(predicate), o->value}) > 0;
}

LabeledRelation OntologyGraph::labeled(const OntologyRelation& r) const {
  return {concept_at(r.subject).label, r.predicate, concept_at(r.object).label};
}

std::vector<LabeledRelation> OntologyGraph::labeled_relations() const {
  std::vector<LabeledRelation> out;
  out.reserve(relations_.size());
  for (const auto& r : relations_) out.push_back(labeled(r));
  return out;
}

ConceptId OntologyGraph::intern(std::string_view surface) {
  std::string label = normalize_label(surface);
  auto it = by_label_.find(label);
  if (it != by_label_.end()) {
    concepts_[it->second].aliases.insert(trim(surface));
    return it->second;
  }
  const ConceptId id{next_id_++};
  Concept c{id, label, {trim(surface)}};
  concepts_.emplace(id, std::move(c));
  by_label_.emplace(std::move(label), id);
  return id;
}

std::size_t OntologyGraph::apply(std::string_view op,
                                 std::span<const LabeledRelation> triples) {
  for (const auto& t : triples) {
    if (normalize_label(t.subject).empty() || normalize_label(t.object).empty()) {
      throw ArgumentError("triple with empty subject or object label");
    }
  }
  std::size_t applied = 0;
  for (const auto& t : triples) {
    if (contains(t.subject, t.predicate, t.object)) continue;
    if (applied == 0) ++version_;
    const ConceptId s = intern(t.subject);
    const ConceptId o = intern(t.object);
    relations_.push_back({s, t.predicate, o});
    keys_.insert({s.value, static_cast<int>(t.predicate), o.value});
    changelog_.push_back(
        {version_, std::string(op), trim(t.subject), t.predicate, trim(t.object)});
    ++applied;
  }
  return applied;
}

OntologyGraph OntologyGraph::replay(std::span<const ChangeRecord> changelog) {
  OntologyGraph g;
  std::size_t i = 0;
  while (i < changelog.size()) {
    const std::uint64_t v = changelog[i].version;
    const std::string op = changelog[i].op;
    std::vector<LabeledRelation> batch;
    while (i < changelog.size() && changelog[i].version == v) {
      batch.push_back({changelog[i].subject, changelog[i].predicate, changelog[i].object});
      ++i;
    }
    if (v <= g.version_) {
      throw DataError("changelog versions must strictly increase (saw " +
                      std::to_string(v) + ")");
    }
    g.version_ = v - 1;
    g.apply(op, batch);
    g.version_ = v;
  }
  return g;
}

std::string OntologyGraph::canonical() const {
  std::ostringstream out;
  out << "V\t" << version_ << '\n';
  for (const auto& [id, c] : concepts_) {
    out << "C\t" << id.value << '\t' << escape_tsv(c.label);
    for (const auto& a : c.aliases) out << '\t' << escape_tsv(a);
    out << '\n';
  }
  for (const auto& r : relations_) {
    out << "R\t" << r.subject.value << '\t' << to_string(r.predicate) << '\t'
        << r.object.value << '\n';
  }
  return out.str();
}

std::optional<OntologyFormat> parse_ontology_format(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "triple-tsv" || t == "tsv") return OntologyFormat::kTripleTsv;
  if (t == "turtle-subset" || t == "turtle" || t == "ttl") return OntologyFormat::kTurtleSubset;
  return std::nullopt;
}

std::vector<LabeledRelation> parse_triple_tsv(std::string_view text,
                                              const std::string& source) {
  std::vector<LabeledRelation> out;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(source, n + 1,
                       "expected 3 tab-separated fields, got " +
                           std::to_string(fields.size()));
    }
    const auto pred = parse_predicate(fields[1]);
    if (!pred) throw ParseError(source, n + 1, "unknown predicate '" + fields[1] + "'");
    std::string s = unescape_tsv(fields[0]);
    std::string o = unescape_tsv(fields[2]);
    if (normalize_label(s).empty() || normalize_label(o).empty()) {
      throw ParseError(source, n + 1, "empty subject or object");
    }
    out.push_back({std::move(s), *pred, std::move(o)});
  }
  return out;
}

namespace {

struct TurtleToken {
  enum Kind { kIri, kName, kLiteral, kPunct } kind;
  std::string text;
  std::size_t line;
};

std::vector<TurtleToken> tokenize_turtle(std::string_view text, const std::string& source) {
  std::vector<TurtleToken> toks;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '<') {
      const std::size_t end = text.find('>', i);
      if (end == std::string_view::npos || text.substr(i, end - i).find('\n') != std::string_view::npos) {
        throw ParseError(source, line, "unterminated IRI");
      }
      toks.push_back({TurtleToken::kIri, std::string(text.substr(i + 1, end - i - 1)), line});
      i = end + 1;
    } else if (c == '"') {
      std::string lit;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n') throw ParseError(source, line, "unterminated literal");
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        lit.push_back(text[i++]);
      }
      if (i >= text.size()) throw ParseError(source, line, "unterminated literal");
      ++i;
      // Language tag or datatype suffix.
      if (i < text.size() && text[i] == '@') {
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-' || text[i] == '@')) ++i;
      } else if (i + 1 < text.size() && text[i] == '^' && text[i + 1] == '^') {
        i += 2;
        if (i < text.size() && text[i] == '<') {
          i = text.find('>', i);
          if (i == std::string_view::npos) throw ParseError(source, line, "unterminated datatype");
          ++i;
        } else {
          while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
                 text[i] != ';' && text[i] != ',' && text[i] != '.') ++i;
        }
      }
      toks.push_back({TurtleToken::kLiteral, std::move(lit), line});
    } else if (c == '.' || c == ';' || c == ',') {
      toks.push_back({TurtleToken::kPunct, std::string(1, c), line});
      ++i;
    } else if (c == '[' || c == ']' || c == '(' || c == ')') {
      throw ParseError(source, line, "blank nodes and collections are not supported");
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != ';' && text[j] != ',' && text[j] != '<' && text[j] != '"' && text[j] != '#') ++j;
      std::string name(text.substr(i, j - i));
      bool trailing_dot = false;
      while (!name.empty() && name.back() == '.') {
        name.pop_back();
        trailing_dot = true;
      }
      toks.push_back({TurtleToken::kName, std::move(name), line});
      if (trailing_dot) toks.push_back({TurtleToken::kPunct, ".", line});
      i = j;
    }
  }
  return toks;
}

std::string local_name(const TurtleToken& t) {
  std::string_view s = t.text;
  if (t.kind == TurtleToken::kLiteral) return std::string(s);
  if (t.kind == TurtleToken::kIri) {
    const std::size_t cut = s.find_last_of("#/");
    if (cut != std::string_view::npos) s = s.substr(cut + 1);
  } else {
    const std::size_t cut = s.find(':');
    if (cut != std::string_view::npos) s = s.substr(cut + 1);
  }
  return percent_decode(s);
}

bool is_vocabulary_term(const TurtleToken& t) {
  if (t.kind == TurtleToken::kIri) return t.text.find("www.w3.org") != std::string::npos;
  if (t.kind == TurtleToken::kName) {
    return t.text.rfind("owl:", 0) == 0 || t.text.rfind("rdfs:", 0) == 0 ||
           t.text.rfind("rdf:", 0) == 0 || t.text.rfind("xsd:", 0) == 0;
  }
  return false;
}

}  // namespace

std::vector<LabeledRelation> parse_turtle_subset(std::string_view text,
                                                 const std::string& source) {
  const auto toks = tokenize_turtle(text, source);
  std::vector<LabeledRelation> out;
  std::set<std::string> warned;
  std::size_t i = 0;
  auto expect_term = [&](const char* what) -> const TurtleToken& {
    if (i >= toks.size()) {
      throw ParseError(source, toks.empty() ? 1 : toks.back().line,
                       std::string("unexpected end of input, expected ") + what);
    }
    const TurtleToken& t = toks[i];
    if (t.kind == TurtleToken::kPunct) {
      throw ParseError(source, t.line, std::string("expected ") + what + ", got '" + t.text + "'");
    }
    ++i;
    return t;
  };
  while (i < toks.size()) {
    const TurtleToken& head = toks[i];
    if (head.kind == TurtleToken::kName && (head.text == "@prefix" || head.text == "@base")) {
      i += head.text == "@prefix" ? 3 : 2;
      if (i >= toks.size() || toks[i].text != ".") {
        throw ParseError(source, head.line, "directive must end with '.'");
      }
      ++i;
      continue;
    }
    if (head.kind == TurtleToken::kName && (to_lower(head.text) == "prefix" || to_lower(head.text) == "base")) {
      i += to_lower(head.text) == "prefix" ? 3 : 2;
      continue;
    }
    const TurtleToken& subject = expect_term("subject");
    for (;;) {
      const TurtleToken& pred = expect_term("predicate");
      std::optional<Predicate> mapped;
      const std::string pname = pred.text == "a" && pred.kind == TurtleToken::kName
                                    ? std::string("type")
                                    : local_name(pred);
      if (pname == "type") {
        mapped = Predicate::kInstanceOf;
      } else if (pname == "subClassOf") {
        mapped = Predicate::kHypernym;
      } else {
        mapped = parse_predicate(pname);
      }
      for (;;) {
        const TurtleToken& obj = expect_term("object");
        if (mapped && !is_vocabulary_term(obj) && !is_vocabulary_term(subject)) {
          std::string s = local_name(subject);
          std::string o = local_name(obj);
          if (normalize_label(s).empty() || normalize_label(o).empty()) {
            throw ParseError(source, obj.line, "empty subject or object");
          }
          out.push_back({std::move(s), *mapped, std::move(o)});
        } else if (!mapped && warned.insert(pname).second) {
          warn(source + ": ignoring unsupported predicate '" + pname + "'");
        }
        if (i < toks.size() && toks[i].text == "," && toks[i].kind == TurtleToken::kPunct) {
          ++i;
          continue;
        }
        break;
      }
      if (i >= toks.size()) {
        throw ParseError(source, toks.back().line, "statement must end with '.'");
      }
      if (toks[i].kind == TurtleToken::kPunct && toks[i].text == ";") {
        ++i;
        if (i < toks.size() && toks[i].kind == TurtleToken::kPunct && toks[i].text == ".") {
          ++i;
          break;
        }
        continue;
      }
      if (toks[i].kind == TurtleToken::kPunct && toks[i].text == ".") {
        ++i;
        break;
      }
      throw ParseError(source, toks[i].line, "expected ';', ',' or '.', got '" + toks[i].text + "'");
    }
  }
  return out;
}

std::vector<LabeledRelation> read_triples(const std::filesystem::path& path,
                                          OntologyFormat format) {
  const std::string text = read_file(path);
  return format == OntologyFormat::kTripleTsv ? parse_triple_tsv(text, path.string())
                                              : parse_turtle_subset(text, path.string());
}

OntologyGraph load_ontology(const std::filesystem::path& path, OntologyFormat format) {
  const auto triples = read_triples(path, format);
  OntologyGraph g;
  const std::size_t applied = g.apply("load", triples);
  if (applied < triples.size()) {
    warn(path.string() + ": " + std::to_string(triples.size() - applied) +
         " duplicate triple(s) skipped");
  }
  return g;
}

void save_ontology(const OntologyGraph& graph, const std::filesystem::path& path) {
  // The first alias keeps a surface form; the changelog is the lossless record.
  auto surface = [&](ConceptId id) -> const std::string& {
    const Concept& c = graph.concept_at(id);
    return c.aliases.empty() ? c.label : *c.aliases.begin();
  };
  std::string out;
  for (const auto& r : graph.relations()) {
    out += escape_tsv(surface(r.subject));
    out += '\t';
    out += to_string(r.predicate);
    out += '\t';
    out += escape_tsv(surface(r.object));
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::string format_changelog(std::span<const ChangeRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += std::to_string(r.version);
    out += '\t';
    out += escape_tsv(r.op);
    out += '\t';
    out += escape_tsv(r.subject);
    out += '\t';
    out += to_string(r.predicate);
    out += '\t';
    out += escape_tsv(r.object);
    out += '\n';
  }
  return out;
}

std::vector<ChangeRecord> parse_changelog(std::string_view text, const std::string& source) {
  std::vector<ChangeRecord> out;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = split(lines[n], '\t');
    if (f.size() != 5) throw ParseError(source, n + 1, "expected 5 fields");
    ChangeRecord r;
    try {
      r.version = std::stoull(f[0]);
    } catch (const std::exception&) {
      throw ParseError(source, n + 1, "bad version '" + f[0] + "'");
    }
    const auto p = parse_predicate(f[3]);
    if (!p) throw ParseError(source, n + 1, "unknown predicate '" + f[3] + "'");
    r.op = unescape_tsv(f[1]);
    r.subject = unescape_tsv(f[2]);
    r.predicate = *p;
    r.object = unescape_tsv(f[4]);
    out.push_back(std::move(r));
  }
  return out;
}

void save_changelog(const OntologyGraph& graph, const std::filesystem::path& path) {
  write_file_atomic(path, format_changelog(graph.changelog()));
}

std::vector<ChangeRecord> load_changelog(const std::filesystem::path& path) {
  return parse_changelog(read_file(path), path.string());
}

MergeOutcome merge_triples(const OntologyGraph& graph,
                           std::span<const CandidateTriple> triples, MergeMode mode) {
  MergeOutcome outcome{graph, 0, 0, {}};
  std::vector<LabeledRelation> batch;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const CandidateTriple& t = triples[i];
    if (mode == MergeMode::kAcceptedOnly && t.status != TripleStatus::kAccepted) continue;
    const auto pred = predicate_for(t.predicate);
    if (!pred) {
      outcome.rejected.push_back({i, "NONE is not a mergeable predicate"});
      continue;
    }
    if (normalize_label(t.subject).empty() || normalize_label(t.object).empty()) {
      outcome.rejected.push_back({i, "empty subject or object label"});
      continue;
    }
    batch.push_back({t.subject, *pred, t.object});
  }
  outcome.applied = outcome.graph.apply("merge", batch);
  outcome.duplicates = batch.size() - outcome.applied;
  for (const auto& r : outcome.rejected) {
    warn("merge: triple " + std::to_string(r.index) + " rejected: " + r.reason);
  }
  return outcome;
}

KnockoutResult knockout(const OntologyGraph& graph, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ArgumentError("knockout fraction must lie in [0, 1]");
  }
  if (graph.relation_count() == 0) {
    throw ArgumentError("knockout requires at least one relation");
  }
  const std::size_t total = graph.relation_count();
  const auto held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  if (held == 0) return {graph, {}};

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<bool> out(total, false);
  for (std::size_t k = 0; k < held; ++k) out[order[k]] = true;

  KnockoutResult result;
  std::vector<LabeledRelation> kept;
  const auto& rels = graph.relations();
  for (std::size_t k = 0; k < total; ++k) {
    if (out[k]) {
      result.heldOut.push_back(graph.labeled(rels[k]));
    } else {
      // Carry the first alias forward so reduced labels keep a surface form.
      const Concept& s = graph.concept_at(rels[k].subject);
      const Concept& o = graph.concept_at(rels[k].object);
      kept.push_back({s.aliases.empty() ? s.label : *s.aliases.begin(), rels[k].predicate,
                      o.aliases.empty() ? o.label : *o.aliases.begin()});
    }
  }
  result.reduced.apply("knockout", kept);
  return result;
}

}  // namespace ontoenrich
