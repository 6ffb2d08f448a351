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

#include "ontoenrich/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "ontoenrich/common.hpp"
#include "ontoenrich/corpus.hpp"
#include "ontoenrich/dataset.hpp"
#include "ontoenrich/embedding.hpp"
#include "ontoenrich/enrich.hpp"
#include "ontoenrich/eval.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/model/hyperparams.hpp"
#include "ontoenrich/model/model_io.hpp"
#include "ontoenrich/model/trainer.hpp"
#include "ontoenrich/ontology.hpp"
#include "ontoenrich/paths.hpp"
#include "ontoenrich/review.hpp"
#include "ontoenrich/server.hpp"
#include "ontoenrich/sparql.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSubcommands = {"dataset", "corpus",    "paths", "train", "enrich",
                                               "eval",    "calibrate", "serve", "config"};

KeySpec key_spec(std::string name, KeyType type, std::string fallback, std::string help,
                 std::vector<std::string> commands, std::vector<std::string> choices = {}) {
  return {std::move(name),   type, std::move(fallback), std::move(help), std::move(commands),
          std::move(choices)};
}

std::vector<KeySpec> build_schema() {
  using K = KeyType;
  const std::vector<std::string> all = kSubcommands;
  std::vector<KeySpec> s = {
      key_spec("work_dir", K::kPath, ".", "directory holding the pipeline artifacts", all),
      key_spec("seed", K::kInt, "0", "random seed (holdout split, knockout, training)",
               {"dataset", "train", "eval", "config"}),
      key_spec("workers", K::kInt, "1", "worker threads",
               {"corpus", "paths", "enrich", "eval", "config"}),
      key_spec(
          "embedding", K::kString, "hash:64:0",
          "embedding provider: hash:<dim>[:<seed>] or table:<file>; model stages default to the "
          "model's own provider",
          {"dataset", "corpus", "train", "enrich", "eval", "calibrate", "serve", "config"}),
      key_spec("ontology", K::kPath, "", "seed ontology file",
               {"dataset", "enrich", "eval", "serve", "config"}),
      key_spec("ontology_format", K::kChoice, "tsv", "seed ontology format",
               {"dataset", "enrich", "eval", "serve", "config"}, {"tsv", "turtle"}),
      key_spec("endpoint", K::kString, "",
               "SPARQL endpoint URL, or tsv:<file> of resource/hypernym edges for offline runs",
               {"dataset", "config"}),
      key_spec("sparql_cache", K::kPath, "", "directory caching SPARQL results",
               {"dataset", "config"}),
      key_spec("parallelism", K::kInt, "4", "concurrent SPARQL fetches", {"dataset", "config"}),
      key_spec("curation", K::kPath, "", "expert curation TSV (a, b, new label)",
               {"dataset", "config"}),
      key_spec("none_fraction", K::kDouble, "0.05", "fraction of NONE pairs kept",
               {"dataset", "config"}),
      key_spec("none_strategy", K::kChoice, "least_similar", "which NONE pairs are kept",
               {"dataset", "config"}, {"least_similar", "most_similar"}),
      key_spec("holdout_fraction", K::kDouble, "0.1", "stratified test fraction",
               {"dataset", "config"}),
      key_spec("dataset", K::kPath, "dataset.tsv", "training dataset",
               {"dataset", "corpus", "paths", "eval", "config"}),
      key_spec("test_dataset", K::kPath, "test.tsv", "held-out dataset",
               {"dataset", "corpus", "paths", "config"}),
      key_spec("dump", K::kPath, "", "Wikipedia XML dump (.xml or .xml.gz)", {"corpus", "config"}),
      key_spec("anchor", K::kString, "Information security", "anchor article title",
               {"corpus", "config"}),
      key_spec("corpus_threshold", K::kDouble, "0.27", "minimum similarity to the anchor article",
               {"corpus", "config"}),
      key_spec("doc_similarity", K::kChoice, "bow", "article similarity", {"corpus", "config"},
               {"bow", "embedding"}),
      key_spec("corpus_dir", K::kPath, "corpus", "corpus directory",
               {"corpus", "paths", "eval", "config"}),
      key_spec("parser", K::kString, "",
               "dependency parser: preparsed:<file>[,<file>...] or command:<program>",
               {"paths", "enrich", "eval", "serve", "config"}),
      key_spec("max_path_len", K::kInt, "8", "maximum path length in nodes",
               {"paths", "enrich", "eval", "serve", "config"}),
      key_spec("paths", K::kPath, "paths.tsv", "training pair paths", {"paths", "train", "config"}),
      key_spec("test_paths", K::kPath, "test_paths.tsv", "held-out pair paths",
               {"paths", "eval", "config"}),
      key_spec("hyperparams", K::kPath, "", "training config file of model keys",
               {"train", "config"}),
      key_spec("model", K::kPath, "model.bin", "model file",
               {"train", "enrich", "eval", "serve", "config"}),
      key_spec("page", K::kSource, "", "web page URL or local HTML/text file",
               {"enrich", "config"}),
      key_spec("mode", K::kChoice, "review", "auto merges candidates, review queues them",
               {"enrich", "config"}, {"auto", "review"}),
      key_spec("store", K::kPath, "store", "review store directory", {"enrich", "serve", "config"}),
      key_spec("threshold_domain", K::kDouble, "0.25", "chunk-to-domain similarity threshold",
               {"enrich", "serve", "config"}),
      key_spec("threshold_pair", K::kDouble, "0.40", "chunk-to-chunk similarity threshold",
               {"enrich", "serve", "config"}),
      key_spec("threshold_sufficiency", K::kDouble, "0.10", "sufficiency gate ratio",
               {"enrich", "serve", "config"}),
      key_spec("sufficiency", K::kBool, "false", "apply the sufficiency gate",
               {"enrich", "serve", "config"}),
      key_spec("anchor_text", K::kString, "information security", "domain anchor text",
               {"enrich", "calibrate", "serve", "config"}),
      key_spec("triples_out", K::kPath, "triples.tsv", "candidate triples (TSV)",
               {"enrich", "config"}),
      key_spec("turtle_out", K::kPath, "", "candidate triples (Turtle)", {"enrich", "config"}),
      key_spec("eval_kind", K::kChoice, "holdout", "evaluation dataset", {"eval", "config"},
               {"holdout", "knockout", "webpage"}),
      key_spec("knockout_fraction", K::kDouble, "0.1", "fraction of relations knocked out",
               {"eval", "config"}),
      key_spec("knockout_dataset", K::kPath, "knockout_train.tsv",
               "training dataset without the knocked-out pairs", {"eval", "config"}),
      key_spec("answers", K::kString, "", "comma-separated answer files, one per web page",
               {"eval", "config"}),
      key_spec("ks", K::kString, "1,3,5,10", "comma-separated k values for P@k",
               {"eval", "config"}),
      key_spec("metrics_out", K::kPath, "metrics.json", "metrics report", {"eval", "config"}),
      key_spec("calibration", K::kPath, "", "labeled pairs (a, b, 0|1|label)",
               {"calibrate", "config"}),
      key_spec("step", K::kDouble, "0.05", "threshold grid step", {"calibrate", "config"}),
      key_spec("calibration_out", K::kPath, "thresholds.conf", "best thresholds as config keys",
               {"calibrate", "config"}),
      key_spec("host", K::kString, "127.0.0.1", "listen address", {"serve", "config"}),
      key_spec("port", K::kInt, "8080", "listen port", {"serve", "config"}),
      key_spec("token", K::kString, "", "static bearer token for the API", {"serve", "config"}),
      key_spec("static_dir", K::kPath, "", "review UI assets served at /", {"serve", "config"}),
  };
  // Model keys mirror the training config; `seed` is already shared.
  const KeyValueConfig defaults = hyperparams_to_config(Hyperparams{});
  for (const auto& [key, value] : defaults.entries()) {
    if (key == "seed") continue;
    KeyType t = KeyType::kInt;
    if (value == "true" || value == "false") {
      t = KeyType::kBool;
    } else if (value.find_first_of(".e") != std::string::npos) {
      t = KeyType::kDouble;
    }
    s.push_back(key_spec(key, t, value, "model hyperparameter", {"train", "config"}));
  }
  return s;
}

std::optional<long long> parse_int(std::string_view v) {
  const std::string t = trim(v);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long long n = std::strtoll(t.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') return std::nullopt;
  return n;
}

std::optional<double> parse_double(std::string_view v) {
  const std::string t = trim(v);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double d = std::strtod(t.c_str(), &end);
  if (*end != '\0' || !std::isfinite(d)) return std::nullopt;
  return d;
}

std::optional<bool> parse_bool(std::string_view v) {
  const std::string t = to_lower(trim(v));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  return std::nullopt;
}

std::string flag_name(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

std::string env_name(std::string_view prefix, std::string_view key) {
  std::string out = std::string(prefix) + "_";
  for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_url(std::string_view v) { return v.find("://") != std::string_view::npos; }

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

const char* placeholder(KeyType t) {
  switch (t) {
    case KeyType::kPath:
      return "PATH";
    case KeyType::kSource:
      return "URL|PATH";
    case KeyType::kInt:
      return "INT";
    case KeyType::kDouble:
      return "NUM";
    case KeyType::kBool:
      return "BOOL";
    case KeyType::kChoice:
      return "CHOICE";
    default:
      return "TEXT";
  }
}

const char* type_name(KeyType t) {
  switch (t) {
    case KeyType::kInt:
      return "an integer";
    case KeyType::kDouble:
      return "a number";
    case KeyType::kBool:
      return "true or false";
    default:
      return "a value";
  }
}

}  // namespace

const std::vector<KeySpec>& run_config_schema() {
  static const std::vector<KeySpec> schema = build_schema();
  return schema;
}

const KeySpec* find_key_spec(std::string_view name) {
  const std::string key = canonical_key(name);
  for (const auto& spec : run_config_schema()) {
    if (spec.name == key) return &spec;
  }
  return nullptr;
}

void RunConfig::set(std::string_view key, std::string value, fs::path base, std::string origin) {
  const KeySpec* spec = find_key_spec(key);
  if (!spec) throw ArgumentError("unknown config key '" + std::string(key) + "' (" + origin + ")");
  value = trim(value);
  bool ok = true;
  switch (spec->type) {
    case KeyType::kInt:
      ok = parse_int(value).has_value();
      break;
    case KeyType::kDouble:
      ok = parse_double(value).has_value();
      break;
    case KeyType::kBool:
      ok = parse_bool(value).has_value();
      break;
    case KeyType::kChoice:
      ok = std::find(spec->choices.begin(), spec->choices.end(), to_lower(value)) !=
           spec->choices.end();
      if (!ok) {
        throw ArgumentError("config key '" + spec->name + "' must be one of " +
                            join(spec->choices, ", ") + ", got '" + value + "' (" + origin + ")");
      }
      value = to_lower(value);
      break;
    default:
      break;
  }
  if (!ok) {
    throw ArgumentError("config key '" + spec->name + "' must be " + type_name(spec->type) +
                        ", got '" + value + "' (" + origin + ")");
  }
  values_[spec->name] = {std::move(value), std::move(base), std::move(origin)};
}

void RunConfig::load_file(const fs::path& path) {
  if (!fs::exists(path)) throw ArgumentError("config file " + path.string() + " not found");
  const auto cfg = KeyValueConfig::load(path);
  const fs::path base = fs::absolute(path).parent_path();
  for (const auto& [key, value] : cfg.entries()) set(key, value, base, path.string());
}

void RunConfig::load_environment(std::string_view prefix) {
  KeyValueConfig env;
  env.merge_environment(prefix);
  const fs::path cwd = fs::current_path();
  for (const auto& [key, value] : env.entries()) {
    if (!find_key_spec(key)) {
      warn("ignoring environment variable " + env_name(prefix, key) + ": not a config key");
      continue;
    }
    set(key, value, cwd, "environment");
  }
}

const RunConfig::Value* RunConfig::find(std::string_view key) const {
  auto it = values_.find(canonical_key(key));
  return it == values_.end() ? nullptr : &it->second;
}

bool RunConfig::has(std::string_view key) const {
  const Value* v = find(key);
  return v && !v->text.empty();
}

std::string RunConfig::raw(std::string_view key) const {
  const KeySpec* spec = find_key_spec(key);
  if (!spec) throw std::logic_error("undeclared config key " + std::string(key));
  if (const Value* v = find(key); v && !v->text.empty()) return v->text;
  if (spec->fallback.empty()) {
    throw ArgumentError("missing required config key '" + spec->name +
                        "' (set it in --config or pass --" + flag_name(spec->name) + ")");
  }
  return spec->fallback;
}

std::string RunConfig::str(std::string_view key) const { return raw(key); }

long long RunConfig::integer(std::string_view key) const { return *parse_int(raw(key)); }

double RunConfig::real(std::string_view key) const { return *parse_double(raw(key)); }

bool RunConfig::boolean(std::string_view key) const { return *parse_bool(raw(key)); }

fs::path RunConfig::path(std::string_view key) const {
  if (const Value* v = find(key); v && !v->text.empty()) return resolve(v->base, v->text);
  const std::string fallback = raw(key);
  if (canonical_key(key) == "work_dir") return resolve(fs::current_path(), fallback);
  return resolve(path("work_dir"), fallback);
}

std::optional<fs::path> RunConfig::optional_path(std::string_view key) const {
  if (!has(key) && find_key_spec(key)->fallback.empty()) return std::nullopt;
  return path(key);
}

std::vector<fs::path> RunConfig::path_list(std::string_view key) const {
  const std::string text = raw(key);
  const Value* v = find(key);
  std::vector<fs::path> out;
  for (const auto& part : split(text, ',')) {
    if (trim(part).empty()) continue;
    out.push_back(resolve(v ? v->base : fs::current_path(), trim(part)));
  }
  if (out.empty()) throw ArgumentError("config key '" + canonical_key(key) + "' lists no files");
  return out;
}

std::string RunConfig::source(std::string_view key) const {
  const std::string text = raw(key);
  if (is_url(text)) return text;
  const Value* v = find(key);
  return resolve(v ? v->base : fs::current_path(), text).string();
}

std::string RunConfig::descriptor(std::string_view key) const {
  const std::string text = raw(key);
  const auto colon = text.find(':');
  if (colon == std::string::npos || is_url(text)) return text;
  const std::string kind = to_lower(text.substr(0, colon));
  if (kind != "table" && kind != "preparsed" && kind != "tsv") return text;
  const Value* v = find(key);
  const fs::path base = v ? v->base : fs::current_path();
  std::vector<std::string> parts;
  for (const auto& part : split(text.substr(colon + 1), ',')) {
    parts.push_back(resolve(base, trim(part)).string());
  }
  return kind + ":" + join(parts, ",");
}

KeyValueConfig RunConfig::model_keys() const {
  KeyValueConfig cfg;
  for (const auto& [key, value] : values_) {
    const KeySpec* spec = find_key_spec(key);
    const bool model = key == "seed" || std::find(spec->commands.begin(), spec->commands.end(),
                                                  "train") != spec->commands.end();
    if (model && hyperparams_to_config(Hyperparams{}).contains(key) && !value.text.empty()) {
      cfg.set(key, value.text);
    }
  }
  return cfg;
}

std::string RunConfig::describe() const {
  std::string out;
  for (const auto& spec : run_config_schema()) {
    if (const Value* v = find(spec.name)) {
      out += spec.name + " = " + v->text + "  # " + v->origin + "\n";
    } else if (!spec.fallback.empty()) {
      out += spec.name + " = " + spec.fallback + "  # default\n";
    }
  }
  return out;
}

namespace {

// ---------------------------------------------------------------- helpers

fs::path artifact(const RunConfig& cfg, std::string_view key, std::string_view producer) {
  const fs::path p = cfg.path(key);
  if (!fs::exists(p)) {
    throw DataError(std::string(key) + " artifact " + p.string() + " not found; run `ontoenrich " +
                    std::string(producer) + "` first");
  }
  return p;
}

fs::path input(const RunConfig& cfg, std::string_view key) {
  const fs::path p = cfg.path(key);
  if (!fs::exists(p)) throw DataError(std::string(key) + " file " + p.string() + " not found");
  return p;
}

OntologyFormat ontology_format(const RunConfig& cfg) {
  return *parse_ontology_format(cfg.str("ontology_format"));
}

std::unique_ptr<DependencyParser> make_parser(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string kind = colon == std::string::npos ? descriptor : descriptor.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  if (kind == "preparsed") {
    std::vector<ParsedSentence> all;
    for (const auto& file : split(rest, ',')) {
      if (trim(file).empty()) continue;
      auto part = read_preparsed(trim(file));
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
    if (all.empty()) throw DataError("parser " + descriptor + " holds no sentences");
    return std::make_unique<PreParsedParser>(all);
  }
  if (kind == "command") {
    if (trim(rest).empty()) throw ArgumentError("parser command is empty");
    return std::make_unique<CommandParser>(rest);
  }
  throw ArgumentError("parser must be preparsed:<file> or command:<program>, got '" + descriptor +
                      "'");
}

std::shared_ptr<const EmbeddingProvider> model_provider(const RunConfig& cfg,
                                                        const RelationModel<double>& model) {
  if (!cfg.has("embedding")) return make_embedding_provider(model.provider_descriptor());
  auto provider = make_embedding_provider(cfg.descriptor("embedding"));
  if (provider->dimension() != model.word_dim()) {
    throw DataError("embedding " + provider->descriptor() + " has dimension " +
                    std::to_string(provider->dimension()) + " but the model expects " +
                    std::to_string(model.word_dim()));
  }
  if (provider->descriptor() != model.provider_descriptor()) {
    warn("embedding " + provider->descriptor() + " differs from the model's " +
         model.provider_descriptor());
  }
  return provider;
}

Thresholds thresholds(const RunConfig& cfg) {
  Thresholds t{cfg.real("threshold_domain"), cfg.real("threshold_pair"),
               cfg.real("threshold_sufficiency")};
  t.validate();
  return t;
}

EnrichOptions enrich_options(const RunConfig& cfg) {
  EnrichOptions o;
  o.anchorText = cfg.str("anchor_text");
  o.thresholds = thresholds(cfg);
  o.sufficiencyEnabled = cfg.boolean("sufficiency");
  o.paths.maxPathLen = static_cast<int>(cfg.integer("max_path_len"));
  return o;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string label_counts(const CuratedDataset& d) {
  std::string out;
  for (LabelKind k : kAllLabels) {
    std::size_t n = 0;
    for (const auto& p : d.pairs) n += p.label == k;
    if (!out.empty()) out += ' ';
    out += std::string(to_string(k)) + "=" + std::to_string(n);
  }
  return out;
}

std::set<std::string> dataset_terms(const CuratedDataset& d) {
  std::set<std::string> terms;
  for (const auto& p : d.pairs) {
    terms.insert(p.a);
    terms.insert(p.b);
  }
  return terms;
}

// ---------------------------------------------------------------- commands

void cmd_dataset(const RunConfig& cfg, std::ostream& out) {
  const auto graph = load_ontology(input(cfg, "ontology"), ontology_format(cfg));
  const std::string ep = cfg.descriptor("endpoint");
  std::shared_ptr<SparqlEndpoint> endpoint;
  if (ep.rfind("tsv:", 0) == 0) {
    endpoint = std::make_shared<HypernymTableEndpoint>(ep.substr(4));
  } else if (is_url(ep)) {
    endpoint = std::make_shared<HttpSparqlEndpoint>(ep);
  } else {
    throw ArgumentError("endpoint must be an http(s) URL or tsv:<file>, got '" + ep + "'");
  }
  if (auto cache = cfg.optional_path("sparql_cache")) {
    endpoint = std::make_shared<CachedSparqlEndpoint>(endpoint, *cache);
  }
  const long long parallelism = cfg.integer("parallelism");
  if (parallelism < 1) throw ArgumentError("parallelism must be at least 1");
  const auto raw = build_raw_dataset(graph, *endpoint, static_cast<unsigned>(parallelism));
  for (const auto& f : raw.failures) warn("dataset: " + f.concept_label + ": " + f.message);
  if (!raw.failures.empty()) {
    throw UpstreamError(std::to_string(raw.failures.size()) + " of " +
                        std::to_string(graph.concept_count()) +
                        " concepts could not be queried; rerun when the endpoint recovers"
                        " (set sparql_cache to keep answered queries)");
  }

  CuratedDataset curated;
  if (auto curation = cfg.optional_path("curation")) {
    if (!fs::exists(*curation))
      throw DataError("curation file " + curation->string() + " not found");
    const auto rows = parse_curation(read_file(*curation), curation->string());
    curated = apply_curation(raw.pairs, rows);
  } else {
    curated = CuratedDataset::from_pairs(raw.pairs);
  }

  const auto provider = make_embedding_provider(cfg.descriptor("embedding"));
  const TermSimilarity sim = [&](const std::string& a, const std::string& b) {
    return text_similarity(*provider, a, b);
  };
  const auto strategy = cfg.str("none_strategy") == "most_similar"
                            ? NoneRetention::kKeepMostSimilar
                            : NoneRetention::kKeepLeastSimilar;
  const auto filtered = filter_none_pairs(curated, cfg.real("none_fraction"), sim, strategy);

  const double holdout = cfg.real("holdout_fraction");
  HoldoutSplit split;
  if (holdout == 0.0) {
    split.train = filtered;
  } else {
    split = split_holdout(filtered, holdout, static_cast<std::uint64_t>(cfg.integer("seed")));
  }
  const fs::path train_path = cfg.path("dataset");
  const fs::path test_path = cfg.path("test_dataset");
  save_dataset(split.train, train_path);
  save_dataset(split.test, test_path);
  out << "dataset: " << graph.concept_count() << " concepts queried, " << raw.pairs.size()
      << " endpoint pairs, " << filtered.size() << " after NONE filtering\n";
  out << "  train " << split.train.size() << " (" << label_counts(split.train) << ") -> "
      << train_path.string() << "\n";
  out << "  test  " << split.test.size() << " (" << label_counts(split.test) << ") -> "
      << test_path.string() << "\n";
}

void cmd_corpus(const RunConfig& cfg, std::ostream& out) {
  auto terms = dataset_terms(load_dataset(artifact(cfg, "dataset", "dataset")));
  if (fs::exists(cfg.path("test_dataset"))) {
    const auto more = dataset_terms(load_dataset(cfg.path("test_dataset")));
    terms.insert(more.begin(), more.end());
  }
  std::unique_ptr<DocSimilarityProvider> sim;
  if (cfg.str("doc_similarity") == "embedding") {
    sim = std::make_unique<EmbeddingDocSimilarity>(
        make_embedding_provider(cfg.descriptor("embedding")));
  } else {
    sim = std::make_unique<BagOfWordsSimilarity>();
  }
  CorpusOptions options;
  options.threshold = cfg.real("corpus_threshold");
  options.workers = static_cast<unsigned>(std::max(1LL, cfg.integer("workers")));
  const auto corpus = build_corpus(input(cfg, "dump"), terms, cfg.str("anchor"), *sim, options);
  const fs::path dir = cfg.path("corpus_dir");
  write_corpus(corpus, dir);
  out << "corpus: " << corpus.articles.size() << " articles (threshold "
      << fixed(options.threshold, 2) << ", anchor " << corpus.anchorTitle << ") -> " << dir.string()
      << "\n";
}

void cmd_paths(const RunConfig& cfg, std::ostream& out) {
  const auto corpus = load_corpus(artifact(cfg, "corpus_dir", "corpus"));
  const auto train = load_dataset(artifact(cfg, "dataset", "dataset"));
  const auto parser = make_parser(cfg.descriptor("parser"));
  const auto sentences = parse_corpus(corpus, *parser);
  PathOptions options;
  options.maxPathLen = static_cast<int>(cfg.integer("max_path_len"));
  options.workers = static_cast<unsigned>(std::max(1LL, cfg.integer("workers")));

  auto emit = [&](const CuratedDataset& ds, std::string_view key) {
    const auto paths = collect_pair_paths(sentences, ds.pairs, options);
    std::size_t with_paths = 0;
    for (const auto& pp : paths) with_paths += !pp.isNull;
    save_paths(paths, cfg.path(key));
    out << "paths: " << paths.size() << " pairs, " << with_paths << " with corpus paths -> "
        << cfg.path(key).string() << "\n";
  };
  out << "paths: " << sentences.size() << " parsed sentences\n";
  emit(train, "paths");
  if (fs::exists(cfg.path("test_dataset")))
    emit(load_dataset(cfg.path("test_dataset")), "test_paths");
}

void cmd_train(const RunConfig& cfg, std::ostream& out) {
  const auto data = load_paths(artifact(cfg, "paths", "paths"));
  Hyperparams base;
  if (auto file = cfg.optional_path("hyperparams")) {
    if (!fs::exists(*file)) throw DataError("hyperparams file " + file->string() + " not found");
    base = hyperparams_from_config(KeyValueConfig::load(*file));
  }
  const Hyperparams h = hyperparams_from_config(cfg.model_keys(), base);
  h.validate();
  const auto provider = make_embedding_provider(cfg.descriptor("embedding"));
  TrainOptions options;
  options.onEpoch = [&](const EpochStats& s) {
    if (s.epoch == 1 || s.epoch % 10 == 0 || s.epoch == h.epochs) {
      out << "epoch " << s.epoch << "  loss " << fixed(s.meanLoss) << "  train accuracy "
          << fixed(s.accuracy) << "\n";
    }
    return true;
  };
  const auto result = train<double>(data, h, *provider, options);
  const fs::path model = cfg.path("model");
  save_model(result.model, model);
  out << "train: " << data.size() << " pairs, " << h.epochs << " epochs -> " << model.string()
      << "\n";
}

void cmd_enrich(const RunConfig& cfg, std::ostream& out) {
  const auto model = load_model<double>(artifact(cfg, "model", "train"));
  const auto provider = model_provider(cfg, model);
  const auto parser = make_parser(cfg.descriptor("parser"));
  const auto mode = *parse_enrich_mode(cfg.str("mode"));
  const auto options = enrich_options(cfg);

  ReviewStoreOptions store;
  store.dir = cfg.path("store");
  store.seedOntology = input(cfg, "ontology");
  store.seedFormat = ontology_format(cfg);
  ReviewService service(store);

  WebDocument doc = ingest(cfg.source("page"));
  analyze_document(doc, *parser);
  const auto result = enrich(doc, model, *provider, service.graph(), mode, options);
  const auto& s = result.summary;
  out << "enrich: " << s.sentences << " sentences, " << s.chunks << " chunks, " << s.pairs
      << " pairs, " << s.survivingPairs << " after similarity filtering, " << s.noneDiscarded
      << " classified NONE\n";
  if (options.sufficiencyEnabled && !s.sufficiency.passed) {
    out << "enrich: sufficiency ratio " << fixed(s.sufficiency.ratio) << " below "
        << fixed(options.thresholds.sufficiency) << "; page skipped\n";
  }

  if (mode == EnrichMode::kReview) {
    std::vector<QueuedCandidate> queued;
    for (const auto& c : result.candidates) queued.push_back(queued_candidate(c, doc));
    const std::size_t added = service.enqueue(queued);
    out << "enrich: " << result.candidates.size() << " candidates, " << added
        << " new pending entries in " << store.dir.string() << "\n";
  } else {
    const std::size_t applied = service.merge_auto(result.candidates);
    out << "enrich: " << result.candidates.size() << " candidates, " << applied
        << " merged (ontology version " << service.stats().version << ")\n";
  }
  const fs::path tsv = cfg.path("triples_out");
  write_file_atomic(tsv, format_triples_tsv(result.candidates));
  out << "enrich: triples -> " << tsv.string() << "\n";
  if (auto ttl = cfg.optional_path("turtle_out")) {
    write_file_atomic(*ttl, format_triples_turtle(result.candidates));
  }
}

std::vector<int> parse_ks(const std::string& text) {
  std::vector<int> ks;
  for (const auto& part : split(text, ',')) {
    const auto k = parse_int(part);
    if (!k || *k <= 0) throw ArgumentError("ks must list positive integers, got '" + text + "'");
    ks.push_back(static_cast<int>(*k));
  }
  return ks;
}

void report_metrics(const RunConfig& cfg, const Metrics& m, std::ostream& out) {
  out << format_metrics_table(m);
  const fs::path p = cfg.path("metrics_out");
  write_file_atomic(p, metrics_to_json(m) + "\n");
  out << "eval: metrics -> " << p.string() << "\n";
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const std::string kind = cfg.str("eval_kind");
  if (kind == "webpage") {
    std::vector<RankedJudgments> docs;
    for (const auto& file : cfg.path_list("answers")) {
      if (!fs::exists(file)) throw DataError("answers file " + file.string() + " not found");
      docs.push_back(load_answers(file));
    }
    const auto pk = precision_at_k(docs, parse_ks(cfg.str("ks")));
    out << format_precision_at_k(pk);
    nlohmann::json j;
    j["kind"] = "webpage";
    j["documents"] = docs.size();
    for (const auto& [k, v] : pk) j["precision_at_k"][std::to_string(k)] = v;
    const fs::path p = cfg.path("metrics_out");
    write_file_atomic(p, j.dump(2) + "\n");
    out << "eval: metrics -> " << p.string() << "\n";
    return;
  }

  const auto model = load_model<double>(artifact(cfg, "model", "train"));
  const auto provider = model_provider(cfg, model);
  if (kind == "holdout") {
    const auto data = load_paths(artifact(cfg, "test_paths", "paths"));
    if (data.empty()) throw DataError("the held-out set is empty; raise holdout_fraction");
    const auto run = evaluate_pairs(data, model, *provider, EvalKind::kHoldout);
    out << "eval: holdout, " << data.size() << " pairs\n";
    report_metrics(cfg, compute_metrics(run), out);
    return;
  }

  const auto graph = load_ontology(input(cfg, "ontology"), ontology_format(cfg));
  const auto dataset = load_dataset(artifact(cfg, "dataset", "dataset"));
  const auto ko = make_knockout_eval(graph, cfg.real("knockout_fraction"),
                                     static_cast<std::uint64_t>(cfg.integer("seed")), dataset);
  save_dataset(ko.training, cfg.path("knockout_dataset"));
  const auto corpus = load_corpus(artifact(cfg, "corpus_dir", "corpus"));
  const auto parser = make_parser(cfg.descriptor("parser"));
  PathOptions options;
  options.maxPathLen = static_cast<int>(cfg.integer("max_path_len"));
  options.workers = static_cast<unsigned>(std::max(1LL, cfg.integer("workers")));
  const auto paths = collect_pair_paths(parse_corpus(corpus, *parser), ko.run.pairs, options);
  const auto run = evaluate_pairs(paths, model, *provider, EvalKind::kKnockout);
  out << "eval: knockout, " << ko.run.pairs.size() << " gold pairs; training set without them -> "
      << cfg.path("knockout_dataset").string() << "\n";
  report_metrics(cfg, compute_metrics(run), out);
}

void cmd_calibrate(const RunConfig& cfg, std::ostream& out) {
  const fs::path file = input(cfg, "calibration");
  const auto examples = parse_calibration(read_file(file), file.string());
  const auto provider = make_embedding_provider(cfg.descriptor("embedding"));
  const auto report =
      calibrate_thresholds(examples, cfg.str("anchor_text"), *provider, cfg.real("step"));
  out << "calibrate: " << examples.size() << " labeled pairs, " << report.grid.size()
      << " grid points\n";
  out << "best: threshold_domain " << fixed(report.best.domainSim, 2) << "  threshold_pair "
      << fixed(report.best.pairSim, 2) << "  accuracy " << fixed(report.best.accuracy) << "\n";
  const fs::path p = cfg.path("calibration_out");
  write_file_atomic(p, "# Thresholds from `ontoenrich calibrate` on " + file.filename().string() +
                           "\nthreshold_domain = " + fixed(report.best.domainSim, 2) +
                           "\nthreshold_pair = " + fixed(report.best.pairSim, 2) + "\n");
  out << "calibrate: thresholds -> " << p.string() << "\n";
}

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested = true; }

void cmd_serve(const RunConfig& cfg, std::ostream& out) {
  ReviewStoreOptions store;
  store.dir = cfg.path("store");
  if (cfg.has("ontology")) {
    store.seedOntology = input(cfg, "ontology");
    store.seedFormat = ontology_format(cfg);
  }
  ReviewService service(store);

  EnrichJobRunner runner;
  std::shared_ptr<const RelationModel<double>> model;
  std::shared_ptr<const EmbeddingProvider> provider;
  std::shared_ptr<const DependencyParser> parser;
  if (fs::exists(cfg.path("model")) && cfg.has("parser")) {
    model = std::make_shared<RelationModel<double>>(load_model<double>(cfg.path("model")));
    provider = model_provider(cfg, *model);
    parser = make_parser(cfg.descriptor("parser"));
    const auto options = enrich_options(cfg);
    runner = [&service, model, provider, parser, options](const std::string& url) {
      WebDocument doc = ingest(url);
      analyze_document(doc, *parser);
      const auto result =
          enrich(doc, *model, *provider, service.graph(), EnrichMode::kReview, options);
      std::vector<QueuedCandidate> queued;
      for (const auto& c : result.candidates) queued.push_back(queued_candidate(c, doc));
      return service.enqueue(queued);
    };
  } else {
    warn("serve: no model or parser configured; POST /api/v1/enrich is disabled");
  }

  ServerOptions options;
  options.token = cfg.has("token") ? cfg.str("token") : std::string();
  options.staticDir = cfg.optional_path("static_dir");
  ReviewServer server(service, options, runner);
  const long long port = cfg.integer("port");
  if (port < 0 || port > 65535) throw ArgumentError("port must lie in [0, 65535]");
  const int bound = server.bind(cfg.str("host"), static_cast<int>(port));
  out << "serve: listening on http://" << cfg.str("host") << ":" << bound << "/api/v1 (store "
      << store.dir.string() << ")" << std::endl;

  g_stop_requested = false;
  auto previous_int = std::signal(SIGINT, on_stop_signal);
  auto previous_term = std::signal(SIGTERM, on_stop_signal);
  std::atomic<bool> finished{false};
  std::thread listener([&] {
    server.listen();
    finished = true;
  });
  while (!finished && !g_stop_requested)
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  listener.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  out << "serve: stopped\n";
}

using Command = void (*)(const RunConfig&, std::ostream&);

const std::map<std::string, std::pair<Command, std::string>>& commands() {
  static const std::map<std::string, std::pair<Command, std::string>> table = {
      {"dataset",
       {cmd_dataset, "query the endpoint for every seed concept and build the curated dataset"}},
      {"corpus", {cmd_corpus, "filter a Wikipedia dump into the domain corpus"}},
      {"paths", {cmd_paths, "parse the corpus and collect dependency paths for dataset pairs"}},
      {"train", {cmd_train, "train the relation classifier"}},
      {"enrich", {cmd_enrich, "extract candidate triples from a web page"}},
      {"eval", {cmd_eval, "evaluate on the held-out set, knocked-out relations or judged pages"}},
      {"calibrate", {cmd_calibrate, "sweep similarity thresholds against labeled pairs"}},
      {"serve", {cmd_serve, "run the review service"}},
      {"config", {nullptr, "print the effective configuration"}},
  };
  return table;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ontoenrich: ontology enrichment from dependency paths", "ontoenrich"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ontoenrich 1.0.0");

  struct Sub {
    CLI::App* app = nullptr;
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Sub> subs;
  for (const auto& [name, entry] : commands()) {
    Sub& sub = subs[name];
    sub.app = app.add_subcommand(name, entry.second);
    sub.app->add_option("--config", sub.config, "key = value configuration file");
    for (const auto& spec : run_config_schema()) {
      if (std::find(spec.commands.begin(), spec.commands.end(), name) == spec.commands.end())
        continue;
      std::string help = spec.help;
      if (!spec.fallback.empty()) help += " [" + spec.fallback + "]";
      if (!spec.choices.empty()) help += " {" + join(spec.choices, ",") + "}";
      sub.options[spec.name] =
          sub.app->add_option("--" + flag_name(spec.name), sub.values[spec.name], help)
              ->type_name(placeholder(spec.type));
    }
  }

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : static_cast<int>(ErrorKind::kUsage);
    }
    const auto& [name, sub] = *std::find_if(subs.begin(), subs.end(),
                                            [](const auto& s) { return s.second.app->parsed(); });
    RunConfig cfg;
    if (!sub.config.empty()) cfg.load_file(sub.config);
    cfg.load_environment();
    for (const auto& [key, option] : sub.options) {
      if (option->count() > 0) cfg.set(key, sub.values.at(key), fs::current_path(), "command line");
    }
    if (name == "config") {
      out << cfg.describe();
      return 0;
    }
    commands().at(name).first(cfg, out);
    out.flush();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kData);
  }
}

}  // namespace ontoenrich
