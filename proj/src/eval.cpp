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

#include "ontoenrich/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

std::string_view to_string(EvalKind k) {
  switch (k) {
    case EvalKind::kHoldout: return "holdout";
    case EvalKind::kKnockout: return "knockout";
    case EvalKind::kWebpage: return "webpage";
  }
  return "holdout";
}

std::optional<EvalKind> parse_eval_kind(std::string_view token) {
  const std::string t = to_lower(trim(token));
  if (t == "holdout") return EvalKind::kHoldout;
  if (t == "knockout") return EvalKind::kKnockout;
  if (t == "webpage") return EvalKind::kWebpage;
  return std::nullopt;
}

ConfusionMatrix confusion_matrix(const EvalRun& run) {
  if (run.predictions.size() != run.pairs.size()) {
    throw DataError("eval run has " + std::to_string(run.pairs.size()) + " pairs but " +
                    std::to_string(run.predictions.size()) + " predictions");
  }
  ConfusionMatrix c{};
  for (std::size_t k = 0; k < run.pairs.size(); ++k) {
    ++c[label_index(run.pairs[k].label)][label_index(run.predictions[k].predicted)];
  }
  return c;
}

Metrics metrics_from_confusion(const ConfusionMatrix& confusion) {
  Metrics m;
  m.confusion = confusion;
  std::size_t correct = 0;
  for (int g = 0; g < kNumLabels; ++g) {
    for (int p = 0; p < kNumLabels; ++p) m.total += confusion[g][p];
    correct += confusion[g][g];
  }
  if (m.total == 0) throw DataError("cannot compute metrics of an empty run");
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.total);
  for (int c = 0; c < kNumLabels; ++c) {
    ClassMetrics cm;
    for (int k = 0; k < kNumLabels; ++k) {
      cm.gold += confusion[c][k];
      cm.predicted += confusion[k][c];
    }
    const double tp = static_cast<double>(confusion[c][c]);
    cm.precision = cm.predicted ? tp / static_cast<double>(cm.predicted) : 0.0;
    cm.recall = cm.gold ? tp / static_cast<double>(cm.gold) : 0.0;
    cm.f1 = cm.precision + cm.recall > 0.0
                ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                : 0.0;
    m.perClass[label_from_index(c)] = cm;
    if (cm.gold > 0) {
      m.averagedClasses.push_back(label_from_index(c));
      m.precisionMacro += cm.precision;
      m.recallMacro += cm.recall;
      m.f1Macro += cm.f1;
    }
  }
  const double n = static_cast<double>(m.averagedClasses.size());
  m.precisionMacro /= n;
  m.recallMacro /= n;
  m.f1Macro /= n;
  return m;
}

Metrics compute_metrics(const EvalRun& run) {
  if (run.pairs.empty()) throw DataError("cannot compute metrics of an empty run");
  return metrics_from_confusion(confusion_matrix(run));
}

std::map<LabelKind, std::optional<double>> per_class_accuracy(const EvalRun& run) {
  const auto c = confusion_matrix(run);
  std::map<LabelKind, std::optional<double>> out;
  for (int g = 0; g < kNumLabels; ++g) {
    std::size_t gold = 0;
    for (int p = 0; p < kNumLabels; ++p) gold += c[g][p];
    out[label_from_index(g)] =
        gold ? std::optional<double>(static_cast<double>(c[g][g]) / static_cast<double>(gold))
             : std::nullopt;
  }
  return out;
}

std::map<int, double> precision_at_k(const std::vector<RankedJudgments>& documents,
                                     const std::vector<int>& ks) {
  if (documents.empty()) throw ArgumentError("precision_at_k: no documents");
  std::map<int, double> out;
  for (int k : ks) {
    if (k <= 0) throw ArgumentError("precision_at_k: k must be positive");
    double sum = 0.0;
    for (const auto& doc : documents) {
      const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(k), doc.size());
      if (n == 0) continue;
      const auto hits = std::count(doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(n), true);
      sum += static_cast<double>(hits) / static_cast<double>(n);
    }
    out[k] = sum / static_cast<double>(documents.size());
  }
  return out;
}

RankedJudgments parse_answers(std::string_view text, const std::string& source) {
  std::map<long, bool> byRank;
  const auto lines = lines_of(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line = trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw ParseError(source, n + 1, "expected rank<TAB>correct");
    long rank = 0;
    try {
      std::size_t used = 0;
      rank = std::stol(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(source, n + 1, "invalid rank '" + f[0] + "'");
    }
    const std::string flag = trim(f[1]);
    if (flag != "0" && flag != "1") throw ParseError(source, n + 1, "correct must be 0 or 1");
    if (rank < 1) throw ParseError(source, n + 1, "rank must be positive");
    if (!byRank.emplace(rank, flag == "1").second) {
      throw ParseError(source, n + 1, "duplicate rank " + std::to_string(rank));
    }
  }
  RankedJudgments out;
  long expect = 1;
  for (const auto& [rank, ok] : byRank) {
    if (rank != expect) {
      throw DataError(source + ": ranks must run 1.." + std::to_string(byRank.size()) +
                      " without gaps (missing " + std::to_string(expect) + ")");
    }
    out.push_back(ok);
    ++expect;
  }
  return out;
}

RankedJudgments load_answers(const std::filesystem::path& path) {
  return parse_answers(read_file(path), path.string());
}

EvalRun evaluate_pairs(const std::vector<PairPaths>& data, const RelationModel<double>& model,
                       const EmbeddingProvider& provider, EvalKind kind) {
  EvalRun run;
  run.kind = kind;
  for (const auto& pp : data) {
    const auto probs = model.classify_pair(pp.pair, pp, provider);
    run.pairs.push_back(pp.pair);
    run.predictions.push_back({probs.predicted, probs.confidence});
  }
  return run;
}

KnockoutEval make_knockout_eval(const OntologyGraph& graph, double fraction, std::uint64_t seed,
                                const CuratedDataset& dataset) {
  auto ko = knockout(graph, fraction, seed);
  KnockoutEval out;
  out.run.kind = EvalKind::kKnockout;
  std::set<std::pair<std::string, std::string>> goldKeys;
  for (const auto& r : ko.heldOut) {
    const auto label = label_for(r.predicate);
    if (!label) continue;
    out.run.pairs.push_back({r.subject, r.object, *label, PairSource::kKnockout});
    const std::string a = normalize_label(r.subject);
    const std::string b = normalize_label(r.object);
    goldKeys.insert(std::minmax(a, b));
  }
  if (out.run.pairs.empty()) {
    throw ArgumentError("knockout fraction " + std::to_string(fraction) +
                        " yields no gold pairs");
  }
  out.seed = std::move(ko.reduced);
  std::vector<TermPair> kept;
  for (const auto& p : dataset.pairs) {
    const std::string a = normalize_label(p.a);
    const std::string b = normalize_label(p.b);
    if (!goldKeys.count(std::minmax(a, b))) kept.push_back(p);
  }
  out.training = CuratedDataset::from_pairs(std::move(kept));
  return out;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_metrics_table(const Metrics& m) {
  std::string out;
  out += "pairs      " + std::to_string(m.total) + "\n";
  out += "accuracy   " + fixed(m.accuracy) + "\n";
  out += "precision  " + fixed(m.precisionMacro) + "  (macro)\n";
  out += "recall     " + fixed(m.recallMacro) + "  (macro)\n";
  out += "f1         " + fixed(m.f1Macro) + "  (macro)\n\n";
  out += "class       precision  recall      f1  accuracy  gold\n";
  for (LabelKind k : kAllLabels) {
    const auto& c = m.perClass.at(k);
    std::string name(to_string(k));
    name.resize(10, ' ');
    out += name + pad(fixed(c.precision), 11) + pad(fixed(c.recall), 8) + pad(fixed(c.f1), 8) +
           pad(c.gold ? fixed(c.recall) : std::string("n/a"), 10) +
           pad(std::to_string(c.gold), 6) + "\n";
  }
  out += "\nconfusion (rows gold, columns predicted)\n          ";
  for (LabelKind k : kAllLabels) out += pad(std::string(to_string(k)), 10);
  out += "\n";
  for (LabelKind g : kAllLabels) {
    std::string name(to_string(g));
    name.resize(10, ' ');
    out += name;
    for (LabelKind p : kAllLabels) {
      out += pad(std::to_string(m.confusion[label_index(g)][label_index(p)]), 10);
    }
    out += "\n";
  }
  return out;
}

std::string metrics_to_json(const Metrics& m) {
  using nlohmann::json;
  json perClass = json::object();
  for (LabelKind k : kAllLabels) {
    const auto& c = m.perClass.at(k);
    perClass[std::string(to_string(k))] = {
        {"precision", c.precision},
        {"recall", c.recall},
        {"f1", c.f1},
        {"accuracy", c.gold ? json(c.recall) : json(nullptr)},
        {"gold", c.gold},
        {"predicted", c.predicted}};
  }
  json confusion = json::array();
  for (const auto& row : m.confusion) confusion.push_back(row);
  json averaged = json::array();
  for (LabelKind k : m.averagedClasses) averaged.push_back(std::string(to_string(k)));
  const json doc = {{"total", m.total},
                    {"accuracy", m.accuracy},
                    {"precision_macro", m.precisionMacro},
                    {"recall_macro", m.recallMacro},
                    {"f1_macro", m.f1Macro},
                    {"averaged_classes", averaged},
                    {"per_class", perClass},
                    {"confusion", confusion},
                    {"labels", {"HYPERNYM", "HYPONYM", "INSTANCE", "CONCEPT", "NONE"}}};
  return doc.dump(2);
}

std::string format_precision_at_k(const std::map<int, double>& pk) {
  std::string out;
  for (const auto& [k, v] : pk) out += "P@" + std::to_string(k) + "\t" + fixed(v) + "\n";
  return out;
}

}  // namespace ontoenrich
