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

#include "ontoenrich/embedding.hpp"

#include <cmath>
#include <sstream>

#include "ontoenrich/common.hpp"
#include "ontoenrich/io.hpp"
#include "ontoenrich/random.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

HashEmbeddingProvider::HashEmbeddingProvider(Eigen::Index dimension, std::uint64_t seed)
    : dim_(dimension), seed_(seed) {
  if (dim_ <= 0) throw ArgumentError("embedding dimension must be positive");
}

Eigen::VectorXd HashEmbeddingProvider::word_vector(std::string_view word) const {
  Rng rng(fnv1a64(word) ^ (seed_ * 0x9e3779b97f4a7c15ULL));
  Eigen::VectorXd v(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v.normalized();
}

Eigen::VectorXd HashEmbeddingProvider::embed(std::string_view text) const {
  const auto words = word_tokens(text);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
  if (words.empty()) {
    const std::string t = trim(text);
    return t.empty() ? sum : word_vector(t);
  }
  for (const auto& w : words) sum += word_vector(w);
  return sum.normalized();
}

std::string HashEmbeddingProvider::descriptor() const {
  return "hash:" + std::to_string(dim_) + ":" + std::to_string(seed_);
}

TableEmbeddingProvider::TableEmbeddingProvider(const std::filesystem::path& path)
    : path_(path) {
  const auto lines = lines_of(read_file(path));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto fields = split_whitespace(lines[n]);
    if (fields.empty()) continue;
    if (n == 0 && fields.size() == 2) continue;  // word2vec header
    if (dim_ == 0) dim_ = static_cast<Eigen::Index>(fields.size()) - 1;
    if (static_cast<Eigen::Index>(fields.size()) - 1 != dim_ || dim_ <= 0) {
      throw ParseError(path.string(), n + 1, "inconsistent vector dimension");
    }
    Eigen::VectorXd v(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      try {
        v[i] = std::stod(fields[static_cast<std::size_t>(i) + 1]);
      } catch (const std::exception&) {
        throw ParseError(path.string(), n + 1, "bad number");
      }
    }
    table_.emplace(normalize_label(fields[0]), std::move(v));
  }
  if (dim_ == 0) throw DataError(path.string() + ": empty embedding table");
  fallback_ = std::make_unique<HashEmbeddingProvider>(dim_);
}

Eigen::VectorXd TableEmbeddingProvider::embed(std::string_view text) const {
  const std::string key = normalize_label(text);
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  const auto words = word_tokens(text);
  if (words.empty()) return fallback_->embed(text);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
  for (const auto& w : words) {
    if (auto it = table_.find(w); it != table_.end()) {
      sum += it->second;
    } else {
      sum += fallback_->word_vector(w);
    }
  }
  return sum / static_cast<double>(words.size());
}

std::string TableEmbeddingProvider::descriptor() const { return "table:" + path_.string(); }

Eigen::VectorXd CachingEmbeddingProvider::embed(std::string_view text) const {
  std::string key(text);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  Eigen::VectorXd v = inner_->embed(text);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(std::move(key), std::move(v)).first->second;
}

std::shared_ptr<const EmbeddingProvider> make_embedding_provider(std::string_view descriptor) {
  const auto parts = split(descriptor, ':');
  std::shared_ptr<const EmbeddingProvider> inner;
  if (parts[0] == "hash" && (parts.size() == 2 || parts.size() == 3)) {
    try {
      const long dim = std::stol(parts[1]);
      const std::uint64_t seed = parts.size() == 3 ? std::stoull(parts[2]) : 0;
      inner = std::make_shared<HashEmbeddingProvider>(dim, seed);
    } catch (const std::invalid_argument&) {
      throw ArgumentError("bad embedding descriptor '" + std::string(descriptor) + "'");
    }
  } else if (parts[0] == "table" && parts.size() >= 2) {
    inner = std::make_shared<TableEmbeddingProvider>(std::string(descriptor.substr(6)));
  } else {
    throw ArgumentError("unknown embedding provider '" + std::string(descriptor) + "'");
  }
  return std::make_shared<CachingEmbeddingProvider>(std::move(inner));
}

double text_similarity(const EmbeddingProvider& provider, std::string_view a,
                       std::string_view b) {
  return cosine(provider.embed(a), provider.embed(b));
}

}  // namespace ontoenrich
