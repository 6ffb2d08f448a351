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

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ontoenrich {

// Distributional embeddings for words, compound words, phrases and
// sentences. Implementations must be deterministic: the same text always
// yields the same vector.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual Eigen::VectorXd embed(std::string_view text) const = 0;
  // Self-describing spec string, recorded in model files ("hash:64:0", ...).
  virtual std::string descriptor() const = 0;
};

// Each word hashes to a fixed pseudo-random unit vector; a phrase is the
// normalized sum of its word vectors, so phrases sharing words are similar.
class HashEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(Eigen::Index dimension, std::uint64_t seed = 0);

  Eigen::Index dimension() const override { return dim_; }
  Eigen::VectorXd embed(std::string_view text) const override;
  std::string descriptor() const override;

  Eigen::VectorXd word_vector(std::string_view word) const;

 private:
  Eigen::Index dim_;
  std::uint64_t seed_;
};

// Pretrained vectors from a text table (`token v1 ... vd` per line, an
// optional word2vec `count dim` header). Whole-phrase entries win; otherwise
// the mean of known word vectors; unknown words fall back to hashing.
class TableEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit TableEmbeddingProvider(const std::filesystem::path& path);

  Eigen::Index dimension() const override { return dim_; }
  Eigen::VectorXd embed(std::string_view text) const override;
  std::string descriptor() const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::filesystem::path path_;
  Eigen::Index dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> table_;
  std::unique_ptr<HashEmbeddingProvider> fallback_;
};

// Memoizes lookups of an underlying provider. Thread-safe.
class CachingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit CachingEmbeddingProvider(std::shared_ptr<const EmbeddingProvider> inner)
      : inner_(std::move(inner)) {}

  Eigen::Index dimension() const override { return inner_->dimension(); }
  Eigen::VectorXd embed(std::string_view text) const override;
  std::string descriptor() const override { return inner_->descriptor(); }

 private:
  std::shared_ptr<const EmbeddingProvider> inner_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

// "hash:<dim>[:<seed>]" or "table:<path>". Result is wrapped in a cache.
std::shared_ptr<const EmbeddingProvider> make_embedding_provider(std::string_view descriptor);

// Cosine of two vectors; 0 when either has zero norm.
template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

double text_similarity(const EmbeddingProvider& provider, std::string_view a,
                       std::string_view b);

}  // namespace ontoenrich
