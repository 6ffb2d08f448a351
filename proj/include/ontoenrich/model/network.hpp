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

// Path-based relation classifier. Each dependency-path node is embedded as
// [word | POS | dep | dir]; paths are encoded by a stacked bidirectional
// LSTM whose top-layer final states form the path representation; the
// count-weighted mean of path representations is concatenated with the two
// term embeddings and passed through Linear -> ReLU -> Linear -> LogSoftmax.

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ontoenrich/common.hpp"
#include "ontoenrich/embedding.hpp"
#include "ontoenrich/labels.hpp"
#include "ontoenrich/model/hyperparams.hpp"
#include "ontoenrich/model/lstm.hpp"
#include "ontoenrich/paths.hpp"
#include "ontoenrich/random.hpp"

namespace ontoenrich {

// A named flat view of one parameter tensor.
template <typename Scalar>
struct TensorRef {
  std::string name;
  std::string group;
  Scalar* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
  Eigen::Map<Mat<Scalar>> map() const { return {data, rows, cols}; }
};

template <typename Scalar>
struct ModelParams {
  // Column k is the embedding of tag id k; column 0 is UNK.
  Mat<Scalar> posEmbedding;
  Mat<Scalar> depEmbedding;
  Mat<Scalar> dirEmbedding;
  // Index 2 * layer + direction (0 forward, 1 backward).
  std::vector<LstmWeights<Scalar>> lstm;
  Mat<Scalar> ffn1W;
  Vec<Scalar> ffn1b;
  Mat<Scalar> ffn2W;
  Vec<Scalar> ffn2b;

  std::vector<TensorRef<Scalar>> tensors() {
    std::vector<TensorRef<Scalar>> out;
    auto add = [&](std::string name, std::string group, auto& m) {
      out.push_back({std::move(name), std::move(group), m.data(), m.rows(), m.cols()});
    };
    add("pos_embedding", "pos_embedding", posEmbedding);
    add("dep_embedding", "dep_embedding", depEmbedding);
    add("dir_embedding", "dir_embedding", dirEmbedding);
    for (std::size_t k = 0; k < lstm.size(); ++k) {
      const std::string prefix = "lstm.l" + std::to_string(k / 2) + (k % 2 ? ".bwd" : ".fwd");
      add(prefix + ".W", "lstm", lstm[k].W);
      add(prefix + ".U", "lstm", lstm[k].U);
      add(prefix + ".b", "lstm", lstm[k].b);
    }
    add("ffn1.W", "ffn1", ffn1W);
    add("ffn1.b", "ffn1", ffn1b);
    add("ffn2.W", "ffn2", ffn2W);
    add("ffn2.b", "ffn2", ffn2b);
    return out;
  }

  Eigen::Index parameter_count() {
    Eigen::Index n = 0;
    for (const auto& t : tensors()) n += t.size();
    return n;
  }

  ModelParams zeros_like() const {
    ModelParams z;
    z.posEmbedding.setZero(posEmbedding.rows(), posEmbedding.cols());
    z.depEmbedding.setZero(depEmbedding.rows(), depEmbedding.cols());
    z.dirEmbedding.setZero(dirEmbedding.rows(), dirEmbedding.cols());
    z.lstm.resize(lstm.size());
    for (std::size_t k = 0; k < lstm.size(); ++k) {
      z.lstm[k].W.setZero(lstm[k].W.rows(), lstm[k].W.cols());
      z.lstm[k].U.setZero(lstm[k].U.rows(), lstm[k].U.cols());
      z.lstm[k].b.setZero(lstm[k].b.size());
    }
    z.ffn1W.setZero(ffn1W.rows(), ffn1W.cols());
    z.ffn1b.setZero(ffn1b.size());
    z.ffn2W.setZero(ffn2W.rows(), ffn2W.cols());
    z.ffn2b.setZero(ffn2b.size());
    return z;
  }

  void set_zero() {
    for (auto& t : tensors()) t.map().setZero();
  }

  template <typename Other>
  ModelParams<Other> cast() const {
    ModelParams<Other> out;
    out.posEmbedding = posEmbedding.template cast<Other>();
    out.depEmbedding = depEmbedding.template cast<Other>();
    out.dirEmbedding = dirEmbedding.template cast<Other>();
    for (const auto& w : lstm) out.lstm.push_back(w.template cast<Other>());
    out.ffn1W = ffn1W.template cast<Other>();
    out.ffn1b = ffn1b.template cast<Other>();
    out.ffn2W = ffn2W.template cast<Other>();
    out.ffn2b = ffn2b.template cast<Other>();
    return out;
  }

  bool all_finite() {
    for (const auto& t : tensors()) {
      if (!t.map().allFinite()) return false;
    }
    return true;
  }

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    if (a.lstm.size() != b.lstm.size()) return false;
    auto& ma = const_cast<ModelParams&>(a);
    auto& mb = const_cast<ModelParams&>(b);
    const auto ta = ma.tensors();
    const auto tb = mb.tensors();
    for (std::size_t k = 0; k < ta.size(); ++k) {
      if (ta[k].rows != tb[k].rows || ta[k].cols != tb[k].cols) return false;
      if (ta[k].map() != tb[k].map()) return false;
    }
    return true;
  }
};

template <typename Scalar>
struct ClassProbs {
  Eigen::Matrix<Scalar, kNumLabels, 1> logProbs;
  LabelKind predicted = LabelKind::kNone;
  double confidence = 0.0;
};

// Intermediate values of one forward pass, kept for backpropagation.
template <typename Scalar>
struct PathTrace {
  std::vector<int> pos, dep, dir;
  std::vector<Vec<Scalar>> input;      // node vectors after dropout
  std::vector<Vec<Scalar>> inputMask;  // empty when no dropout
  std::vector<LstmTrace<Scalar>> layers;  // 2 * layer + direction
  Vec<Scalar> rep;
};

template <typename Scalar>
struct PairTrace {
  std::vector<PathTrace<Scalar>> paths;
  std::vector<Scalar> weights;
  Vec<Scalar> context;
  Vec<Scalar> contextMask;  // empty when no dropout
  Vec<Scalar> z;
  Vec<Scalar> h1;
  Vec<Scalar> logits;
  Eigen::Matrix<Scalar, kNumLabels, 1> logProbs;
};

template <typename Scalar>
class RelationModel {
 public:
  RelationModel() = default;

  // Xavier-uniform weights and zero biases drawn from `h.seed`.
  RelationModel(const Hyperparams& h, Eigen::Index wordDim, TagVocabs vocabs,
                std::string providerDescriptor = "")
      : h_(h), wordDim_(wordDim), vocabs_(std::move(vocabs)), descriptor_(std::move(providerDescriptor)) {
    h_.validate();
    if (wordDim_ <= 0) throw ArgumentError("word embedding dimension must be positive");
    if (vocabs_.pos.size() < 1 || vocabs_.dep.size() < 1 || vocabs_.dir.size() < 1) {
      throw ArgumentError("tag vocabularies must be nonempty");
    }
    allocate();
    Rng rng(h_.seed);
    auto xavier = [&](auto& m) {
      const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = Scalar(rng.uniform(-bound, bound));
      }
    };
    xavier(params_.posEmbedding);
    xavier(params_.depEmbedding);
    xavier(params_.dirEmbedding);
    for (auto& w : params_.lstm) {
      xavier(w.W);
      xavier(w.U);
    }
    xavier(params_.ffn1W);
    xavier(params_.ffn2W);
  }

  // Wraps existing parameters; shapes are checked against the hyperparams.
  RelationModel(const Hyperparams& h, Eigen::Index wordDim, TagVocabs vocabs,
                std::string providerDescriptor, ModelParams<Scalar> params)
      : h_(h), wordDim_(wordDim), vocabs_(std::move(vocabs)), descriptor_(std::move(providerDescriptor)) {
    h_.validate();
    allocate();
    auto expected = params_.tensors();
    auto given = params.tensors();
    if (expected.size() != given.size()) throw DataError("model tensor count mismatch");
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (expected[k].rows != given[k].rows || expected[k].cols != given[k].cols) {
        throw DataError("model tensor " + expected[k].name + " has inconsistent shape");
      }
    }
    params_ = std::move(params);
  }

  const Hyperparams& hyperparams() const { return h_; }
  const TagVocabs& vocabs() const { return vocabs_; }
  const std::string& provider_descriptor() const { return descriptor_; }
  Eigen::Index word_dim() const { return wordDim_; }
  Eigen::Index node_dim() const { return wordDim_ + h_.posDim + h_.depDim + h_.dirDim; }
  Eigen::Index path_dim() const { return 2 * h_.hiddenDim; }
  Eigen::Index ffn1_input_dim() const { return path_dim() + 2 * wordDim_; }

  ModelParams<Scalar>& params() { return params_; }
  const ModelParams<Scalar>& params() const { return params_; }

  // Pretrained vector of a node word; the NULL sentinel word maps to zero.
  Vec<Scalar> word_vector(const std::string& lemma, const EmbeddingProvider& provider) const {
    if (lemma == kUnknownToken) return Vec<Scalar>::Zero(wordDim_);
    return term_vector(lemma, provider);
  }

  Vec<Scalar> term_vector(std::string_view text, const EmbeddingProvider& provider) const {
    const Eigen::VectorXd v = provider.embed(text);
    if (v.size() != wordDim_) {
      throw DataError("embedding provider returned dimension " + std::to_string(v.size()) +
                      ", model expects " + std::to_string(wordDim_));
    }
    return v.cast<Scalar>();
  }

  // Node vector; embedding dropout applies when `dropout` is given.
  Vec<Scalar> embed_node(const DependencyNode& node, const EmbeddingProvider& provider,
                         Rng* dropout = nullptr, Vec<Scalar>* mask = nullptr) const {
    Vec<Scalar> v(node_dim());
    v << word_vector(node.lemma, provider), params_.posEmbedding.col(vocabs_.pos.id(node.pos)),
        params_.depEmbedding.col(vocabs_.dep.id(node.dep)),
        params_.dirEmbedding.col(vocabs_.dir.id(to_string(node.dir)));
    if (dropout && h_.embeddingDropout > 0.0) {
      Vec<Scalar> m = dropout_mask(v.size(), h_.embeddingDropout, *dropout);
      v = v.cwiseProduct(m);
      if (mask) *mask = std::move(m);
    }
    return v;
  }

  PathTrace<Scalar> forward_path(const DependencyPath& path, const EmbeddingProvider& provider,
                                 Rng* dropout = nullptr) const {
    if (path.nodes.empty()) throw ArgumentError("encode_path: empty path");
    PathTrace<Scalar> tr;
    for (const auto& node : path.nodes) {
      tr.pos.push_back(vocabs_.pos.id(node.pos));
      tr.dep.push_back(vocabs_.dep.id(node.dep));
      tr.dir.push_back(vocabs_.dir.id(to_string(node.dir)));
      Vec<Scalar> mask;
      tr.input.push_back(embed_node(node, provider, dropout, &mask));
      if (dropout && h_.embeddingDropout > 0.0) tr.inputMask.push_back(std::move(mask));
    }
    const std::size_t T = tr.input.size();
    const Eigen::Index H = h_.hiddenDim;
    std::vector<Vec<Scalar>> layer_in = tr.input;
    for (int l = 0; l < h_.numLayers; ++l) {
      std::vector<Vec<Scalar>> reversed(layer_in.rbegin(), layer_in.rend());
      tr.layers.push_back(lstm_forward(params_.lstm[2 * l], layer_in));
      tr.layers.push_back(lstm_forward(params_.lstm[2 * l + 1], reversed));
      const auto& fw = tr.layers[2 * l];
      const auto& bw = tr.layers[2 * l + 1];
      std::vector<Vec<Scalar>> out(T);
      for (std::size_t t = 0; t < T; ++t) {
        out[t].resize(2 * H);
        out[t] << fw.h[t], bw.h[T - 1 - t];
      }
      layer_in = std::move(out);
    }
    const auto& top_f = tr.layers[2 * (h_.numLayers - 1)];
    const auto& top_b = tr.layers[2 * (h_.numLayers - 1) + 1];
    tr.rep.resize(2 * H);
    tr.rep << top_f.h[T - 1], top_b.h[T - 1];
    return tr;
  }

  Vec<Scalar> encode_path(const DependencyPath& path, const EmbeddingProvider& provider) const {
    return forward_path(path, provider).rep;
  }

  std::vector<Scalar> path_weights(const PairPaths& pp) const {
    std::vector<Scalar> w;
    Scalar total = 0;
    for (const auto& p : pp.paths) {
      if (p.count == 0) throw ArgumentError("path count must be positive");
      w.push_back(Scalar(p.count));
      total += Scalar(p.count);
    }
    if (h_.normalizePathWeights) {
      for (auto& x : w) x /= total;
    }
    return w;
  }

  Vec<Scalar> context_vector(const PairPaths& pp, const EmbeddingProvider& provider) const {
    if (pp.paths.empty()) throw ArgumentError("context_vector: pair has no paths");
    const auto w = path_weights(pp);
    Vec<Scalar> ctx = Vec<Scalar>::Zero(path_dim());
    for (std::size_t k = 0; k < pp.paths.size(); ++k) {
      ctx += w[k] * encode_path(pp.paths[k], provider);
    }
    return ctx;
  }

  PairTrace<Scalar> forward(const TermPair& pair, const PairPaths& pp,
                            const EmbeddingProvider& provider, Rng* dropout = nullptr) const {
    if (pp.paths.empty()) throw ArgumentError("classify_pair: pair has no paths");
    PairTrace<Scalar> tr;
    tr.weights = path_weights(pp);
    tr.context = Vec<Scalar>::Zero(path_dim());
    for (std::size_t k = 0; k < pp.paths.size(); ++k) {
      tr.paths.push_back(forward_path(pp.paths[k], provider, dropout));
      tr.context += tr.weights[k] * tr.paths.back().rep;
    }
    Vec<Scalar> ctx = tr.context;
    if (dropout && h_.hiddenDropout > 0.0) {
      tr.contextMask = dropout_mask(ctx.size(), h_.hiddenDropout, *dropout);
      ctx = ctx.cwiseProduct(tr.contextMask);
    }
    tr.z.resize(ffn1_input_dim());
    tr.z << ctx, term_vector(pair.a, provider), term_vector(pair.b, provider);
    tr.h1 = params_.ffn1W * tr.z + params_.ffn1b;
    const Vec<Scalar> r = tr.h1.cwiseMax(Scalar(0));
    tr.logits = params_.ffn2W * r + params_.ffn2b;
    const Scalar mx = tr.logits.maxCoeff();
    const Scalar lse = mx + std::log((tr.logits.array() - mx).exp().sum());
    tr.logProbs = (tr.logits.array() - lse).matrix();
    return tr;
  }

  ClassProbs<Scalar> classify_pair(const TermPair& pair, const PairPaths& pp,
                                   const EmbeddingProvider& provider) const {
    return to_probs(forward(pair, pp, provider).logProbs);
  }

  static ClassProbs<Scalar> to_probs(const Eigen::Matrix<Scalar, kNumLabels, 1>& logProbs) {
    ClassProbs<Scalar> out;
    out.logProbs = logProbs;
    Eigen::Index best = 0;
    logProbs.maxCoeff(&best);
    out.predicted = label_from_index(static_cast<int>(best));
    out.confidence = std::exp(static_cast<double>(logProbs(best)));
    return out;
  }

  // Negative log-likelihood of `gold` for a recorded forward pass; adds the
  // parameter gradients into `grad`.
  Scalar backward(const PairTrace<Scalar>& tr, LabelKind gold, ModelParams<Scalar>& grad) const {
    const int y = label_index(gold);
    const Scalar loss = -tr.logProbs(y);
    Vec<Scalar> dlogits = tr.logProbs.array().exp().matrix();
    dlogits(y) -= Scalar(1);

    const Vec<Scalar> r = tr.h1.cwiseMax(Scalar(0));
    grad.ffn2W.noalias() += dlogits * r.transpose();
    grad.ffn2b += dlogits;
    Vec<Scalar> dh1 = params_.ffn2W.transpose() * dlogits;
    for (Eigen::Index k = 0; k < dh1.size(); ++k) {
      if (!(tr.h1(k) > Scalar(0))) dh1(k) = Scalar(0);
    }
    grad.ffn1W.noalias() += dh1 * tr.z.transpose();
    grad.ffn1b += dh1;
    Vec<Scalar> dctx = (params_.ffn1W.transpose() * dh1).head(path_dim());
    if (tr.contextMask.size() > 0) dctx = dctx.cwiseProduct(tr.contextMask);

    for (std::size_t k = 0; k < tr.paths.size(); ++k) {
      backward_path(tr.paths[k], tr.weights[k] * dctx, grad);
    }
    return loss;
  }

 private:
  void allocate() {
    const Eigen::Index H = h_.hiddenDim;
    params_.posEmbedding.setZero(h_.posDim, vocabs_.pos.size());
    params_.depEmbedding.setZero(h_.depDim, vocabs_.dep.size());
    params_.dirEmbedding.setZero(h_.dirDim, vocabs_.dir.size());
    params_.lstm.assign(2 * static_cast<std::size_t>(h_.numLayers), {});
    for (int l = 0; l < h_.numLayers; ++l) {
      const Eigen::Index in = l == 0 ? node_dim() : 2 * H;
      params_.lstm[2 * l].resize(in, H);
      params_.lstm[2 * l + 1].resize(in, H);
    }
    params_.ffn1W.setZero(h_.ffnInputDim, ffn1_input_dim());
    params_.ffn1b.setZero(h_.ffnInputDim);
    params_.ffn2W.setZero(kNumLabels, h_.ffnInputDim);
    params_.ffn2b.setZero(kNumLabels);
  }

  static Vec<Scalar> dropout_mask(Eigen::Index n, double p, Rng& rng) {
    Vec<Scalar> m(n);
    const Scalar keep = Scalar(1.0 / (1.0 - p));
    for (Eigen::Index k = 0; k < n; ++k) m(k) = rng.uniform() < p ? Scalar(0) : keep;
    return m;
  }

  void backward_path(const PathTrace<Scalar>& tr, const Vec<Scalar>& drep,
                     ModelParams<Scalar>& grad) const {
    const std::size_t T = tr.input.size();
    const Eigen::Index H = h_.hiddenDim;
    const int L = h_.numLayers;
    std::vector<Vec<Scalar>> dh_f(T, Vec<Scalar>::Zero(H));
    std::vector<Vec<Scalar>> dh_b(T, Vec<Scalar>::Zero(H));
    dh_f[T - 1] = drep.head(H);
    dh_b[T - 1] = drep.tail(H);
    std::vector<Vec<Scalar>> dx;
    for (int l = L - 1; l >= 0; --l) {
      if (l < L - 1) {
        for (std::size_t t = 0; t < T; ++t) {
          dh_f[t] = dx[t].head(H);
          dh_b[T - 1 - t] = dx[t].tail(H);
        }
      }
      const auto dxf = lstm_backward(params_.lstm[2 * l], tr.layers[2 * l], dh_f, grad.lstm[2 * l]);
      const auto dxb =
          lstm_backward(params_.lstm[2 * l + 1], tr.layers[2 * l + 1], dh_b, grad.lstm[2 * l + 1]);
      dx.assign(T, Vec<Scalar>());
      for (std::size_t t = 0; t < T; ++t) dx[t] = dxf[t] + dxb[T - 1 - t];
    }
    const Eigen::Index W = wordDim_;
    for (std::size_t t = 0; t < T; ++t) {
      Vec<Scalar> d = dx[t];
      if (!tr.inputMask.empty()) d = d.cwiseProduct(tr.inputMask[t]);
      grad.posEmbedding.col(tr.pos[t]) += d.segment(W, h_.posDim);
      grad.depEmbedding.col(tr.dep[t]) += d.segment(W + h_.posDim, h_.depDim);
      grad.dirEmbedding.col(tr.dir[t]) += d.segment(W + h_.posDim + h_.depDim, h_.dirDim);
    }
  }

  Hyperparams h_;
  Eigen::Index wordDim_ = 0;
  TagVocabs vocabs_;
  std::string descriptor_;
  ModelParams<Scalar> params_;
};

// Collects POS and dependency tags from training paths, sorted.
TagVocabs build_tag_vocabs(const std::vector<PairPaths>& data);

}  // namespace ontoenrich
