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

#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include "ontoenrich/model/network.hpp"

namespace ontoenrich {

// Adam with decoupled weight decay; every tensor is decayed.
template <typename Scalar>
class AdamW {
 public:
  AdamW(ModelParams<Scalar>& params, double lr, double weightDecay, double beta1 = 0.9,
        double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), wd_(weightDecay), b1_(beta1), b2_(beta2), eps_(eps),
        m_(params.zeros_like()), v_(params.zeros_like()) {}

  void step(ModelParams<Scalar>& params, ModelParams<Scalar>& grad) {
    ++t_;
    const Scalar c1 = Scalar(1.0 - std::pow(b1_, static_cast<double>(t_)));
    const Scalar c2 = Scalar(1.0 - std::pow(b2_, static_cast<double>(t_)));
    const Scalar lr = Scalar(lr_);
    const Scalar decay = Scalar(1.0 - lr_ * wd_);
    const Scalar b1 = Scalar(b1_);
    const Scalar b2 = Scalar(b2_);
    const Scalar eps = Scalar(eps_);
    auto p = params.tensors();
    auto g = grad.tensors();
    auto m = m_.tensors();
    auto v = v_.tensors();
    for (std::size_t k = 0; k < p.size(); ++k) {
      auto P = p[k].map().array();
      auto G = g[k].map().array();
      auto M = m[k].map().array();
      auto V = v[k].map().array();
      P *= decay;
      M = b1 * M + (Scalar(1) - b1) * G;
      V = b2 * V + (Scalar(1) - b2) * G.square();
      P -= lr * (M / c1) / ((V / c2).sqrt() + eps);
    }
  }

  long steps() const { return t_; }

 private:
  double lr_, wd_, b1_, b2_, eps_;
  long t_ = 0;
  ModelParams<Scalar> m_;
  ModelParams<Scalar> v_;
};

struct EpochStats {
  int epoch = 0;
  double meanLoss = 0.0;
  // Eval-mode accuracy on the training data after the epoch.
  double accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
};

struct TrainOptions {
  // Called after each epoch; returning false stops training early.
  std::function<bool(const EpochStats&)> onEpoch;
};

template <typename Scalar>
double training_accuracy(const RelationModel<Scalar>& model, const std::vector<PairPaths>& data,
                         const EmbeddingProvider& provider) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& pp : data) {
    if (model.classify_pair(pp.pair, pp, provider).predicted == pp.pair.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

template <typename Scalar>
struct TrainResult {
  RelationModel<Scalar> model;
  TrainReport report;
};

// Per-pair AdamW updates over a seeded shuffle each epoch, minimizing NLL of
// the pair's label. Throws DataError on a non-finite loss.
template <typename Scalar>
TrainResult<Scalar> train(const std::vector<PairPaths>& data, const Hyperparams& h,
                          const EmbeddingProvider& provider, const TrainOptions& options = {}) {
  if (data.empty()) throw ArgumentError("train: no training pairs");
  TrainResult<Scalar> result{
      RelationModel<Scalar>(h, provider.dimension(), build_tag_vocabs(data), provider.descriptor()),
      {}};
  auto& model = result.model;
  AdamW<Scalar> opt(model.params(), h.learningRate, h.weightDecay);
  ModelParams<Scalar> grad = model.params().zeros_like();
  // Separate streams keep the shuffle independent of how much dropout is drawn.
  Rng order_rng(h.seed ^ 0x5DEECE66DULL);
  Rng dropout_rng(h.seed + 1);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= h.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      const auto& pp = data[order[step]];
      grad.set_zero();
      const auto trace = model.forward(pp.pair, pp, provider, &dropout_rng);
      const Scalar loss = model.backward(trace, pp.pair.label, grad);
      if (!std::isfinite(static_cast<double>(loss))) {
        throw DataError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                        std::to_string(step) + " (pair " + pp.pair.a + " / " + pp.pair.b + ")");
      }
      total += static_cast<double>(loss);
      opt.step(model.params(), grad);
    }
    EpochStats stats{epoch, total / static_cast<double>(data.size()),
                     training_accuracy(model, data, provider)};
    result.report.epochs.push_back(stats);
    if (options.onEpoch && !options.onEpoch(stats)) break;
  }
  return result;
}

}  // namespace ontoenrich
