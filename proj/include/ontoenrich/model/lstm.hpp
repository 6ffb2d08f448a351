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

// Single-direction LSTM layer with explicit forward trace and
// backpropagation through time. Gate order in the stacked weights is
// input, forget, cell, output.

#include <Eigen/Core>

#include <vector>

namespace ontoenrich {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct LstmWeights {
  Mat<Scalar> W;  // 4H x input
  Mat<Scalar> U;  // 4H x H
  Vec<Scalar> b;  // 4H

  Eigen::Index hidden() const { return U.cols(); }

  void resize(Eigen::Index input, Eigen::Index hidden) {
    W.setZero(4 * hidden, input);
    U.setZero(4 * hidden, hidden);
    b.setZero(4 * hidden);
  }

  template <typename Other>
  LstmWeights<Other> cast() const {
    return {W.template cast<Other>(), U.template cast<Other>(), b.template cast<Other>()};
  }
};

template <typename Scalar>
struct LstmTrace {
  std::vector<Vec<Scalar>> x, h, c, i, f, g, o, tc;

  std::size_t steps() const { return x.size(); }
};

namespace detail {

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  return (S(1) / (S(1) + (-a.array()).exp())).matrix();
}

}  // namespace detail

template <typename Scalar>
LstmTrace<Scalar> lstm_forward(const LstmWeights<Scalar>& w, const std::vector<Vec<Scalar>>& xs) {
  const Eigen::Index H = w.hidden();
  LstmTrace<Scalar> tr;
  const std::size_t T = xs.size();
  for (auto* v : {&tr.x, &tr.h, &tr.c, &tr.i, &tr.f, &tr.g, &tr.o, &tr.tc}) v->reserve(T);
  Vec<Scalar> h = Vec<Scalar>::Zero(H);
  Vec<Scalar> c = Vec<Scalar>::Zero(H);
  for (const auto& x : xs) {
    const Vec<Scalar> a = w.W * x + w.U * h + w.b;
    Vec<Scalar> i = detail::sigmoid(a.segment(0, H));
    Vec<Scalar> f = detail::sigmoid(a.segment(H, H));
    Vec<Scalar> g = a.segment(2 * H, H).array().tanh().matrix();
    Vec<Scalar> o = detail::sigmoid(a.segment(3 * H, H));
    c = f.cwiseProduct(c) + i.cwiseProduct(g);
    Vec<Scalar> tc = c.array().tanh().matrix();
    h = o.cwiseProduct(tc);
    tr.x.push_back(x);
    tr.h.push_back(h);
    tr.c.push_back(c);
    tr.i.push_back(std::move(i));
    tr.f.push_back(std::move(f));
    tr.g.push_back(std::move(g));
    tr.o.push_back(std::move(o));
    tr.tc.push_back(std::move(tc));
  }
  return tr;
}

// dh[t] is the loss gradient flowing into h[t] from outside the layer.
// Accumulates weight gradients into `grad` and returns dL/dx[t].
template <typename Scalar>
std::vector<Vec<Scalar>> lstm_backward(const LstmWeights<Scalar>& w, const LstmTrace<Scalar>& tr,
                                       const std::vector<Vec<Scalar>>& dh,
                                       LstmWeights<Scalar>& grad) {
  const Eigen::Index H = w.hidden();
  const std::size_t T = tr.steps();
  std::vector<Vec<Scalar>> dx(T);
  Vec<Scalar> dh_next = Vec<Scalar>::Zero(H);
  Vec<Scalar> dc_next = Vec<Scalar>::Zero(H);
  const Vec<Scalar> zero = Vec<Scalar>::Zero(H);
  Vec<Scalar> da(4 * H);
  for (std::size_t t = T; t-- > 0;) {
    const Vec<Scalar> dht = dh[t] + dh_next;
    const auto& i = tr.i[t];
    const auto& f = tr.f[t];
    const auto& g = tr.g[t];
    const auto& o = tr.o[t];
    const auto& tc = tr.tc[t];
    const Vec<Scalar>& c_prev = t > 0 ? tr.c[t - 1] : zero;
    const Vec<Scalar>& h_prev = t > 0 ? tr.h[t - 1] : zero;

    const Vec<Scalar> dc =
        dc_next + dht.cwiseProduct(o).cwiseProduct((Scalar(1) - tc.array().square()).matrix());
    const auto one = Scalar(1);
    da.segment(0, H) = (dc.array() * g.array() * i.array() * (one - i.array())).matrix();
    da.segment(H, H) = (dc.array() * c_prev.array() * f.array() * (one - f.array())).matrix();
    da.segment(2 * H, H) = (dc.array() * i.array() * (one - g.array().square())).matrix();
    da.segment(3 * H, H) = (dht.array() * tc.array() * o.array() * (one - o.array())).matrix();

    grad.W.noalias() += da * tr.x[t].transpose();
    grad.U.noalias() += da * h_prev.transpose();
    grad.b += da;
    dx[t] = w.W.transpose() * da;
    dh_next = w.U.transpose() * da;
    dc_next = dc.cwiseProduct(f);
  }
  return dx;
}

}  // namespace ontoenrich
