// Copyright 2026 The audioatk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <vector>

#include "audioatk/nn/tensor.hpp"

namespace audioatk::nn {

template <class Real>
struct CrossEntropyResult {
  double loss = 0.0;          // mean of -log p[label]
  TensorT<Real> logit_grad;   // (p - onehot) / batch, seeds backward_from_logits
};

/// Mean negative log-likelihood over the batch. `probs` rows must already be
/// softmax outputs; the returned gradient is with respect to the logits.
template <class Real>
CrossEntropyResult<Real> cross_entropy(const TensorT<Real>& probs, const std::vector<int>& labels) {
  require(probs.shape.size() == 2, "cross_entropy: probs must be [batch, classes]");
  const int n = probs.shape[0];
  const int classes = probs.shape[1];
  require(static_cast<int>(labels.size()) == n,
          "cross_entropy: " + std::to_string(labels.size()) + " labels for batch of " +
              std::to_string(n));

  CrossEntropyResult<Real> res;
  res.logit_grad.resize(probs.shape);
  const Real invn = Real(1) / static_cast<Real>(n);
  for (int i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    require(y >= 0 && y < classes, "cross_entropy: label " + std::to_string(y) +
                                       " outside [0, " + std::to_string(classes) + ")");
    const Real* p = probs.sample(i);
    Real* g = res.logit_grad.sample(i);
    for (int c = 0; c < classes; ++c) g[c] = p[c] * invn;
    g[y] -= invn;
    const double py = std::max(static_cast<double>(p[y]), 1e-30);
    res.loss -= std::log(py);
  }
  res.loss /= static_cast<double>(n);
  return res;
}

/// Index of the most probable class per row.
template <class Real>
std::vector<int> argmax_rows(const TensorT<Real>& probs) {
  require(probs.shape.size() == 2, "argmax_rows: expected [batch, classes]");
  std::vector<int> out(static_cast<std::size_t>(probs.shape[0]));
  for (int i = 0; i < probs.shape[0]; ++i) {
    const Real* p = probs.sample(i);
    int best = 0;
    for (int c = 1; c < probs.shape[1]; ++c)
      if (p[c] > p[best]) best = c;
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace audioatk::nn
