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
#include <string>
#include <vector>

#include "audioatk/nn/tensor.hpp"

namespace audioatk::nn {

template <class Real>
struct AdamStateT {
  std::vector<std::vector<Real>> m, v;
  long t = 0;

  void init(const std::vector<TensorT<Real>*>& params) {
    m.clear();
    v.clear();
    for (auto* p : params) {
      m.emplace_back(p->size(), Real(0));
      v.emplace_back(p->size(), Real(0));
    }
    t = 0;
  }

  bool matches(const std::vector<TensorT<Real>*>& params) const {
    if (m.size() != params.size()) return false;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i].size() != params[i]->size()) return false;
    return true;
  }
};

using AdamState = AdamStateT<float>;

/// One bias-corrected Adam update over `params` (their .grad slots must be
/// populated). Callers pass only trainable parameters; frozen layers never
/// reach the optimizer.
template <class Real>
void adam_step(const std::vector<TensorT<Real>*>& params, AdamStateT<Real>& state, Real lr,
               Real beta1 = Real(0.9), Real beta2 = Real(0.999), Real eps = Real(1e-8)) {
  if (!state.matches(params)) state.init(params);
  ++state.t;
  const double bc1 = 1.0 - std::pow(static_cast<double>(beta1), static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(static_cast<double>(beta2), static_cast<double>(state.t));
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    TensorT<Real>& p = *params[pi];
    require(p.has_grad(), "adam_step: parameter " + std::to_string(pi) + " has no gradient");
    Real* m = state.m[pi].data();
    Real* v = state.v[pi].data();
    const Real* g = p.grad.data();
    Real* w = p.data.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1 * m[i] + (Real(1) - beta1) * g[i];
      v[i] = beta2 * v[i] + (Real(1) - beta2) * g[i] * g[i];
      const double mhat = static_cast<double>(m[i]) / bc1;
      const double vhat = static_cast<double>(v[i]) / bc2;
      w[i] -= static_cast<Real>(static_cast<double>(lr) * mhat / (std::sqrt(vhat) + static_cast<double>(eps)));
    }
  }
}

/// Plain stochastic gradient descent. Stateless, so even very wide layers
/// cost no extra memory; the toy-scale STFT-input 2D model trains with this.
template <class Real>
void sgd_step(const std::vector<TensorT<Real>*>& params, Real lr) {
  for (auto* pp : params) {
    TensorT<Real>& p = *pp;
    require(p.has_grad(), "sgd_step: parameter has no gradient");
    const Real* g = p.grad.data();
    Real* w = p.data.data();
    for (std::size_t i = 0; i < p.size(); ++i) w[i] -= lr * g[i];
  }
}

}  // namespace audioatk::nn
