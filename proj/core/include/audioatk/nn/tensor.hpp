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
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "audioatk/common/errors.hpp"

namespace audioatk::nn {

using Shape = std::vector<int>;

inline std::size_t numel(const Shape& s) {
  std::size_t n = 1;
  for (int d : s) n *= static_cast<std::size_t>(d);
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

/// N-dimensional row-major array with an optional same-shape gradient slot.
/// Instantiated with float for the product path and double for the
/// finite-difference test oracles.
template <class Real>
struct TensorT {
  Shape shape;
  std::vector<Real> data;
  std::vector<Real> grad;  // empty until ensure_grad()

  TensorT() = default;
  explicit TensorT(Shape s) : shape(std::move(s)) { data.assign(numel(shape), Real(0)); }

  static TensorT zeros(Shape s) { return TensorT(std::move(s)); }

  std::size_t size() const { return data.size(); }

  void resize(const Shape& s) {
    shape = s;
    data.assign(numel(s), Real(0));
  }

  bool has_grad() const { return !grad.empty(); }

  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), Real(0));
  }

  void zero_grad() {
    if (has_grad()) std::fill(grad.begin(), grad.end(), Real(0));
  }

  void check() const {
    ensure(numel(shape) == data.size(), "tensor data does not match shape " + shape_str(shape));
    ensure(grad.empty() || grad.size() == data.size(),
           "tensor grad does not match shape " + shape_str(shape));
  }

  bool all_finite() const {
    for (Real v : data)
      if (!std::isfinite(static_cast<double>(v))) return false;
    for (Real v : grad)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  /// Leading (batch) dimension.
  int batch() const { return shape.empty() ? 0 : shape[0]; }

  /// Elements per batch entry.
  std::size_t sample_size() const { return shape.empty() ? 0 : data.size() / static_cast<std::size_t>(shape[0]); }

  Real* sample(int i) { return data.data() + static_cast<std::size_t>(i) * sample_size(); }
  const Real* sample(int i) const { return data.data() + static_cast<std::size_t>(i) * sample_size(); }
};

using Tensor = TensorT<float>;

/// Shape of one batch entry: drops the leading dimension.
inline Shape sample_shape(const Shape& batched) {
  return Shape(batched.begin() + 1, batched.end());
}

/// Prepends a batch dimension.
inline Shape batched_shape(int n, const Shape& per_sample) {
  Shape s;
  s.reserve(per_sample.size() + 1);
  s.push_back(n);
  s.insert(s.end(), per_sample.begin(), per_sample.end());
  return s;
}

}  // namespace audioatk::nn
