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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "audioatk/nn/layers.hpp"

namespace audioatk::nn {

/// Fixed sequential layer stack. Shapes are validated once at construction
/// with a symbolic pass; the recorded trace doubles as the architecture
/// table for tests and tools.
template <class Real>
class NetworkT {
public:
  NetworkT(Shape input_shape, std::vector<std::unique_ptr<LayerT<Real>>> layers,
           std::uint64_t seed = 0)
      : layers_(std::move(layers)), rng_(seed) {
    require(!layers_.empty(), "Network needs at least one layer");
    trace_.push_back(std::move(input_shape));
    for (auto& l : layers_) trace_.push_back(l->output_shape(trace_.back()));
    acts_.resize(layers_.size() + 1);
  }

  int num_layers() const { return static_cast<int>(layers_.size()); }
  LayerT<Real>& layer(int i) { return *layers_[static_cast<std::size_t>(i)]; }
  const LayerT<Real>& layer(int i) const { return *layers_[static_cast<std::size_t>(i)]; }

  const Shape& input_shape() const { return trace_.front(); }
  const Shape& output_shape() const { return trace_.back(); }
  /// trace()[0] is the input shape; trace()[i+1] the output of layer i.
  const std::vector<Shape>& trace() const { return trace_; }

  Mode mode() const { return mode_; }
  void set_mode(Mode m) { mode_ = m; }

  void seed_rng(std::uint64_t seed) { rng_ = Rng(seed); }

  /// Per-layer finite checks after forward/backward (slow; meant for tests).
  void set_finite_checks(bool on) { finite_checks_ = on; }

  void init_params(std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      Rng layer_rng = rng.fork(i + 1);
      layers_[i]->init_params(layer_rng);
    }
  }

  TensorT<Real> forward(const TensorT<Real>& batch) { return forward_from(0, batch); }

  /// Runs layers [first, end); used with cached frozen-prefix features.
  TensorT<Real> forward_from(int first, const TensorT<Real>& batch) {
    require(first >= 0 && first < num_layers(), "forward_from: layer index out of range");
    const Shape expect = batched_shape(batch.batch(), trace_[static_cast<std::size_t>(first)]);
    require(batch.shape == expect,
            "Network input shape mismatch: got " + shape_str(batch.shape) + ", expected " +
                shape_str(expect));
    first_layer_ = first;
    acts_[static_cast<std::size_t>(first)].shape = batch.shape;
    acts_[static_cast<std::size_t>(first)].data = batch.data;
    for (int i = first; i < num_layers(); ++i) {
      layers_[static_cast<std::size_t>(i)]->forward(acts_[static_cast<std::size_t>(i)],
                                                    acts_[static_cast<std::size_t>(i) + 1], mode_, rng_);
      if (finite_checks_)
        ensure(acts_[static_cast<std::size_t>(i) + 1].all_finite(),
               "non-finite activation after layer " + layers_[static_cast<std::size_t>(i)]->name());
    }
    forwarded_ = true;
    ensure(acts_.back().all_finite(), "non-finite network output");
    return acts_.back();
  }

  /// Runs only layers [0, count) and returns the activation after them.
  /// Leaves the network without a pending forward, so call forward() before
  /// any backward().
  TensorT<Real> forward_prefix(int count, const TensorT<Real>& batch) {
    require(count >= 0 && count <= num_layers(), "forward_prefix: layer count out of range");
    const Shape expect = batched_shape(batch.batch(), trace_[0]);
    require(batch.shape == expect,
            "Network input shape mismatch: got " + shape_str(batch.shape) + ", expected " +
                shape_str(expect));
    acts_[0].shape = batch.shape;
    acts_[0].data = batch.data;
    for (int i = 0; i < count; ++i)
      layers_[static_cast<std::size_t>(i)]->forward(acts_[static_cast<std::size_t>(i)],
                                                    acts_[static_cast<std::size_t>(i) + 1], mode_, rng_);
    forwarded_ = false;
    return acts_[static_cast<std::size_t>(count)];
  }

  /// Gradient w.r.t. the network output (e.g. class probabilities). Fills
  /// parameter grads (accumulating) and the input gradient.
  void backward(const TensorT<Real>& dout, bool param_grads = true) {
    backward_impl(num_layers() - 1, dout, param_grads);
  }

  /// Gradient seeded below the final softmax, as produced by cross_entropy.
  void backward_from_logits(const TensorT<Real>& dlogits, bool param_grads = true) {
    require(layers_.back()->kind() == LayerKind::Softmax,
            "backward_from_logits requires a softmax output layer");
    backward_impl(num_layers() - 2, dlogits, param_grads);
  }

  /// Gradient w.r.t. the tensor passed to the last forward call.
  const TensorT<Real>& input_grad() const { return input_grad_; }

  /// Output of the last forward (class probabilities).
  const TensorT<Real>& last_output() const { return acts_.back(); }

  std::vector<TensorT<Real>*> params() {
    std::vector<TensorT<Real>*> out;
    for (auto& l : layers_)
      for (auto* p : l->params()) out.push_back(p);
    return out;
  }

  std::vector<TensorT<Real>*> trainable_params() {
    std::vector<TensorT<Real>*> out;
    for (auto& l : layers_) {
      if (!l->trainable) continue;
      for (auto* p : l->params()) out.push_back(p);
    }
    return out;
  }

  std::vector<TensorT<Real>*> state_tensors() {
    std::vector<TensorT<Real>*> out;
    for (auto& l : layers_)
      for (auto* s : l->state()) out.push_back(s);
    return out;
  }

  void zero_grads() {
    for (auto* p : params()) p->zero_grad();
  }

  std::string describe() const {
    std::string out = "input " + shape_str(trace_[0]) + "\n";
    for (int i = 0; i < num_layers(); ++i)
      out += layers_[static_cast<std::size_t>(i)]->name() + " -> " +
             shape_str(trace_[static_cast<std::size_t>(i) + 1]) + "\n";
    return out;
  }

private:
  void backward_impl(int top, const TensorT<Real>& dtop, bool param_grads) {
    require(forwarded_, "backward called before forward");
    require(top >= first_layer_, "backward range does not cover the forward range");
    require(dtop.shape == acts_[static_cast<std::size_t>(top) + 1].shape,
            "loss gradient shape " + shape_str(dtop.shape) + " does not match activation " +
                shape_str(acts_[static_cast<std::size_t>(top) + 1].shape));
    TensorT<Real>* dout = &gbuf_a_;
    TensorT<Real>* din = &gbuf_b_;
    dout->shape = dtop.shape;
    dout->data = dtop.data;
    for (int i = top; i >= first_layer_; --i) {
      layers_[static_cast<std::size_t>(i)]->backward(acts_[static_cast<std::size_t>(i)],
                                                     acts_[static_cast<std::size_t>(i) + 1], *dout,
                                                     *din, param_grads && layers_[static_cast<std::size_t>(i)]->trainable);
      if (finite_checks_)
        ensure(din->all_finite(),
               "non-finite gradient below layer " + layers_[static_cast<std::size_t>(i)]->name());
      std::swap(dout, din);
    }
    input_grad_.shape = dout->shape;
    input_grad_.data = dout->data;
    ensure(input_grad_.all_finite(), "non-finite input gradient");
  }

  std::vector<std::unique_ptr<LayerT<Real>>> layers_;
  std::vector<Shape> trace_;
  std::vector<TensorT<Real>> acts_;
  TensorT<Real> gbuf_a_, gbuf_b_, input_grad_;
  Rng rng_;
  Mode mode_ = Mode::Train;
  bool forwarded_ = false;
  bool finite_checks_ = false;
  int first_layer_ = 0;
};

using Network = NetworkT<float>;

}  // namespace audioatk::nn
