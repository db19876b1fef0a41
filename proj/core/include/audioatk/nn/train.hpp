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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "audioatk/nn/checkpoint.hpp"
#include "audioatk/nn/loss.hpp"
#include "audioatk/nn/network.hpp"
#include "audioatk/nn/optimizer.hpp"

namespace audioatk::nn {

/// Labelled examples pulled one at a time, so datasets larger than memory
/// can stream from a cache directory.
class ExampleSource {
public:
  virtual ~ExampleSource() = default;
  virtual std::size_t size() const = 0;
  virtual int label(std::size_t i) const = 0;
  virtual Shape example_shape() const = 0;
  virtual void fetch(std::size_t i, Tensor& out) const = 0;  // per-sample shape
};

class MemorySource final : public ExampleSource {
public:
  MemorySource() = default;

  void add(Tensor x, int label) {
    if (xs_.empty()) shape_ = x.shape;
    require(x.shape == shape_, "MemorySource: inconsistent example shapes");
    xs_.push_back(std::move(x));
    labels_.push_back(label);
  }

  std::size_t size() const override { return xs_.size(); }
  int label(std::size_t i) const override { return labels_[i]; }
  Shape example_shape() const override { return shape_; }
  void fetch(std::size_t i, Tensor& out) const override {
    out.shape = xs_[i].shape;
    out.data = xs_[i].data;
  }

private:
  std::vector<Tensor> xs_;
  std::vector<int> labels_;
  Shape shape_;
};

struct TrainConfig {
  int batch = 50;
  int max_epochs = 100;
  int patience = 10;          // early stopping: epochs without val-loss improvement
  double val_fraction = 0.2;  // carved from the training set, stratified
  std::uint64_t seed = 0;
  std::string optimizer = "adam";  // "adam" | "sgd"
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  // Frozen deterministic leading layers are evaluated once per example and
  // cached when the features fit the budget.
  bool cache_frozen_prefix = true;
  std::size_t prefix_cache_mb = 512;
  // Best-epoch snapshot location: in memory by default, or a scratch file
  // for models whose parameters are too large to duplicate in RAM.
  bool snapshot_in_memory = true;
  std::filesystem::path snapshot_path;
  bool verbose = false;
};

struct EpochStats {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  int best_epoch = -1;  // index into epochs
  double best_val_loss = 0.0;
  int cached_prefix_layers = 0;
};

namespace detail {

// Longest leading run of layers that are fixed per-sample maps during
// training: mode-invariant and without updatable parameters.
template <class Real>
int frozen_prefix_len(NetworkT<Real>& net) {
  int p = 0;
  while (p < net.num_layers()) {
    auto& l = net.layer(p);
    const bool fixed = l.mode_invariant() && (l.params().empty() || !l.trainable);
    if (!fixed) break;
    ++p;
  }
  return p == net.num_layers() ? 0 : p;  // keep at least one live layer
}

inline void copy_into_batch(Tensor& batch, int slot, const Tensor& sample) {
  std::copy(sample.data.begin(), sample.data.end(),
            batch.data.begin() + static_cast<std::ptrdiff_t>(batch.sample_size() * static_cast<std::size_t>(slot)));
}

}  // namespace detail

/// Trains `net` with softmax/cross-entropy, early stopping on validation
/// loss, and returns per-epoch history. The network is left holding the
/// best-validation snapshot. Deterministic for a fixed config and seed.
inline TrainHistory train(Network& net, const ExampleSource& data, const TrainConfig& cfg) {
  require(data.size() > 0, "train: empty dataset");
  require(cfg.batch > 0 && cfg.max_epochs > 0, "train: batch and max_epochs must be positive");
  require(cfg.val_fraction >= 0.0 && cfg.val_fraction < 1.0, "train: val_fraction in [0, 1)");
  require(cfg.optimizer == "adam" || cfg.optimizer == "sgd",
          "train: unknown optimizer '" + cfg.optimizer + "'");
  require(cfg.snapshot_in_memory || !cfg.snapshot_path.empty(),
          "train: disk snapshots need a snapshot_path");
  const int n_classes = net.output_shape().back();
  for (std::size_t i = 0; i < data.size(); ++i)
    require(data.label(i) >= 0 && data.label(i) < n_classes,
            "train: label " + std::to_string(data.label(i)) + " outside [0, " +
                std::to_string(n_classes) + ")");

  Rng rng(cfg.seed);
  net.seed_rng(rng.fork(0xd0).next_u64());
  net.set_mode(Mode::Train);

  // Stratified validation split.
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < data.size(); ++i) by_label[data.label(i)].push_back(i);
  std::vector<std::size_t> train_idx, val_idx;
  for (auto& [label, idxs] : by_label) {
    Rng r = rng.fork(0x5a11 + static_cast<std::uint64_t>(label));
    r.shuffle(idxs);
    const std::size_t n_val = static_cast<std::size_t>(cfg.val_fraction * static_cast<double>(idxs.size()));
    for (std::size_t k = 0; k < idxs.size(); ++k)
      (k < n_val ? val_idx : train_idx).push_back(idxs[k]);
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  const bool val_mirrors_train = val_idx.empty();
  if (val_mirrors_train) val_idx = train_idx;

  // Frozen-prefix feature cache.
  int prefix = cfg.cache_frozen_prefix ? detail::frozen_prefix_len(net) : 0;
  std::vector<Tensor> feats;
  Shape feat_shape = net.input_shape();
  if (prefix > 0) {
    feat_shape = net.trace()[static_cast<std::size_t>(prefix)];
    const std::size_t bytes = numel(feat_shape) * sizeof(float) * data.size();
    if (bytes > (cfg.prefix_cache_mb << 20)) {
      prefix = 0;
      feat_shape = net.input_shape();
    }
  }
  if (prefix > 0) {
    feats.resize(data.size());
    Tensor sample, one;
    for (std::size_t i = 0; i < data.size(); ++i) {
      data.fetch(i, sample);
      one.resize(batched_shape(1, sample.shape));
      detail::copy_into_batch(one, 0, sample);
      Tensor f = net.forward_prefix(prefix, one);
      feats[i].shape = feat_shape;
      feats[i].data = f.data;
    }
  }

  auto run_batch_forward = [&](const std::vector<std::size_t>& idxs, std::size_t lo, std::size_t hi,
                               Tensor& batch, std::vector<int>& labels) {
    const int bsz = static_cast<int>(hi - lo);
    batch.resize(batched_shape(bsz, feat_shape));
    labels.resize(static_cast<std::size_t>(bsz));
    Tensor sample;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::size_t i = idxs[k];
      if (prefix > 0) {
        detail::copy_into_batch(batch, static_cast<int>(k - lo), feats[i]);
      } else {
        data.fetch(i, sample);
        detail::copy_into_batch(batch, static_cast<int>(k - lo), sample);
      }
      labels[k - lo] = data.label(i);
    }
    return net.forward_from(prefix, batch);
  };

  // Optimizer state.
  AdamState adam;
  auto trainables = net.trainable_params();

  // Snapshot plumbing.
  std::vector<std::vector<float>> best_params, best_state;
  auto take_snapshot = [&] {
    if (cfg.snapshot_in_memory) {
      best_params.clear();
      best_state.clear();
      for (auto* p : net.params()) best_params.push_back(p->data);
      for (auto* s : net.state_tensors()) best_state.push_back(s->data);
    } else {
      save_network(cfg.snapshot_path, net);
    }
  };
  auto restore_snapshot = [&] {
    if (cfg.snapshot_in_memory) {
      if (best_params.empty()) return;
      std::size_t i = 0;
      for (auto* p : net.params()) p->data = best_params[i++];
      i = 0;
      for (auto* s : net.state_tensors()) s->data = best_state[i++];
    } else if (std::filesystem::exists(cfg.snapshot_path)) {
      Network best = load_network(cfg.snapshot_path);
      auto src = best.params();
      auto dst = net.params();
      ensure(src.size() == dst.size(), "train: snapshot parameter count changed");
      for (std::size_t i = 0; i < src.size(); ++i) dst[i]->data = src[i]->data;
      auto ssrc = best.state_tensors();
      auto sdst = net.state_tensors();
      for (std::size_t i = 0; i < ssrc.size(); ++i) sdst[i]->data = ssrc[i]->data;
    }
  };

  TrainHistory hist;
  hist.cached_prefix_layers = prefix;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<std::size_t> order = train_idx;
  Tensor batch;
  std::vector<int> labels;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    Rng erng = rng.fork(0xe90c + static_cast<std::uint64_t>(epoch));
    order = train_idx;
    erng.shuffle(order);

    net.set_mode(Mode::Train);
    double loss_sum = 0.0;
    std::size_t correct = 0, seen = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t hi = std::min(order.size(), lo + static_cast<std::size_t>(cfg.batch));
      Tensor probs = run_batch_forward(order, lo, hi, batch, labels);
      auto ce = cross_entropy(probs, labels);
      loss_sum += ce.loss * static_cast<double>(hi - lo);
      const auto preds = argmax_rows(probs);
      for (std::size_t k = 0; k < preds.size(); ++k)
        if (preds[k] == labels[k]) ++correct;
      seen += hi - lo;

      net.zero_grads();
      net.backward_from_logits(ce.logit_grad);
      if (cfg.optimizer == "adam")
        adam_step<float>(trainables, adam, static_cast<float>(cfg.lr), static_cast<float>(cfg.beta1),
                         static_cast<float>(cfg.beta2), static_cast<float>(cfg.adam_eps));
      else
        sgd_step<float>(trainables, static_cast<float>(cfg.lr));
    }

    net.set_mode(Mode::Eval);
    double vloss_sum = 0.0;
    std::size_t vcorrect = 0, vseen = 0;
    for (std::size_t lo = 0; lo < val_idx.size(); lo += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t hi = std::min(val_idx.size(), lo + static_cast<std::size_t>(cfg.batch));
      Tensor probs = run_batch_forward(val_idx, lo, hi, batch, labels);
      auto ce = cross_entropy(probs, labels);
      vloss_sum += ce.loss * static_cast<double>(hi - lo);
      const auto preds = argmax_rows(probs);
      for (std::size_t k = 0; k < preds.size(); ++k)
        if (preds[k] == labels[k]) ++vcorrect;
      vseen += hi - lo;
    }

    EpochStats st;
    st.train_loss = loss_sum / static_cast<double>(seen);
    st.train_accuracy = static_cast<double>(correct) / static_cast<double>(seen);
    st.val_loss = vloss_sum / static_cast<double>(vseen);
    st.val_accuracy = static_cast<double>(vcorrect) / static_cast<double>(vseen);
    hist.epochs.push_back(st);
    if (cfg.verbose)
      std::fprintf(stderr, "epoch %3d  train %.4f/%.3f  val %.4f/%.3f\n", epoch + 1, st.train_loss,
                   st.train_accuracy, st.val_loss, st.val_accuracy);

    if (st.val_loss < best_val) {
      best_val = st.val_loss;
      hist.best_epoch = epoch;
      hist.best_val_loss = best_val;
      since_best = 0;
      take_snapshot();
    } else {
      ++since_best;
      if (since_best > cfg.patience) break;
    }
  }

  restore_snapshot();
  net.set_mode(Mode::Eval);
  if (!cfg.snapshot_in_memory && std::filesystem::exists(cfg.snapshot_path))
    std::filesystem::remove(cfg.snapshot_path);
  return hist;
}

}  // namespace audioatk::nn
