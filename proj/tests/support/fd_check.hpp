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

// Central-finite-difference oracle for network gradients, instantiated in
// double precision where the 1e-4 relative tolerance is numerically
// meaningful. Inputs are regenerated until they sit clear of ReLU kinks and
// max-pool ties, which central differences cannot straddle.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "audioatk/common/rng.hpp"
#include "audioatk/nn/loss.hpp"
#include "audioatk/nn/network.hpp"

namespace audioatk::test {

using DNet = nn::NetworkT<double>;
using DTensor = nn::TensorT<double>;

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-4;
inline constexpr double kFdAbsFloor = 1e-6;
inline constexpr std::uint64_t kFdDropoutSeed = 0xD0D0;

inline double fd_loss(DNet& net, const DTensor& x, const std::vector<int>& y) {
  net.seed_rng(kFdDropoutSeed);  // identical dropout masks per evaluation
  auto probs = net.forward(x);
  return nn::cross_entropy(probs, y).loss;
}

struct FdReport {
  int checked = 0;
  int failures = 0;
  double worst_rel = 0.0;
  std::string first_failure;
};

inline void fd_compare(double analytic, double fd, const std::string& what, FdReport& rep) {
  ++rep.checked;
  const double err = std::abs(analytic - fd);
  const double scale = std::max(std::abs(analytic), std::abs(fd));
  const double rel = err / std::max(scale, 1e-300);
  if (err > kFdAbsFloor && rel > kFdRelTol) {
    ++rep.failures;
    if (rep.first_failure.empty())
      rep.first_failure = what + ": analytic " + std::to_string(analytic) + " vs fd " +
                          std::to_string(fd);
  }
  if (err > kFdAbsFloor) rep.worst_rel = std::max(rep.worst_rel, rel);
}

/// Checks every parameter gradient (strided when a layer is large) and every
/// input gradient against central differences.
inline FdReport fd_check_network(DNet& net, DTensor& x, const std::vector<int>& y,
                                 std::size_t max_per_tensor = 64) {
  FdReport rep;
  net.set_mode(nn::Mode::Train);
  net.seed_rng(kFdDropoutSeed);
  auto probs = net.forward(x);
  auto ce = nn::cross_entropy(probs, y);
  net.zero_grads();
  net.backward_from_logits(ce.logit_grad);
  const DTensor gin = net.input_grad();

  // Frozen layers carry no analytic parameter grads by contract, so only
  // trainable parameters face the finite-difference oracle. (Their input
  // gradient propagation is still covered by the input-grad block below.)
  std::vector<DTensor*> params;
  for (int li = 0; li < net.num_layers(); ++li) {
    if (!net.layer(li).trainable) continue;
    for (auto* p : net.layer(li).params()) params.push_back(p);
  }
  std::vector<std::vector<double>> analytic;
  for (auto* p : params) analytic.push_back(p->grad.empty() ? std::vector<double>(p->size(), 0.0) : p->grad);

  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    DTensor& p = *params[pi];
    const std::size_t stride = std::max<std::size_t>(1, p.size() / max_per_tensor);
    for (std::size_t i = 0; i < p.size(); i += stride) {
      const double save = p.data[i];
      p.data[i] = save + kFdStep;
      const double lp = fd_loss(net, x, y);
      p.data[i] = save - kFdStep;
      const double lm = fd_loss(net, x, y);
      p.data[i] = save;
      fd_compare(analytic[pi][i], (lp - lm) / (2 * kFdStep),
                 "param " + std::to_string(pi) + "[" + std::to_string(i) + "]", rep);
    }
  }
  const std::size_t stride = std::max<std::size_t>(1, x.size() / (2 * max_per_tensor));
  for (std::size_t i = 0; i < x.size(); i += stride) {
    const double save = x.data[i];
    x.data[i] = save + kFdStep;
    const double lp = fd_loss(net, x, y);
    x.data[i] = save - kFdStep;
    const double lm = fd_loss(net, x, y);
    x.data[i] = save;
    fd_compare(gin.data[i], (lp - lm) / (2 * kFdStep), "input[" + std::to_string(i) + "]", rep);
  }
  return rep;
}

/// Random small architecture covering every layer kind across the set of
/// generated nets. 2D nets when `two_d`, else Conv1D chains.
inline DNet random_tiny_net(Rng& rng, bool two_d, nn::Shape& input_shape, int n_classes) {
  std::vector<std::unique_ptr<nn::LayerT<double>>> ls;
  if (two_d) {
    const int h = 7 + static_cast<int>(rng.below(4));
    const int w = 7 + static_cast<int>(rng.below(4));
    const int c = 1 + static_cast<int>(rng.below(2));
    input_shape = {h, w, c};
    const int f1 = 2 + static_cast<int>(rng.below(3));
    ls.push_back(std::make_unique<nn::Conv2DT<double>>(c, f1, 3, 3, 1, 1));
    if (rng.bernoulli(0.5)) ls.push_back(std::make_unique<nn::ReLUT<double>>());
    else ls.push_back(std::make_unique<nn::LeakyReLUT<double>>(0.01f));
    ls.push_back(std::make_unique<nn::BatchNormT<double>>(f1));
    ls.push_back(std::make_unique<nn::MaxPool2DT<double>>(2, 2));
    ls.push_back(std::make_unique<nn::FlattenT<double>>());
    const int flat = ((h - 2) / 2) * ((w - 2) / 2) * f1;
    const int hidden = 4 + static_cast<int>(rng.below(5));
    ls.push_back(std::make_unique<nn::DenseT<double>>(flat, hidden));
    ls.push_back(std::make_unique<nn::ReLUT<double>>());
    ls.push_back(std::make_unique<nn::DropoutT<double>>(0.4f));
    ls.push_back(std::make_unique<nn::DenseT<double>>(hidden, n_classes));
    ls.push_back(std::make_unique<nn::SoftmaxT<double>>());
  } else {
    const int len = 40 + static_cast<int>(rng.below(25));
    const int c = 1 + static_cast<int>(rng.below(2));
    input_shape = {len, c};
    const int f1 = 2 + static_cast<int>(rng.below(3));
    const int k1 = 5 + static_cast<int>(rng.below(4));
    auto conv0 = std::make_unique<nn::Conv1DT<double>>(c, f1, k1, 2);
    const bool frozen = rng.bernoulli(0.3);  // exercise frozen-layer propagation
    conv0->trainable = !frozen;
    int l = (len - k1) / 2 + 1;
    ls.push_back(std::move(conv0));
    ls.push_back(std::make_unique<nn::LeakyReLUT<double>>(0.01f));
    ls.push_back(std::make_unique<nn::AvgPool1DT<double>>(2));
    l = l / 2;
    const int f2 = 2 + static_cast<int>(rng.below(3));
    ls.push_back(std::make_unique<nn::Conv1DT<double>>(f1, f2, 3, 1));
    l = l - 3 + 1;
    ls.push_back(std::make_unique<nn::BatchNormT<double>>(f2));
    ls.push_back(std::make_unique<nn::MaxPool1DT<double>>(2, 2));
    l = (l - 2) / 2 + 1;
    ls.push_back(std::make_unique<nn::FlattenT<double>>());
    ls.push_back(std::make_unique<nn::DenseT<double>>(l * f2, n_classes));
    ls.push_back(std::make_unique<nn::SoftmaxT<double>>());
  }
  DNet net(input_shape, std::move(ls));
  net.init_params(rng.next_u64());
  return net;
}

/// Distance of every ReLU/LeakyReLU pre-activation and max-pool margin from
/// the kink; FD needs all of them to exceed a few FD steps.
inline double kink_margin(DNet& net, const DTensor& x) {
  net.set_mode(nn::Mode::Train);
  net.seed_rng(kFdDropoutSeed);
  (void)net.forward(x);
  // Re-run layer by layer to inspect pre-activations.
  double margin = 1e30;
  DTensor cur = x;
  Rng rng(kFdDropoutSeed);
  nn::TensorT<double> next;
  for (int i = 0; i < net.num_layers(); ++i) {
    auto& l = net.layer(i);
    if (l.kind() == nn::LayerKind::ReLU || l.kind() == nn::LayerKind::LeakyReLU) {
      for (double v : cur.data) margin = std::min(margin, std::abs(v));
    }
    if (l.kind() == nn::LayerKind::MaxPool2D || l.kind() == nn::LayerKind::MaxPool1D) {
      const auto hyper = l.int_hyper();  // {window, stride}
      const int win = hyper[0], stride = hyper[1];
      const bool is2d = l.kind() == nn::LayerKind::MaxPool2D;
      const int ch = cur.shape.back();
      const int h = cur.shape[1];
      const int w = is2d ? cur.shape[2] : 1;
      const int oh = (h - win) / stride + 1;
      const int ow = is2d ? (w - win) / stride + 1 : 1;
      for (int n = 0; n < cur.batch(); ++n) {
        const double* s = cur.sample(n);
        for (int oy = 0; oy < oh; ++oy)
          for (int ox = 0; ox < ow; ++ox)
            for (int c = 0; c < ch; ++c) {
              double best = -1e300, second = -1e300;
              for (int wy = 0; wy < win; ++wy)
                for (int wx = 0; wx < (is2d ? win : 1); ++wx) {
                  const std::size_t idx = is2d
                      ? (static_cast<std::size_t>(oy) * stride + wy) * (static_cast<std::size_t>(w) * ch) +
                            (static_cast<std::size_t>(ox) * stride + wx) * ch + c
                      : (static_cast<std::size_t>(oy) * stride + wy) * ch + c;
                  const double v = s[idx];
                  if (v > best) {
                    second = best;
                    best = v;
                  } else if (v > second) {
                    second = v;
                  }
                }
              if (second > -1e299) margin = std::min(margin, best - second);
            }
      }
    }
    l.forward(cur, next, nn::Mode::Train, rng);
    std::swap(cur, next);
  }
  return margin;
}

struct TinyNetCase {
  DNet net;
  DTensor x;
  std::vector<int> labels;
};

/// Generates a tiny net plus an input batch whose kink margins are safe for
/// central differences (deterministically reseeded until they are).
inline TinyNetCase make_fd_case(std::uint64_t seed, bool two_d, int batch = 3, int n_classes = 4) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + attempt * 0x9e37ULL);
    nn::Shape in_shape;
    DNet net = random_tiny_net(rng, two_d, in_shape, n_classes);
    DTensor x(nn::batched_shape(batch, in_shape));
    for (auto& v : x.data) v = rng.uniform(-1.0, 1.0);
    std::vector<int> y(static_cast<std::size_t>(batch));
    for (auto& v : y) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
    if (kink_margin(net, x) > 50 * kFdStep)
      return {std::move(net), std::move(x), std::move(y)};
  }
}

}  // namespace audioatk::test
