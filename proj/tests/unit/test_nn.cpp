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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "audioatk/nn/checkpoint.hpp"
#include "audioatk/nn/gemm.hpp"
#include "audioatk/nn/loss.hpp"
#include "audioatk/nn/network.hpp"
#include "audioatk/nn/optimizer.hpp"
#include "audioatk/nn/train.hpp"
#include "fd_check.hpp"

using namespace audioatk;
using namespace audioatk::nn;

namespace {

// Independent triple-loop reference for the GEMM kernels.
template <class Real>
void slow_matmul(int M, int N, int K, const Real* A, const Real* B, Real* C) {
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (int k = 0; k < K; ++k)
        acc += static_cast<double>(A[static_cast<std::size_t>(i) * K + k]) *
               B[static_cast<std::size_t>(k) * N + j];
      C[static_cast<std::size_t>(i) * N + j] = static_cast<Real>(acc);
    }
}

Network tiny_softmax_net(int in, int classes, std::uint64_t seed) {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<DenseT<float>>(in, classes));
  ls.push_back(std::make_unique<SoftmaxT<float>>());
  Network net(Shape{in}, std::move(ls));
  net.init_params(seed);
  return net;
}

}  // namespace

TEST_CASE("gemm variants agree with the reference matmul") {
  Rng rng(1);
  // the last two shapes land in the streamed small-batch and huge-C paths
  for (auto [M, N, K] : {std::tuple{37, 65, 41}, std::tuple{4, 130, 700}, std::tuple{130, 5, 9},
                         std::tuple{3, 520, 4000}, std::tuple{1500, 1500, 7}}) {
    std::vector<float> A(static_cast<std::size_t>(M) * K), B(static_cast<std::size_t>(K) * N);
    for (auto& v : A) v = static_cast<float>(rng.uniform(-1, 1));
    for (auto& v : B) v = static_cast<float>(rng.uniform(-1, 1));
    std::vector<float> want(static_cast<std::size_t>(M) * N), got(want.size(), 7.0f);
    slow_matmul(M, N, K, A.data(), B.data(), want.data());

    detail::gemm_nn(M, N, K, A.data(), K, B.data(), N, got.data(), N, false);
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-4));

    // nt: B passed in transposed layout [N x K]
    std::vector<float> Bt(static_cast<std::size_t>(N) * K);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < N; ++j)
        Bt[static_cast<std::size_t>(j) * K + k] = B[static_cast<std::size_t>(k) * N + j];
    std::fill(got.begin(), got.end(), 7.0f);
    detail::gemm_nt(M, N, K, A.data(), K, Bt.data(), K, got.data(), N, false);
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-4));

    // tn: A passed in transposed layout [K x M]
    std::vector<float> At(static_cast<std::size_t>(K) * M);
    for (int i = 0; i < M; ++i)
      for (int k = 0; k < K; ++k)
        At[static_cast<std::size_t>(k) * M + i] = A[static_cast<std::size_t>(i) * K + k];
    std::fill(got.begin(), got.end(), 7.0f);
    detail::gemm_tn(M, N, K, At.data(), M, B.data(), N, got.data(), N, false);
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-4));
  }
}

TEST_CASE("softmax rows are distributions; equal logits give uniform output") {
  Network net = tiny_softmax_net(6, 10, 3);
  // zero the dense layer so every logit is equal
  for (auto* p : net.params()) std::fill(p->data.begin(), p->data.end(), 0.0f);
  Tensor x(batched_shape(2, {6}));
  Rng rng(5);
  for (auto& v : x.data) v = static_cast<float>(rng.uniform(-2, 2));
  net.set_mode(Mode::Eval);
  const Tensor probs = net.forward(x);
  for (int n = 0; n < 2; ++n) {
    double sum = 0.0;
    for (int c = 0; c < 10; ++c) {
      CHECK(probs.sample(n)[c] == doctest::Approx(0.1));
      sum += probs.sample(n)[c];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("forward is deterministic in eval mode: identical rows for identical inputs") {
  Network net = tiny_softmax_net(8, 4, 11);
  Tensor x(batched_shape(2, {8}));
  Rng rng(6);
  for (int i = 0; i < 8; ++i) {
    const float v = static_cast<float>(rng.uniform(-1, 1));
    x.data[static_cast<std::size_t>(i)] = v;
    x.data[static_cast<std::size_t>(8 + i)] = v;
  }
  net.set_mode(Mode::Eval);
  const Tensor probs = net.forward(x);
  for (int c = 0; c < 4; ++c) CHECK(probs.sample(0)[c] == probs.sample(1)[c]);
}

TEST_CASE("forward rejects mismatched input shapes, naming both") {
  Network net = tiny_softmax_net(8, 4, 1);
  Tensor x(batched_shape(2, {9}));
  CHECK_THROWS_WITH_AS(net.forward(x), doctest::Contains("(2, 9)"), std::invalid_argument);
}

TEST_CASE("backward before forward is rejected") {
  Network net = tiny_softmax_net(8, 4, 1);
  Tensor g(batched_shape(1, {4}));
  CHECK_THROWS_WITH_AS(net.backward(g), doctest::Contains("before forward"), std::invalid_argument);
}

TEST_CASE("single dense layer input gradient is W times the loss gradient") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  auto dense = std::make_unique<DenseT<float>>(3, 2);
  float* w = dense->weight().data.data();  // [3 x 2]
  const float W[6] = {1.0f, -2.0f, 0.5f, 3.0f, -1.0f, 0.25f};
  std::copy(W, W + 6, w);
  ls.push_back(std::move(dense));
  Network net(Shape{3}, std::move(ls));

  Tensor x(batched_shape(1, {3}));
  x.data = {1.0f, 2.0f, 3.0f};
  net.forward(x);
  Tensor g(batched_shape(1, {2}));
  g.data = {0.7f, -0.3f};
  net.backward(g);
  const auto& gin = net.input_grad();
  // dx = g . W^T
  CHECK(gin.data[0] == doctest::Approx(0.7 * 1.0 + -0.3 * -2.0));
  CHECK(gin.data[1] == doctest::Approx(0.7 * 0.5 + -0.3 * 3.0));
  CHECK(gin.data[2] == doctest::Approx(0.7 * -1.0 + -0.3 * 0.25));
}

TEST_CASE("relu blocks gradient at negative pre-activations") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<ReLUT<float>>());
  Network net(Shape{4}, std::move(ls));
  Tensor x(batched_shape(1, {4}));
  x.data = {-1.0f, 2.0f, -3.0f, 4.0f};
  net.forward(x);
  Tensor g(batched_shape(1, {4}));
  g.data = {1.0f, 1.0f, 1.0f, 1.0f};
  net.backward(g);
  const auto& gin = net.input_grad();
  CHECK(gin.data[0] == 0.0f);
  CHECK(gin.data[1] == 1.0f);
  CHECK(gin.data[2] == 0.0f);
  CHECK(gin.data[3] == 1.0f);
}

TEST_CASE("gradients match central finite differences on random tiny nets") {
  int nets = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (bool two_d : {true, false}) {
      auto cs = test::make_fd_case(seed * 101, two_d);
      const auto rep = test::fd_check_network(cs.net, cs.x, cs.labels);
      INFO("seed ", seed, " two_d ", two_d, " first failure: ", rep.first_failure);
      CHECK(rep.failures == 0);
      CHECK(rep.checked > 50);
      ++nets;
    }
  }
  CHECK(nets == 8);
}

TEST_CASE("frozen layers receive no parameter grads but propagate input grads") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  auto frozen = std::make_unique<DenseT<float>>(5, 5);
  frozen->trainable = false;
  ls.push_back(std::move(frozen));
  ls.push_back(std::make_unique<ReLUT<float>>());
  ls.push_back(std::make_unique<DenseT<float>>(5, 3));
  ls.push_back(std::make_unique<SoftmaxT<float>>());
  Network net(Shape{5}, std::move(ls));
  net.init_params(4);

  Tensor x(batched_shape(2, {5}));
  Rng rng(8);
  for (auto& v : x.data) v = static_cast<float>(rng.uniform(-1, 1));
  const Tensor probs = net.forward(x);
  auto ce = cross_entropy(probs, {0, 2});
  net.zero_grads();
  net.backward_from_logits(ce.logit_grad);

  auto frozen_params = net.layer(0).params();
  for (auto* p : frozen_params)
    for (float gv : p->grad) CHECK(gv == 0.0f);  // never accumulated
  auto live_params = net.layer(2).params();
  bool any_nonzero = false;
  for (auto* p : live_params)
    for (float gv : p->grad) any_nonzero = any_nonzero || gv != 0.0f;
  CHECK(any_nonzero);
  // input grad flows through the frozen layer
  bool in_nonzero = false;
  for (float gv : net.input_grad().data) in_nonzero = in_nonzero || gv != 0.0f;
  CHECK(in_nonzero);
}

TEST_CASE("cross entropy closed forms") {
  Tensor p(batched_shape(1, {10}));
  std::fill(p.data.begin(), p.data.end(), 0.0f);
  p.data[3] = 1.0f;
  CHECK(cross_entropy(p, {3}).loss == doctest::Approx(0.0));

  std::fill(p.data.begin(), p.data.end(), 0.1f);
  CHECK(cross_entropy(p, {7}).loss == doctest::Approx(std::log(10.0)).epsilon(1e-5));

  CHECK_THROWS_WITH_AS(cross_entropy(p, {10}), doctest::Contains("label 10"),
                       std::invalid_argument);
  CHECK_THROWS_AS(cross_entropy(p, {-1}), std::invalid_argument);
}

TEST_CASE("cross entropy logit gradient matches finite differences") {
  // Oracle: derivative of CE(softmax(logits)) w.r.t. logits.
  using D = double;
  TensorT<D> logits(batched_shape(2, {5}));
  Rng rng(10);
  for (auto& v : logits.data) v = rng.uniform(-2, 2);
  const std::vector<int> y{1, 4};

  auto softmax_ce = [&](const TensorT<D>& lg) {
    TensorT<D> probs(lg.shape);
    for (int n = 0; n < 2; ++n) {
      const D* in = lg.sample(n);
      D* out = probs.sample(n);
      D mx = in[0];
      for (int j = 1; j < 5; ++j) mx = std::max(mx, in[j]);
      double sum = 0;
      for (int j = 0; j < 5; ++j) {
        out[j] = std::exp(in[j] - mx);
        sum += out[j];
      }
      for (int j = 0; j < 5; ++j) out[j] /= sum;
    }
    return cross_entropy(probs, y);
  };

  const auto base = softmax_ce(logits);
  const double h = 1e-6;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const D save = logits.data[i];
    logits.data[i] = save + h;
    const double lp = softmax_ce(logits).loss;
    logits.data[i] = save - h;
    const double lm = softmax_ce(logits).loss;
    logits.data[i] = save;
    const double fd = (lp - lm) / (2 * h);
    CHECK(base.logit_grad.data[i] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("adam: zero gradient from a fresh state leaves parameters unchanged") {
  Tensor p({4});
  p.data = {1.0f, -2.0f, 3.0f, 0.5f};
  p.ensure_grad();
  AdamState st;
  adam_step<float>({&p}, st, 0.01f);  // grad is all zero
  CHECK(p.data == std::vector<float>{1.0f, -2.0f, 3.0f, 0.5f});
  for (float m : st.m[0]) CHECK(m == 0.0f);
}

TEST_CASE("adam: zero gradient decays charged moments") {
  Tensor p({4});
  p.data = {1.0f, -2.0f, 3.0f, 0.5f};
  p.ensure_grad();
  AdamState st;
  p.grad = {0.1f, -0.2f, 0.3f, 0.4f};
  adam_step<float>({&p}, st, 0.01f);
  const auto m_before = st.m[0];
  p.zero_grad();
  adam_step<float>({&p}, st, 0.01f);
  for (int i = 0; i < 4; ++i) {
    // m <- beta1 * m: magnitude shrinks while the sign persists
    CHECK(std::abs(st.m[0][static_cast<std::size_t>(i)]) <
          std::abs(m_before[static_cast<std::size_t>(i)]));
    CHECK(st.m[0][static_cast<std::size_t>(i)] * m_before[static_cast<std::size_t>(i)] > 0.0f);
  }
}

TEST_CASE("adam first step from zero state approximates a signed step") {
  // Oracle: closed form. With zero state, mhat = g, vhat = g^2, so the
  // update is -lr * g / (|g| + eps') = about -lr * sign(g).
  Tensor p({3});
  p.data = {0.0f, 0.0f, 0.0f};
  p.ensure_grad();
  p.grad = {0.5f, -2.0f, 1e-3f};
  AdamState st;
  const float lr = 0.01f;
  adam_step<float>({&p}, st, lr);
  for (int i = 0; i < 3; ++i) {
    const float g = (i == 0 ? 0.5f : i == 1 ? -2.0f : 1e-3f);
    CHECK(std::abs(p.data[static_cast<std::size_t>(i)]) <= lr * 1.001f);
    CHECK(p.data[static_cast<std::size_t>(i)] * g < 0.0f);  // opposite sign of gradient
    CHECK(std::abs(p.data[static_cast<std::size_t>(i)]) == doctest::Approx(lr).epsilon(1e-3));
  }
}

TEST_CASE("shape trace reproduces the 1D architecture table exactly") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<Conv1DT<float>>(1, 32, 512, 1));
  ls.push_back(std::make_unique<AvgPool1DT<float>>(8));
  ls.push_back(std::make_unique<Conv1DT<float>>(32, 16, 256, 2));
  ls.push_back(std::make_unique<AvgPool1DT<float>>(8));
  ls.push_back(std::make_unique<Conv1DT<float>>(16, 32, 64, 2));
  ls.push_back(std::make_unique<Conv1DT<float>>(32, 64, 32, 2));
  ls.push_back(std::make_unique<Conv1DT<float>>(64, 128, 16, 2));
  ls.push_back(std::make_unique<MaxPool1DT<float>>(2, 2));
  Network net(Shape{110250, 1}, std::move(ls));
  const auto& tr = net.trace();
  const int want[] = {110250, 109739, 13717, 6731, 841, 389, 179, 82, 41};
  REQUIRE(tr.size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(tr[static_cast<std::size_t>(i)][0] == want[i]);
}

TEST_CASE("network rejects layer stacks whose shapes do not compose") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<Conv2DT<float>>(1, 4, 3, 3, 1, 1));
  ls.push_back(std::make_unique<DenseT<float>>(10, 4));  // conv output is not flat
  CHECK_THROWS_AS(Network(Shape{8, 8, 1}, std::move(ls)), std::invalid_argument);
}

TEST_CASE("dropout is the identity in eval mode") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<DropoutT<float>>(0.4f));
  Network net(Shape{64}, std::move(ls));
  Tensor x(batched_shape(2, {64}));
  Rng rng(12);
  for (auto& v : x.data) v = static_cast<float>(rng.uniform(-1, 1));
  net.set_mode(Mode::Eval);
  const Tensor out = net.forward(x);
  CHECK(out.data == x.data);

  net.set_mode(Mode::Train);
  const Tensor tout = net.forward(x);
  int zeros = 0;
  for (std::size_t i = 0; i < tout.size(); ++i)
    if (tout.data[i] == 0.0f) ++zeros;
  CHECK(zeros > 20);  // rate 0.4 over 128 values
  CHECK(zeros < 90);
}

TEST_CASE("batch norm in eval mode is a deterministic affine map") {
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  auto bn = std::make_unique<BatchNormT<float>>(3);
  bn->state()[0]->data = {0.5f, -1.0f, 2.0f};  // running mean
  bn->state()[1]->data = {4.0f, 0.25f, 1.0f};  // running var
  bn->params()[0]->data = {2.0f, 1.0f, 0.5f};  // gamma
  bn->params()[1]->data = {0.1f, 0.0f, -0.2f}; // beta
  ls.push_back(std::move(bn));
  Network net(Shape{3}, std::move(ls));
  net.set_mode(Mode::Eval);
  Tensor x(batched_shape(1, {3}));
  x.data = {1.5f, -1.0f, 2.0f};
  const Tensor out = net.forward(x);
  CHECK(out.data[0] == doctest::Approx(2.0 * (1.5 - 0.5) / std::sqrt(4.0 + 1e-5) + 0.1).epsilon(1e-4));
  CHECK(out.data[1] == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(out.data[2] == doctest::Approx(-0.2).epsilon(1e-4));
  const Tensor again = net.forward(x);
  CHECK(again.data == out.data);
}

TEST_CASE("train reaches a separable toy spectrogram set and is seed-deterministic") {
  // Two classes of small blob images with disjoint active quadrants.
  auto make_source = [](std::uint64_t seed) {
    MemorySource src;
    Rng rng(seed);
    for (int i = 0; i < 40; ++i) {
      const int label = i % 2;
      Tensor x({6, 6, 1});
      for (auto& v : x.data) v = static_cast<float>(rng.uniform(0.0, 0.1));
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          x.data[static_cast<std::size_t>((label ? 3 + r : r) * 6 + c)] += 0.8f;
      src.add(std::move(x), label);
    }
    return src;
  };

  auto build_net = [] {
    std::vector<std::unique_ptr<LayerT<float>>> ls;
    ls.push_back(std::make_unique<Conv2DT<float>>(1, 4, 3, 3, 1, 1));
    ls.push_back(std::make_unique<ReLUT<float>>());
    ls.push_back(std::make_unique<MaxPool2DT<float>>(2, 2));
    ls.push_back(std::make_unique<FlattenT<float>>());
    ls.push_back(std::make_unique<DenseT<float>>(2 * 2 * 4, 2));
    ls.push_back(std::make_unique<SoftmaxT<float>>());
    Network net(Shape{6, 6, 1}, std::move(ls));
    net.init_params(21);
    return net;
  };

  TrainConfig tc;
  tc.batch = 8;
  tc.max_epochs = 20;
  tc.patience = 20;
  tc.seed = 5;
  tc.lr = 3e-3;

  MemorySource src = make_source(17);
  Network net = build_net();
  const TrainHistory hist = train(net, src, tc);
  REQUIRE(!hist.epochs.empty());
  CHECK(hist.epochs.back().train_accuracy >= 0.99);

  // identical seeds give bit-identical weight trajectories
  Network n1 = build_net(), n2 = build_net();
  MemorySource s1 = make_source(17), s2 = make_source(17);
  train(n1, s1, tc);
  train(n2, s2, tc);
  auto p1 = n1.params(), p2 = n2.params();
  REQUIRE(p1.size() == p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i]->data == p2[i]->data);

  // a different seed changes the trajectory
  Network n3 = build_net();
  MemorySource s3 = make_source(17);
  TrainConfig tc2 = tc;
  tc2.seed = 6;
  train(n3, s3, tc2);
  bool same = true;
  auto p3 = n3.params();
  for (std::size_t i = 0; i < p1.size(); ++i) same = same && p1[i]->data == p3[i]->data;
  CHECK(!same);
}

TEST_CASE("train with patience zero stops at the first non-improving epoch") {
  MemorySource src;
  Rng rng(3);
  for (int i = 0; i < 12; ++i) {
    Tensor x({4});
    for (auto& v : x.data) v = static_cast<float>(rng.uniform(-1, 1));
    src.add(std::move(x), i % 2);
  }
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<DenseT<float>>(4, 2));
  ls.push_back(std::make_unique<SoftmaxT<float>>());
  Network net(Shape{4}, std::move(ls));
  net.init_params(2);

  TrainConfig tc;
  tc.batch = 4;
  tc.max_epochs = 50;
  tc.patience = 0;
  tc.seed = 9;
  tc.lr = 0.5;  // deliberately unstable so val loss bounces quickly
  const TrainHistory hist = train(net, src, tc);
  REQUIRE(hist.best_epoch >= 0);
  // stopped exactly one epoch after the last improvement
  CHECK(static_cast<int>(hist.epochs.size()) == hist.best_epoch + 2);
}

TEST_CASE("train rejects an empty dataset and bad labels") {
  MemorySource empty;
  std::vector<std::unique_ptr<LayerT<float>>> ls;
  ls.push_back(std::make_unique<DenseT<float>>(4, 2));
  ls.push_back(std::make_unique<SoftmaxT<float>>());
  Network net(Shape{4}, std::move(ls));
  CHECK_THROWS_AS(train(net, empty, TrainConfig{}), std::invalid_argument);

  MemorySource bad;
  Tensor x({4});
  bad.add(std::move(x), 5);  // only 2 classes
  CHECK_THROWS_AS(train(net, bad, TrainConfig{}), std::invalid_argument);
}

TEST_CASE("frozen-prefix caching trains bit-identically to the plain path") {
  auto build = [] {
    std::vector<std::unique_ptr<LayerT<float>>> ls;
    auto conv = std::make_unique<Conv1DT<float>>(1, 3, 5, 2);
    conv->trainable = false;
    ls.push_back(std::move(conv));
    ls.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
    ls.push_back(std::make_unique<AvgPool1DT<float>>(2));
    ls.push_back(std::make_unique<Conv1DT<float>>(3, 4, 3, 1));
    ls.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
    ls.push_back(std::make_unique<FlattenT<float>>());
    ls.push_back(std::make_unique<DenseT<float>>(5 * 4, 3));
    ls.push_back(std::make_unique<SoftmaxT<float>>());
    Network net(Shape{33, 1}, std::move(ls));
    net.init_params(31);
    return net;
  };
  MemorySource src;
  Rng rng(13);
  for (int i = 0; i < 18; ++i) {
    Tensor x({33, 1});
    for (auto& v : x.data) v = static_cast<float>(rng.uniform(-1, 1));
    src.add(std::move(x), i % 3);
  }
  TrainConfig with, without;
  with.batch = without.batch = 6;
  with.max_epochs = without.max_epochs = 6;
  with.patience = without.patience = 6;
  with.seed = without.seed = 77;
  with.cache_frozen_prefix = true;
  without.cache_frozen_prefix = false;

  Network a = build(), b = build();
  const auto ha = train(a, src, with);
  const auto hb = train(b, src, without);
  CHECK(ha.cached_prefix_layers == 3);
  CHECK(hb.cached_prefix_layers == 0);
  auto pa = a.params(), pb = b.params();
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i]->data == pb[i]->data);
  REQUIRE(ha.epochs.size() == hb.epochs.size());
  for (std::size_t e = 0; e < ha.epochs.size(); ++e) {
    CHECK(ha.epochs[e].train_loss == doctest::Approx(hb.epochs[e].train_loss).epsilon(1e-12));
    CHECK(ha.epochs[e].val_loss == doctest::Approx(hb.epochs[e].val_loss).epsilon(1e-12));
  }
}

TEST_CASE("checkpoint round trip preserves parameters, hypers and trainable flags") {
  auto cs = [] {
    std::vector<std::unique_ptr<LayerT<float>>> ls;
    auto conv = std::make_unique<Conv1DT<float>>(1, 4, 7, 2);
    conv->trainable = false;
    ls.push_back(std::move(conv));
    ls.push_back(std::make_unique<LeakyReLUT<float>>(0.02f));
    ls.push_back(std::make_unique<BatchNormT<float>>(4));
    ls.push_back(std::make_unique<MaxPool1DT<float>>(2, 2));
    ls.push_back(std::make_unique<FlattenT<float>>());
    ls.push_back(std::make_unique<DenseT<float>>(6 * 4, 3));
    ls.push_back(std::make_unique<DropoutT<float>>(0.3f));
    ls.push_back(std::make_unique<SoftmaxT<float>>());
    Network net(Shape{31, 1}, std::move(ls));
    net.init_params(41);
    return net;
  }();

  std::stringstream buf;
  save_network(buf, cs);
  Network back = load_network(buf, "test");
  CHECK(back.num_layers() == cs.num_layers());
  CHECK(back.input_shape() == cs.input_shape());
  CHECK(!back.layer(0).trainable);
  auto pa = cs.params(), pb = back.params();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i]->data == pb[i]->data);

  // same bytes out again
  std::stringstream buf2;
  save_network(buf2, back);
  CHECK(buf.str() == buf2.str());

  Tensor x(batched_shape(2, {31, 1}));
  Rng rng(1);
  for (auto& v : x.data) v = static_cast<float>(rng.uniform(-1, 1));
  cs.set_mode(Mode::Eval);
  back.set_mode(Mode::Eval);
  CHECK(cs.forward(x).data == back.forward(x).data);

  std::stringstream junk("XXXX bogus");
  CHECK_THROWS_AS(load_network(junk, "junk"), DataError);
}
