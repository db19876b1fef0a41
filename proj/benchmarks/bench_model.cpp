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

#include <benchmark/benchmark.h>

#include "audioatk/common/rng.hpp"
#include "audioatk/models/builders.hpp"
#include "audioatk/nn/loss.hpp"

using namespace audioatk;

namespace {

nn::Tensor random_batch(const nn::Shape& per_sample, int n, std::uint64_t seed) {
  nn::Tensor t(nn::batched_shape(n, per_sample));
  Rng rng(seed);
  for (auto& v : t.data) v = static_cast<float>(rng.uniform(0.0, 1.0));
  return t;
}

void BM_Mel2dForward(benchmark::State& state) {
  auto net = models::build_2d_cnn(64);
  net.set_mode(nn::Mode::Eval);
  const auto x = random_batch({64, 431, 1}, 1, 3);
  for (auto _ : state) {
    auto probs = net.forward(x);
    benchmark::DoNotOptimize(probs.data.data());
  }
}
BENCHMARK(BM_Mel2dForward);

void BM_Mel2dTrainStep(benchmark::State& state) {
  auto net = models::build_2d_cnn(64);
  net.set_mode(nn::Mode::Train);
  const auto x = random_batch({64, 431, 1}, 2, 4);
  const std::vector<int> y{1, 2};
  for (auto _ : state) {
    auto probs = net.forward(x);
    auto ce = nn::cross_entropy(probs, y);
    net.zero_grads();
    net.backward_from_logits(ce.logit_grad);
    benchmark::DoNotOptimize(net.input_grad().data.data());
  }
}
BENCHMARK(BM_Mel2dTrainStep);

void BM_Wave1dForward(benchmark::State& state) {
  auto net = models::build_1d_cnn();
  net.set_mode(nn::Mode::Eval);
  const auto x = random_batch({110250, 1}, 1, 5);
  for (auto _ : state) {
    auto probs = net.forward(x);
    benchmark::DoNotOptimize(probs.data.data());
  }
}
BENCHMARK(BM_Wave1dForward);

}  // namespace
