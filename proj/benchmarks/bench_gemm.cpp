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

#include <vector>

#include "audioatk/nn/gemm.hpp"

using audioatk::nn::detail::gemm_nn;
using audioatk::nn::detail::gemm_nt;
using audioatk::nn::detail::gemm_tn;

namespace {

// Shapes taken from the hot paths: conv forward panels and the wide dense
// layers of the spectrogram model.

void BM_GemmConvForward(benchmark::State& state) {
  const int M = 6832, N = 32, K = 288;  // conv2 strip of the 2D model
  std::vector<float> a(static_cast<std::size_t>(M) * K, 1.0f);
  std::vector<float> b(static_cast<std::size_t>(K) * N, 0.5f);
  std::vector<float> c(static_cast<std::size_t>(M) * N);
  for (auto _ : state) {
    gemm_nn(M, N, K, a.data(), K, b.data(), N, c.data(), N, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * M * N * K);
}
BENCHMARK(BM_GemmConvForward);

void BM_GemmDenseForward(benchmark::State& state) {
  const int M = 4, N = 1024, K = 86528;  // Mel-variant dense layer, batch 4
  std::vector<float> a(static_cast<std::size_t>(M) * K, 1.0f);
  std::vector<float> b(static_cast<std::size_t>(K) * N, 0.5f);
  std::vector<float> c(static_cast<std::size_t>(M) * N);
  for (auto _ : state) {
    gemm_nn(M, N, K, a.data(), K, b.data(), N, c.data(), N, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * M * N * K);
}
BENCHMARK(BM_GemmDenseForward);

void BM_GemmDenseGrad(benchmark::State& state) {
  const int M = 86528, N = 1024, K = 4;  // dense weight gradient
  std::vector<float> a(static_cast<std::size_t>(K) * M, 1.0f);
  std::vector<float> b(static_cast<std::size_t>(K) * N, 0.5f);
  std::vector<float> c(static_cast<std::size_t>(M) * N);
  for (auto _ : state) {
    gemm_tn(M, N, K, a.data(), M, b.data(), N, c.data(), N, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * M * N * K);
}
BENCHMARK(BM_GemmDenseGrad);

void BM_GemmDenseInputGrad(benchmark::State& state) {
  const int M = 4, N = 86528, K = 1024;  // dense input gradient
  std::vector<float> a(static_cast<std::size_t>(M) * K, 1.0f);
  std::vector<float> b(static_cast<std::size_t>(N) * K, 0.5f);
  std::vector<float> c(static_cast<std::size_t>(M) * N);
  for (auto _ : state) {
    gemm_nt(M, N, K, a.data(), K, b.data(), K, c.data(), N, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * 2LL * M * N * K);
}
BENCHMARK(BM_GemmDenseInputGrad);

}  // namespace
