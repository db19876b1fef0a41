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
#include "audioatk/dsp/griffin_lim.hpp"
#include "audioatk/dsp/mel.hpp"
#include "audioatk/dsp/stft.hpp"

using namespace audioatk;

namespace {

dsp::Waveform five_seconds() {
  dsp::Waveform w;
  w.sample_rate = 22050;
  w.samples.resize(110250);
  Rng rng(1);
  for (auto& v : w.samples) v = static_cast<float>(rng.uniform(-0.8, 0.8));
  return w;
}

void BM_Stft(benchmark::State& state) {
  const auto w = five_seconds();
  const dsp::StftSpec spec;
  for (auto _ : state) {
    auto sp = dsp::stft(w, spec);
    benchmark::DoNotOptimize(sp.values.data());
  }
}
BENCHMARK(BM_Stft);

void BM_Istft(benchmark::State& state) {
  const auto w = five_seconds();
  const dsp::StftSpec spec;
  const auto sp = dsp::stft(w, spec);
  for (auto _ : state) {
    auto back = dsp::istft(sp, spec, w.size());
    benchmark::DoNotOptimize(back.samples.data());
  }
}
BENCHMARK(BM_Istft);

void BM_MelProjection(benchmark::State& state) {
  const auto w = five_seconds();
  const dsp::StftSpec spec;
  const auto fb = dsp::mel_filterbank(64, 512, 22050, 0.0, 11025.0);
  const auto sp = dsp::stft(w, spec);
  for (auto _ : state) {
    auto mel = dsp::mel_from_stft(sp, fb);
    benchmark::DoNotOptimize(mel.values.data());
  }
}
BENCHMARK(BM_MelProjection);

void BM_MelInversion(benchmark::State& state) {
  const auto w = five_seconds();
  const dsp::StftSpec spec;
  const auto fb = dsp::mel_filterbank(64, 512, 22050, 0.0, 11025.0);
  const auto mel = dsp::mel_spectrogram(w, spec, fb);
  for (auto _ : state) {
    auto lin = dsp::mel_to_linear(mel, fb);
    benchmark::DoNotOptimize(lin.values.data());
  }
}
BENCHMARK(BM_MelInversion);

void BM_GriffinLim60(benchmark::State& state) {
  const auto w = five_seconds();
  const dsp::StftSpec spec;
  auto sp = dsp::stft(w, spec);
  sp.phase.clear();
  for (auto _ : state) {
    auto rec = dsp::griffin_lim(sp, spec, 60, 7, w.size());
    benchmark::DoNotOptimize(rec.samples.data());
  }
}
BENCHMARK(BM_GriffinLim60);

}  // namespace
