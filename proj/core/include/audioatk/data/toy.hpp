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

#include <cstdint>
#include <filesystem>

#include "audioatk/data/manifest.hpp"
#include "audioatk/dsp/waveform.hpp"

namespace audioatk::data {

/// Synthetic desk-scale corpus. Every clip carries one harmonic stack per
/// class on a shared template; the clip's own class sits competitor_gap_db
/// above the others, so the class is decided by relative band energy with a
/// small, controllable margin. Fundamentals are spaced f0_step_bins STFT
/// bins apart, keeping classes separable for both spectrogram and waveform
/// models while leaving the margin inside reach of small-budget attacks.
struct ToySpec {
  int n_classes = 4;
  int clips_per_class = 25;
  double clip_len_s = 5.0;
  int sample_rate = 22050;
  std::uint64_t seed = 0;
  double f0_base_hz = 440.0;
  int f0_step_bins = 4;            // class spacing on the fft_size grid
  int n_harmonics = 3;             // harmonic levels 0, -6, -12 dB
  double competitor_gap_db = 1.5;  // margin between own and other stacks
  double jitter_db = 0.25;         // per-clip per-stack level jitter
  double noise_floor_db = -35.0;
  int fft_size = 512;

  double class_fundamental(int cls) const;
  void validate() const;
};

/// Deterministic synthesis of one clip (class `cls`, running index `idx`).
dsp::Waveform toy_clip(const ToySpec& spec, int cls, int idx);

/// Writes WAV files plus a manifest (with a seeded 3-fold split) under
/// out_dir. Two invocations with the same spec produce identical bytes.
Manifest generate_toy_corpus(const ToySpec& spec, const std::filesystem::path& out_dir);

}  // namespace audioatk::data
