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
#include <string>
#include <vector>

#include "audioatk/common/errors.hpp"

namespace audioatk::dsp {

enum class SpecKind : std::uint8_t { StftMagnitude = 0, Mel = 1 };
enum class SpecScale : std::uint8_t { Linear = 0, Decibel = 1, NormalizedUnit = 2 };
enum class Window : std::uint8_t { Hann = 0 };

/// Analysis parameters shared by stft/istft/griffin_lim.
struct StftSpec {
  int fft_size = 512;
  int hop = 256;
  Window window = Window::Hann;
  bool centered = true;

  int bins() const { return fft_size / 2 + 1; }
  void validate() const;
  bool operator==(const StftSpec&) const = default;
};

/// Time-frequency magnitude array, row-major [bins x frames], with optional
/// phase (radians) when produced by stft. db_ref/db_floor carry the scaling
/// metadata needed to invert Decibel / NormalizedUnit values.
struct Spectrogram {
  SpecKind kind = SpecKind::StftMagnitude;
  SpecScale scale = SpecScale::Linear;
  int bins = 0;
  int frames = 0;
  std::vector<float> values;
  std::vector<float> phase;  // empty, or bins*frames radians
  StftSpec spec;
  int sample_rate = 22050;  // carried from the source waveform; not serialized
  int n_mels = 0;        // Mel only
  float db_ref = 0.0f;   // linear value mapped to 0 dB
  float db_floor = 0.0f; // clip floor in dB (negative)

  bool has_phase() const { return !phase.empty(); }

  float& at(int b, int t) { return values[static_cast<std::size_t>(b) * frames + t]; }
  float at(int b, int t) const { return values[static_cast<std::size_t>(b) * frames + t]; }
  float& phase_at(int b, int t) { return phase[static_cast<std::size_t>(b) * frames + t]; }
  float phase_at(int b, int t) const { return phase[static_cast<std::size_t>(b) * frames + t]; }

  void check_dims() const {
    ensure(values.size() == static_cast<std::size_t>(bins) * frames,
           "spectrogram value buffer does not match bins x frames");
    ensure(phase.empty() || phase.size() == values.size(),
           "spectrogram phase buffer does not match bins x frames");
  }
};

}  // namespace audioatk::dsp
