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

#include <vector>

#include "audioatk/dsp/spectrogram.hpp"
#include "audioatk/dsp/waveform.hpp"

namespace audioatk::dsp {

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with centers equally spaced on the mel scale,
/// evaluated at FFT bin frequencies. weights is row-major
/// [n_mels x (fft_size/2 + 1)], every row non-negative with support on a
/// contiguous bin range.
struct MelFilterbank {
  int n_mels = 0;
  int n_bins = 0;
  float f_min = 0.0f;
  float f_max = 0.0f;
  std::vector<float> weights;

  float& at(int m, int b) { return weights[static_cast<std::size_t>(m) * n_bins + b]; }
  float at(int m, int b) const { return weights[static_cast<std::size_t>(m) * n_bins + b]; }
};

MelFilterbank mel_filterbank(int n_mels, int fft_size, int sample_rate, double f_min,
                             double f_max);

/// Mel power spectrogram: filterbank applied to the squared STFT magnitudes.
Spectrogram mel_spectrogram(const Waveform& w, const StftSpec& spec, const MelFilterbank& fb);

/// Same projection applied to an existing linear STFT magnitude spectrogram.
Spectrogram mel_from_stft(const Spectrogram& sp, const MelFilterbank& fb);

/// Inverts a Mel power spectrogram to a linear STFT magnitude spectrogram:
/// minimum-norm least-squares solve of fb * P = mel per frame, clamped to
/// P >= 0, then sqrt back to magnitude. No phase.
Spectrogram mel_to_linear(const Spectrogram& sp, const MelFilterbank& fb);

}  // namespace audioatk::dsp
