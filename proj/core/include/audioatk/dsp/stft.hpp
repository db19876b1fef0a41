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

#include <cstddef>
#include <vector>

#include "audioatk/dsp/spectrogram.hpp"
#include "audioatk/dsp/waveform.hpp"

namespace audioatk::dsp {

/// Periodic Hann, w[i] = 0.5 - 0.5*cos(2*pi*i/n). COLA at hop n/2.
std::vector<float> hann_window(int n);

/// Number of analysis frames stft() will produce for `len` samples.
int stft_frame_count(std::size_t len, const StftSpec& spec);

/// Magnitude+phase STFT. Centered mode reflect-pads fft_size/2 each side.
Spectrogram stft(const Waveform& w, const StftSpec& spec);

/// Weighted overlap-add synthesis (window-squared normalization), trimmed to
/// out_len samples. Requires a phase array.
Waveform istft(const Spectrogram& sp, const StftSpec& spec, std::size_t out_len);

}  // namespace audioatk::dsp
