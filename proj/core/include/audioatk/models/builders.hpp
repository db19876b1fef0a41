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

#include "audioatk/models/gammatone.hpp"
#include "audioatk/nn/network.hpp"

namespace audioatk::models {

inline constexpr int kSegmentSamples = 110250;  // five seconds at 22,050 Hz
inline constexpr int kSegmentFrames = 431;
inline constexpr int kNumClasses = 10;

/// Spectrogram classifier: four 3x3 conv blocks (ReLU + batch norm) with two
/// 2x2 max-pools, a 1024-wide dense layer with 0.4 dropout, softmax over 10
/// classes. input_bins selects the STFT (257) or Mel (64) variant; frames
/// default to the 5 s segment grid.
nn::Network build_2d_cnn(int input_bins, int n_classes = kNumClasses,
                         int frames = kSegmentFrames, std::uint64_t seed = 0);

/// Raw-waveform classifier: frozen gammatone conv front end (32 x k512),
/// then strided conv/pool stages (batch norm after each trainable conv)
/// down to 41 steps, a 256-wide dense layer with 0.4 dropout, softmax over
/// 10 classes. LeakyReLU activations.
nn::Network build_1d_cnn(int n_classes = kNumClasses, int input_len = kSegmentSamples,
                         int sample_rate = 22050, std::uint64_t seed = 0);

/// Gammatone band edges used by build_1d_cnn.
double gammatone_default_f_lo();
double gammatone_default_f_hi(int sample_rate);

}  // namespace audioatk::models
