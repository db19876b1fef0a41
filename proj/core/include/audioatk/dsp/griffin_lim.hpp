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
#include <vector>

#include "audioatk/dsp/spectrogram.hpp"
#include "audioatk/dsp/waveform.hpp"

namespace audioatk::dsp {

/// Iterative phase estimation for a magnitude-only STFT spectrogram:
/// alternate synthesis/analysis keeping the target magnitude. Phase starts
/// from seeded uniform noise; iters = 0 returns the zero-phase synthesis.
/// If `consistency_log` is given it receives one value per iteration,
/// ||  |STFT(x_i)| - M ||_F, which is non-increasing.
Waveform griffin_lim(const Spectrogram& sp, const StftSpec& spec, int iters,
                     std::uint64_t seed, std::size_t out_len,
                     std::vector<double>* consistency_log = nullptr);

}  // namespace audioatk::dsp
