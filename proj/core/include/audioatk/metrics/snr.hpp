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

#include <span>
#include <string>

#include "audioatk/dsp/waveform.hpp"

namespace audioatk::metrics {

/// Noise at or above this SNR is taken as imperceptible.
inline constexpr double kImperceptibleSnrDb = 20.0;

/// Root-mean-square signal power.
double power(std::span<const float> x);

struct SnrReading {
  double reference_power = 0.0;
  double noise_power = 0.0;
  double snr_db = 0.0;  // +inf when noise_power is zero

  bool imperceptible() const { return snr_db >= kImperceptibleSnrDb; }
};

/// 20 * log10(P(reference) / P(noise)); zero noise maps to +inf.
SnrReading snr(std::span<const float> reference, std::span<const float> noise);

/// SNR between a reference waveform and (other - reference) as the noise.
SnrReading snr_between(const dsp::Waveform& reference, const dsp::Waveform& other);

/// "inf" for the +inf sentinel, fixed 4-decimal text otherwise.
std::string snr_to_string(double snr_db);
double snr_from_string(const std::string& s);

}  // namespace audioatk::metrics
