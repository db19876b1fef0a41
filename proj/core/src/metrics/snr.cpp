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

#include "audioatk/metrics/snr.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "audioatk/common/errors.hpp"

namespace audioatk::metrics {

double power(std::span<const float> x) {
  require(!x.empty(), "power: empty signal");
  double acc = 0.0;
  for (float v : x) acc += static_cast<double>(v) * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

SnrReading snr(std::span<const float> reference, std::span<const float> noise) {
  require(reference.size() == noise.size(),
          "snr: length mismatch (" + std::to_string(reference.size()) + " vs " +
              std::to_string(noise.size()) + ")");
  SnrReading r;
  r.reference_power = power(reference);
  r.noise_power = power(noise);
  if (r.noise_power == 0.0)
    r.snr_db = std::numeric_limits<double>::infinity();
  else
    r.snr_db = 20.0 * std::log10(r.reference_power / r.noise_power);
  return r;
}

SnrReading snr_between(const dsp::Waveform& reference, const dsp::Waveform& other) {
  require(reference.size() == other.size(), "snr: waveform length mismatch");
  std::vector<float> noise(reference.size());
  for (std::size_t i = 0; i < noise.size(); ++i)
    noise[i] = other.samples[i] - reference.samples[i];
  return snr(reference.samples, noise);
}

std::string snr_to_string(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", snr_db);
  return buf;
}

double snr_from_string(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace audioatk::metrics
