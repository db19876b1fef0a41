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

namespace audioatk::dsp {

/// Mono audio in [-1, 1] with its sample rate.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 22050;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

}  // namespace audioatk::dsp
