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

#include "audioatk/pipeline/segment.hpp"

#include <cmath>
#include <string>

#include "audioatk/common/errors.hpp"

namespace audioatk::pipeline {

std::size_t SegmentationSpec::hop() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(window_len) * (1.0 - overlap)));
}

void SegmentationSpec::validate() const {
  require(window_len > 0, "segmentation: window_len must be positive");
  require(overlap >= 0.0 && overlap < 1.0, "segmentation: overlap must be in [0, 1)");
  require(hop() > 0, "segmentation: hop rounds to zero samples");
}

std::size_t segment_count(std::size_t len, const SegmentationSpec& spec) {
  spec.validate();
  if (len < spec.window_len) return 0;
  return (len - spec.window_len) / spec.hop() + 1;
}

std::vector<Segment> segment(const dsp::Waveform& w, const SegmentationSpec& spec) {
  spec.validate();
  require(w.size() >= spec.window_len,
          "segment: clip of " + std::to_string(w.size()) + " samples is shorter than one window (" +
              std::to_string(spec.window_len) + ")");
  const std::size_t n = segment_count(w.size(), spec);
  const std::size_t hop = spec.hop();
  std::vector<Segment> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t off = k * hop;
    out[k].offset = off;
    out[k].audio.sample_rate = w.sample_rate;
    out[k].audio.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(off),
                                w.samples.begin() + static_cast<std::ptrdiff_t>(off + spec.window_len));
  }
  return out;
}

}  // namespace audioatk::pipeline
