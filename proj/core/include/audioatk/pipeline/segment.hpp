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

#include "audioatk/dsp/waveform.hpp"

namespace audioatk::pipeline {

/// Sliding-window segmentation: 5 s windows with 75 % overlap by default.
/// The hop rounds down to whole samples (110250 * 0.25 -> 27562).
struct SegmentationSpec {
  std::size_t window_len = 110250;
  double overlap = 0.75;

  std::size_t hop() const;
  void validate() const;
};

struct Segment {
  dsp::Waveform audio;
  std::size_t offset = 0;  // start sample in the source clip
};

/// Number of segments a clip of `len` samples yields (0 when too short).
std::size_t segment_count(std::size_t len, const SegmentationSpec& spec);

/// Splits a clip; rejects clips shorter than one window.
std::vector<Segment> segment(const dsp::Waveform& w, const SegmentationSpec& spec);

}  // namespace audioatk::pipeline
