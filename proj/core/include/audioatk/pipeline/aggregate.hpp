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

#include <string>
#include <vector>

namespace audioatk::pipeline {

/// Per-segment class probabilities for one clip, row-major [segments x classes].
struct ProbMatrix {
  int segments = 0;
  int classes = 0;
  std::vector<float> p;

  float at(int s, int c) const { return p[static_cast<std::size_t>(s) * classes + c]; }
  float& at(int s, int c) { return p[static_cast<std::size_t>(s) * classes + c]; }
};

/// Majority vote over per-segment argmax predictions. Ties break toward the
/// larger summed probability among the tied classes, then the lower index.
int aggregate_majority(const ProbMatrix& probs);

/// Argmax of per-class probability sums; ties break toward the lower index.
int aggregate_sum(const ProbMatrix& probs);

/// Clip-level prediction record.
struct ClipPrediction {
  std::string clip_id;
  ProbMatrix segment_probs;
  int mv_label = 0;
  int sr_label = 0;

  static ClipPrediction from_probs(std::string clip_id, ProbMatrix probs);
};

}  // namespace audioatk::pipeline
