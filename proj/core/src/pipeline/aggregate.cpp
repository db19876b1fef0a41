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

#include "audioatk/pipeline/aggregate.hpp"

#include "audioatk/common/errors.hpp"

namespace audioatk::pipeline {

namespace {

void check(const ProbMatrix& m) {
  require(m.segments >= 1 && m.classes >= 1, "aggregate: empty probability matrix");
  require(m.p.size() == static_cast<std::size_t>(m.segments) * m.classes,
          "aggregate: probability buffer does not match dimensions");
}

}  // namespace

int aggregate_majority(const ProbMatrix& probs) {
  check(probs);
  std::vector<int> votes(static_cast<std::size_t>(probs.classes), 0);
  std::vector<double> sums(static_cast<std::size_t>(probs.classes), 0.0);
  for (int s = 0; s < probs.segments; ++s) {
    int best = 0;
    for (int c = 1; c < probs.classes; ++c)
      if (probs.at(s, c) > probs.at(s, best)) best = c;
    ++votes[static_cast<std::size_t>(best)];
    for (int c = 0; c < probs.classes; ++c) sums[static_cast<std::size_t>(c)] += probs.at(s, c);
  }
  int winner = 0;
  for (int c = 1; c < probs.classes; ++c) {
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(winner)])
      winner = c;
    else if (votes[static_cast<std::size_t>(c)] == votes[static_cast<std::size_t>(winner)] &&
             sums[static_cast<std::size_t>(c)] > sums[static_cast<std::size_t>(winner)])
      winner = c;
  }
  return winner;
}

int aggregate_sum(const ProbMatrix& probs) {
  check(probs);
  std::vector<double> sums(static_cast<std::size_t>(probs.classes), 0.0);
  for (int s = 0; s < probs.segments; ++s)
    for (int c = 0; c < probs.classes; ++c) sums[static_cast<std::size_t>(c)] += probs.at(s, c);
  int winner = 0;
  for (int c = 1; c < probs.classes; ++c)
    if (sums[static_cast<std::size_t>(c)] > sums[static_cast<std::size_t>(winner)]) winner = c;
  return winner;
}

ClipPrediction ClipPrediction::from_probs(std::string clip_id, ProbMatrix probs) {
  ClipPrediction cp;
  cp.clip_id = std::move(clip_id);
  cp.mv_label = aggregate_majority(probs);
  cp.sr_label = aggregate_sum(probs);
  cp.segment_probs = std::move(probs);
  return cp;
}

}  // namespace audioatk::pipeline
