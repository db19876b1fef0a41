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

#include "audioatk/dsp/griffin_lim.hpp"

#include <cmath>

#include "audioatk/common/errors.hpp"
#include "audioatk/common/rng.hpp"
#include "audioatk/dsp/stft.hpp"

namespace audioatk::dsp {

Waveform griffin_lim(const Spectrogram& sp, const StftSpec& spec, int iters,
                     std::uint64_t seed, std::size_t out_len,
                     std::vector<double>* consistency_log) {
  sp.check_dims();
  require(sp.kind == SpecKind::StftMagnitude && sp.scale == SpecScale::Linear,
          "griffin_lim: input must be a linear STFT magnitude spectrogram");
  require(iters >= 0, "griffin_lim: iters must be >= 0");
  require(sp.bins == spec.bins(), "griffin_lim: bin count does not match fft_size");
  if (consistency_log) consistency_log->clear();

  Spectrogram work = sp;   // magnitude M stays fixed; only work.phase evolves
  work.spec = spec;
  const std::size_t cells = work.values.size();
  work.phase.assign(cells, 0.0f);

  if (iters > 0) {
    Rng rng(seed);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < cells; ++i)
      work.phase[i] = static_cast<float>(rng.uniform(-pi, pi));
  }

  Waveform x = istft(work, spec, out_len);
  for (int it = 0; it < iters; ++it) {
    Spectrogram est = stft(x, spec);
    ensure(est.frames == work.frames, "griffin_lim: analysis frame count drifted");
    if (consistency_log) {
      double err = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        double d = static_cast<double>(est.values[i]) - work.values[i];
        err += d * d;
      }
      consistency_log->push_back(std::sqrt(err));
    }
    work.phase = est.phase;
    x = istft(work, spec, out_len);
  }
  return x;
}

}  // namespace audioatk::dsp
