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

#include "audioatk/data/toy.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "audioatk/common/errors.hpp"
#include "audioatk/common/rng.hpp"
#include "audioatk/data/wav.hpp"

namespace audioatk::data {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double ToySpec::class_fundamental(int cls) const {
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  return f0_base_hz + static_cast<double>(cls) * f0_step_bins * bin_hz;
}

void ToySpec::validate() const {
  require(n_classes >= 2, "toy corpus: need at least two classes");
  require(clips_per_class >= 1, "toy corpus: need at least one clip per class");
  require(clip_len_s > 0.0 && sample_rate > 0, "toy corpus: bad clip length or sample rate");
  require(n_harmonics >= 1, "toy corpus: need at least one harmonic");
  require(f0_step_bins >= 1, "toy corpus: class fundamentals must sit at least one bin apart");
  require(competitor_gap_db > 0.0, "toy corpus: competitor gap must be positive");
  const double nyquist = sample_rate / 2.0;
  const double top = class_fundamental(n_classes - 1) * n_harmonics;
  require(top < nyquist, "toy corpus: highest harmonic " + std::to_string(top) +
                             " Hz exceeds Nyquist " + std::to_string(nyquist));
}

dsp::Waveform toy_clip(const ToySpec& spec, int cls, int idx) {
  spec.validate();
  require(cls >= 0 && cls < spec.n_classes, "toy_clip: class out of range");
  const std::size_t n = static_cast<std::size_t>(std::llround(spec.clip_len_s * spec.sample_rate));

  Rng rng = Rng(spec.seed).fork((static_cast<std::uint64_t>(cls) << 32) |
                                static_cast<std::uint64_t>(idx));

  // Per-stack level (own class on top by the configured gap) with jitter,
  // one random phase per harmonic.
  std::vector<double> stack_level(static_cast<std::size_t>(spec.n_classes));
  std::vector<std::vector<double>> phase(static_cast<std::size_t>(spec.n_classes));
  for (int s = 0; s < spec.n_classes; ++s) {
    const double gap_db = s == cls ? 0.0 : -spec.competitor_gap_db;
    const double jit_db = rng.uniform(-spec.jitter_db, spec.jitter_db);
    stack_level[static_cast<std::size_t>(s)] = std::pow(10.0, (gap_db + jit_db) / 20.0);
    phase[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(spec.n_harmonics));
    for (int h = 0; h < spec.n_harmonics; ++h)
      phase[static_cast<std::size_t>(s)][static_cast<std::size_t>(h)] = rng.uniform(0.0, kTwoPi);
  }

  std::vector<double> buf(n, 0.0);
  for (int s = 0; s < spec.n_classes; ++s) {
    const double f0 = spec.class_fundamental(s);
    for (int h = 0; h < spec.n_harmonics; ++h) {
      const double amp = stack_level[static_cast<std::size_t>(s)] * std::pow(10.0, -6.0 * h / 20.0);
      const double w = kTwoPi * f0 * (h + 1) / spec.sample_rate;
      const double ph = phase[static_cast<std::size_t>(s)][static_cast<std::size_t>(h)];
      for (std::size_t i = 0; i < n; ++i) buf[i] += amp * std::sin(w * static_cast<double>(i) + ph);
    }
  }
  const double noise_sigma = std::pow(10.0, spec.noise_floor_db / 20.0);
  for (std::size_t i = 0; i < n; ++i) buf[i] += noise_sigma * rng.normal();

  double peak = 0.0;
  for (double v : buf) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0.0 ? 0.9 / peak : 1.0;

  dsp::Waveform w;
  w.sample_rate = spec.sample_rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = static_cast<float>(buf[i] * scale);
  return w;
}

Manifest generate_toy_corpus(const ToySpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "clips");

  Manifest m;
  for (int c = 0; c < spec.n_classes; ++c) m.label_names.push_back("tone" + std::to_string(c));
  for (int c = 0; c < spec.n_classes; ++c) {
    for (int i = 0; i < spec.clips_per_class; ++i) {
      ManifestEntry e;
      e.clip_id = "tone" + std::to_string(c) + "_" + std::to_string(i);
      e.path = (fs::path("clips") / (e.clip_id + ".wav")).string();
      e.label = c;
      m.entries.push_back(e);
      write_wav(out_dir / e.path, toy_clip(spec, c, i));
    }
  }
  split_folds(m.entries, spec.seed, spec.n_classes);
  save_manifest(out_dir / "manifest.tsv", m);
  return m;
}

}  // namespace audioatk::data
