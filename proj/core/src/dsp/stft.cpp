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

#include "audioatk/dsp/stft.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "audioatk/common/errors.hpp"
#include "audioatk/dsp/fft.hpp"

namespace audioatk::dsp {

namespace {

// Reflect-padded sample access: index may run fft_size/2 outside [0, len).
inline float sample_reflect(const std::vector<float>& x, long long i) {
  long long n = static_cast<long long>(x.size());
  if (i < 0) i = -i;
  if (i >= n) i = 2 * (n - 1) - i;
  return x[static_cast<std::size_t>(i)];
}

}  // namespace

void StftSpec::validate() const {
  require(fft_size >= 2 && is_power_of_two(static_cast<std::size_t>(fft_size)),
          "fft_size must be a power of two >= 2, got " + std::to_string(fft_size));
  require(hop > 0 && hop <= fft_size,
          "hop must be in (0, fft_size], got " + std::to_string(hop));
  // Periodic Hann satisfies constant overlap-add when the hop divides the
  // window length and at least two frames overlap everywhere.
  require(fft_size % hop == 0 && hop <= fft_size / 2,
          "window/hop pair breaks the overlap-add condition: hop " + std::to_string(hop) +
              " with fft_size " + std::to_string(fft_size));
}

std::vector<float> hann_window(int n) {
  require(n >= 2, "hann_window needs n >= 2, got " + std::to_string(n));
  std::vector<float> w(static_cast<std::size_t>(n));
  const double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < n; ++i)
    w[static_cast<std::size_t>(i)] =
        static_cast<float>(0.5 - 0.5 * std::cos(two_pi * i / static_cast<double>(n)));
  return w;
}

int stft_frame_count(std::size_t len, const StftSpec& spec) {
  spec.validate();
  if (spec.centered) {
    return static_cast<int>(len / static_cast<std::size_t>(spec.hop)) + 1;
  }
  if (len < static_cast<std::size_t>(spec.fft_size)) return 0;
  return static_cast<int>((len - static_cast<std::size_t>(spec.fft_size)) /
                          static_cast<std::size_t>(spec.hop)) +
         1;
}

Spectrogram stft(const Waveform& w, const StftSpec& spec) {
  spec.validate();
  require(!w.empty(), "stft: empty waveform");
  if (!spec.centered) {
    require(w.size() >= static_cast<std::size_t>(spec.fft_size),
            "stft: waveform of " + std::to_string(w.size()) +
                " samples is shorter than fft_size " + std::to_string(spec.fft_size) +
                " (uncentered mode needs one full frame)");
  } else {
    // Reflect padding needs fft_size/2 + 1 real samples to mirror.
    require(w.size() > static_cast<std::size_t>(spec.fft_size) / 2,
            "stft: waveform too short for centered reflect padding");
  }

  const int n = spec.fft_size;
  const int bins = spec.bins();
  const int frames = stft_frame_count(w.size(), spec);
  const std::vector<float> window = hann_window(n);
  Fft fft(static_cast<std::size_t>(n));

  Spectrogram sp;
  sp.kind = SpecKind::StftMagnitude;
  sp.scale = SpecScale::Linear;
  sp.bins = bins;
  sp.frames = frames;
  sp.spec = spec;
  sp.sample_rate = w.sample_rate;
  sp.values.assign(static_cast<std::size_t>(bins) * frames, 0.0f);
  sp.phase.assign(static_cast<std::size_t>(bins) * frames, 0.0f);

  std::vector<std::complex<float>> buf(static_cast<std::size_t>(n));
  const long long pad = spec.centered ? n / 2 : 0;
  for (int t = 0; t < frames; ++t) {
    long long start = static_cast<long long>(t) * spec.hop - pad;
    for (int i = 0; i < n; ++i) {
      float v = spec.centered ? sample_reflect(w.samples, start + i)
                              : w.samples[static_cast<std::size_t>(start + i)];
      buf[static_cast<std::size_t>(i)] = {v * window[static_cast<std::size_t>(i)], 0.0f};
    }
    fft.forward(buf.data());
    for (int b = 0; b < bins; ++b) {
      const std::complex<float> c = buf[static_cast<std::size_t>(b)];
      float mag = std::abs(c);
      sp.at(b, t) = mag;
      sp.phase_at(b, t) = mag > 0.0f ? std::atan2(c.imag(), c.real()) : 0.0f;
    }
  }
  return sp;
}

Waveform istft(const Spectrogram& sp, const StftSpec& spec, std::size_t out_len) {
  spec.validate();
  sp.check_dims();
  require(sp.kind == SpecKind::StftMagnitude, "istft: spectrogram must hold STFT magnitudes");
  require(sp.scale == SpecScale::Linear, "istft: spectrogram must be linear scale");
  require(sp.has_phase(), "istft: phase array missing; use griffin_lim for magnitude-only input");
  require(sp.spec == spec,
          "istft: spectrogram was produced with different STFT parameters");
  require(sp.bins == spec.bins(), "istft: bin count does not match fft_size");

  const int n = spec.fft_size;
  const int frames = sp.frames;
  const std::vector<float> window = hann_window(n);
  Fft fft(static_cast<std::size_t>(n));

  const std::size_t pad = spec.centered ? static_cast<std::size_t>(n) / 2 : 0;
  const std::size_t synth_len =
      static_cast<std::size_t>(frames - 1) * spec.hop + static_cast<std::size_t>(n);
  std::vector<double> acc(synth_len, 0.0);
  std::vector<double> wsum(synth_len, 0.0);

  std::vector<std::complex<float>> buf(static_cast<std::size_t>(n));
  for (int t = 0; t < frames; ++t) {
    for (int b = 0; b < sp.bins; ++b) {
      float mag = sp.at(b, t);
      float ph = sp.phase_at(b, t);
      buf[static_cast<std::size_t>(b)] = std::polar(mag, ph);
    }
    // Hermitian completion of the upper half of the spectrum.
    for (int b = sp.bins; b < n; ++b)
      buf[static_cast<std::size_t>(b)] = std::conj(buf[static_cast<std::size_t>(n - b)]);
    fft.inverse(buf.data());
    std::size_t off = static_cast<std::size_t>(t) * spec.hop;
    for (int i = 0; i < n; ++i) {
      double wi = window[static_cast<std::size_t>(i)];
      acc[off + i] += wi * static_cast<double>(buf[static_cast<std::size_t>(i)].real());
      wsum[off + i] += wi * wi;
    }
  }

  Waveform out;
  out.sample_rate = sp.sample_rate;
  out.samples.assign(out_len, 0.0f);
  for (std::size_t i = 0; i < out_len; ++i) {
    std::size_t j = i + pad;
    if (j < synth_len && wsum[j] > 1e-10)
      out.samples[i] = static_cast<float>(acc[j] / wsum[j]);
  }
  return out;
}

}  // namespace audioatk::dsp
