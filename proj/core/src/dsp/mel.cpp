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

#include "audioatk/dsp/mel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "audioatk/common/errors.hpp"
#include "audioatk/dsp/fft.hpp"
#include "audioatk/dsp/stft.hpp"

namespace audioatk::dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank mel_filterbank(int n_mels, int fft_size, int sample_rate, double f_min,
                             double f_max) {
  require(n_mels >= 1, "mel_filterbank: n_mels must be >= 1");
  require(fft_size >= 2 && is_power_of_two(static_cast<std::size_t>(fft_size)),
          "mel_filterbank: fft_size must be a power of two");
  require(sample_rate > 0, "mel_filterbank: sample_rate must be positive");
  require(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0,
          "mel_filterbank: need 0 <= f_min < f_max <= sample_rate/2");
  const int n_bins = fft_size / 2 + 1;
  require(n_mels <= n_bins, "mel_filterbank: more mel bands (" + std::to_string(n_mels) +
                                ") than FFT bins (" + std::to_string(n_bins) +
                                ") gives degenerate filters");

  MelFilterbank fb;
  fb.n_mels = n_mels;
  fb.n_bins = n_bins;
  fb.f_min = static_cast<float>(f_min);
  fb.f_max = static_cast<float>(f_max);
  fb.weights.assign(static_cast<std::size_t>(n_mels) * n_bins, 0.0f);

  // n_mels + 2 break points equally spaced on the mel axis; triangle m spans
  // [edge(m), edge(m+2)] with its peak at edge(m+1).
  std::vector<double> edge_hz(static_cast<std::size_t>(n_mels) + 2);
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  for (int i = 0; i < n_mels + 2; ++i)
    edge_hz[static_cast<std::size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / static_cast<double>(n_mels + 1));

  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edge_hz[static_cast<std::size_t>(m)];
    const double mid = edge_hz[static_cast<std::size_t>(m) + 1];
    const double hi = edge_hz[static_cast<std::size_t>(m) + 2];
    for (int b = 0; b < n_bins; ++b) {
      const double f = b * bin_hz;
      double v = 0.0;
      if (f > lo && f < mid)
        v = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        v = (hi - f) / (hi - mid);
      fb.at(m, b) = static_cast<float>(std::max(0.0, v));
    }
  }

  for (int m = 0; m < n_mels; ++m) {
    bool any = false;
    for (int b = 0; b < n_bins; ++b) any = any || fb.at(m, b) > 0.0f;
    ensure(any, "mel_filterbank: band " + std::to_string(m) +
                    " has no support; widen the band range or reduce n_mels");
  }
  return fb;
}

Spectrogram mel_from_stft(const Spectrogram& sp, const MelFilterbank& fb) {
  sp.check_dims();
  require(sp.kind == SpecKind::StftMagnitude && sp.scale == SpecScale::Linear,
          "mel_from_stft: input must be a linear STFT magnitude spectrogram");
  require(sp.bins == fb.n_bins, "mel_from_stft: filterbank has " + std::to_string(fb.n_bins) +
                                    " bins but spectrogram has " + std::to_string(sp.bins));

  Spectrogram out;
  out.kind = SpecKind::Mel;
  out.scale = SpecScale::Linear;
  out.bins = fb.n_mels;
  out.frames = sp.frames;
  out.spec = sp.spec;
  out.sample_rate = sp.sample_rate;
  out.n_mels = fb.n_mels;
  out.values.assign(static_cast<std::size_t>(fb.n_mels) * sp.frames, 0.0f);
  for (int m = 0; m < fb.n_mels; ++m) {
    for (int b = 0; b < fb.n_bins; ++b) {
      const float wmb = fb.at(m, b);
      if (wmb == 0.0f) continue;
      for (int t = 0; t < sp.frames; ++t) {
        const float mag = sp.at(b, t);
        out.at(m, t) += wmb * mag * mag;  // power spectrum into the bank
      }
    }
  }
  return out;
}

Spectrogram mel_spectrogram(const Waveform& w, const StftSpec& spec, const MelFilterbank& fb) {
  require(fb.n_bins == spec.bins(), "mel_spectrogram: filterbank built for a different fft_size");
  return mel_from_stft(stft(w, spec), fb);
}

namespace {

// Cholesky of the filterbank Gram matrix with a tiny ridge term. Adjacent
// narrow triangles can be linearly dependent on a coarse FFT grid, which
// makes the plain Gram singular; the ridge keeps the solve well-posed
// without visibly moving the least-squares solution. A band with no energy
// at all (zero row) is rejected outright.
class GramSolver {
public:
  explicit GramSolver(const MelFilterbank& fb) : n_(fb.n_mels), chol_(static_cast<std::size_t>(n_) * n_, 0.0) {
    std::vector<double> gram(static_cast<std::size_t>(n_) * n_, 0.0);
    double trace = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        double s = 0.0;
        for (int b = 0; b < fb.n_bins; ++b)
          s += static_cast<double>(fb.at(i, b)) * fb.at(j, b);
        gram[static_cast<std::size_t>(i) * n_ + j] = s;
        gram[static_cast<std::size_t>(j) * n_ + i] = s;
        if (i == j) {
          require(s > 0.0, "mel_to_linear: filterbank band " + std::to_string(i) +
                               " has no energy; the bank is singular");
          trace += s;
        }
      }
    const double ridge = 1e-8 * trace / n_;
    for (int i = 0; i < n_; ++i) gram[static_cast<std::size_t>(i) * n_ + i] += ridge;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = gram[static_cast<std::size_t>(i) * n_ + j];
        for (int k = 0; k < j; ++k)
          s -= chol_[static_cast<std::size_t>(i) * n_ + k] * chol_[static_cast<std::size_t>(j) * n_ + k];
        if (i == j) {
          require(s > 0.0, "mel_to_linear: filterbank Gram matrix is singular");
          chol_[static_cast<std::size_t>(i) * n_ + j] = std::sqrt(s);
        } else {
          chol_[static_cast<std::size_t>(i) * n_ + j] = s / chol_[static_cast<std::size_t>(j) * n_ + j];
        }
      }
    }
  }

  // solves (fb fb^T) y = rhs in place
  void solve(std::vector<double>& y) const {
    for (int i = 0; i < n_; ++i) {
      double s = y[static_cast<std::size_t>(i)];
      for (int k = 0; k < i; ++k) s -= chol_[static_cast<std::size_t>(i) * n_ + k] * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = s / chol_[static_cast<std::size_t>(i) * n_ + i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = y[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < n_; ++k) s -= chol_[static_cast<std::size_t>(k) * n_ + i] * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = s / chol_[static_cast<std::size_t>(i) * n_ + i];
    }
  }

private:
  int n_;
  std::vector<double> chol_;
};

}  // namespace

Spectrogram mel_to_linear(const Spectrogram& sp, const MelFilterbank& fb) {
  sp.check_dims();
  require(sp.kind == SpecKind::Mel && sp.scale == SpecScale::Linear,
          "mel_to_linear: input must be a linear-scale Mel spectrogram");
  require(sp.bins == fb.n_mels, "mel_to_linear: filterbank n_mels does not match spectrogram");

  GramSolver solver(fb);

  Spectrogram out;
  out.kind = SpecKind::StftMagnitude;
  out.scale = SpecScale::Linear;
  out.bins = fb.n_bins;
  out.frames = sp.frames;
  out.spec = sp.spec;
  out.sample_rate = sp.sample_rate;
  out.values.assign(static_cast<std::size_t>(fb.n_bins) * sp.frames, 0.0f);

  // Per frame: minimum-norm least-squares solve for the power spectrum,
  // clamped to the non-negative orthant. The clamp is re-projected a few
  // times (solve the residual, clamp again) so fb * P tracks the mel values
  // closely even where the plain min-norm solution dips negative.
  const int n_mels = fb.n_mels;
  const int n_bins = fb.n_bins;
  std::vector<double> target(static_cast<std::size_t>(n_mels));
  std::vector<double> resid(static_cast<std::size_t>(n_mels));
  std::vector<double> p(static_cast<std::size_t>(n_bins));
  for (int t = 0; t < sp.frames; ++t) {
    double target_norm = 0.0;
    for (int m = 0; m < n_mels; ++m) {
      target[static_cast<std::size_t>(m)] = sp.at(m, t);
      target_norm += target[static_cast<std::size_t>(m)] * target[static_cast<std::size_t>(m)];
    }
    std::fill(p.begin(), p.end(), 0.0);
    for (int iter = 0; iter < 40; ++iter) {
      double resid_norm = 0.0;
      for (int m = 0; m < n_mels; ++m) {
        double acc = 0.0;
        for (int b = 0; b < n_bins; ++b)
          acc += static_cast<double>(fb.at(m, b)) * p[static_cast<std::size_t>(b)];
        resid[static_cast<std::size_t>(m)] = target[static_cast<std::size_t>(m)] - acc;
        resid_norm += resid[static_cast<std::size_t>(m)] * resid[static_cast<std::size_t>(m)];
      }
      if (resid_norm <= 1e-12 * target_norm) break;
      solver.solve(resid);
      for (int b = 0; b < n_bins; ++b) {
        double step = 0.0;
        for (int m = 0; m < n_mels; ++m)
          if (fb.at(m, b) != 0.0f)
            step += static_cast<double>(fb.at(m, b)) * resid[static_cast<std::size_t>(m)];
        p[static_cast<std::size_t>(b)] = std::max(0.0, p[static_cast<std::size_t>(b)] + step);
      }
    }
    for (int b = 0; b < n_bins; ++b)
      out.at(b, t) = static_cast<float>(std::sqrt(p[static_cast<std::size_t>(b)]));
  }
  return out;
}

}  // namespace audioatk::dsp
