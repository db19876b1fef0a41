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

#include <vector>

namespace audioatk::models {

/// Equivalent rectangular bandwidth at centre frequency f (Hz).
double erb_bandwidth(double f_hz);

/// ERB-rate scale and its inverse; centres are spaced uniformly on it.
double erb_rate(double f_hz);
double erb_rate_to_hz(double rate);

/// Bank of 4th-order gammatone impulse responses,
/// g(t) = t^3 exp(-2 pi b t) cos(2 pi f_c t), b = 1.019 ERB(f_c),
/// sampled at t = (i + 0.5) / sample_rate and L2-normalized per row.
struct GammatoneBank {
  int n_filters = 0;
  int kernel_len = 0;
  int sample_rate = 0;
  std::vector<double> center_freqs;        // strictly increasing, Hz
  std::vector<float> impulse_responses;    // row-major [n_filters x kernel_len]

  const float* row(int i) const { return impulse_responses.data() + static_cast<std::size_t>(i) * kernel_len; }
};

GammatoneBank gammatone_bank(int n_filters, int kernel_len, int sample_rate, double f_lo,
                             double f_hi);

}  // namespace audioatk::models
