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

#include "audioatk/models/gammatone.hpp"

#include <cmath>
#include <string>

#include "audioatk/common/errors.hpp"

namespace audioatk::models {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double erb_bandwidth(double f_hz) { return 24.7 * (4.37 * f_hz / 1000.0 + 1.0); }

double erb_rate(double f_hz) { return 21.4 * std::log10(4.37 * f_hz / 1000.0 + 1.0); }

double erb_rate_to_hz(double rate) {
  return (std::pow(10.0, rate / 21.4) - 1.0) * 1000.0 / 4.37;
}

GammatoneBank gammatone_bank(int n_filters, int kernel_len, int sample_rate, double f_lo,
                             double f_hi) {
  require(n_filters >= 1, "gammatone_bank: need at least one filter");
  require(kernel_len >= 2, "gammatone_bank: kernel too short");
  require(sample_rate > 0, "gammatone_bank: sample_rate must be positive");
  require(0.0 < f_lo && f_lo < f_hi && f_hi <= sample_rate / 2.0,
          "gammatone_bank: need 0 < f_lo < f_hi <= sample_rate/2, got [" + std::to_string(f_lo) +
              ", " + std::to_string(f_hi) + "]");

  GammatoneBank bank;
  bank.n_filters = n_filters;
  bank.kernel_len = kernel_len;
  bank.sample_rate = sample_rate;
  bank.center_freqs.resize(static_cast<std::size_t>(n_filters));
  bank.impulse_responses.assign(static_cast<std::size_t>(n_filters) * kernel_len, 0.0f);

  const double lo_rate = erb_rate(f_lo);
  const double hi_rate = erb_rate(f_hi);
  for (int i = 0; i < n_filters; ++i) {
    const double t_frac = n_filters == 1 ? 0.0 : static_cast<double>(i) / (n_filters - 1);
    bank.center_freqs[static_cast<std::size_t>(i)] =
        erb_rate_to_hz(lo_rate + (hi_rate - lo_rate) * t_frac);
  }

  for (int i = 0; i < n_filters; ++i) {
    const double fc = bank.center_freqs[static_cast<std::size_t>(i)];
    const double b = 1.019 * erb_bandwidth(fc);
    float* row = bank.impulse_responses.data() + static_cast<std::size_t>(i) * kernel_len;
    double norm = 0.0;
    for (int k = 0; k < kernel_len; ++k) {
      // Half-sample offset avoids the t = 0 zero of the t^3 envelope.
      const double t = (k + 0.5) / static_cast<double>(sample_rate);
      const double v = t * t * t * std::exp(-kTwoPi * b * t) * std::cos(kTwoPi * fc * t);
      row[k] = static_cast<float>(v);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    ensure(norm > 0.0, "gammatone_bank: degenerate zero-norm impulse response");
    const float inv = static_cast<float>(1.0 / norm);
    for (int k = 0; k < kernel_len; ++k) row[k] *= inv;
  }
  return bank;
}

}  // namespace audioatk::models
