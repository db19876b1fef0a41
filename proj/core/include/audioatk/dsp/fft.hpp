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

#include <complex>
#include <cstddef>
#include <vector>

namespace audioatk::dsp {

/// In-place iterative radix-2 FFT with precomputed twiddles.
/// Sizes must be powers of two. inverse() includes the 1/n scaling.
class Fft {
public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::complex<float>* data) const;
  void inverse(std::complex<float>* data) const;

  void forward(std::vector<std::complex<float>>& data) const;
  void inverse(std::vector<std::complex<float>>& data) const;

private:
  void transform(std::complex<float>* data, bool invert) const;

  std::size_t n_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<float>> twiddle_;      // forward
  std::vector<std::complex<float>> twiddle_inv_;
};

bool is_power_of_two(std::size_t n);

}  // namespace audioatk::dsp
