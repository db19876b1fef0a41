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

#include <cstdint>
#include <filesystem>
#include <string>

namespace audioatk::cli {

/// Every tunable of the pipeline in one place. Values load from an INI-style
/// config file (sections in brackets, key = value) and may be overridden on
/// the command line; unknown keys are rejected. The canonical text snapshot
/// is embedded in every report for reproducibility.
struct RunConfig {
  // [data]
  std::string manifest;
  std::string cache_dir = "cache";
  // [stft]
  int fft_size = 512;
  int hop = 256;
  // [segmentation]
  int window_len = 110250;
  double overlap = 0.75;
  // [mel]
  int n_mels = 64;
  double mel_f_min = 0.0;
  double mel_f_max = 0.0;  // 0 -> sample_rate/2
  // [scale]
  double db_floor = -80.0;
  // [train]
  int batch = 50;
  int max_epochs = 100;
  int patience = 10;
  double val_fraction = 0.2;
  double lr = 1e-3;
  std::string optimizer = "adam";
  // [attack]
  std::string attack_method = "bim";
  double epsilon = 0.02;
  int steps = 10;
  double step_size = 0.0;  // 0 -> epsilon/steps
  // [reconstruct]
  int griffin_lim_iters = 60;
  // [run]
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 -> hardware concurrency

  /// Applies `key = value` from section `section`; throws UsageError on
  /// unknown keys or malformed values.
  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Loads an INI file over the current values.
  void load_file(const std::filesystem::path& path);

  /// Canonical snapshot, stable byte-for-byte for identical configs.
  std::string snapshot() const;
};

/// Cache directory after the AUDIOATK_CACHE_DIR environment override.
std::filesystem::path effective_cache_dir(const RunConfig& cfg);

}  // namespace audioatk::cli
