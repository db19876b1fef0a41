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
#include <vector>

namespace audioatk::data {

struct ManifestEntry {
  std::string path;     // relative to the manifest location or absolute
  std::string clip_id;
  int label = 0;
  int fold = 1;  // 1-based
};

/// Clip inventory with class names and a 3-fold assignment. On disk this is
/// tab-separated text (path, clip_id, label_index, fold), '#' comments; the
/// label names ride in a '# labels:' comment line.
struct Manifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> label_names;

  int n_classes() const { return static_cast<int>(label_names.size()); }
  std::vector<int> fold_sizes(int n_folds = 3) const;
  void validate() const;
};

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const Manifest& m);

/// Deterministic per-class shuffle and 3-fold split. The first fold takes
/// the per-class remainder, so the 10x100 corpus of the evaluation protocol
/// lands at 340/330/330 with 34/33/33 clips per class. When `gtzan_protocol`
/// is set the layout is required to be exactly 10 classes x 100 clips.
void split_folds(std::vector<ManifestEntry>& entries, std::uint64_t seed, int n_classes,
                 bool gtzan_protocol = false);

}  // namespace audioatk::data
