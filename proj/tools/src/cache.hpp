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

#include "audioatk/data/manifest.hpp"
#include "audioatk/nn/train.hpp"
#include "audioatk/pipeline/transfer.hpp"
#include "run_config.hpp"

namespace audioatk::cli {

pipeline::TransferParams transfer_params(const RunConfig& cfg);

/// Per-segment STFT containers (magnitude + phase) under one directory:
///   index.tsv   clip_id, label, fold, segments, content hash, wav path
///   <clip_id>/seg<k>.spec
/// Mel inputs are derived from the cached STFT at load time.
struct ClipCacheEntry {
  std::string clip_id;
  int label = 0;
  int fold = 1;
  int segments = 0;
  std::uint64_t hash = 0;
  std::string wav_path;  // relative to the manifest directory
};

struct CacheIndex {
  std::filesystem::path root;
  std::filesystem::path manifest_dir;
  std::vector<ClipCacheEntry> clips;

  std::filesystem::path segment_file(const std::string& clip_id, int seg) const;
  const ClipCacheEntry* find(const std::string& clip_id) const;
};

CacheIndex load_cache_index(const std::filesystem::path& root);
void save_cache_index(const CacheIndex& index);

struct PrepareStats {
  int processed = 0;
  int skipped = 0;  // cache hits
  std::vector<std::string> errors;
};

/// Builds/refreshes the cache for every manifest entry. Clips whose content
/// hash already matches are skipped; unreadable clips are reported and the
/// rest proceed. `jobs` bounds worker threads (0 = hardware concurrency).
PrepareStats prepare_cache(const data::Manifest& manifest,
                           const std::filesystem::path& manifest_dir, const RunConfig& cfg,
                           int jobs);

/// Training source over cached spectrogram segments of the given folds,
/// rescaled to the model input domain on fetch.
class SpectrogramCacheSource final : public nn::ExampleSource {
public:
  SpectrogramCacheSource(const CacheIndex& index, const std::vector<int>& folds,
                         pipeline::Repr repr, const RunConfig& cfg);

  std::size_t size() const override { return items_.size(); }
  int label(std::size_t i) const override { return items_[i].label; }
  nn::Shape example_shape() const override { return shape_; }
  void fetch(std::size_t i, nn::Tensor& out) const override;

private:
  struct Item {
    std::filesystem::path file;
    int label;
  };
  const CacheIndex& index_;
  std::vector<Item> items_;
  pipeline::Repr repr_;
  pipeline::TransferParams params_;
  nn::Shape shape_;
};

/// Training source over raw waveform segments; clips are held in memory as
/// 16-bit samples and segmented on fetch.
class WaveformSegmentSource final : public nn::ExampleSource {
public:
  WaveformSegmentSource(const data::Manifest& manifest, const std::filesystem::path& manifest_dir,
                        const std::vector<int>& folds, const RunConfig& cfg);

  std::size_t size() const override { return items_.size(); }
  int label(std::size_t i) const override { return items_[i].label; }
  nn::Shape example_shape() const override { return {window_, 1}; }
  void fetch(std::size_t i, nn::Tensor& out) const override;

private:
  struct Item {
    std::size_t clip;
    std::size_t offset;
    int label;
  };
  std::vector<std::vector<std::int16_t>> clips_;
  std::vector<Item> items_;
  int window_;
};

}  // namespace audioatk::cli
