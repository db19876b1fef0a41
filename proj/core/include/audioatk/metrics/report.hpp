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

#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace audioatk::metrics {

/// One evaluated clip under one condition. `level` names the surface the
/// prediction was made on (model2d, audio_original, audio_recon), `attack`
/// is none/fgsm/bim and `repr` stft/mel/wave. snr_db is NaN when the row has
/// no reconstruction-noise reading.
struct ClipRecord {
  std::string clip_id;
  int fold = 1;
  std::string level;
  std::string attack = "none";
  std::string repr;
  int label = 0;
  int pred_mv = 0;
  int pred_sr = 0;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  int segments_total = 0;
  int segments_correct = 0;
  std::vector<double> segment_snrs;  // optional, reported at segment granularity
};

struct LevelAccuracy {
  std::vector<double> fold_values;  // one accuracy per fold, in fold order
  double mean = 0.0;
  double sd = 0.0;  // population SD across folds
};

struct AccuracyTable {
  LevelAccuracy segment, mv, sr;
};

/// Fold ids occurring in the records, ascending.
std::vector<int> folds_present(std::span<const ClipRecord> records);

/// Segment / majority-vote / sum-rule accuracies per fold with mean and
/// population SD across folds. Rejects requested folds without clips.
AccuracyTable accuracy_table(std::span<const ClipRecord> records, const std::vector<int>& folds);
AccuracyTable accuracy_table(std::span<const ClipRecord> records, int n_folds);

struct SnrSummary {
  double clip_mean = 0.0;
  double clip_sd = 0.0;
  double segment_mean = 0.0;
  double segment_sd = 0.0;
  int clips = 0;
  int segments = 0;
};

/// Mean/SD of SNR at clip and segment granularity over records that carry a
/// reading. +inf readings propagate into the means.
SnrSummary snr_summary(std::span<const ClipRecord> records);

/// Experiment output: a config snapshot plus per-clip records. finalize()
/// computes the per-condition aggregate tables; they stay reproducible from
/// the records themselves.
struct ExperimentReport {
  std::string config_text;
  int n_folds = 3;
  std::vector<ClipRecord> records;
  std::map<std::string, AccuracyTable> tables;  // keyed by condition
  std::map<std::string, SnrSummary> snrs;

  /// Grouped by (level, attack, repr), in first-appearance order.
  std::vector<std::string> condition_keys() const;
  std::vector<ClipRecord> condition(const std::string& key) const;

  /// Computes and stores the aggregate tables.
  void finalize();

  void write_csv(const std::filesystem::path& path) const;
  void write_text(const std::filesystem::path& path) const;

  /// Recomputes every aggregate from the per-clip records and checks the
  /// stored tables match within 1e-9. Throws InvariantError on drift.
  void verify_consistency() const;
};

std::string condition_key(const ClipRecord& r);

/// Reads back a CSV written by write_csv (per-segment data is not part of
/// the table format).
std::vector<ClipRecord> read_csv(const std::filesystem::path& path);

}  // namespace audioatk::metrics
