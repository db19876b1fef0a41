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

#include "audioatk/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"
#include "audioatk/metrics/snr.hpp"

namespace audioatk::metrics {

namespace {

void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  for (double x : xs) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(xs.size()));  // population SD
}

std::string fmt(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string condition_key(const ClipRecord& r) {
  return r.level + "/" + r.attack + "/" + r.repr;
}

std::vector<int> folds_present(std::span<const ClipRecord> records) {
  std::vector<int> folds;
  for (const auto& r : records)
    if (std::find(folds.begin(), folds.end(), r.fold) == folds.end()) folds.push_back(r.fold);
  std::sort(folds.begin(), folds.end());
  return folds;
}

AccuracyTable accuracy_table(std::span<const ClipRecord> records, int n_folds) {
  require(n_folds >= 1, "accuracy_table: need at least one fold");
  std::vector<int> folds(static_cast<std::size_t>(n_folds));
  for (int f = 0; f < n_folds; ++f) folds[static_cast<std::size_t>(f)] = f + 1;
  return accuracy_table(records, folds);
}

AccuracyTable accuracy_table(std::span<const ClipRecord> records, const std::vector<int>& folds) {
  require(!records.empty(), "accuracy_table: no records");
  require(!folds.empty(), "accuracy_table: need at least one fold");

  AccuracyTable t;
  for (int f : folds) {
    long seg_total = 0, seg_correct = 0, clips = 0, mv_correct = 0, sr_correct = 0;
    for (const auto& r : records) {
      if (r.fold != f) continue;
      ++clips;
      seg_total += r.segments_total;
      seg_correct += r.segments_correct;
      mv_correct += r.pred_mv == r.label ? 1 : 0;
      sr_correct += r.pred_sr == r.label ? 1 : 0;
    }
    require(clips > 0, "accuracy_table: fold " + std::to_string(f) + " has no clips");
    // Records re-read from the CSV table carry no per-segment counts;
    // segment-level accuracy is then reported as NaN.
    t.segment.fold_values.push_back(seg_total > 0
                                        ? static_cast<double>(seg_correct) / static_cast<double>(seg_total)
                                        : std::numeric_limits<double>::quiet_NaN());
    t.mv.fold_values.push_back(static_cast<double>(mv_correct) / static_cast<double>(clips));
    t.sr.fold_values.push_back(static_cast<double>(sr_correct) / static_cast<double>(clips));
  }
  mean_sd(t.segment.fold_values, t.segment.mean, t.segment.sd);
  mean_sd(t.mv.fold_values, t.mv.mean, t.mv.sd);
  mean_sd(t.sr.fold_values, t.sr.mean, t.sr.sd);
  return t;
}

SnrSummary snr_summary(std::span<const ClipRecord> records) {
  SnrSummary s;
  std::vector<double> clip_vals, seg_vals;
  for (const auto& r : records) {
    if (!std::isnan(r.snr_db)) clip_vals.push_back(r.snr_db);
    for (double v : r.segment_snrs) seg_vals.push_back(v);
  }
  s.clips = static_cast<int>(clip_vals.size());
  s.segments = static_cast<int>(seg_vals.size());
  mean_sd(clip_vals, s.clip_mean, s.clip_sd);
  mean_sd(seg_vals, s.segment_mean, s.segment_sd);
  return s;
}

std::vector<std::string> ExperimentReport::condition_keys() const {
  std::vector<std::string> keys;
  for (const auto& r : records) {
    const std::string k = condition_key(r);
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  return keys;
}

std::vector<ClipRecord> ExperimentReport::condition(const std::string& key) const {
  std::vector<ClipRecord> out;
  for (const auto& r : records)
    if (condition_key(r) == key) out.push_back(r);
  return out;
}

void ExperimentReport::finalize() {
  tables.clear();
  snrs.clear();
  for (const auto& key : condition_keys()) {
    const auto rows = condition(key);
    tables[key] = accuracy_table(rows, folds_present(rows));
    snrs[key] = snr_summary(rows);
  }
}

void ExperimentReport::write_csv(const std::filesystem::path& path) const {
  atomic_write(path, [&](std::ostream& os) {
    os << "clip_id,fold,level,attack,repr,label,pred_mv,pred_sr,snr_db\n";
    for (const auto& r : records) {
      os << r.clip_id << ',' << r.fold << ',' << r.level << ',' << r.attack << ',' << r.repr
         << ',' << r.label << ',' << r.pred_mv << ',' << r.pred_sr << ','
         << (std::isnan(r.snr_db) ? "nan" : snr_to_string(r.snr_db)) << '\n';
    }
  });
}

void ExperimentReport::write_text(const std::filesystem::path& path) const {
  atomic_write(path, [&](std::ostream& os) {
    os << "# audioatk experiment report\n\n[config]\n" << config_text;
    if (!config_text.empty() && config_text.back() != '\n') os << '\n';
    for (const auto& key : condition_keys()) {
      const auto it = tables.find(key);
      ensure(it != tables.end(), "report: write_text before finalize");
      const AccuracyTable& t = it->second;
      os << "\n[condition " << key << "]\n";
      auto level = [&](const char* tag, const LevelAccuracy& a) {
        for (std::size_t f = 0; f < a.fold_values.size(); ++f)
          os << "fold_" << f + 1 << "_" << tag << "_accuracy: " << fmt(a.fold_values[f]) << '\n';
        os << tag << "_accuracy_mean: " << fmt(a.mean) << '\n';
        os << tag << "_accuracy_sd: " << fmt(a.sd) << '\n';
      };
      level("segment", t.segment);
      level("mv", t.mv);
      level("sr", t.sr);
      const SnrSummary& s = snrs.at(key);
      if (s.clips > 0) {
        os << "snr_clip_mean: " << fmt(s.clip_mean) << '\n';
        os << "snr_clip_sd: " << fmt(s.clip_sd) << '\n';
      }
      if (s.segments > 0) {
        os << "snr_segment_mean: " << fmt(s.segment_mean) << '\n';
        os << "snr_segment_sd: " << fmt(s.segment_sd) << '\n';
      }
    }
  });
}

void ExperimentReport::verify_consistency() const {
  auto close = [](double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    if (std::isinf(a) || std::isinf(b)) return (std::isinf(a) && std::isinf(b)) && (a > 0) == (b > 0);
    return std::abs(a - b) <= 1e-9;
  };
  for (const auto& key : condition_keys()) {
    const auto rows = condition(key);
    const auto it = tables.find(key);
    ensure(it != tables.end(), "report: aggregates missing for condition " + key);
    const AccuracyTable fresh = accuracy_table(rows, folds_present(rows));
    const AccuracyTable& stored = it->second;
    auto check_level = [&](const LevelAccuracy& a, const LevelAccuracy& b) {
      ensure(a.fold_values.size() == b.fold_values.size() && close(a.mean, b.mean) && close(a.sd, b.sd),
             "report: stored accuracy aggregates drifted from per-clip records (" + key + ")");
      for (std::size_t i = 0; i < a.fold_values.size(); ++i)
        ensure(close(a.fold_values[i], b.fold_values[i]),
               "report: stored fold accuracy drifted from per-clip records (" + key + ")");
    };
    check_level(fresh.segment, stored.segment);
    check_level(fresh.mv, stored.mv);
    check_level(fresh.sr, stored.sr);
    const SnrSummary fs = snr_summary(rows);
    const SnrSummary& ss = snrs.at(key);
    ensure(close(fs.clip_mean, ss.clip_mean) && close(fs.segment_mean, ss.segment_mean),
           "report: stored SNR aggregates drifted from per-clip records (" + key + ")");
  }
}

std::vector<ClipRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open report CSV: " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "clip_id,fold,level,attack,repr,label,pred_mv,pred_sr,snr_db")
    throw DataError(path.string() + ": unexpected CSV header");
  std::vector<ClipRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 9 fields, got " +
                      std::to_string(fields.size()));
    ClipRecord r;
    r.clip_id = fields[0];
    r.fold = std::stoi(fields[1]);
    r.level = fields[2];
    r.attack = fields[3];
    r.repr = fields[4];
    r.label = std::stoi(fields[5]);
    r.pred_mv = std::stoi(fields[6]);
    r.pred_sr = std::stoi(fields[7]);
    r.snr_db = fields[8] == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                  : snr_from_string(fields[8]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace audioatk::metrics
