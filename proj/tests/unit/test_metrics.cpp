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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "audioatk/common/errors.hpp"
#include "audioatk/common/rng.hpp"
#include "audioatk/metrics/report.hpp"
#include "audioatk/metrics/snr.hpp"

using namespace audioatk;
using namespace audioatk::metrics;

namespace fs = std::filesystem;

TEST_CASE("power closed forms") {
  std::vector<float> c(100, -0.4f);
  CHECK(power(c) == doctest::Approx(0.4));
  std::vector<float> z(64, 0.0f);
  CHECK(power(z) == doctest::Approx(0.0));
  CHECK_THROWS_AS(power(std::span<const float>{}), std::invalid_argument);

  // Oracle: RMS of a unit sinusoid over whole periods is 1/sqrt(2).
  std::vector<float> s(2200);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = static_cast<float>(std::sin(2.0 * 3.14159265358979 * 10.0 * static_cast<double>(i) / s.size()));
  CHECK(power(s) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("snr closed forms and sentinels") {
  std::vector<float> x(1000);
  Rng rng(4);
  for (auto& v : x) v = static_cast<float>(rng.uniform(-1, 1));

  // power ratio 10 -> exactly 20 dB
  std::vector<float> tenth(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) tenth[i] = x[i] / 10.0f;
  CHECK(snr(x, tenth).snr_db == doctest::Approx(20.0).epsilon(1e-9));

  // v = x -> 0 dB within float rounding
  CHECK(std::abs(snr(x, x).snr_db) < 1e-9);

  // zero noise -> +inf sentinel, flagged imperceptible
  std::vector<float> zero(x.size(), 0.0f);
  const auto inf = snr(x, zero);
  CHECK(std::isinf(inf.snr_db));
  CHECK(inf.snr_db > 0);
  CHECK(inf.imperceptible());
  CHECK(snr_to_string(inf.snr_db) == "inf");
  CHECK(std::isinf(snr_from_string("inf")));

  CHECK_THROWS_AS(snr(x, std::vector<float>(10, 0.1f)), std::invalid_argument);
}

TEST_CASE("snr is invariant under common positive scaling") {
  Rng rng(5);
  std::vector<float> x(500), v(500);
  for (auto& a : x) a = static_cast<float>(rng.uniform(-1, 1));
  for (auto& a : v) a = static_cast<float>(rng.uniform(-0.1, 0.1));
  const double base = snr(x, v).snr_db;
  for (float k : {0.25f, 3.0f, 17.5f}) {
    std::vector<float> xk(500), vk(500);
    for (std::size_t i = 0; i < 500; ++i) {
      xk[i] = k * x[i];
      vk[i] = k * v[i];
    }
    CHECK(snr(xk, vk).snr_db == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("imperceptibility threshold sits at 20 dB") {
  SnrReading r;
  r.snr_db = 20.0;
  CHECK(r.imperceptible());
  r.snr_db = 19.99;
  CHECK(!r.imperceptible());
}

namespace {

ClipRecord rec(const std::string& id, int fold, int label, int mv, int sr, int seg_total,
               int seg_correct) {
  ClipRecord r;
  r.clip_id = id;
  r.fold = fold;
  r.level = "model2d";
  r.attack = "none";
  r.repr = "mel";
  r.label = label;
  r.pred_mv = mv;
  r.pred_sr = sr;
  r.segments_total = seg_total;
  r.segments_correct = seg_correct;
  return r;
}

}  // namespace

TEST_CASE("accuracy table: all correct gives 100 percent and zero SD") {
  std::vector<ClipRecord> rows;
  for (int f = 1; f <= 3; ++f)
    for (int i = 0; i < 4; ++i)
      rows.push_back(rec("c" + std::to_string(f) + std::to_string(i), f, 1, 1, 1, 21, 21));
  const auto t = accuracy_table(rows, 3);
  CHECK(t.segment.mean == doctest::Approx(1.0));
  CHECK(t.mv.mean == doctest::Approx(1.0));
  CHECK(t.sr.mean == doctest::Approx(1.0));
  CHECK(t.mv.sd == doctest::Approx(0.0));
}

TEST_CASE("accuracy table: fixture folds 0.5/0.6/0.7 give mean 0.6, SD 0.0816") {
  // Oracle: hand computation. Population SD of {0.5, 0.6, 0.7} is
  // sqrt(((0.1)^2 + 0 + (0.1)^2) / 3) = 0.081649...
  std::vector<ClipRecord> rows;
  auto add_fold = [&](int fold, int correct_of_ten) {
    for (int i = 0; i < 10; ++i) {
      const bool ok = i < correct_of_ten;
      rows.push_back(rec("f" + std::to_string(fold) + "_" + std::to_string(i), fold, 2,
                         ok ? 2 : 0, ok ? 2 : 0, 10, ok ? 10 : 0));
    }
  };
  add_fold(1, 5);
  add_fold(2, 6);
  add_fold(3, 7);
  const auto t = accuracy_table(rows, 3);
  CHECK(t.mv.mean == doctest::Approx(0.6));
  CHECK(t.mv.sd == doctest::Approx(0.0816496580927726).epsilon(1e-9));
  CHECK(t.sr.mean == doctest::Approx(0.6));
  CHECK(t.segment.mean == doctest::Approx(0.6));
}

TEST_CASE("accuracy table rejects an empty fold") {
  std::vector<ClipRecord> rows{rec("a", 1, 0, 0, 0, 5, 5)};
  CHECK_THROWS_WITH_AS(accuracy_table(rows, 3), doctest::Contains("fold 2"),
                       std::invalid_argument);
}

TEST_CASE("report aggregates are reproducible from their records") {
  ExperimentReport report;
  report.config_text = "[run]\nseed = 1\n";
  Rng rng(6);
  for (int f = 1; f <= 3; ++f)
    for (int i = 0; i < 6; ++i) {
      ClipRecord r = rec("c" + std::to_string(f) + "_" + std::to_string(i), f, i % 3,
                         static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3)), 21,
                         static_cast<int>(rng.below(22)));
      r.snr_db = rng.uniform(5.0, 40.0);
      r.segment_snrs = {r.snr_db - 1, r.snr_db + 1};
      report.records.push_back(r);
    }
  report.finalize();
  report.verify_consistency();  // must not throw

  // Tamper with a stored mean: verification must notice.
  report.tables.begin()->second.mv.mean += 1e-6;
  CHECK_THROWS_AS(report.verify_consistency(), InvariantError);
}

TEST_CASE("csv round trip preserves records and the inf sentinel") {
  const fs::path dir = fs::temp_directory_path() / "audioatk_metrics_test";
  fs::create_directories(dir);
  const fs::path csv = dir / "report.csv";

  ExperimentReport report;
  ClipRecord a = rec("clip_a", 1, 3, 3, 2, 21, 18);
  a.snr_db = std::numeric_limits<double>::infinity();
  ClipRecord b = rec("clip_b", 2, 0, 0, 0, 21, 21);
  b.snr_db = 23.4567;
  ClipRecord c = rec("clip_c", 3, 1, 1, 1, 21, 11);  // snr stays nan
  report.records = {a, b, c};
  report.finalize();
  report.write_csv(csv);

  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "clip_id,fold,level,attack,repr,label,pred_mv,pred_sr,snr_db");

  const auto back = read_csv(csv);
  REQUIRE(back.size() == 3);
  CHECK(back[0].clip_id == "clip_a");
  CHECK(std::isinf(back[0].snr_db));
  CHECK(back[1].snr_db == doctest::Approx(23.4567));
  CHECK(std::isnan(back[2].snr_db));
  CHECK(back[2].pred_mv == 1);

  // Aggregating the parsed records reproduces the original MV/SR tables.
  ExperimentReport re;
  re.records = back;
  re.finalize();
  const auto& t0 = report.tables.at(condition_key(a));
  const auto& t1 = re.tables.at(condition_key(a));
  CHECK(t0.mv.mean == doctest::Approx(t1.mv.mean).epsilon(1e-12));
  CHECK(t0.sr.mean == doctest::Approx(t1.sr.mean).epsilon(1e-12));
  fs::remove_all(dir);
}

TEST_CASE("text report contains per-fold blocks and SNR summaries") {
  const fs::path dir = fs::temp_directory_path() / "audioatk_metrics_text";
  fs::create_directories(dir);
  ExperimentReport report;
  report.config_text = "[attack]\nmethod = bim\n";
  for (int f = 1; f <= 2; ++f) {
    ClipRecord r = rec("c" + std::to_string(f), f, 0, 0, 0, 21, 20);
    r.snr_db = 25.0;
    report.records.push_back(r);
  }
  report.finalize();
  const fs::path txt = dir / "report.txt";
  report.write_text(txt);
  std::ifstream is(txt);
  std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(all.find("[config]") != std::string::npos);
  CHECK(all.find("method = bim") != std::string::npos);
  CHECK(all.find("[condition model2d/none/mel]") != std::string::npos);
  CHECK(all.find("fold_1_mv_accuracy:") != std::string::npos);
  CHECK(all.find("mv_accuracy_mean:") != std::string::npos);
  CHECK(all.find("snr_clip_mean: 25.0") != std::string::npos);
  fs::remove_all(dir);
}
