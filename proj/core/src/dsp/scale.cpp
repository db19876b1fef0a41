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

#include "audioatk/dsp/scale.hpp"

#include <algorithm>
#include <cmath>

#include "audioatk/common/errors.hpp"

namespace audioatk::dsp {

Spectrogram db_scale(const Spectrogram& sp, float floor_db) {
  sp.check_dims();
  require(sp.scale == SpecScale::Linear, "db_scale: input must be linear scale");
  require(floor_db < 0.0f, "db_scale: floor_db must be negative");

  Spectrogram out = sp;
  out.scale = SpecScale::Decibel;
  out.db_floor = floor_db;

  float vmax = 0.0f;
  for (float v : sp.values) vmax = std::max(vmax, v);
  out.db_ref = vmax;
  if (vmax <= 0.0f) {
    std::fill(out.values.begin(), out.values.end(), floor_db);
    return out;
  }
  for (float& v : out.values) {
    float db = 20.0f * std::log10(std::max(v, kDbEps) / vmax);
    v = std::clamp(db, floor_db, 0.0f);
  }
  return out;
}

Spectrogram inverse_db_scale(const Spectrogram& sp) {
  sp.check_dims();
  require(sp.scale == SpecScale::Decibel, "inverse_db_scale: input must be decibel scale");

  Spectrogram out = sp;
  out.scale = SpecScale::Linear;
  const float ref = sp.db_ref;
  for (float& v : out.values) v = ref * std::pow(10.0f, v / 20.0f);
  out.db_ref = 0.0f;
  out.db_floor = 0.0f;
  return out;
}

Spectrogram normalize_unit(const Spectrogram& sp) {
  sp.check_dims();
  require(sp.scale == SpecScale::Decibel, "normalize_unit: input must be decibel scale");
  require(sp.db_floor < 0.0f, "normalize_unit: decibel floor unknown");

  Spectrogram out = sp;
  out.scale = SpecScale::NormalizedUnit;
  const float floor = sp.db_floor;
  for (float& v : out.values) v = (v - floor) / (-floor);
  return out;
}

Spectrogram denormalize_unit(const Spectrogram& sp) {
  sp.check_dims();
  require(sp.scale == SpecScale::NormalizedUnit, "denormalize_unit: input must be normalized-unit scale");
  require(sp.db_floor < 0.0f, "denormalize_unit: decibel floor unknown");

  Spectrogram out = sp;
  out.scale = SpecScale::Decibel;
  const float floor = sp.db_floor;
  for (float& v : out.values) v = v * (-floor) + floor;
  return out;
}

}  // namespace audioatk::dsp
