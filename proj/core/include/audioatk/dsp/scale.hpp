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

#include "audioatk/dsp/spectrogram.hpp"

namespace audioatk::dsp {

inline constexpr float kDefaultDbFloor = -80.0f;
inline constexpr float kDbEps = 1e-10f;

/// 20*log10(v / max), clipped to [floor_db, 0]. An all-zero spectrogram maps
/// to floor_db everywhere (db_ref recorded as 0).
Spectrogram db_scale(const Spectrogram& sp, float floor_db = kDefaultDbFloor);

/// Exact inverse for values above the floor; values at the floor come back
/// at the floor's linear equivalent.
Spectrogram inverse_db_scale(const Spectrogram& sp);

/// Affine [floor_db, 0] -> [0, 1].
Spectrogram normalize_unit(const Spectrogram& sp);

/// Exact inverse of normalize_unit.
Spectrogram denormalize_unit(const Spectrogram& sp);

}  // namespace audioatk::dsp
