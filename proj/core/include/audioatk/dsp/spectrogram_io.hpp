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
#include <iosfwd>

#include "audioatk/dsp/spectrogram.hpp"

namespace audioatk::dsp {

// Spectrogram container file:
//   offset 0   magic "SPEC"
//   offset 4   u8  kind (0 = STFT magnitude, 1 = Mel)
//   offset 5   u8  scale (0 = linear, 1 = decibel, 2 = normalized unit)
//   offset 6   u16 reserved, bit 0 = phase block present
//   offset 8   u32 bins
//   offset 12  u32 frames
//   offset 16  bins*frames float32 little-endian values, row-major,
//              then an identically shaped phase block when flagged.
// Scaling metadata (db_ref/db_floor) is not part of the container; callers
// persist linear-scale spectrograms and rescale on load.

void write_spectrogram(std::ostream& os, const Spectrogram& sp);
void write_spectrogram(const std::filesystem::path& path, const Spectrogram& sp);

Spectrogram read_spectrogram(std::istream& is, const std::string& origin = "<stream>");
Spectrogram read_spectrogram(const std::filesystem::path& path);

}  // namespace audioatk::dsp
