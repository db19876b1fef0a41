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

#include "audioatk/dsp/spectrogram_io.hpp"

#include <cstring>
#include <fstream>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"

namespace audioatk::dsp {

namespace {
constexpr char kMagic[4] = {'S', 'P', 'E', 'C'};
constexpr std::uint16_t kPhaseFlag = 0x0001;
}  // namespace

void write_spectrogram(std::ostream& os, const Spectrogram& sp) {
  sp.check_dims();
  write_bytes(os, kMagic, 4);
  write_le<std::uint8_t>(os, static_cast<std::uint8_t>(sp.kind));
  write_le<std::uint8_t>(os, static_cast<std::uint8_t>(sp.scale));
  write_le<std::uint16_t>(os, sp.has_phase() ? kPhaseFlag : 0);
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(sp.bins));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(sp.frames));
  write_bytes(os, sp.values.data(), sp.values.size() * sizeof(float));
  if (sp.has_phase()) write_bytes(os, sp.phase.data(), sp.phase.size() * sizeof(float));
}

void write_spectrogram(const std::filesystem::path& path, const Spectrogram& sp) {
  atomic_write(path, [&](std::ostream& os) { write_spectrogram(os, sp); });
}

Spectrogram read_spectrogram(std::istream& is, const std::string& origin) {
  char magic[4];
  if (!read_bytes(is, magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError(origin + ": not a spectrogram container (bad magic at offset 0)");

  std::uint8_t kind = 0, scale = 0;
  std::uint16_t reserved = 0;
  std::uint32_t bins = 0, frames = 0;
  if (!read_le(is, kind) || !read_le(is, scale) || !read_le(is, reserved) ||
      !read_le(is, bins) || !read_le(is, frames))
    throw DataError(origin + ": truncated spectrogram header");
  if (kind > 1) throw DataError(origin + ": unknown spectrogram kind tag " + std::to_string(kind));
  if (scale > 2) throw DataError(origin + ": unknown scale tag " + std::to_string(scale));
  if (bins == 0 || frames == 0)
    throw DataError(origin + ": degenerate spectrogram dimensions " + std::to_string(bins) +
                    "x" + std::to_string(frames));

  Spectrogram sp;
  sp.kind = static_cast<SpecKind>(kind);
  sp.scale = static_cast<SpecScale>(scale);
  sp.bins = static_cast<int>(bins);
  sp.frames = static_cast<int>(frames);
  if (sp.kind == SpecKind::Mel) sp.n_mels = sp.bins;
  const std::size_t cells = static_cast<std::size_t>(bins) * frames;
  sp.values.resize(cells);
  if (!read_bytes(is, sp.values.data(), cells * sizeof(float)))
    throw DataError(origin + ": truncated value block (offset 16)");
  if (reserved & kPhaseFlag) {
    sp.phase.resize(cells);
    if (!read_bytes(is, sp.phase.data(), cells * sizeof(float)))
      throw DataError(origin + ": truncated phase block (offset " +
                      std::to_string(16 + cells * sizeof(float)) + ")");
  }
  return sp;
}

Spectrogram read_spectrogram(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open spectrogram file: " + path.string());
  return read_spectrogram(is, path.string());
}

}  // namespace audioatk::dsp
