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

#include "audioatk/data/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"

namespace audioatk::data {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

[[noreturn]] void fail(const std::filesystem::path& path, std::streamoff offset,
                       const std::string& reason) {
  throw DataError(path.string() + ": " + reason + " (offset " + std::to_string(offset) + ")");
}

}  // namespace

dsp::Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open WAV file: " + path.string());

  char tag[4];
  std::uint32_t riff_size = 0;
  if (!read_bytes(is, tag, 4) || std::memcmp(tag, "RIFF", 4) != 0)
    fail(path, 0, "not a RIFF file");
  if (!read_le(is, riff_size)) fail(path, 4, "truncated RIFF size");
  if (!read_bytes(is, tag, 4) || std::memcmp(tag, "WAVE", 4) != 0)
    fail(path, 8, "not a WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  std::vector<char> payload;
  std::streamoff data_offset = -1;

  while (true) {
    const std::streamoff chunk_at = is.tellg();
    if (!read_bytes(is, tag, 4)) break;
    std::uint32_t size = 0;
    if (!read_le(is, size)) fail(path, chunk_at + 4, "truncated chunk size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) fail(path, chunk_at, "fmt chunk too small");
      std::uint32_t byte_rate = 0;
      std::uint16_t block_align = 0;
      if (!read_le(is, format) || !read_le(is, channels) || !read_le(is, sample_rate) ||
          !read_le(is, byte_rate) || !read_le(is, block_align) || !read_le(is, bits))
        fail(path, chunk_at + 8, "truncated fmt chunk");
      is.seekg(size - 16 + (size & 1), std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data_offset = chunk_at;
      payload.resize(size);
      if (size > 0 && !read_bytes(is, payload.data(), size))
        fail(path, chunk_at + 8, "truncated data chunk");
      if (size & 1) is.seekg(1, std::ios::cur);
    } else {
      is.seekg(size + (size & 1), std::ios::cur);
      if (!is) fail(path, chunk_at, "truncated chunk body");
    }
  }

  if (!have_fmt) fail(path, 12, "missing fmt chunk");
  if (data_offset < 0) fail(path, 12, "missing data chunk");
  if (payload.empty()) fail(path, data_offset, "zero-length data chunk");
  if (channels != 1 && channels != 2)
    fail(path, data_offset, "unsupported channel count " + std::to_string(channels));
  if (!((format == kFormatPcm && bits == 16) || (format == kFormatFloat && bits == 32)))
    fail(path, data_offset,
         "unsupported codec (format " + std::to_string(format) + ", " + std::to_string(bits) +
             " bits); expected 16-bit PCM or 32-bit float");
  if (sample_rate == 0) fail(path, data_offset, "zero sample rate");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  if (payload.size() % frame_bytes != 0)
    fail(path, data_offset, "data chunk is not a whole number of frames");
  const std::size_t frames = payload.size() / frame_bytes;

  dsp::Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  w.samples.resize(frames);
  if (format == kFormatPcm) {
    const auto* s = reinterpret_cast<const std::int16_t*>(payload.data());
    for (std::size_t i = 0; i < frames; ++i) {
      if (channels == 1) {
        w.samples[i] = static_cast<float>(s[i]) / 32768.0f;
      } else {
        const std::int32_t mix = (static_cast<std::int32_t>(s[2 * i]) + s[2 * i + 1]) / 2;
        w.samples[i] = static_cast<float>(mix) / 32768.0f;
      }
    }
  } else {
    const auto* s = reinterpret_cast<const float*>(payload.data());
    for (std::size_t i = 0; i < frames; ++i) {
      float v = channels == 1 ? s[i] : 0.5f * (s[2 * i] + s[2 * i + 1]);
      w.samples[i] = std::clamp(v, -1.0f, 1.0f);
    }
  }
  return w;
}

void write_wav(const std::filesystem::path& path, const dsp::Waveform& w) {
  require(!w.empty(), "write_wav: empty waveform");
  require(w.sample_rate > 0, "write_wav: sample rate must be positive");

  atomic_write(path, [&](std::ostream& os) {
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(w.size() * 2);
    write_bytes(os, "RIFF", 4);
    write_le<std::uint32_t>(os, 36 + data_bytes);
    write_bytes(os, "WAVE", 4);
    write_bytes(os, "fmt ", 4);
    write_le<std::uint32_t>(os, 16);
    write_le<std::uint16_t>(os, kFormatPcm);
    write_le<std::uint16_t>(os, 1);  // mono
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(w.sample_rate));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(w.sample_rate) * 2);
    write_le<std::uint16_t>(os, 2);
    write_le<std::uint16_t>(os, 16);
    write_bytes(os, "data", 4);
    write_le<std::uint32_t>(os, data_bytes);
    for (float v : w.samples) {
      const float c = std::clamp(v, -1.0f, 1.0f);
      const long q = std::lround(static_cast<double>(c) * 32768.0);
      write_le<std::int16_t>(os, static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L)));
    }
  });
}

}  // namespace audioatk::data
