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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace audioatk {

// All on-disk formats are little-endian. The helpers assume a little-endian
// host (checked once at compile time) so float blocks can be moved in bulk.
static_assert(std::endian::native == std::endian::little,
              "audioatk file formats require a little-endian host");

template <class T>
void write_le(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
[[nodiscard]] bool read_le(std::istream& is, T& value) {
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return static_cast<bool>(is);
}

inline void write_bytes(std::ostream& os, const void* data, std::size_t n) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
}

[[nodiscard]] inline bool read_bytes(std::istream& is, void* data, std::size_t n) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n));
  return static_cast<bool>(is);
}

/// Replace `path` atomically: write to a sibling temp file, then rename.
/// `writer` receives the temp stream; any exception removes the temp file.
template <class Writer>
void atomic_write(const std::filesystem::path& path, Writer&& writer) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
    try {
      writer(os);
    } catch (...) {
      os.close();
      fs::remove(tmp);
      throw;
    }
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

/// FNV-1a over a byte range; used for cache-freshness checks.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace audioatk
