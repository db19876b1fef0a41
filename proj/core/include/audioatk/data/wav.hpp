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

#include "audioatk/dsp/waveform.hpp"

namespace audioatk::data {

/// RIFF/WAVE reader for 16-bit PCM and 32-bit IEEE float, mono or stereo
/// (stereo downmixes by channel mean). Rejects anything else with the byte
/// offset of the offending structure.
dsp::Waveform read_wav(const std::filesystem::path& path);

/// Writes mono 16-bit PCM. Samples are clamped to [-1, 1]; a read after
/// write matches within one 16-bit quantization step.
void write_wav(const std::filesystem::path& path, const dsp::Waveform& w);

}  // namespace audioatk::data
