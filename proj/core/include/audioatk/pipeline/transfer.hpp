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

#include <cstdint>
#include <string>
#include <vector>

#include "audioatk/attacks/attacks.hpp"
#include "audioatk/dsp/mel.hpp"
#include "audioatk/dsp/scale.hpp"
#include "audioatk/dsp/stft.hpp"
#include "audioatk/nn/network.hpp"
#include "audioatk/pipeline/aggregate.hpp"
#include "audioatk/pipeline/segment.hpp"

namespace audioatk::pipeline {

enum class Repr { Stft, Mel };

Repr parse_repr(const std::string& name);
std::string repr_name(Repr r);

/// Everything the spectrogram <-> audio <-> model plumbing needs.
struct TransferParams {
  dsp::StftSpec stft;
  SegmentationSpec segmentation;
  int n_mels = 64;
  double mel_f_min = 0.0;
  double mel_f_max = 0.0;  // 0 -> sample_rate / 2
  float db_floor = dsp::kDefaultDbFloor;
  int griffin_lim_iters = 60;
  std::uint64_t seed = 0;
  bool keep_audio = false;  // retain reconstructed waveforms in the record

  dsp::MelFilterbank filterbank(int sample_rate) const;
};

/// One audio segment lifted into the model input domain. The intermediate
/// spectrograms are kept so attacks can be mapped back to audio.
struct PreparedSegment {
  dsp::Spectrogram stft_mag;    // linear magnitude + phase
  dsp::Spectrogram normalized;  // model input domain ([0,1] of dB range)
  nn::Tensor input;             // [1, bins, frames, 1]
};

PreparedSegment prepare_segment(const dsp::Waveform& seg, Repr repr, const TransferParams& p);

/// Maps a (possibly perturbed) normalized spectrogram back to audio. STFT
/// representations reuse the phase of `phase_source`; Mel representations
/// invert the filterbank and run Griffin-Lim with `gl_seed`.
dsp::Waveform reconstruct_audio(const dsp::Spectrogram& normalized,
                                const dsp::Spectrogram& phase_source, Repr repr,
                                const TransferParams& p, std::uint64_t gl_seed,
                                std::size_t out_len);

struct SegmentOutcome {
  bool ok = false;
  std::string error;
  std::vector<float> probs_2d_legit, probs_2d_adv;
  std::vector<float> probs_1d_original, probs_1d_recon, probs_1d_adv;
  double snr_recon_db = 0.0;   // legit reconstruction vs original audio
  double snr_attack_db = 0.0;  // adversarial noise on the reconstruction
  double spectral_consistency = 0.0;  // | |STFT(adv audio)| - target | / |target|
  dsp::Waveform legit_audio, adv_audio;  // populated when keep_audio
};

struct AggregatedLabels {
  int mv = -1;
  int sr = -1;
};

/// Fig.-3 style outcome for one clip: per-segment predictions for the five
/// conditions plus clip-level aggregations and SNR readings.
struct TransferRecord {
  std::string clip_id;
  int label = 0;
  int fold = 1;
  std::vector<SegmentOutcome> segments;
  AggregatedLabels agg_2d_legit, agg_2d_adv;
  AggregatedLabels agg_1d_original, agg_1d_recon, agg_1d_adv;
  double clip_snr_recon_db = 0.0;   // mean over segments
  double clip_snr_attack_db = 0.0;  // mean over segments

  int segments_ok() const;
};

/// Attacks every segment of `clip` on the 2D model, reconstructs audio from
/// the perturbed spectrograms and evaluates the 1D model on original,
/// reconstructed-legitimate and reconstructed-adversarial audio. A segment
/// failure is recorded and skipped; the clip fails only when every segment
/// does.
TransferRecord transfer_attack(const dsp::Waveform& clip, const std::string& clip_id, int label,
                               int fold, nn::Network& net2d, nn::Network& net1d,
                               const attacks::AttackConfig& atk, Repr repr,
                               const TransferParams& p);

}  // namespace audioatk::pipeline
