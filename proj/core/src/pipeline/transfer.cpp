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

#include "audioatk/pipeline/transfer.hpp"

#include <cmath>
#include <limits>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"
#include "audioatk/dsp/griffin_lim.hpp"
#include "audioatk/metrics/snr.hpp"

namespace audioatk::pipeline {

Repr parse_repr(const std::string& name) {
  if (name == "stft") return Repr::Stft;
  if (name == "mf" || name == "mel") return Repr::Mel;
  throw std::invalid_argument("unknown representation '" + name + "' (expected stft or mf)");
}

std::string repr_name(Repr r) { return r == Repr::Stft ? "stft" : "mel"; }

dsp::MelFilterbank TransferParams::filterbank(int sample_rate) const {
  const double f_max = mel_f_max > 0.0 ? mel_f_max : sample_rate / 2.0;
  return dsp::mel_filterbank(n_mels, stft.fft_size, sample_rate, mel_f_min, f_max);
}

PreparedSegment prepare_segment(const dsp::Waveform& seg, Repr repr, const TransferParams& p) {
  PreparedSegment out;
  out.stft_mag = dsp::stft(seg, p.stft);
  dsp::Spectrogram linear;
  if (repr == Repr::Stft) {
    linear = out.stft_mag;
    linear.phase.clear();  // the model consumes magnitudes only
  } else {
    linear = dsp::mel_from_stft(out.stft_mag, p.filterbank(seg.sample_rate));
  }
  out.normalized = dsp::normalize_unit(dsp::db_scale(linear, p.db_floor));
  out.input.resize(nn::batched_shape(1, {out.normalized.bins, out.normalized.frames, 1}));
  std::copy(out.normalized.values.begin(), out.normalized.values.end(), out.input.data.begin());
  return out;
}

dsp::Waveform reconstruct_audio(const dsp::Spectrogram& normalized,
                                const dsp::Spectrogram& phase_source, Repr repr,
                                const TransferParams& p, std::uint64_t gl_seed,
                                std::size_t out_len) {
  const dsp::Spectrogram linear = dsp::inverse_db_scale(dsp::denormalize_unit(normalized));
  if (repr == Repr::Stft) {
    dsp::Spectrogram with_phase = linear;
    require(phase_source.has_phase(), "reconstruct_audio: phase source lacks phase");
    with_phase.phase = phase_source.phase;
    with_phase.spec = p.stft;
    return dsp::istft(with_phase, p.stft, out_len);
  }
  const dsp::MelFilterbank fb = p.filterbank(phase_source.sample_rate);
  dsp::Spectrogram stft_mag = dsp::mel_to_linear(linear, fb);
  stft_mag.spec = p.stft;
  stft_mag.sample_rate = phase_source.sample_rate;
  return dsp::griffin_lim(stft_mag, p.stft, p.griffin_lim_iters, gl_seed, out_len);
}

namespace {

std::vector<float> probs_row(const nn::Tensor& probs) {
  return std::vector<float>(probs.data.begin(), probs.data.end());
}

nn::Tensor waveform_tensor(const dsp::Waveform& w) {
  nn::Tensor t;
  t.resize(nn::batched_shape(1, {static_cast<int>(w.size()), 1}));
  std::copy(w.samples.begin(), w.samples.end(), t.data.begin());
  return t;
}

double spectral_consistency_error(const dsp::Waveform& audio, const dsp::Spectrogram& target,
                                  const dsp::StftSpec& spec) {
  const dsp::Spectrogram actual = dsp::stft(audio, spec);
  ensure(actual.values.size() == target.values.size(),
         "spectral consistency: frame grid mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < target.values.size(); ++i) {
    const double d = static_cast<double>(actual.values[i]) - target.values[i];
    num += d * d;
    den += static_cast<double>(target.values[i]) * target.values[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

AggregatedLabels aggregate_condition(const TransferRecord& rec,
                                     std::vector<float> SegmentOutcome::*field, int classes) {
  ProbMatrix m;
  m.classes = classes;
  for (const auto& seg : rec.segments) {
    if (!seg.ok) continue;
    const auto& row = seg.*field;
    m.p.insert(m.p.end(), row.begin(), row.end());
    ++m.segments;
  }
  if (m.segments == 0) return {};
  return {aggregate_majority(m), aggregate_sum(m)};
}

double mean_snr(const TransferRecord& rec, double SegmentOutcome::*field) {
  double acc = 0.0;
  int n = 0;
  for (const auto& seg : rec.segments) {
    if (!seg.ok) continue;
    acc += seg.*field;
    ++n;
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return acc / n;  // +inf segments propagate to an +inf clip mean
}

}  // namespace

int TransferRecord::segments_ok() const {
  int n = 0;
  for (const auto& s : segments) n += s.ok ? 1 : 0;
  return n;
}

TransferRecord transfer_attack(const dsp::Waveform& clip, const std::string& clip_id, int label,
                               int fold, nn::Network& net2d, nn::Network& net1d,
                               const attacks::AttackConfig& atk, Repr repr,
                               const TransferParams& p) {
  net2d.set_mode(nn::Mode::Eval);
  net1d.set_mode(nn::Mode::Eval);
  const int classes = net2d.output_shape().back();

  TransferRecord rec;
  rec.clip_id = clip_id;
  rec.label = label;
  rec.fold = fold;

  const auto segments = segment(clip, p.segmentation);
  const std::uint64_t clip_salt = fnv1a64(clip_id.data(), clip_id.size());
  std::string first_error;

  for (std::size_t si = 0; si < segments.size(); ++si) {
    SegmentOutcome out;
    try {
      const dsp::Waveform& seg_audio = segments[si].audio;
      PreparedSegment prep = prepare_segment(seg_audio, repr, p);

      attacks::AdversarialExample adv = attacks::attack(net2d, prep.input, label, atk);
      out.probs_2d_legit = probs_row(net2d.forward(prep.input));
      out.probs_2d_adv = probs_row(net2d.forward(adv.perturbed));

      dsp::Spectrogram adv_norm = prep.normalized;
      std::copy(adv.perturbed.data.begin(), adv.perturbed.data.end(), adv_norm.values.begin());

      // The same rescale/reconstruct chain runs on both sides, so a zero
      // budget yields bit-identical audio and an infinite attack SNR.
      const std::uint64_t gl_seed = p.seed ^ clip_salt ^ (0x9e3779b97f4a7c15ULL * (si + 1));
      dsp::Waveform legit =
          reconstruct_audio(prep.normalized, prep.stft_mag, repr, p, gl_seed, seg_audio.size());
      dsp::Waveform advw =
          reconstruct_audio(adv_norm, prep.stft_mag, repr, p, gl_seed, seg_audio.size());

      out.snr_recon_db = metrics::snr_between(legit, seg_audio).snr_db;
      out.snr_attack_db = metrics::snr_between(legit, advw).snr_db;
      {
        const dsp::Spectrogram adv_target =
            repr == Repr::Stft
                ? dsp::inverse_db_scale(dsp::denormalize_unit(adv_norm))
                : dsp::mel_to_linear(dsp::inverse_db_scale(dsp::denormalize_unit(adv_norm)),
                                     p.filterbank(seg_audio.sample_rate));
        out.spectral_consistency = spectral_consistency_error(advw, adv_target, p.stft);
      }

      out.probs_1d_original = probs_row(net1d.forward(waveform_tensor(seg_audio)));
      out.probs_1d_recon = probs_row(net1d.forward(waveform_tensor(legit)));
      out.probs_1d_adv = probs_row(net1d.forward(waveform_tensor(advw)));
      if (p.keep_audio) {
        out.legit_audio = std::move(legit);
        out.adv_audio = std::move(advw);
      }
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
      if (first_error.empty()) first_error = e.what();
    }
    rec.segments.push_back(std::move(out));
  }

  if (rec.segments_ok() == 0)
    throw DataError("transfer_attack: every segment of clip '" + clip_id +
                    "' failed; first error: " + first_error);

  rec.agg_2d_legit = aggregate_condition(rec, &SegmentOutcome::probs_2d_legit, classes);
  rec.agg_2d_adv = aggregate_condition(rec, &SegmentOutcome::probs_2d_adv, classes);
  rec.agg_1d_original = aggregate_condition(rec, &SegmentOutcome::probs_1d_original, classes);
  rec.agg_1d_recon = aggregate_condition(rec, &SegmentOutcome::probs_1d_recon, classes);
  rec.agg_1d_adv = aggregate_condition(rec, &SegmentOutcome::probs_1d_adv, classes);
  rec.clip_snr_recon_db = mean_snr(rec, &SegmentOutcome::snr_recon_db);
  rec.clip_snr_attack_db = mean_snr(rec, &SegmentOutcome::snr_attack_db);
  return rec;
}

}  // namespace audioatk::pipeline
