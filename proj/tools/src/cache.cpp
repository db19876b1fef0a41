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

#include "cache.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"
#include "audioatk/data/wav.hpp"
#include "audioatk/dsp/spectrogram_io.hpp"

namespace audioatk::cli {

namespace fs = std::filesystem;

pipeline::TransferParams transfer_params(const RunConfig& cfg) {
  pipeline::TransferParams p;
  p.stft.fft_size = cfg.fft_size;
  p.stft.hop = cfg.hop;
  p.segmentation.window_len = static_cast<std::size_t>(cfg.window_len);
  p.segmentation.overlap = cfg.overlap;
  p.n_mels = cfg.n_mels;
  p.mel_f_min = cfg.mel_f_min;
  p.mel_f_max = cfg.mel_f_max;
  p.db_floor = static_cast<float>(cfg.db_floor);
  p.griffin_lim_iters = cfg.griffin_lim_iters;
  p.seed = cfg.seed;
  return p;
}

std::filesystem::path CacheIndex::segment_file(const std::string& clip_id, int seg) const {
  return root / clip_id / ("seg" + std::to_string(seg) + ".spec");
}

const ClipCacheEntry* CacheIndex::find(const std::string& clip_id) const {
  for (const auto& c : clips)
    if (c.clip_id == clip_id) return &c;
  return nullptr;
}

namespace {

std::uint64_t content_hash(const fs::path& wav, const RunConfig& cfg) {
  std::ifstream is(wav, std::ios::binary);
  if (!is) throw DataError("cannot open audio file: " + wav.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    h = fnv1a64(buf, static_cast<std::size_t>(is.gcount()), h);
  }
  const std::string fingerprint = std::to_string(cfg.fft_size) + "/" + std::to_string(cfg.hop) +
                                  "/" + std::to_string(cfg.window_len) + "/" +
                                  std::to_string(cfg.overlap);
  return fnv1a64(fingerprint.data(), fingerprint.size(), h);
}

}  // namespace

CacheIndex load_cache_index(const fs::path& root) {
  CacheIndex index;
  index.root = root;
  const fs::path file = root / "index.tsv";
  if (!fs::exists(file)) return index;
  std::ifstream is(file);
  if (!is) throw DataError("cannot open cache index: " + file.string());
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') {
      const std::string tag = "# manifest_dir:";
      if (line.rfind(tag, 0) == 0) index.manifest_dir = line.substr(tag.size() + 1);
      continue;
    }
    std::stringstream ss(line);
    ClipCacheEntry e;
    std::string label, fold, segs, hash;
    if (!std::getline(ss, e.clip_id, '\t') || !std::getline(ss, label, '\t') ||
        !std::getline(ss, fold, '\t') || !std::getline(ss, segs, '\t') ||
        !std::getline(ss, hash, '\t') || !std::getline(ss, e.wav_path))
      throw DataError(file.string() + ": malformed index line: " + line);
    e.label = std::stoi(label);
    e.fold = std::stoi(fold);
    e.segments = std::stoi(segs);
    e.hash = std::stoull(hash);
    index.clips.push_back(std::move(e));
  }
  return index;
}

void save_cache_index(const CacheIndex& index) {
  atomic_write(index.root / "index.tsv", [&](std::ostream& os) {
    os << "# audioatk spectrogram cache: clip_id, label, fold, segments, hash, wav_path\n";
    os << "# manifest_dir: " << index.manifest_dir.string() << "\n";
    for (const auto& e : index.clips)
      os << e.clip_id << '\t' << e.label << '\t' << e.fold << '\t' << e.segments << '\t' << e.hash
         << '\t' << e.wav_path << '\n';
  });
}

PrepareStats prepare_cache(const data::Manifest& manifest, const fs::path& manifest_dir,
                           const RunConfig& cfg, int jobs) {
  manifest.validate();
  const fs::path root = effective_cache_dir(cfg);
  fs::create_directories(root);
  CacheIndex old_index = load_cache_index(root);

  CacheIndex index;
  index.root = root;
  index.manifest_dir = manifest_dir;
  index.clips.resize(manifest.entries.size());

  const pipeline::TransferParams params = transfer_params(cfg);
  PrepareStats stats;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::vector<char> ok(manifest.entries.size(), 0);

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= manifest.entries.size()) return;
      const auto& entry = manifest.entries[i];
      try {
        const fs::path wav_path = manifest_dir / entry.path;
        const std::uint64_t hash = content_hash(wav_path, cfg);

        ClipCacheEntry ce;
        ce.clip_id = entry.clip_id;
        ce.label = entry.label;
        ce.fold = entry.fold;
        ce.hash = hash;
        ce.wav_path = entry.path;

        const ClipCacheEntry* prev = old_index.find(entry.clip_id);
        bool hit = prev && prev->hash == hash && prev->segments > 0;
        if (hit) {
          for (int s = 0; s < prev->segments && hit; ++s)
            hit = fs::exists(index.segment_file(entry.clip_id, s));
        }
        if (hit) {
          ce.segments = prev->segments;
          index.clips[i] = std::move(ce);
          ok[i] = 1;
          std::lock_guard lock(mu);
          ++stats.skipped;
          continue;
        }

        const dsp::Waveform clip = data::read_wav(wav_path);
        if (clip.sample_rate != 22050)
          throw DataError(wav_path.string() + ": sample rate " + std::to_string(clip.sample_rate) +
                          " != 22050 (resampling is out of scope; convert first)");
        const auto segments = pipeline::segment(clip, params.segmentation);
        fs::create_directories(root / entry.clip_id);
        for (std::size_t s = 0; s < segments.size(); ++s) {
          const dsp::Spectrogram sp = dsp::stft(segments[s].audio, params.stft);
          dsp::write_spectrogram(index.segment_file(entry.clip_id, static_cast<int>(s)), sp);
        }
        ce.segments = static_cast<int>(segments.size());
        index.clips[i] = std::move(ce);
        ok[i] = 1;
        std::lock_guard lock(mu);
        ++stats.processed;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        stats.errors.push_back(entry.clip_id + ": " + e.what());
      }
    }
  };

  int n_jobs = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  n_jobs = std::max(1, std::min<int>(n_jobs, static_cast<int>(manifest.entries.size())));
  if (n_jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Drop failed clips from the index; the good ones stay resumable.
  CacheIndex final_index;
  final_index.root = index.root;
  final_index.manifest_dir = index.manifest_dir;
  for (std::size_t i = 0; i < index.clips.size(); ++i)
    if (ok[i]) final_index.clips.push_back(std::move(index.clips[i]));
  save_cache_index(final_index);
  return stats;
}

SpectrogramCacheSource::SpectrogramCacheSource(const CacheIndex& index,
                                               const std::vector<int>& folds, pipeline::Repr repr,
                                               const RunConfig& cfg)
    : index_(index), repr_(repr), params_(transfer_params(cfg)) {
  for (const auto& clip : index.clips) {
    if (std::find(folds.begin(), folds.end(), clip.fold) == folds.end()) continue;
    for (int s = 0; s < clip.segments; ++s)
      items_.push_back({index.segment_file(clip.clip_id, s), clip.label});
  }
  require(!items_.empty(), "cache source: no segments in the requested folds");
  const int frames = dsp::stft_frame_count(static_cast<std::size_t>(cfg.window_len), params_.stft);
  const int bins = repr == pipeline::Repr::Stft ? params_.stft.bins() : params_.n_mels;
  shape_ = {bins, frames, 1};
}

void SpectrogramCacheSource::fetch(std::size_t i, nn::Tensor& out) const {
  dsp::Spectrogram sp = dsp::read_spectrogram(items_[i].file);
  sp.spec = params_.stft;
  dsp::Spectrogram linear;
  if (repr_ == pipeline::Repr::Stft) {
    linear = std::move(sp);
    linear.phase.clear();
  } else {
    linear = dsp::mel_from_stft(sp, params_.filterbank(sp.sample_rate));
  }
  const dsp::Spectrogram norm = dsp::normalize_unit(dsp::db_scale(linear, params_.db_floor));
  out.resize({norm.bins, norm.frames, 1});
  std::copy(norm.values.begin(), norm.values.end(), out.data.begin());
  require(out.shape == shape_, "cache source: segment " + items_[i].file.string() +
                                   " does not match the expected input shape");
}

WaveformSegmentSource::WaveformSegmentSource(const data::Manifest& manifest,
                                             const fs::path& manifest_dir,
                                             const std::vector<int>& folds, const RunConfig& cfg)
    : window_(cfg.window_len) {
  pipeline::SegmentationSpec seg;
  seg.window_len = static_cast<std::size_t>(cfg.window_len);
  seg.overlap = cfg.overlap;
  for (const auto& entry : manifest.entries) {
    if (std::find(folds.begin(), folds.end(), entry.fold) == folds.end()) continue;
    const dsp::Waveform w = data::read_wav(manifest_dir / entry.path);
    if (w.sample_rate != 22050)
      throw DataError(entry.path + ": sample rate " + std::to_string(w.sample_rate) + " != 22050");
    // 16-bit PCM inputs decode as q/32768, so this re-quantization is exact.
    std::vector<std::int16_t> q(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      const long v = std::lround(std::clamp(w.samples[k], -1.0f, 1.0f) * 32768.0);
      q[k] = static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L));
    }
    const std::size_t n_segs = pipeline::segment_count(w.size(), seg);
    require(n_segs > 0, entry.path + ": clip shorter than one segment window");
    for (std::size_t s = 0; s < n_segs; ++s)
      items_.push_back({clips_.size(), s * seg.hop(), entry.label});
    clips_.push_back(std::move(q));
  }
  require(!items_.empty(), "waveform source: no segments in the requested folds");
}

void WaveformSegmentSource::fetch(std::size_t i, nn::Tensor& out) const {
  const Item& it = items_[i];
  out.resize({window_, 1});
  const auto& clip = clips_[it.clip];
  for (int k = 0; k < window_; ++k)
    out.data[static_cast<std::size_t>(k)] =
        static_cast<float>(clip[it.offset + static_cast<std::size_t>(k)]) / 32768.0f;
}

}  // namespace audioatk::cli
