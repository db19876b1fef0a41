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

#include <cstdio>
#include <filesystem>
#include <optional>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "audioatk/attacks/attacks.hpp"
#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"
#include "audioatk/data/toy.hpp"
#include "audioatk/data/wav.hpp"
#include "audioatk/dsp/spectrogram_io.hpp"
#include "audioatk/metrics/report.hpp"
#include "audioatk/metrics/snr.hpp"
#include "audioatk/models/builders.hpp"
#include "audioatk/nn/checkpoint.hpp"
#include "audioatk/nn/train.hpp"
#include "cache.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace audioatk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct CommonOpts {
  std::string config_file;
  cli::RunConfig cfg;
  std::vector<std::string> overrides;  // section.key=value
};

void apply_overrides(CommonOpts& c) {
  if (!c.config_file.empty()) c.cfg.load_file(c.config_file);
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects section.key=value, got '" + o + "'");
    const std::string path = o.substr(0, eq);
    const auto dot = path.find('.');
    if (dot == std::string::npos) throw UsageError("--set expects section.key=value, got '" + o + "'");
    c.cfg.set(path.substr(0, dot), path.substr(dot + 1), o.substr(eq + 1));
  }
}

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_file, "INI config file (CLI flags override it)");
  cmd->add_option("--set", c.overrides, "Config override, section.key=value (repeatable)");
  cmd->add_option("--seed", c.cfg.seed, "Master seed");
  cmd->add_option("--jobs", c.cfg.jobs, "Worker threads for clip-parallel stages (0 = auto)");
}

void write_config_snapshot(const fs::path& dir, const cli::RunConfig& cfg) {
  atomic_write(dir / "run_config.txt", [&](std::ostream& os) { os << cfg.snapshot(); });
}

std::vector<int> train_folds_for(int fold_test) {
  require(fold_test >= 1 && fold_test <= 3, "fold-test must be 1, 2 or 3");
  std::vector<int> folds;
  for (int f = 1; f <= 3; ++f)
    if (f != fold_test) folds.push_back(f);
  return folds;
}

// Segment-level evaluation of one clip through a 2D model, optionally under
// attack; used by cmd_attack and shared reporting.
struct Eval2dResult {
  pipeline::ProbMatrix legit, adv;
};

std::uint64_t file_hash(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw DataError("cannot open " + p.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    h = fnv1a64(buf, static_cast<std::size_t>(is.gcount()), h);
  }
  return h;
}

// ---------------------------------------------------------------------------

int cmd_toy_gen(const CommonOpts& c, const data::ToySpec& spec, const std::string& out_dir) {
  const data::Manifest m = data::generate_toy_corpus(spec, out_dir);
  write_config_snapshot(out_dir, c.cfg);
  std::printf("toy corpus: %zu clips, %d classes -> %s\n", m.entries.size(), m.n_classes(),
              out_dir.c_str());
  const auto sizes = m.fold_sizes();
  std::printf("folds: %d/%d/%d\n", sizes[0], sizes[1], sizes[2]);
  return kExitOk;
}

int cmd_prepare(const CommonOpts& c) {
  require(!c.cfg.manifest.empty(), "prepare: --manifest (or data.manifest) is required");
  const fs::path manifest_path = c.cfg.manifest;
  const data::Manifest m = data::load_manifest(manifest_path);
  const fs::path manifest_dir = manifest_path.parent_path();
  const cli::PrepareStats stats = cli::prepare_cache(m, manifest_dir, c.cfg, c.cfg.jobs);
  const fs::path cache_root = cli::effective_cache_dir(c.cfg);
  write_config_snapshot(cache_root, c.cfg);
  std::printf("prepare: %d processed, %d cache hits -> %s\n", stats.processed, stats.skipped,
              cache_root.string().c_str());
  if (!stats.errors.empty()) {
    std::fprintf(stderr, "prepare: %zu clip(s) failed:\n", stats.errors.size());
    for (const auto& e : stats.errors) std::fprintf(stderr, "  %s\n", e.c_str());
    return kExitData;
  }
  return kExitOk;
}

int cmd_train(const CommonOpts& c, const std::string& model, const std::string& repr_name,
              int fold_test, const std::string& out_dir) {
  require(model == "2d" || model == "1d", "train: --model must be 2d or 1d");
  const fs::path out(out_dir);
  fs::create_directories(out);
  const std::vector<int> folds = train_folds_for(fold_test);

  nn::TrainConfig tc;
  tc.batch = c.cfg.batch;
  tc.max_epochs = c.cfg.max_epochs;
  tc.patience = c.cfg.patience;
  tc.val_fraction = c.cfg.val_fraction;
  tc.seed = c.cfg.seed;
  tc.optimizer = c.cfg.optimizer;
  tc.lr = c.cfg.lr;
  tc.verbose = true;

  std::unique_ptr<cli::CacheIndex> index;  // outlives the source reading it
  std::unique_ptr<nn::ExampleSource> source;
  std::optional<nn::Network> net;
  if (model == "2d") {
    const pipeline::Repr repr = pipeline::parse_repr(repr_name);
    const fs::path cache_root = cli::effective_cache_dir(c.cfg);
    if (!fs::exists(cache_root / "index.tsv"))
      throw DataError("train: no spectrogram cache at " + cache_root.string() +
                      "; run `audioatk prepare --manifest ...` first");
    index = std::make_unique<cli::CacheIndex>(cli::load_cache_index(cache_root));
    auto src = std::make_unique<cli::SpectrogramCacheSource>(*index, folds, repr, c.cfg);
    const int bins = src->example_shape()[0];
    const int frames = src->example_shape()[1];
    source = std::move(src);
    net.emplace(models::build_2d_cnn(bins, models::kNumClasses, frames, c.cfg.seed));
  } else {
    require(!c.cfg.manifest.empty(), "train 1d: --manifest (or data.manifest) is required");
    const fs::path manifest_path = c.cfg.manifest;
    const data::Manifest m = data::load_manifest(manifest_path);
    source = std::make_unique<cli::WaveformSegmentSource>(m, manifest_path.parent_path(), folds,
                                                          c.cfg);
    net.emplace(models::build_1d_cnn(models::kNumClasses, c.cfg.window_len, 22050, c.cfg.seed));
  }

  // Very wide dense layers cannot afford an in-memory snapshot copy.
  std::size_t param_count = 0;
  for (auto* p : net->params()) param_count += p->size();
  if (param_count > (100u << 20)) {
    tc.snapshot_in_memory = false;
    tc.snapshot_path = out / ".best_snapshot.nnck";
  }

  const nn::TrainHistory hist = nn::train(*net, *source, tc);

  const std::string stem = model + (model == "2d" ? "_" + repr_name : "") + "_fold" +
                           std::to_string(fold_test);
  const fs::path ckpt = out / (stem + ".nnck");
  nn::save_network(ckpt, *net);
  write_config_snapshot(out, c.cfg);

  atomic_write(out / (stem + ".history.tsv"), [&](std::ostream& os) {
    os << "# model: " << model << "\n";
    if (model == "2d") os << "# repr: " << repr_name << "\n";
    os << "# fold_test: " << fold_test << "\n";
    os << "# train_folds: " << folds[0] << "," << folds[1] << "\n";
    os << "# seed: " << c.cfg.seed << "\n";
    os << "# optimizer: " << c.cfg.optimizer << "\n";
    os << "# best_epoch: " << hist.best_epoch + 1 << "\n";
    os << "# cached_prefix_layers: " << hist.cached_prefix_layers << "\n";
    os << "epoch\ttrain_loss\ttrain_acc\tval_loss\tval_acc\n";
    char line[160];
    for (std::size_t e = 0; e < hist.epochs.size(); ++e) {
      const auto& st = hist.epochs[e];
      std::snprintf(line, sizeof(line), "%zu\t%.6f\t%.6f\t%.6f\t%.6f\n", e + 1, st.train_loss,
                    st.train_accuracy, st.val_loss, st.val_accuracy);
      os << line;
    }
  });

  std::printf("train: %zu epochs (best %d), checkpoint %s (hash %016llx)\n", hist.epochs.size(),
              hist.best_epoch + 1, ckpt.string().c_str(),
              static_cast<unsigned long long>(file_hash(ckpt)));
  return kExitOk;
}

attacks::AttackConfig attack_config_from(const cli::RunConfig& cfg) {
  attacks::AttackConfig atk;
  atk.method = attacks::parse_attack_method(cfg.attack_method);
  atk.epsilon = static_cast<float>(cfg.epsilon);
  atk.steps = atk.method == attacks::AttackMethod::Fgsm ? 1 : cfg.steps;
  atk.step_size = static_cast<float>(cfg.step_size);
  return atk;
}

int cmd_attack(const CommonOpts& c, const std::string& checkpoint, const std::string& repr_name,
               int fold_test, const std::string& out_dir, bool write_specs) {
  const pipeline::Repr repr = pipeline::parse_repr(repr_name);
  const fs::path out(out_dir);
  fs::create_directories(out);
  const fs::path cache_root = cli::effective_cache_dir(c.cfg);
  if (!fs::exists(cache_root / "index.tsv"))
    throw DataError("attack: no spectrogram cache at " + cache_root.string() +
                    "; run `audioatk prepare --manifest ...` first");
  const cli::CacheIndex index = cli::load_cache_index(cache_root);
  const pipeline::TransferParams params = cli::transfer_params(c.cfg);
  const attacks::AttackConfig atk = attack_config_from(c.cfg);

  nn::Network net = nn::load_network(checkpoint);
  const int want_bins = repr == pipeline::Repr::Stft ? params.stft.bins() : params.n_mels;
  require(net.input_shape().size() == 3 && net.input_shape()[0] == want_bins,
          "attack: checkpoint " + checkpoint + " expects input " + nn::shape_str(net.input_shape()) +
              " but the " + repr_name + " representation produces bins=" + std::to_string(want_bins));
  net.set_mode(nn::Mode::Eval);

  metrics::ExperimentReport report;
  report.config_text = c.cfg.snapshot();
  if (write_specs) fs::create_directories(out / "adv_specs");

  for (const auto& clip : index.clips) {
    if (clip.fold != fold_test) continue;
    pipeline::ProbMatrix legit, adv;
    legit.classes = adv.classes = net.output_shape().back();
    int seg_correct_legit = 0, seg_correct_adv = 0;
    for (int s = 0; s < clip.segments; ++s) {
      dsp::Spectrogram sp = dsp::read_spectrogram(index.segment_file(clip.clip_id, s));
      sp.spec = params.stft;
      dsp::Spectrogram linear = repr == pipeline::Repr::Stft
                                    ? sp
                                    : dsp::mel_from_stft(sp, params.filterbank(sp.sample_rate));
      if (repr == pipeline::Repr::Stft) linear.phase.clear();
      const dsp::Spectrogram norm = dsp::normalize_unit(dsp::db_scale(linear, params.db_floor));
      nn::Tensor x;
      x.resize(nn::batched_shape(1, {norm.bins, norm.frames, 1}));
      std::copy(norm.values.begin(), norm.values.end(), x.data.begin());

      const attacks::AdversarialExample ex = attacks::attack(net, x, clip.label, atk);
      const auto p_legit = net.forward(ex.original);
      const auto p_adv = net.forward(ex.perturbed);
      legit.p.insert(legit.p.end(), p_legit.data.begin(), p_legit.data.end());
      adv.p.insert(adv.p.end(), p_adv.data.begin(), p_adv.data.end());
      ++legit.segments;
      ++adv.segments;
      seg_correct_legit += ex.pred_before == clip.label ? 1 : 0;
      seg_correct_adv += ex.pred_after == clip.label ? 1 : 0;

      if (write_specs) {
        dsp::Spectrogram adv_norm = norm;
        std::copy(ex.perturbed.data.begin(), ex.perturbed.data.end(), adv_norm.values.begin());
        const dsp::Spectrogram adv_linear = dsp::inverse_db_scale(dsp::denormalize_unit(adv_norm));
        dsp::write_spectrogram(out / "adv_specs" / (clip.clip_id + "_seg" + std::to_string(s) + ".spec"),
                               adv_linear);
      }
    }

    metrics::ClipRecord r;
    r.clip_id = clip.clip_id;
    r.fold = clip.fold;
    r.level = "model2d";
    r.repr = repr_name == "mf" ? "mel" : repr_name;
    r.label = clip.label;
    r.segments_total = clip.segments;

    metrics::ClipRecord legit_r = r;
    legit_r.attack = "none";
    legit_r.pred_mv = pipeline::aggregate_majority(legit);
    legit_r.pred_sr = pipeline::aggregate_sum(legit);
    legit_r.segments_correct = seg_correct_legit;
    report.records.push_back(legit_r);

    metrics::ClipRecord adv_r = r;
    adv_r.attack = attacks::attack_method_name(atk.method);
    adv_r.pred_mv = pipeline::aggregate_majority(adv);
    adv_r.pred_sr = pipeline::aggregate_sum(adv);
    adv_r.segments_correct = seg_correct_adv;
    report.records.push_back(adv_r);
  }

  require(!report.records.empty(), "attack: no clips in test fold " + std::to_string(fold_test));
  report.finalize();
  report.verify_consistency();
  report.write_csv(out / "report.csv");
  report.write_text(out / "report.txt");
  write_config_snapshot(out, c.cfg);
  for (const auto& key : report.condition_keys()) {
    const auto& t = report.tables.at(key);
    std::printf("%-24s seg %.4f  mv %.4f  sr %.4f\n", key.c_str(), t.segment.mean, t.mv.mean,
                t.sr.mean);
  }
  return kExitOk;
}

int cmd_transfer(const CommonOpts& c, const std::string& ckpt2d, const std::string& ckpt1d,
                 const std::string& repr_name, int fold_test, const std::string& out_dir,
                 bool write_audio) {
  require(!c.cfg.manifest.empty(), "transfer: --manifest (or data.manifest) is required");
  const pipeline::Repr repr = pipeline::parse_repr(repr_name);
  const fs::path out(out_dir);
  fs::create_directories(out);
  if (write_audio) fs::create_directories(out / "audio");

  const fs::path manifest_path = c.cfg.manifest;
  const data::Manifest m = data::load_manifest(manifest_path);
  const fs::path manifest_dir = manifest_path.parent_path();

  pipeline::TransferParams params = cli::transfer_params(c.cfg);
  params.keep_audio = write_audio;
  const attacks::AttackConfig atk = attack_config_from(c.cfg);

  nn::Network net2d = nn::load_network(ckpt2d);
  nn::Network net1d = nn::load_network(ckpt1d);
  const int want_bins = repr == pipeline::Repr::Stft ? params.stft.bins() : params.n_mels;
  require(net2d.input_shape().size() == 3 && net2d.input_shape()[0] == want_bins,
          "transfer: 2D checkpoint " + ckpt2d + " expects " + nn::shape_str(net2d.input_shape()) +
              " but repr " + repr_name + " produces bins=" + std::to_string(want_bins));
  require(net1d.input_shape().size() == 2 &&
              net1d.input_shape()[0] == static_cast<int>(params.segmentation.window_len),
          "transfer: 1D checkpoint " + ckpt1d + " expects " + nn::shape_str(net1d.input_shape()) +
              " but segmentation window is " + std::to_string(params.segmentation.window_len));

  metrics::ExperimentReport report;
  report.config_text = c.cfg.snapshot();
  const std::string atk_name = attacks::attack_method_name(atk.method);
  const std::string repr_tag = repr_name == "mf" ? "mel" : repr_name;

  for (const auto& entry : m.entries) {
    if (entry.fold != fold_test) continue;
    const dsp::Waveform clip = data::read_wav(manifest_dir / entry.path);
    const pipeline::TransferRecord rec = pipeline::transfer_attack(
        clip, entry.clip_id, entry.label, entry.fold, net2d, net1d, atk, repr, params);

    auto push = [&](const std::string& level, const std::string& attack, const std::string& rep,
                    const pipeline::AggregatedLabels& agg,
                    std::vector<float> pipeline::SegmentOutcome::*probs, double clip_snr,
                    double pipeline::SegmentOutcome::*seg_snr) {
      metrics::ClipRecord r;
      r.clip_id = entry.clip_id;
      r.fold = entry.fold;
      r.level = level;
      r.attack = attack;
      r.repr = rep;
      r.label = entry.label;
      r.pred_mv = agg.mv;
      r.pred_sr = agg.sr;
      r.snr_db = clip_snr;
      const int classes = net2d.output_shape().back();
      for (const auto& seg : rec.segments) {
        if (!seg.ok) continue;
        ++r.segments_total;
        const auto& row = seg.*probs;
        int best = 0;
        for (int cc = 1; cc < classes; ++cc)
          if (row[static_cast<std::size_t>(cc)] > row[static_cast<std::size_t>(best)]) best = cc;
        r.segments_correct += best == entry.label ? 1 : 0;
        if (seg_snr) r.segment_snrs.push_back(seg.*seg_snr);
      }
      report.records.push_back(std::move(r));
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    push("model2d", "none", repr_tag, rec.agg_2d_legit, &pipeline::SegmentOutcome::probs_2d_legit,
         nan, nullptr);
    push("model2d", atk_name, repr_tag, rec.agg_2d_adv, &pipeline::SegmentOutcome::probs_2d_adv,
         nan, nullptr);
    push("audio_original", "none", "wave", rec.agg_1d_original,
         &pipeline::SegmentOutcome::probs_1d_original, nan, nullptr);
    push("audio_recon", "none", repr_tag, rec.agg_1d_recon,
         &pipeline::SegmentOutcome::probs_1d_recon, rec.clip_snr_recon_db,
         &pipeline::SegmentOutcome::snr_recon_db);
    push("audio_recon", atk_name, repr_tag, rec.agg_1d_adv, &pipeline::SegmentOutcome::probs_1d_adv,
         rec.clip_snr_attack_db, &pipeline::SegmentOutcome::snr_attack_db);

    if (write_audio) {
      for (std::size_t s = 0; s < rec.segments.size(); ++s) {
        if (!rec.segments[s].ok) continue;
        const std::string stem = entry.clip_id + "_seg" + std::to_string(s);
        data::write_wav(out / "audio" / (stem + "_legit.wav"), rec.segments[s].legit_audio);
        data::write_wav(out / "audio" / (stem + "_adv.wav"), rec.segments[s].adv_audio);
      }
    }
    for (std::size_t s = 0; s < rec.segments.size(); ++s)
      if (!rec.segments[s].ok)
        std::fprintf(stderr, "transfer: %s segment %zu failed: %s\n", entry.clip_id.c_str(), s,
                     rec.segments[s].error.c_str());
  }

  require(!report.records.empty(), "transfer: no clips in test fold " + std::to_string(fold_test));
  report.finalize();
  report.verify_consistency();
  report.write_csv(out / "report.csv");
  report.write_text(out / "report.txt");
  write_config_snapshot(out, c.cfg);
  for (const auto& key : report.condition_keys()) {
    const auto& t = report.tables.at(key);
    const auto& s = report.snrs.at(key);
    std::printf("%-28s seg %.4f  mv %.4f  sr %.4f", key.c_str(), t.segment.mean, t.mv.mean,
                t.sr.mean);
    if (s.clips > 0) std::printf("  snr %s", metrics::snr_to_string(s.clip_mean).c_str());
    std::printf("\n");
  }
  return kExitOk;
}

int cmd_report(const std::string& csv, const std::string& out_file) {
  const auto records = metrics::read_csv(csv);
  require(!records.empty(), "report: CSV has no records");
  metrics::ExperimentReport report;
  report.records = records;
  report.finalize();
  report.verify_consistency();
  std::string text;
  for (const auto& key : report.condition_keys()) {
    const auto& t = report.tables.at(key);
    const auto& s = report.snrs.at(key);
    char line[256];
    std::snprintf(line, sizeof(line), "%-28s mv %.4f+-%.4f  sr %.4f+-%.4f", key.c_str(), t.mv.mean,
                  t.mv.sd, t.sr.mean, t.sr.sd);
    text += line;
    if (s.clips > 0) text += "  snr " + metrics::snr_to_string(s.clip_mean);
    text += "\n";
  }
  std::fputs(text.c_str(), stdout);
  if (!out_file.empty())
    atomic_write(fs::path(out_file), [&](std::ostream& os) { os << text; });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrogram-domain adversarial attacks with audio-waveform transfer"};
  app.require_subcommand(1);

  CommonOpts c;

  // toy-gen
  auto* toy = app.add_subcommand("toy-gen", "Generate the synthetic tone corpus");
  data::ToySpec toy_spec;
  std::string toy_out = "toy_corpus";
  toy->add_option("--out", toy_out, "Output directory")->required();
  toy->add_option("--classes", toy_spec.n_classes, "Number of classes");
  toy->add_option("--clips-per-class", toy_spec.clips_per_class, "Clips per class");
  toy->add_option("--clip-seconds", toy_spec.clip_len_s, "Clip length in seconds");
  toy->add_option("--gap-db", toy_spec.competitor_gap_db, "Class margin in dB");
  toy->add_option("--noise-db", toy_spec.noise_floor_db, "Noise floor in dB");
  add_common(toy, c);

  // prepare
  auto* prep = app.add_subcommand("prepare", "Segment clips and cache spectrograms");
  prep->add_option("--manifest", c.cfg.manifest, "Manifest file");
  prep->add_option("--cache", c.cfg.cache_dir, "Cache directory");
  add_common(prep, c);

  // train
  auto* tr = app.add_subcommand("train", "Train the 2D or 1D model");
  std::string model, repr = "stft", out_dir = "runs";
  int fold_test = 1;
  tr->add_option("--model", model, "2d or 1d")->required();
  tr->add_option("--repr", repr, "stft or mf (2D model input)");
  tr->add_option("--fold-test", fold_test, "Held-out fold (1-3)");
  tr->add_option("--out", out_dir, "Output directory");
  tr->add_option("--cache", c.cfg.cache_dir, "Cache directory");
  tr->add_option("--manifest", c.cfg.manifest, "Manifest file (1d model)");
  tr->add_option("--epochs", c.cfg.max_epochs, "Max epochs");
  tr->add_option("--batch", c.cfg.batch, "Batch size");
  tr->add_option("--patience", c.cfg.patience, "Early-stopping patience");
  tr->add_option("--lr", c.cfg.lr, "Learning rate");
  tr->add_option("--optimizer", c.cfg.optimizer, "adam or sgd");
  add_common(tr, c);

  // attack
  auto* at = app.add_subcommand("attack", "Attack spectrograms against the 2D model");
  std::string checkpoint;
  bool write_specs = true;
  at->add_option("--checkpoint", checkpoint, "2D model checkpoint")->required();
  at->add_option("--repr", repr, "stft or mf");
  at->add_option("--fold-test", fold_test, "Test fold (1-3)");
  at->add_option("--out", out_dir, "Output directory");
  at->add_option("--cache", c.cfg.cache_dir, "Cache directory");
  at->add_option("--attack", c.cfg.attack_method, "fgsm or bim");
  at->add_option("--eps", c.cfg.epsilon, "Perturbation budget (normalized units)");
  at->add_option("--steps", c.cfg.steps, "BIM steps");
  at->add_flag("--write-specs,!--no-write-specs", write_specs, "Write adversarial spectrograms");
  add_common(at, c);

  // transfer
  auto* tf = app.add_subcommand("transfer",
                                "Attack 2D spectrograms, rebuild audio, evaluate the 1D model");
  std::string ckpt2d, ckpt1d;
  bool write_audio = true;
  tf->add_option("--checkpoint-2d", ckpt2d, "2D model checkpoint")->required();
  tf->add_option("--checkpoint-1d", ckpt1d, "1D model checkpoint")->required();
  tf->add_option("--repr", repr, "stft or mf");
  tf->add_option("--fold-test", fold_test, "Test fold (1-3)");
  tf->add_option("--out", out_dir, "Output directory");
  tf->add_option("--manifest", c.cfg.manifest, "Manifest file");
  tf->add_option("--attack", c.cfg.attack_method, "fgsm or bim");
  tf->add_option("--eps", c.cfg.epsilon, "Perturbation budget (normalized units)");
  tf->add_option("--steps", c.cfg.steps, "BIM steps");
  tf->add_flag("--write-audio,!--no-write-audio", write_audio, "Write reconstructed WAVs");
  add_common(tf, c);

  // report
  auto* rp = app.add_subcommand("report", "Re-aggregate a report CSV");
  std::string csv, report_out;
  rp->add_option("--csv", csv, "Report CSV")->required();
  rp->add_option("--out", report_out, "Optional output text file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_overrides(c);
    if (toy->parsed()) return cmd_toy_gen(c, toy_spec, toy_out);
    if (prep->parsed()) return cmd_prepare(c);
    if (tr->parsed()) return cmd_train(c, model, repr, fold_test, out_dir);
    if (at->parsed()) return cmd_attack(c, checkpoint, repr, fold_test, out_dir, write_specs);
    if (tf->parsed()) return cmd_transfer(c, ckpt2d, ckpt1d, repr, fold_test, out_dir, write_audio);
    if (rp->parsed()) return cmd_report(csv, report_out);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
