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

// Exercises the installed command-line surface through real subprocesses:
// exit codes, config rejection, cache behaviour. The binary path arrives via
// AUDIOATK_BIN (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using std::filesystem::path;

namespace {

path tool() {
  if (const char* p = std::getenv("AUDIOATK_BIN"); p && *p) return p;
  return AUDIOATK_BIN_PATH;
}

int run(const std::string& args) {
  const std::string cmd = tool().string() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  path dir;
  explicit TempDir(const std::string& tag) : dir(std::filesystem::temp_directory_path() / tag) {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
};

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("definitely-not-a-subcommand") == 1);
  CHECK(run("train") == 1);                    // missing required --model
  CHECK(run("train --model 3d --out /tmp/x") == 1);
  CHECK(run("prepare") == 1);                  // manifest required
}

TEST_CASE("config files reject unknown keys with a usage error") {
  TempDir tmp("audioatk_cli_cfg");
  const path cfg = tmp.dir / "bad.ini";
  {
    std::ofstream os(cfg);
    os << "[stft]\nfft_size = 512\nwumbo = 3\n";
  }
  CHECK(run("prepare --manifest missing.tsv --config " + cfg.string()) == 1);

  const path good = tmp.dir / "good.ini";
  {
    std::ofstream os(good);
    os << "[stft]\nfft_size = 512\nhop = 256\n";
  }
  // config parses; then the missing manifest is a data error (2)
  CHECK(run("prepare --manifest missing.tsv --config " + good.string()) == 2);
  // --set override with an unknown key
  CHECK(run("prepare --manifest missing.tsv --set stft.bogus=1") == 1);
}

TEST_CASE("data errors exit with code 2") {
  CHECK(run("report --csv does_not_exist.csv") == 2);
  CHECK(run("attack --checkpoint nope.nnck --repr mf --cache nowhere --out /tmp/atk_out") == 2);
}

TEST_CASE("toy-gen, prepare and cache hits") {
  TempDir tmp("audioatk_cli_pipeline");
  const path corpus = tmp.dir / "corpus";
  const path cache = tmp.dir / "cache";
  CHECK(run("toy-gen --out " + corpus.string() +
            " --classes 2 --clips-per-class 3 --clip-seconds 1 --seed 5") == 0);
  CHECK(std::filesystem::exists(corpus / "manifest.tsv"));
  CHECK(std::filesystem::exists(corpus / "run_config.txt"));

  // A 1 s clip is shorter than the 5 s window: every clip fails -> exit 2,
  // and the failures are named on stderr.
  const std::string prep = "prepare --manifest " + (corpus / "manifest.tsv").string() +
                           " --cache " + cache.string();
  CHECK(run(prep) == 2);

  // With a matching window the same corpus prepares cleanly.
  const std::string prep_small = prep + " --set segmentation.window_len=22050";
  CHECK(run(prep_small) == 0);
  CHECK(std::filesystem::exists(cache / "index.tsv"));

  // Re-running is a no-op cache hit: index mtime-insensitive content check.
  std::string before, line;
  {
    std::ifstream is(cache / "index.tsv");
    while (std::getline(is, line)) before += line + "\n";
  }
  CHECK(run(prep_small) == 0);
  std::string after;
  {
    std::ifstream is(cache / "index.tsv");
    while (std::getline(is, line)) after += line + "\n";
  }
  CHECK(before == after);

  // Corrupt one clip: it is reported, the others stay usable.
  {
    std::ofstream os(corpus / "clips" / "tone0_1.wav", std::ios::binary | std::ios::trunc);
    os << "garbage";
  }
  CHECK(run(prep_small) == 2);
  std::string index_text;
  {
    std::ifstream is(cache / "index.tsv");
    while (std::getline(is, line)) index_text += line + "\n";
  }
  CHECK(index_text.find("tone0_0") != std::string::npos);
  CHECK(index_text.find("tone0_1") == std::string::npos);
  CHECK(index_text.find("tone1_2") != std::string::npos);
}

TEST_CASE("training records its folds and is checkpoint-deterministic") {
  TempDir tmp("audioatk_cli_train");
  const path corpus = tmp.dir / "corpus";
  const path cache = tmp.dir / "cache";
  REQUIRE(run("toy-gen --out " + corpus.string() +
              " --classes 2 --clips-per-class 3 --clip-seconds 5 --seed 9") == 0);
  REQUIRE(run("prepare --manifest " + (corpus / "manifest.tsv").string() + " --cache " +
              cache.string()) == 0);

  const std::string train = "train --model 2d --repr mf --fold-test 2 --cache " + cache.string() +
                            " --epochs 1 --batch 2 --patience 1 --seed 9 --out ";
  REQUIRE(run(train + (tmp.dir / "runs_a").string()) == 0);
  REQUIRE(run(train + (tmp.dir / "runs_b").string()) == 0);

  // history names the training folds and excludes the test fold
  std::ifstream is(tmp.dir / "runs_a" / "2d_mf_fold2.history.tsv");
  REQUIRE(is.good());
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(text.find("# fold_test: 2") != std::string::npos);
  CHECK(text.find("# train_folds: 1,3") != std::string::npos);
  CHECK(text.find("epoch\ttrain_loss") != std::string::npos);

  // identical config and seed give byte-identical checkpoints
  auto slurp = [](const path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  };
  const std::string a = slurp(tmp.dir / "runs_a" / "2d_mf_fold2.nnck");
  const std::string b = slurp(tmp.dir / "runs_b" / "2d_mf_fold2.nnck");
  REQUIRE(!a.empty());
  CHECK(a == b);

  // a missing cache suggests the prepare command
  const int code = run("train --model 2d --repr mf --cache " + (tmp.dir / "nocache").string() +
                       " --out " + (tmp.dir / "runs_c").string());
  CHECK(code == 2);
}

TEST_CASE("environment variable overrides the cache directory") {
  TempDir tmp("audioatk_cli_env");
  const path corpus = tmp.dir / "corpus";
  const path env_cache = tmp.dir / "env_cache";
  REQUIRE(run("toy-gen --out " + corpus.string() +
              " --classes 2 --clips-per-class 2 --clip-seconds 1 --seed 6") == 0);
  const std::string cmd = "AUDIOATK_CACHE_DIR=" + env_cache.string() + " " + tool().string() +
                          " prepare --manifest " + (corpus / "manifest.tsv").string() +
                          " --cache " + (tmp.dir / "ignored").string() +
                          " --set segmentation.window_len=22050 >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(std::filesystem::exists(env_cache / "index.tsv"));
  CHECK(!std::filesystem::exists(tmp.dir / "ignored" / "index.tsv"));
}
