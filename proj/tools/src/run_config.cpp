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

#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "audioatk/common/errors.hpp"

namespace audioatk::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

int to_int(const std::string& section, const std::string& key, const std::string& v) {
  try {
    return std::stoi(v);
  } catch (...) {
    throw UsageError("config [" + section + "] " + key + ": expected an integer, got '" + v + "'");
  }
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    return std::stod(v);
  } catch (...) {
    throw UsageError("config [" + section + "] " + key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& section, const std::string& key, const std::string& v) {
  try {
    return std::stoull(v);
  } catch (...) {
    throw UsageError("config [" + section + "] " + key + ": expected an unsigned integer, got '" +
                     v + "'");
  }
}

}  // namespace

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  const std::string at = section + "." + key;
  if (at == "data.manifest") manifest = value;
  else if (at == "data.cache_dir") cache_dir = value;
  else if (at == "stft.fft_size") fft_size = to_int(section, key, value);
  else if (at == "stft.hop") hop = to_int(section, key, value);
  else if (at == "segmentation.window_len") window_len = to_int(section, key, value);
  else if (at == "segmentation.overlap") overlap = to_double(section, key, value);
  else if (at == "mel.n_mels") n_mels = to_int(section, key, value);
  else if (at == "mel.f_min") mel_f_min = to_double(section, key, value);
  else if (at == "mel.f_max") mel_f_max = to_double(section, key, value);
  else if (at == "scale.db_floor") db_floor = to_double(section, key, value);
  else if (at == "train.batch") batch = to_int(section, key, value);
  else if (at == "train.max_epochs") max_epochs = to_int(section, key, value);
  else if (at == "train.patience") patience = to_int(section, key, value);
  else if (at == "train.val_fraction") val_fraction = to_double(section, key, value);
  else if (at == "train.lr") lr = to_double(section, key, value);
  else if (at == "train.optimizer") optimizer = value;
  else if (at == "attack.method") attack_method = value;
  else if (at == "attack.epsilon") epsilon = to_double(section, key, value);
  else if (at == "attack.steps") steps = to_int(section, key, value);
  else if (at == "attack.step_size") step_size = to_double(section, key, value);
  else if (at == "reconstruct.griffin_lim_iters") griffin_lim_iters = to_int(section, key, value);
  else if (at == "run.seed") seed = to_u64(section, key, value);
  else if (at == "run.jobs") jobs = to_int(section, key, value);
  else
    throw UsageError("config: unknown key '" + key + "' in section [" + section + "]");
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file: " + path.string());
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw UsageError(path.string() + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    set(section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

std::string RunConfig::snapshot() const {
  std::ostringstream os;
  os << "[data]\n"
     << "manifest = " << manifest << "\n"
     << "cache_dir = " << cache_dir << "\n"
     << "[stft]\n"
     << "fft_size = " << fft_size << "\n"
     << "hop = " << hop << "\n"
     << "[segmentation]\n"
     << "window_len = " << window_len << "\n"
     << "overlap = " << overlap << "\n"
     << "[mel]\n"
     << "n_mels = " << n_mels << "\n"
     << "f_min = " << mel_f_min << "\n"
     << "f_max = " << mel_f_max << "\n"
     << "[scale]\n"
     << "db_floor = " << db_floor << "\n"
     << "[train]\n"
     << "batch = " << batch << "\n"
     << "max_epochs = " << max_epochs << "\n"
     << "patience = " << patience << "\n"
     << "val_fraction = " << val_fraction << "\n"
     << "lr = " << lr << "\n"
     << "optimizer = " << optimizer << "\n"
     << "[attack]\n"
     << "method = " << attack_method << "\n"
     << "epsilon = " << epsilon << "\n"
     << "steps = " << steps << "\n"
     << "step_size = " << step_size << "\n"
     << "[reconstruct]\n"
     << "griffin_lim_iters = " << griffin_lim_iters << "\n"
     << "[run]\n"
     << "seed = " << seed << "\n"
     << "jobs = " << jobs << "\n";
  return os.str();
}

std::filesystem::path effective_cache_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("AUDIOATK_CACHE_DIR"); env && *env) return env;
  return cfg.cache_dir;
}

}  // namespace audioatk::cli
