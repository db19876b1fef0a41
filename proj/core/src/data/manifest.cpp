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

#include "audioatk/data/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"
#include "audioatk/common/rng.hpp"

namespace audioatk::data {

std::vector<int> Manifest::fold_sizes(int n_folds) const {
  std::vector<int> sizes(static_cast<std::size_t>(n_folds), 0);
  for (const auto& e : entries)
    if (e.fold >= 1 && e.fold <= n_folds) ++sizes[static_cast<std::size_t>(e.fold - 1)];
  return sizes;
}

void Manifest::validate() const {
  require(!entries.empty(), "manifest: no entries");
  require(!label_names.empty(), "manifest: no label names");
  std::set<std::string> paths;
  for (const auto& e : entries) {
    require(e.label >= 0 && e.label < n_classes(),
            "manifest: label index " + std::to_string(e.label) + " outside [0, " +
                std::to_string(n_classes()) + ") for clip " + e.clip_id);
    require(e.fold >= 1 && e.fold <= 3, "manifest: fold " + std::to_string(e.fold) +
                                            " outside [1, 3] for clip " + e.clip_id);
    require(paths.insert(e.path).second, "manifest: duplicate path " + e.path);
  }
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open manifest: " + path.string());
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string labels_tag = "# labels:";
      if (line.rfind(labels_tag, 0) == 0) {
        std::stringstream ss(line.substr(labels_tag.size()));
        std::string name;
        while (std::getline(ss, name, ',')) {
          while (!name.empty() && name.front() == ' ') name.erase(name.begin());
          if (!name.empty()) m.label_names.push_back(name);
        }
      }
      continue;
    }
    std::stringstream ss(line);
    ManifestEntry e;
    std::string label_str, fold_str;
    if (!std::getline(ss, e.path, '\t') || !std::getline(ss, e.clip_id, '\t') ||
        !std::getline(ss, label_str, '\t') || !std::getline(ss, fold_str))
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 4 tab-separated fields");
    try {
      e.label = std::stoi(label_str);
      e.fold = std::stoi(fold_str);
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad label or fold index");
    }
    m.entries.push_back(std::move(e));
  }
  if (m.label_names.empty()) {
    int max_label = 0;
    for (const auto& e : m.entries) max_label = std::max(max_label, e.label);
    for (int i = 0; i <= max_label; ++i) m.label_names.push_back("class" + std::to_string(i));
  }
  m.validate();
  return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
  m.validate();
  atomic_write(path, [&](std::ostream& os) {
    os << "# audioatk manifest: path, clip_id, label_index, fold\n";
    os << "# labels:";
    for (std::size_t i = 0; i < m.label_names.size(); ++i)
      os << (i ? "," : " ") << m.label_names[i];
    os << '\n';
    for (const auto& e : m.entries)
      os << e.path << '\t' << e.clip_id << '\t' << e.label << '\t' << e.fold << '\n';
  });
}

void split_folds(std::vector<ManifestEntry>& entries, std::uint64_t seed, int n_classes,
                 bool gtzan_protocol) {
  require(!entries.empty(), "split_folds: no entries");
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < entries.size(); ++i) by_label[entries[i].label].push_back(i);

  if (gtzan_protocol) {
    std::string counts;
    bool ok = static_cast<int>(by_label.size()) == 10 && n_classes == 10;
    for (auto& [label, idxs] : by_label) {
      counts += (counts.empty() ? "" : ", ") + std::to_string(label) + ":" +
                std::to_string(idxs.size());
      ok = ok && idxs.size() == 100;
    }
    require(ok, "split_folds: the three-fold protocol needs 10 classes with 100 clips each; got " +
                    counts);
  }

  Rng rng(seed);
  for (auto& [label, idxs] : by_label) {
    Rng r = rng.fork(0xf01d + static_cast<std::uint64_t>(label));
    r.shuffle(idxs);
    // Fold 1 absorbs the per-class remainder: 100 clips split 34/33/33.
    const std::size_t n = idxs.size();
    const std::size_t base = n / 3;
    const std::size_t first = n - 2 * base;
    for (std::size_t k = 0; k < n; ++k) {
      int fold;
      if (k < first)
        fold = 1;
      else if (k < first + base)
        fold = 2;
      else
        fold = 3;
      entries[idxs[k]].fold = fold;
    }
  }
}

}  // namespace audioatk::data
