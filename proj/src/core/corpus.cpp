/*
Copyright 2026 The fagcn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace fagcn {

std::size_t Vocabulary::intern(std::string_view term) {
  std::string key(term);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const std::size_t id = terms_.size();
  terms_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

LoadedCorpus load_corpus(const std::filesystem::path& path,
                         const std::vector<std::string>* known_labels) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open content file '" + path.string() + "'");

  LoadedCorpus out;
  std::unordered_map<std::string, std::size_t> label_ids;
  std::unordered_map<std::string, std::size_t> seen_nodes;
  if (known_labels != nullptr) {
    out.label_names = *known_labels;
    for (std::size_t k = 0; k < known_labels->size(); ++k) label_ids.emplace((*known_labels)[k], k);
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw DataError(where + ": expected node_id<TAB>label<TAB>tokens");
    }
    std::string node_id = trim(std::string_view(line).substr(0, tab1));
    std::string label = trim(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1));
    if (node_id.empty()) throw DataError(where + ": empty node id");
    if (label.empty()) throw DataError(where + ": node " + node_id + " has an empty label");
    if (!seen_nodes.emplace(node_id, out.node_ids.size()).second) {
      throw DataError(where + ": duplicate node id " + node_id);
    }

    std::size_t label_id;
    if (auto it = label_ids.find(label); it != label_ids.end()) {
      label_id = it->second;
    } else if (known_labels != nullptr) {
      throw DataError(where + ": node " + node_id + " has unknown label '" + label + "'");
    } else {
      label_id = out.label_names.size();
      label_ids.emplace(label, label_id);
      out.label_names.push_back(label);
    }

    std::vector<std::size_t> tokens;
    std::istringstream words(line.substr(tab2 + 1));
    std::string w;
    while (words >> w) tokens.push_back(out.vocabulary.intern(lowercase(std::move(w))));
    if (tokens.empty()) throw DataError(where + ": node " + node_id + " has no tokens");

    out.node_ids.push_back(std::move(node_id));
    out.corpus.contents.push_back(std::move(tokens));
    out.corpus.labels.push_back(label_id);
  }
  out.corpus.num_classes = out.label_names.size();
  if (out.corpus.contents.empty()) throw DataError(path.string() + ": no nodes");
  return out;
}

DenseMatrix init_embeddings(std::size_t vocab_size, std::size_t dim, Rng& rng) {
  DenseMatrix table(vocab_size, dim);
  for (double& x : table.values()) x = rng.uniform(-0.1, 0.1);
  return table;
}

std::size_t round_half_up(double x) {
  // The small slack keeps decimal halves such as 0.15 * 10 on the upper side.
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

DatasetSplit split(std::size_t n, double p, Rng& rng) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("label fraction must lie in (0, 1), got " + std::to_string(p));
  }
  const std::size_t k = round_half_up(p * static_cast<double>(n));
  if (k == 0 || k >= n) {
    throw ConfigError("label fraction " + std::to_string(p) + " of " + std::to_string(n) +
                      " nodes leaves an empty train or test set");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
  }
  DatasetSplit s;
  s.train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  s.test_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::sort(s.train_idx.begin(), s.train_idx.end());
  std::sort(s.test_idx.begin(), s.test_idx.end());
  return s;
}

}  // namespace fagcn
