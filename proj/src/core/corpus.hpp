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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rng.hpp"
#include "tensor.hpp"

namespace fagcn {

/// Bijection between word strings and dense ids, in first-appearance order.
class Vocabulary {
 public:
  /// Returns the id of `term`, adding it if unseen.
  std::size_t intern(std::string_view term);
  std::optional<std::size_t> find(std::string_view term) const;
  const std::string& term(std::size_t id) const { return terms_.at(id); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Per-node token sequences and class labels.
struct ContentCorpus {
  std::vector<std::vector<std::size_t>> contents;
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;

  std::size_t num_nodes() const { return contents.size(); }
  friend bool operator==(const ContentCorpus&, const ContentCorpus&) = default;
};

struct LoadedCorpus {
  ContentCorpus corpus;
  Vocabulary vocabulary;
  std::vector<std::string> node_ids;     // file id of each node index
  std::vector<std::string> label_names;  // class id -> label string
};

/// Reads `node_id<TAB>label<TAB>tokens...` lines. Tokens are lowercased and
/// kept in order, duplicates included. When `known_labels` is given, class
/// ids follow that list and any other label is rejected; otherwise labels are
/// numbered in first-appearance order.
LoadedCorpus load_corpus(const std::filesystem::path& path,
                         const std::vector<std::string>* known_labels = nullptr);

/// |vocab| x d_i table with entries uniform in [-0.1, 0.1].
DenseMatrix init_embeddings(std::size_t vocab_size, std::size_t dim, Rng& rng);

struct DatasetSplit {
  std::vector<std::size_t> train_idx;  // ascending
  std::vector<std::size_t> test_idx;   // ascending
};

/// round(p * n), with halves rounded up.
std::size_t round_half_up(double x);

/// Uniform sample of round(p * n) training nodes without replacement.
DatasetSplit split(std::size_t n, double p, Rng& rng);

}  // namespace fagcn
