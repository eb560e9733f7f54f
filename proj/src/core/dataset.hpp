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
#include <string>
#include <vector>

#include "corpus.hpp"
#include "graph.hpp"

namespace fagcn {

/// A graph and its node contents sharing one id space.
struct Dataset {
  Graph graph;
  LoadedCorpus content;
  /// Edge lines whose endpoints are missing from the content file, or self-loops.
  std::size_t skipped_edges = 0;

  std::size_t num_nodes() const { return content.corpus.num_nodes(); }
  std::size_t vocab_size() const { return content.vocabulary.size(); }
  /// Index of a file node id, or npos.
  std::size_t index_of(const std::string& node_id) const;
};

Dataset load_dataset(const std::filesystem::path& edges, const std::filesystem::path& content,
                     const std::vector<std::string>* known_labels = nullptr);

}  // namespace fagcn
