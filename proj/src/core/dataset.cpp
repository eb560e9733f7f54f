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

#include "dataset.hpp"

#include <unordered_map>

namespace fagcn {

std::size_t Dataset::index_of(const std::string& node_id) const {
  const auto& ids = content.node_ids;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == node_id) return i;
  return std::string::npos;
}

Dataset load_dataset(const std::filesystem::path& edges, const std::filesystem::path& content,
                     const std::vector<std::string>* known_labels) {
  const auto raw_edges = read_edge_list(edges);
  Dataset ds;
  ds.content = load_corpus(content, known_labels);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ds.content.node_ids.size(); ++i) index.emplace(ds.content.node_ids[i], i);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(raw_edges.size());
  for (const auto& [a, b] : raw_edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end() || ia->second == ib->second) {
      ++ds.skipped_edges;
      continue;
    }
    pairs.emplace_back(ia->second, ib->second);
  }
  ds.graph = Graph(ds.content.node_ids.size(), pairs);
  return ds;
}

}  // namespace fagcn
