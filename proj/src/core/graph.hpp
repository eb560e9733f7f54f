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
#include <utility>
#include <vector>

#include "tensor.hpp"

namespace fagcn {

/// Closed neighbourhood of a node: the node itself plus its adjacent nodes.
struct Neighborhood {
  std::size_t center = 0;
  std::vector<std::size_t> members;  // ascending, includes center
};

/// Undirected simple graph on nodes 0..n-1. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  /// Self-loops are dropped; duplicate and reversed pairs collapse to one edge.
  Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  /// Edges as (i, j) with i < j, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  /// Sorted adjacent nodes of i (without i).
  const std::vector<std::size_t>& adjacent(std::size_t i) const { return adjacency_.at(i); }
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
  bool connected(std::size_t i, std::size_t j) const;

  /// Dense 0/1 adjacency A.
  DenseMatrix adjacency_matrix() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// D~^{-1/2} (I + A) D~^{-1/2} with D~ = D + I.
DenseMatrix normalized_adjacency(const Graph& g);

Neighborhood neighborhood(const Graph& g, std::size_t i);

/// Raw edge-list file: two whitespace-separated node ids per line, '#' comments.
std::vector<std::pair<std::string, std::string>> read_edge_list(const std::filesystem::path& path);

}  // namespace fagcn
