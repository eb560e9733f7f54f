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

#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace fagcn {

Graph::Graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : adjacency_(n) {
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) {
      throw DataError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                      ") outside node range " + std::to_string(n));
    }
    if (a == b) continue;
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

bool Graph::connected(std::size_t i, std::size_t j) const {
  const auto& list = adjacency_.at(i);
  return std::binary_search(list.begin(), list.end(), j);
}

DenseMatrix Graph::adjacency_matrix() const {
  const std::size_t n = num_nodes();
  DenseMatrix a(n, n);
  for (auto [i, j] : edges_) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

DenseMatrix normalized_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(1.0 + g.degree(i));
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = inv_sqrt[i] * inv_sqrt[i];
    for (std::size_t j : g.adjacent(i)) out(i, j) = inv_sqrt[i] * inv_sqrt[j];
  }
  return out;
}

Neighborhood neighborhood(const Graph& g, std::size_t i) {
  if (i >= g.num_nodes()) {
    throw std::out_of_range("node " + std::to_string(i) + " outside graph of " +
                            std::to_string(g.num_nodes()) + " nodes");
  }
  Neighborhood nb;
  nb.center = i;
  nb.members = g.adjacent(i);
  nb.members.insert(std::lower_bound(nb.members.begin(), nb.members.end(), i), i);
  return nb;
}

std::vector<std::pair<std::string, std::string>> read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected two node ids");
    }
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

}  // namespace fagcn
