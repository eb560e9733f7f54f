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

// Small hand-built graphs shared by unit and acceptance tests.

#pragma once

#include <cstddef>
#include <vector>

#include "config.hpp"
#include "corpus.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace fagcn::testing {

struct SmallFixture {
  Graph graph;
  ContentCorpus corpus;
  std::size_t vocab_size = 0;
};

// Path 0-1-2 with node 3 hanging off node 1; contents of lengths 1 to 4.
inline SmallFixture four_node_fixture() {
  SmallFixture f;
  f.graph = Graph(4, {{0, 1}, {1, 2}, {1, 3}});
  f.corpus.contents = {{0}, {1, 2}, {3, 4, 1}, {5, 0, 2, 4}};
  f.corpus.labels = {0, 1, 1, 0};
  f.corpus.num_classes = 2;
  f.vocab_size = 6;
  return f;
}

// Two 4-node communities joined by one edge; each class owns its words.
inline SmallFixture eight_node_fixture() {
  SmallFixture f;
  f.graph = Graph(8, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {4, 5}, {5, 6}, {6, 7}, {4, 7}, {3, 4}});
  f.corpus.contents = {{0, 1}, {1, 2}, {0, 2, 1}, {2, 0},
                       {3, 4}, {4, 5}, {3, 5, 4}, {5, 3}};
  f.corpus.labels = {0, 0, 0, 0, 1, 1, 1, 1};
  f.corpus.num_classes = 2;
  f.vocab_size = 6;
  return f;
}

inline ExperimentConfig small_config(ModelVariant variant) {
  ExperimentConfig c;
  c.d_i = 4;
  c.d_o = 4;
  c.d_h = 3;
  c.variant = variant;
  return c;
}

inline std::vector<std::size_t> all_nodes(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

// Uniform [-scale, scale] values in every populated parameter.
inline void randomize(ModelParams& p, Rng& rng, double scale) {
  for (NamedParam& np : p.named()) {
    for (double& v : np.matrix->values()) v = rng.uniform(-scale, scale);
  }
}

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
  DenseMatrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-scale, scale);
  return m;
}

}  // namespace fagcn::testing
