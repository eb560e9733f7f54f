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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "model.hpp"

namespace fagcn {

/// Trained parameters plus everything needed to rebuild the model on data.
///
/// Binary layout (all integers little-endian):
///   magic "FAGCNCKP" | u32 version (1) | u64 n | n bytes of JSON metadata
///   {"config", "labels", "vocab_size", "num_nodes", "matrices"} |
///   per matrix: u32 name length, name, u64 rows, u64 cols, rows*cols f64 |
///   u64 FNV-1a hash of all preceding bytes.
struct Checkpoint {
  ExperimentConfig config;
  ModelParams params;
  std::vector<std::string> label_names;
  std::size_t vocab_size = 0;
  std::size_t num_nodes = 0;
};

std::string serialize_checkpoint(Checkpoint& ck);
/// Throws DataError on any structural or checksum problem.
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(Checkpoint& ck, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// ShapeError naming expected and found sizes when the data does not fit.
void check_compatible(const Checkpoint& ck, std::size_t num_nodes, std::size_t vocab_size,
                      std::size_t num_classes);

std::uint64_t fnv1a64(const std::string& bytes, std::size_t length);

}  // namespace fagcn
