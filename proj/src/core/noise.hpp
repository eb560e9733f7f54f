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

#include "config.hpp"
#include "corpus.hpp"
#include "rng.hpp"

namespace fagcn {

/// Content corruption request. Ratios are bounded by `max_ratio`, which
/// defaults to the swept ranges: 1.0 for injection, 0.5 for replacement.
struct NoiseSpec {
  NoiseProtocol protocol = NoiseProtocol::kNone;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  double max_ratio = -1.0;  // negative: protocol default

  double effective_max_ratio() const;
  void validate() const;
};

/// Inserts round(ratio * |cnt_i|) tokens, drawn uniformly from the
/// vocabulary, at uniformly random positions of every node's content.
ContentCorpus inject_noise(const ContentCorpus& corpus, std::size_t vocab_size, double ratio,
                           Rng& rng);

/// Overwrites round(ratio * |cnt_i|) distinct positions of every node's
/// content with uniformly drawn vocabulary tokens. A draw may equal the
/// token it replaces.
ContentCorpus replace_noise(const ContentCorpus& corpus, std::size_t vocab_size, double ratio,
                            Rng& rng);

/// Dispatches on the protocol using the spec's seed; kNone returns a copy.
ContentCorpus apply_noise(const ContentCorpus& corpus, std::size_t vocab_size,
                          const NoiseSpec& spec);

}  // namespace fagcn
