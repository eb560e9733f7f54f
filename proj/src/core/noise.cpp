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

#include "noise.hpp"

#include <numeric>
#include <string>

#include "errors.hpp"

namespace fagcn {

double NoiseSpec::effective_max_ratio() const {
  if (max_ratio >= 0.0) return max_ratio;
  return protocol == NoiseProtocol::kReplace ? 0.5 : 1.0;
}

void NoiseSpec::validate() const {
  if (!(ratio >= 0.0 && ratio <= effective_max_ratio())) {
    throw ConfigError(std::string(to_string(protocol)) + " noise ratio " + std::to_string(ratio) +
                      " outside [0, " + std::to_string(effective_max_ratio()) + "]");
  }
  if (protocol == NoiseProtocol::kReplace && ratio > 1.0) {
    throw ConfigError("replace noise ratio cannot exceed 1");
  }
}

ContentCorpus inject_noise(const ContentCorpus& corpus, std::size_t vocab_size, double ratio,
                           Rng& rng) {
  if (ratio < 0.0) throw ConfigError("inject noise ratio must be non-negative");
  if (vocab_size == 0) throw ConfigError("inject noise needs a non-empty vocabulary");
  ContentCorpus out = corpus;
  for (auto& tokens : out.contents) {
    const std::size_t k = round_half_up(ratio * static_cast<double>(tokens.size()));
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t token = rng.below(vocab_size);
      const std::size_t pos = rng.below(tokens.size() + 1);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos), token);
    }
  }
  return out;
}

ContentCorpus replace_noise(const ContentCorpus& corpus, std::size_t vocab_size, double ratio,
                            Rng& rng) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ConfigError("replace noise ratio must lie in [0, 1]");
  if (vocab_size == 0) throw ConfigError("replace noise needs a non-empty vocabulary");
  ContentCorpus out = corpus;
  std::vector<std::size_t> positions;
  for (auto& tokens : out.contents) {
    const std::size_t len = tokens.size();
    const std::size_t k = std::min(len, round_half_up(ratio * static_cast<double>(len)));
    positions.resize(len);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    for (std::size_t j = 0; j < k; ++j) {
      std::swap(positions[j], positions[j + rng.below(len - j)]);
      tokens[positions[j]] = rng.below(vocab_size);
    }
  }
  return out;
}

ContentCorpus apply_noise(const ContentCorpus& corpus, std::size_t vocab_size,
                          const NoiseSpec& spec) {
  spec.validate();
  Rng rng = Rng::stream(spec.seed, Stream::kNoise);
  switch (spec.protocol) {
    case NoiseProtocol::kInject:
      return inject_noise(corpus, vocab_size, spec.ratio, rng);
    case NoiseProtocol::kReplace:
      return replace_noise(corpus, vocab_size, spec.ratio, rng);
    case NoiseProtocol::kNone:
      break;
  }
  return corpus;
}

}  // namespace fagcn
