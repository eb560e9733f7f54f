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

#include <cstdint>
#include <random>

namespace fagcn {

/// Independent random streams derived from one master seed.
enum class Stream : std::uint64_t {
  kInit = 1,
  kSplit = 2,
  kDropout = 3,
  kNoise = 4,
};

/// Seeded 64-bit generator with platform-independent sampling helpers.
///
/// The std:: distributions are implementation-defined, so the helpers below
/// map raw engine output to values directly; identical seeds give identical
/// draws with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng stream(std::uint64_t master_seed, Stream which) {
    return Rng(master_seed ^ (static_cast<std::uint64_t>(which) * 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Reject the 2^64 mod n lowest values so x % n is exactly uniform.
    const std::uint64_t limit = (~std::uint64_t{0} - n + 1) % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= limit) return x % n;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace fagcn
