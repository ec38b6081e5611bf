/*
 * Copyright 2026 The samforge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SAMFORGE_RNG_H_
#define SAMFORGE_RNG_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace samforge {

// SplitMix64 finalizer. Stable across platforms and compilers; every derived
// seed in the project goes through this function.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for child `index` of `parent`: Mix64(parent ^ Mix64(index)).
// Used for (master seed, pair index) and (pair seed, attempt) derivation.
constexpr uint64_t DeriveSeed(uint64_t parent, uint64_t index) {
  return Mix64(parent ^ Mix64(index));
}

// Small deterministic generator (xoshiro256**). The standard distributions
// are implementation-defined, so bounded draws are done here by rejection.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t Next();

  // Uniform integer in [lo, hi]. Requires lo <= hi.
  int64_t Uniform(int64_t lo, int64_t hi);

  // Uniform double in [0, 1).
  double UniformReal();

  bool Bernoulli(double p) { return UniformReal() < p; }

  // Index drawn proportionally to nonnegative weights (not all zero).
  size_t Weighted(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(Uniform(0, static_cast<int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[static_cast<size_t>(Uniform(0, static_cast<int64_t>(items.size()) - 1))];
  }

  // k distinct values from [lo, hi], in draw order.
  std::vector<int64_t> SampleDistinct(int64_t lo, int64_t hi, size_t k);

 private:
  uint64_t state_[4];
};

}  // namespace samforge

#endif  // SAMFORGE_RNG_H_
