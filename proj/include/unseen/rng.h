// Copyright 2026 The Unseen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeding and shuffling with fixed, platform-independent algorithms.
//
// SplitMix64 (Steele, Lea and Flood) derives per-replicate seeds from a
// master seed. Shuffles are Fisher-Yates driven by std::mt19937_64 with an
// unbiased bounded draw, so a seed yields the same permutation everywhere.

#ifndef UNSEEN_RNG_H_
#define UNSEEN_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace unseen {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Seed of replicate `index` under `master`; distinct indices give
// decorrelated streams.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index);

using Engine = std::mt19937_64;

// Uniform integer in [0, n) by rejection on the top of the 64-bit range.
std::uint64_t UniformBelow(Engine& engine, std::uint64_t n);

// Uniform double in (0, 1].
double UniformOpenClosed(Engine& engine);

template <typename T>
void Shuffle(std::span<T> items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(UniformBelow(engine, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace unseen

#endif  // UNSEEN_RNG_H_
