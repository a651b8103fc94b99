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

#include "unseen/rng.h"

namespace unseen {

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 outer(master);
  const std::uint64_t base = outer.Next();
  SplitMix64 inner(base ^ (index * 0xD1B54A32D192ED03ull));
  return inner.Next();
}

std::uint64_t UniformBelow(Engine& engine, std::uint64_t n) {
  if (n == 0) return 0;
  // 2^64 mod n low draws are rejected so the rest split evenly into n bins.
  const std::uint64_t threshold = (std::uint64_t{0} - n) % n;
  std::uint64_t x;
  do {
    x = engine();
  } while (x < threshold);
  return x % n;
}

double UniformOpenClosed(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace unseen
