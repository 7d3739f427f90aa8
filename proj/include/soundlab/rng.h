// Copyright 2026 The Soundlab Authors. All rights reserved.
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

#ifndef SOUNDLAB_RNG_H_
#define SOUNDLAB_RNG_H_

#include <cstdint>
#include <limits>

namespace soundlab {

// SplitMix64 finalizer.
constexpr uint64_t MixBits(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of the independent stream `index` derived from `master_seed`.
constexpr uint64_t DeriveSeed(uint64_t master_seed, uint64_t index) {
  return MixBits(MixBits(master_seed) ^ MixBits(index + 0x632be59bd9b4e019ULL));
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator so it can be
// handed to <random> distributions; Uniform() is the hot-path shortcut.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Child stream, independent of this one's future output.
  Rng Split(uint64_t index) const { return Rng(DeriveSeed(state_, index)); }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

}  // namespace soundlab

#endif  // SOUNDLAB_RNG_H_
