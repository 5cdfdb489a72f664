// Copyright 2026 The csanon Authors.
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

// Portable random draws. The standard distributions are implementation
// defined, so everything that feeds a reproducible output goes through here.

#ifndef CSANON_RANDOM_H_
#define CSANON_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace csanon {

// 64-bit FNV-1a.
uint64_t HashString(std::string_view text);

// Derives a per-item seed from a run seed and a key such as an utt_id.
inline uint64_t MixSeed(uint64_t seed, std::string_view key) {
  return seed ^ HashString(key);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Index(uint64_t n);

  // Standard normal via the Box-Muller transform.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

template <typename T>
void Shuffle(std::vector<T>* items, Rng* rng) {
  for (size_t i = items->size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng->Index(i));
    std::swap((*items)[i - 1], (*items)[j]);
  }
}

}  // namespace csanon

#endif  // CSANON_RANDOM_H_
