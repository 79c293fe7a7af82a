// Copyright 2026 The Authors.
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

#ifndef S3MOR_RANDOM_H_
#define S3MOR_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace s3mor {

// Counter-based seed derivation (SplitMix64 finalizer over seed + index).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

// FNV-1a; used to derive per-policy seeds from policy labels.
std::uint64_t HashLabel(std::string_view label);

// mt19937_64 is fully specified by the standard, but the standard
// distributions are not; these draws are bit-identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double UniformDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n). Requires n > 0.
  std::uint64_t UniformInt(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  bool Bernoulli(double p) { return UniformDouble() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace s3mor

#endif  // S3MOR_RANDOM_H_
