// Copyright 2026 The copyaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Random value generation.
//
// All randomness in the library flows through Rng, a 64-bit Mersenne
// Twister (std::mt19937_64, whose output sequence is fixed by the C++
// standard) with hand-written range reduction, so every synthetic dataset is
// bit-reproducible across platforms and standard libraries. Independent
// streams are derived from a master seed with DeriveSeed (SplitMix64
// finalizer over the seed and stream indices).

#ifndef COPYAUG_RANDGEN_H_
#define COPYAUG_RANDGEN_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace copyaug {

std::uint64_t SplitMix64(std::uint64_t x);

// Seed for stream `indices` under `seed`. Order of indices matters.
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> indices);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform over [0, n). Rejection sampling, no modulo bias. n > 0.
  std::uint64_t UniformIndex(std::uint64_t n);

  // Uniform over [0, 1) with 53 random bits.
  double UniformReal();

  bool Bernoulli(double p) { return UniformReal() < p; }

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct RandStrConfig {
  int strlen = 10;
  int n_spaces = 3;
  std::uint64_t seed = 0;
};

// Draws from the 26 + n_spaces character sequence until the trimmed string
// has exactly cfg.strlen characters. Strings containing two adjacent spaces
// are redrawn as well, so every output tokenizes to single-space-separated
// words.
std::string RandStr(const RandStrConfig& cfg, Rng& rng);

// k distinct RandStr outputs in draw order.
std::vector<std::string> FreshValueSet(int k, const RandStrConfig& cfg,
                                       Rng& rng);

}  // namespace copyaug

#endif  // COPYAUG_RANDGEN_H_
