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

#include "copyaug/randgen.h"

#include <limits>
#include <unordered_set>

#include "copyaug/error.h"

namespace copyaug {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t i : indices) h = SplitMix64(h ^ SplitMix64(i + 1));
  return h;
}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  if (n == 0) Fail(ErrorCode::kArgument, "UniformIndex: empty range");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - (kMax % n);
  for (;;) {
    std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

double Rng::UniformReal() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::string RandStr(const RandStrConfig& cfg, Rng& rng) {
  if (cfg.strlen < 1) Fail(ErrorCode::kArgument, "randstr: strlen must be >= 1");
  if (cfg.n_spaces < 0) {
    Fail(ErrorCode::kArgument, "randstr: n_spaces must be >= 0");
  }
  const auto alphabet = static_cast<std::uint64_t>(26 + cfg.n_spaces);
  const auto len = static_cast<std::size_t>(cfg.strlen);
  std::string s;
  s.reserve(len);
  for (;;) {
    s.clear();
    for (std::size_t i = 0; i < len; ++i) {
      std::uint64_t idx = rng.UniformIndex(alphabet);
      s.push_back(idx < 26 ? static_cast<char>('a' + idx) : ' ');
    }
    // Leading/trailing spaces make the trimmed length short, so checking the
    // ends is the same as trimming and comparing lengths.
    if (s.front() == ' ' || s.back() == ' ') continue;
    if (s.find("  ") != std::string::npos) continue;
    return s;
  }
}

std::vector<std::string> FreshValueSet(int k, const RandStrConfig& cfg,
                                       Rng& rng) {
  if (k < 1) Fail(ErrorCode::kArgument, "fresh_value_set: k must be >= 1");
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  out.reserve(static_cast<std::size_t>(k));
  while (static_cast<int>(out.size()) < k) {
    std::string s = RandStr(cfg, rng);
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace copyaug
