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

// Synthetic dataset construction: duplicate active samples n times and
// replace each copy's value with a random string with probability theta.

#ifndef COPYAUG_AUGMENT_H_
#define COPYAUG_AUGMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "copyaug/corpus.h"
#include "copyaug/randgen.h"

namespace copyaug {

struct DCConfig {
  enum class ValueSource { kFreshPerReplacement, kSharedPool };

  int n = 1;
  double theta = 0.0;
  ValueSource value_source = ValueSource::kFreshPerReplacement;
  // Used when value_source == kSharedPool; sampled uniformly with
  // replacement.
  std::vector<std::string> pool;
  std::uint64_t seed = 0;
  RandStrConfig randstr;
};

struct DCReport {
  std::size_t replaced = 0;
  // Active copies whose value could not be replaced because they carry no
  // span (gate-only samples). Copied verbatim.
  std::size_t skipped_no_span = 0;
};

struct DCResult {
  Dataset dataset;
  DCReport report;
};

// Output order: the first copy walks `d` in order (inactive samples included);
// copies 2..n repeat the active samples in order. The RNG stream of each
// active copy depends only on (seed, copy index, sample index).
DCResult ConstructDataset(const Dataset& d, const DCConfig& cfg);

// Replaces the annotated span of `s` with `value` and re-annotates the span.
// Requires s.HasSpan().
Sample ReplaceValue(const Sample& s, const std::string& value);

struct PairedSynthetic {
  Dataset train;
  Dataset test;
  std::vector<std::string> pool;
};

// Draws one pool of k fresh values and rebuilds both datasets with
// DC(., 1, 1) over that shared pool.
PairedSynthetic MakePairedSynthetic(const Dataset& train, const Dataset& test,
                                    int k, std::uint64_t seed,
                                    const RandStrConfig& randstr = {});

// round(n_min * alpha^i), i = 0..points-1, alpha = (n_max/n_min)^(1/(points-1)).
std::vector<int> DiversityGrid(int n_min, int n_max, int points);

}  // namespace copyaug

#endif  // COPYAUG_AUGMENT_H_
