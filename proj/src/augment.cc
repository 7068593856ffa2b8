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

#include "copyaug/augment.h"

#include <cmath>

#include "copyaug/error.h"
#include "copyaug/tokenizer.h"

namespace copyaug {

Sample ReplaceValue(const Sample& s, const std::string& value) {
  if (!s.HasSpan()) Fail(ErrorCode::kArgument, "ReplaceValue: sample has no span");
  const auto new_tokens = Tokenize(value);
  if (new_tokens.empty()) Fail(ErrorCode::kArgument, "ReplaceValue: empty value");

  Sample out = s;
  const int sys_len = static_cast<int>(s.utterance.sys.size());
  const Span span = *s.span;
  // A span never covers the separator, so it lies entirely in one side.
  const bool in_sys = span.end < sys_len;
  auto& side = in_sys ? out.utterance.sys : out.utterance.usr;
  const int offset = in_sys ? 0 : sys_len + 1;
  const int lo = span.start - offset;
  const int hi = span.end - offset;
  side.erase(side.begin() + lo, side.begin() + hi + 1);
  side.insert(side.begin() + lo, new_tokens.begin(), new_tokens.end());
  out.value = JoinTokens(new_tokens);
  out.span = Span{span.start, span.start + static_cast<int>(new_tokens.size()) - 1};
  return out;
}

DCResult ConstructDataset(const Dataset& d, const DCConfig& cfg) {
  if (cfg.n < 1) Fail(ErrorCode::kArgument, "dc: n must be >= 1");
  if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0)) {
    Fail(ErrorCode::kArgument, "dc: theta must be in [0, 1]");
  }
  if (cfg.value_source == DCConfig::ValueSource::kSharedPool && cfg.pool.empty()) {
    Fail(ErrorCode::kArgument, "dc: shared pool is empty");
  }
  if (cfg.n > 1 && d.ActiveCount() == 0) {
    Fail(ErrorCode::kArgument, "dc: n > 1 requires at least one active sample");
  }

  // DC(D,1,0) is the identity, provenance included.
  if (cfg.n == 1 && cfg.theta == 0.0) return {d, {}};

  DCReport report;
  std::vector<Sample> out;
  out.reserve(d.size() + d.ActiveCount() * static_cast<std::size_t>(cfg.n - 1));
  const auto& samples = d.samples();
  for (int copy = 0; copy < cfg.n; ++copy) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Sample& s = samples[i];
      if (!s.active) {
        if (copy == 0) out.push_back(s);
        continue;
      }
      Rng rng(DeriveSeed(cfg.seed, {static_cast<std::uint64_t>(copy), i}));
      if (!rng.Bernoulli(cfg.theta)) {
        out.push_back(s);
        continue;
      }
      if (!s.HasSpan()) {
        ++report.skipped_no_span;
        out.push_back(s);
        continue;
      }
      std::string value =
          cfg.value_source == DCConfig::ValueSource::kSharedPool
              ? cfg.pool[rng.UniformIndex(cfg.pool.size())]
              : RandStr(cfg.randstr, rng);
      out.push_back(ReplaceValue(s, value));
      ++report.replaced;
    }
  }
  return {Dataset(std::move(out), Provenance::Synthetic(cfg.n, cfg.theta, cfg.seed)),
          report};
}

PairedSynthetic MakePairedSynthetic(const Dataset& train, const Dataset& test,
                                    int k, std::uint64_t seed,
                                    const RandStrConfig& randstr) {
  if (k < 1) Fail(ErrorCode::kArgument, "paired_synthetic: k must be >= 1");
  Rng pool_rng(DeriveSeed(seed, {0}));
  PairedSynthetic out;
  out.pool = FreshValueSet(k, randstr, pool_rng);

  DCConfig cfg;
  cfg.n = 1;
  cfg.theta = 1.0;
  cfg.value_source = DCConfig::ValueSource::kSharedPool;
  cfg.pool = out.pool;
  cfg.randstr = randstr;
  cfg.seed = DeriveSeed(seed, {1});
  out.train = ConstructDataset(train, cfg).dataset;
  cfg.seed = DeriveSeed(seed, {2});
  out.test = ConstructDataset(test, cfg).dataset;
  return out;
}

std::vector<int> DiversityGrid(int n_min, int n_max, int points) {
  if (points < 2) Fail(ErrorCode::kArgument, "diversity_grid: points must be >= 2");
  if (n_min < 1) Fail(ErrorCode::kArgument, "diversity_grid: n_min must be >= 1");
  if (n_max < n_min) {
    Fail(ErrorCode::kArgument, "diversity_grid: n_max must be >= n_min");
  }
  const double alpha = std::pow(static_cast<double>(n_max) / n_min,
                                1.0 / static_cast<double>(points - 1));
  std::vector<int> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    int v = static_cast<int>(std::lround(n_min * std::pow(alpha, i)));
    if (!grid.empty() && v < grid.back()) v = grid.back();
    grid.push_back(v);
  }
  grid.front() = n_min;
  grid.back() = n_max;
  return grid;
}

}  // namespace copyaug
