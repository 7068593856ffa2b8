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

#include "copyaug/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>

#include "copyaug/augment.h"
#include "copyaug/error.h"
#include "copyaug/eval.h"
#include "copyaug/ingest.h"

namespace copyaug {
namespace {

void Log(const ExperimentContext& ctx, const std::string& line) {
  if (ctx.train_options.log) ctx.train_options.log(line);
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

tracker::TrackerModel TrainWithDevSplit(const Dataset& train,
                                        const ExperimentContext& ctx,
                                        std::uint64_t seed) {
  TrainDev split = SplitDev(train, ctx.dev_fraction, ctx.seed);
  if (split.train.empty() || split.dev.empty()) {
    Fail(ErrorCode::kArgument, "dev split left an empty partition; corpus too small");
  }
  tracker::TrackerConfig cfg = ctx.tracker;
  cfg.seed = seed;
  return tracker::Train(split.train, split.dev, cfg, ctx.train_options).model;
}

double EvaluateF1(const tracker::TrackerModel& model, const Dataset& test,
                  int threads) {
  return Score(tracker::Predict(test, model, threads), test).f1;
}

TestPair MakeSeenUnseenTests(const Dataset& test, std::uint64_t seed,
                             const RandStrConfig& randstr) {
  DCConfig dc;
  dc.n = 1;
  dc.theta = 1.0;
  dc.seed = seed;
  dc.randstr = randstr;
  return {test, ConstructDataset(test, dc).dataset};
}

MemorizationResult RunMemorization(const Dataset& train, const Dataset& test,
                                   const ExperimentContext& ctx, int pool_size) {
  MemorizationResult r;
  int k = pool_size;
  if (k <= 0) {
    std::size_t distinct = 0;
    for (const auto& [slot, values] : train.value_inventory()) distinct += values.size();
    k = std::max<int>(1, static_cast<int>(distinct));
  }
  PairedSynthetic syn =
      MakePairedSynthetic(train, test, k, DeriveSeed(ctx.seed, {0x3e}), ctx.randstr);
  r.pool_size = syn.pool.size();

  const Dataset* trains[2] = {&train, &syn.train};
  const Dataset* tests[2] = {&test, &syn.test};
  for (int i = 0; i < 2; ++i) {
    Log(ctx, std::string("memorization: training on ") +
                 (i == 0 ? "original" : "synthetic") + " train");
    tracker::TrackerModel model =
        TrainWithDevSplit(*trains[i], ctx, DeriveSeed(ctx.seed, {0x3f, std::uint64_t(i)}));
    for (int j = 0; j < 2; ++j) r.f1[i][j] = EvaluateF1(model, *tests[j], ctx.threads);
    (i == 0 ? r.original_model : r.synthetic_model) = std::move(model);
  }
  return r;
}

std::vector<DiversityRow> RunDiversity(const Dataset& train, const Dataset& test,
                                       const std::vector<int>& grid,
                                       const ExperimentContext& ctx) {
  if (grid.empty()) Fail(ErrorCode::kArgument, "diversity: empty grid");
  std::vector<DiversityRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const int k = grid[g];
    Log(ctx, "diversity: pool size " + std::to_string(k));
    PairedSynthetic syn = MakePairedSynthetic(
        train, test, k, DeriveSeed(ctx.seed, {0x41, static_cast<std::uint64_t>(g)}),
        ctx.randstr);
    tracker::TrackerModel model = TrainWithDevSplit(
        syn.train, ctx, DeriveSeed(ctx.seed, {0x42, static_cast<std::uint64_t>(g)}));
    DiversityRow row;
    row.pool_size = k;
    row.seen_f1 = EvaluateF1(model, syn.test, ctx.threads);
    row.unseen_f1 = EvaluateF1(model, test, ctx.threads);
    row.overall = (row.seen_f1 + row.unseen_f1) / 2.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<CopySweepRow> RunCopySweep(const Dataset& train, const Dataset& test,
                                       const std::vector<int>& copies,
                                       double theta, const ExperimentContext& ctx) {
  if (copies.empty()) Fail(ErrorCode::kArgument, "copy sweep: empty copy list");
  const Dataset unseen =
      theta >= 1.0
          ? test
          : MakeSeenUnseenTests(test, DeriveSeed(ctx.seed, {0x51}), ctx.randstr).unseen;
  std::vector<CopySweepRow> rows;
  for (std::size_t c = 0; c < copies.size(); ++c) {
    const int n = copies[c];
    Log(ctx, "copy sweep: n = " + std::to_string(n));
    DCConfig dc;
    dc.n = n;
    dc.theta = theta;
    dc.seed = DeriveSeed(ctx.seed, {0x52, static_cast<std::uint64_t>(c)});
    dc.randstr = ctx.randstr;
    const Dataset syn = ConstructDataset(train, dc).dataset;

    std::set<std::string> values;
    for (const auto& [slot, vals] : syn.value_inventory()) values.insert(vals.begin(), vals.end());
    if (values.empty()) Fail(ErrorCode::kArgument, "copy sweep: training set has no values");
    DCConfig seen_dc;
    seen_dc.n = 1;
    seen_dc.theta = 1.0;
    seen_dc.value_source = DCConfig::ValueSource::kSharedPool;
    seen_dc.pool.assign(values.begin(), values.end());
    seen_dc.seed = DeriveSeed(ctx.seed, {0x53, static_cast<std::uint64_t>(c)});
    const Dataset seen = ConstructDataset(test, seen_dc).dataset;

    tracker::TrackerModel model = TrainWithDevSplit(
        syn, ctx, DeriveSeed(ctx.seed, {0x54, static_cast<std::uint64_t>(c)}));
    CopySweepRow row;
    row.n = n;
    row.seen_f1 = EvaluateF1(model, seen, ctx.threads);
    row.unseen_f1 = EvaluateF1(model, unseen, ctx.threads);
    row.overall = (row.seen_f1 + row.unseen_f1) / 2.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ThetaRow> RunThetaSweep(const Dataset& train, const TestPair& tests,
                                    const std::vector<double>& thetas,
                                    const SearchConfig& base,
                                    const tracker::TrainOptions& options) {
  if (thetas.empty()) Fail(ErrorCode::kArgument, "theta sweep: empty theta list");
  std::vector<ThetaRow> rows;
  for (double theta : thetas) {
    SearchConfig cfg = base;
    cfg.theta = theta;
    if (options.log) options.log("theta sweep: theta = " + Fixed(theta));
    SearchResult res = DoublingSearch(train, tests.seen, tests.unseen, cfg, options);
    if (res.trace.status == SearchTrace::Status::kFailed) {
      Fail(ErrorCode::kNumeric, "theta sweep at theta " + Fixed(theta) + ": " +
                                    res.trace.error);
    }
    const SearchStep& best = res.trace.steps.at(static_cast<std::size_t>(res.trace.best_step));
    ThetaRow row;
    row.theta = theta;
    row.best_n = res.trace.best_n;
    row.steps = static_cast<int>(res.trace.steps.size());
    row.seen_f1 = best.seen_f1;
    row.unseen_f1 = best.unseen_f1;
    row.overall = best.overall;
    rows.push_back(row);
  }
  return rows;
}

std::vector<EpsRow> ReplayEpsSweep(const SearchTrace& trace,
                                   const std::vector<double>& eps) {
  std::vector<double> overall;
  for (const auto& s : trace.steps) overall.push_back(s.overall);
  std::vector<EpsRow> rows;
  for (double e : eps) {
    if (!(e > 0.0)) Fail(ErrorCode::kConfig, "eps sweep: eps must be positive");
    EpsRow row;
    row.eps = e;
    row.steps = ReplayStoppingRule(overall, e);
    const int k = row.steps.value_or(static_cast<int>(overall.size()));
    row.final_n = k <= 1 ? 1 : 1 << (k - 1);
    row.best_overall = k == 0 ? 0.0 : *std::max_element(overall.begin(), overall.begin() + k);
    rows.push_back(row);
  }
  return rows;
}

void WriteMemorizationCsv(const MemorizationResult& r, std::ostream& out) {
  out << "train,test_original,test_synthetic\n";
  out << "original," << Fixed(r.f1[0][0]) << "," << Fixed(r.f1[0][1]) << "\n";
  out << "synthetic," << Fixed(r.f1[1][0]) << "," << Fixed(r.f1[1][1]) << "\n";
}

void WriteDiversityCsv(const std::vector<DiversityRow>& rows, std::ostream& out) {
  out << "pool_size,seen_f1,unseen_f1,overall\n";
  for (const auto& r : rows) {
    out << r.pool_size << "," << Fixed(r.seen_f1) << "," << Fixed(r.unseen_f1) << ","
        << Fixed(r.overall) << "\n";
  }
}

void WriteCopySweepCsv(const std::vector<CopySweepRow>& rows, std::ostream& out) {
  out << "n,seen_f1,unseen_f1,overall\n";
  for (const auto& r : rows) {
    out << r.n << "," << Fixed(r.seen_f1) << "," << Fixed(r.unseen_f1) << ","
        << Fixed(r.overall) << "\n";
  }
}

void WriteThetaCsv(const std::vector<ThetaRow>& rows, std::ostream& out) {
  out << "theta,best_n,steps,seen_f1,unseen_f1,overall\n";
  for (const auto& r : rows) {
    out << Fixed(r.theta) << "," << r.best_n << "," << r.steps << ","
        << Fixed(r.seen_f1) << "," << Fixed(r.unseen_f1) << "," << Fixed(r.overall)
        << "\n";
  }
}

void WriteEpsCsv(const std::vector<EpsRow>& rows, std::ostream& out) {
  out << "eps,steps,final_n,best_overall\n";
  for (const auto& r : rows) {
    out << Fixed(r.eps) << "," << (r.steps ? std::to_string(*r.steps) : "") << ","
        << r.final_n << "," << Fixed(r.best_overall) << "\n";
  }
}

double SpearmanCorrelation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size()) {
    Fail(ErrorCode::kArgument, "spearman: length mismatch");
  }
  if (x.size() < 2) return 0.0;
  const std::vector<double> rx = Ranks(x);
  const std::vector<double> ry = Ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace copyaug
