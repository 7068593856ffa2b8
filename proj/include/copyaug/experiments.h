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

// Experiment recipes built on top of augment, tracker and search.

#ifndef COPYAUG_EXPERIMENTS_H_
#define COPYAUG_EXPERIMENTS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "copyaug/corpus.h"
#include "copyaug/randgen.h"
#include "copyaug/search.h"
#include "copyaug/tracker/model.h"
#include "copyaug/tracker/trainer.h"

namespace copyaug {

struct ExperimentContext {
  tracker::TrackerConfig tracker;
  double dev_fraction = 0.1;
  std::uint64_t seed = 0;
  int threads = 1;
  RandStrConfig randstr;
  tracker::TrainOptions train_options;
};

// Holds out ctx.dev_fraction of the dialogues in `train` for checkpoint
// selection and trains a fresh tracker on the rest.
tracker::TrackerModel TrainWithDevSplit(const Dataset& train,
                                        const ExperimentContext& ctx,
                                        std::uint64_t seed);

double EvaluateF1(const tracker::TrackerModel& model, const Dataset& test,
                  int threads = 1);

struct TestPair {
  Dataset seen;
  Dataset unseen;
};

// Seen test = `test` as is. Unseen test = DC(test, 1, 1) with fresh random
// values, so none of its active values can occur in any training set.
TestPair MakeSeenUnseenTests(const Dataset& test, std::uint64_t seed,
                             const RandStrConfig& randstr = {});

// 2x2 matrix: rows are the train variant, columns the test variant, index 0
// original and 1 synthetic. Both synthetic sets share one value pool.
struct MemorizationResult {
  double f1[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  std::size_t pool_size = 0;
  std::optional<tracker::TrackerModel> original_model;
  std::optional<tracker::TrackerModel> synthetic_model;
};

// `pool_size` <= 0 draws as many values as the training inventory holds.
MemorizationResult RunMemorization(const Dataset& train, const Dataset& test,
                                   const ExperimentContext& ctx,
                                   int pool_size = 0);

struct DiversityRow {
  int pool_size = 0;
  double seen_f1 = 0.0;    // synthetic test sharing the pool
  double unseen_f1 = 0.0;  // original test
  double overall = 0.0;
};

std::vector<DiversityRow> RunDiversity(const Dataset& train, const Dataset& test,
                                       const std::vector<int>& grid,
                                       const ExperimentContext& ctx);

struct CopySweepRow {
  int n = 1;
  double seen_f1 = 0.0;
  double unseen_f1 = 0.0;
  double overall = 0.0;
};

// Trains on DC(train, n, theta) for every n. The seen test rewrites `test`
// with values drawn from the synthetic training inventory; the unseen test
// is `test` itself when theta = 1 and fresh random values otherwise.
std::vector<CopySweepRow> RunCopySweep(const Dataset& train, const Dataset& test,
                                       const std::vector<int>& copies,
                                       double theta, const ExperimentContext& ctx);

struct ThetaRow {
  double theta = 0.0;
  int best_n = 1;
  int steps = 0;
  double seen_f1 = 0.0;
  double unseen_f1 = 0.0;
  double overall = 0.0;
};

std::vector<ThetaRow> RunThetaSweep(const Dataset& train, const TestPair& tests,
                                    const std::vector<double>& thetas,
                                    const SearchConfig& base,
                                    const tracker::TrainOptions& options = {});

struct EpsRow {
  double eps = 0.0;
  // Results recorded before stopping; absent if the trace never stopped.
  std::optional<int> steps;
  int final_n = 1;
  double best_overall = 0.0;
};

// Replays the stopping rule of one recorded trace for several eps values.
std::vector<EpsRow> ReplayEpsSweep(const SearchTrace& trace,
                                   const std::vector<double>& eps);

void WriteMemorizationCsv(const MemorizationResult& r, std::ostream& out);
void WriteDiversityCsv(const std::vector<DiversityRow>& rows, std::ostream& out);
void WriteCopySweepCsv(const std::vector<CopySweepRow>& rows, std::ostream& out);
void WriteThetaCsv(const std::vector<ThetaRow>& rows, std::ostream& out);
void WriteEpsCsv(const std::vector<EpsRow>& rows, std::ostream& out);

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either side is constant.
double SpearmanCorrelation(const std::vector<double>& x,
                           const std::vector<double>& y);

}  // namespace copyaug

#endif  // COPYAUG_EXPERIMENTS_H_
