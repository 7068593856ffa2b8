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

// Doubling search over the copy count n.
//
// Step 0 trains on D itself. Step k >= 1 re-initializes the tracker and
// trains on DC(D, n_k, theta) with n_1 = 1 and n_{k+1} = 2 n_k, recording
// the mean of seen and unseen F1. The search stops once two consecutive
// improvements are both below eps (checked from the third result on) and
// reports the best result over all steps.

#ifndef COPYAUG_SEARCH_H_
#define COPYAUG_SEARCH_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "copyaug/corpus.h"
#include "copyaug/randgen.h"
#include "copyaug/tracker/model.h"
#include "copyaug/tracker/trainer.h"

namespace copyaug {

struct SearchConfig {
  double theta = 0.5;
  double eps = 0.01;
  tracker::TrackerConfig tracker;
  std::uint64_t seed = 0;
  // Safety cap on recorded results (step 0 included).
  int max_steps = 12;
  RandStrConfig randstr;
  // Fraction of dialogues held out as dev for checkpoint selection.
  double dev_fraction = 0.1;
  int threads = 1;

  void Validate() const;
};

struct SearchStep {
  int step = 0;
  // Copy count; step 0 (raw D) is recorded as n = 1.
  int n = 1;
  double seen_f1 = 0.0;
  double unseen_f1 = 0.0;
  double overall = 0.0;
};

struct SearchTrace {
  enum class Status { kConverged, kStepLimit, kFailed };

  std::vector<SearchStep> steps;
  int best_step = 0;
  int best_n = 1;
  double best_overall = 0.0;
  // n after the final doubling, i.e. what the doubling loop itself returns.
  int final_n = 1;
  Status status = Status::kConverged;
  std::string error;
};

struct StepOutcome {
  double seen_f1 = 0.0;
  double unseen_f1 = 0.0;
  std::optional<tracker::TrackerModel> model;
};

// Trains a fresh tracker on `train` and scores it. `step_seed` is distinct
// per step and fixed by (SearchConfig::seed, step).
using StepRunner = std::function<StepOutcome(const Dataset& train, int step,
                                             std::uint64_t step_seed)>;

struct SearchResult {
  SearchTrace trace;
  std::optional<tracker::TrackerModel> best_model;
};

// True when the last two improvements in `results` are both below eps.
// Always false with fewer than three results.
bool ShouldStop(const std::vector<double>& results, double eps);

// Number of results the search would record before stopping on this
// sequence, or nullopt if it never stops within results.size().
std::optional<int> ReplayStoppingRule(const std::vector<double>& results,
                                      double eps);

// Copy count trained at `step` (1, 1, 2, 4, ...).
int CopyCountForStep(int step);

SearchResult DoublingSearch(const Dataset& d, const SearchConfig& cfg,
                            const StepRunner& runner);

// Tracker-backed runner: holds out cfg.dev_fraction of dialogues from each
// step's training set for checkpoint selection, then scores the best
// checkpoint on `seen` and `unseen`.
StepRunner MakeTrackerRunner(const Dataset& seen, const Dataset& unseen,
                             const SearchConfig& cfg,
                             const tracker::TrainOptions& options = {});

SearchResult DoublingSearch(const Dataset& d, const Dataset& seen,
                            const Dataset& unseen, const SearchConfig& cfg,
                            const tracker::TrainOptions& options = {});

// CSV with columns step,n,seen_f1,unseen_f1,overall.
void WriteTraceCsv(const SearchTrace& trace, std::ostream& out);

}  // namespace copyaug

#endif  // COPYAUG_SEARCH_H_
