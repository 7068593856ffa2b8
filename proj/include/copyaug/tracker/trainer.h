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

#ifndef COPYAUG_TRACKER_TRAINER_H_
#define COPYAUG_TRACKER_TRAINER_H_

#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copyaug/corpus.h"
#include "copyaug/prediction.h"
#include "copyaug/tracker/model.h"

namespace copyaug::tracker {

// Adam with bias correction. Word-embedding rows are updated lazily: only
// rows with a gradient in the current batch move, and their moments are
// kept per row (the sparse-Adam scheme).
class AdamOptimizer {
 public:
  AdamOptimizer(const TrackerConfig& cfg, const TrackerParams& params);

  void Step(TrackerParams& params, const Gradients& grads);
  long steps() const { return step_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long step_ = 0;
  TrackerParams m_;
  TrackerParams v_;
  std::unordered_map<int, std::pair<RowVector, RowVector>> word_moments_;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_f1 = 0.0;
};

struct TrainOptions {
  // Receives progress lines; null = silent.
  std::function<void(std::string_view)> log;
  // Called after every epoch's dev evaluation. Tests use it to observe the
  // loss curve.
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  TrackerModel model;  // checkpoint with the best dev F1
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

// Runs cfg.epochs epochs of minibatch Adam over shuffled `train`, scores
// `dev` after each epoch and keeps the parameters with the highest dev F1
// (earliest epoch on ties). Throws kNumeric on a non-finite loss or
// parameter.
TrainResult Train(const Dataset& train, const Dataset& dev,
                  const TrackerConfig& cfg, const TrainOptions& options = {});

// Batch prediction with dropout off. `threads` > 1 splits samples across
// worker threads; output is identical for any thread count.
std::vector<Prediction> Predict(const Dataset& data, const TrackerModel& model,
                                int threads = 1);

// Mean loss over `samples` and its gradient (no dropout). Exposed for
// gradient checking.
double BatchLossAndGradient(const TrackerModel& model,
                            const std::vector<Sample>& samples,
                            Gradients* grads);

}  // namespace copyaug::tracker

#endif  // COPYAUG_TRACKER_TRAINER_H_
