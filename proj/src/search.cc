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

#include "copyaug/search.h"

#include <cstdio>
#include <ostream>

#include "copyaug/augment.h"
#include "copyaug/error.h"
#include "copyaug/eval.h"
#include "copyaug/ingest.h"

namespace copyaug {

void SearchConfig::Validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    Fail(ErrorCode::kConfig, "search: theta must be in [0, 1]");
  }
  if (!(eps > 0.0)) Fail(ErrorCode::kConfig, "search: eps must be positive");
  if (max_steps < 3) Fail(ErrorCode::kConfig, "search: max_steps must be >= 3");
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0)) {
    Fail(ErrorCode::kConfig, "search: dev_fraction must be in (0, 1)");
  }
  tracker.Validate();
}

bool ShouldStop(const std::vector<double>& results, double eps) {
  const std::size_t k = results.size();
  if (k < 3) return false;
  return results[k - 1] - results[k - 2] < eps &&
         results[k - 2] - results[k - 3] < eps;
}

std::optional<int> ReplayStoppingRule(const std::vector<double>& results,
                                      double eps) {
  std::vector<double> prefix;
  for (double r : results) {
    prefix.push_back(r);
    if (ShouldStop(prefix, eps)) return static_cast<int>(prefix.size());
  }
  return std::nullopt;
}

int CopyCountForStep(int step) { return step <= 1 ? 1 : 1 << (step - 1); }

SearchResult DoublingSearch(const Dataset& d, const SearchConfig& cfg,
                            const StepRunner& runner) {
  cfg.Validate();
  if (d.empty()) Fail(ErrorCode::kArgument, "search: empty training set");

  SearchResult result;
  SearchTrace& trace = result.trace;
  std::vector<double> res;
  int n = 1;
  for (int step = 0;; ++step) {
    if (step >= cfg.max_steps) {
      trace.status = SearchTrace::Status::kStepLimit;
      break;
    }
    const std::uint64_t step_seed =
        DeriveSeed(cfg.seed, {static_cast<std::uint64_t>(step)});
    StepOutcome outcome;
    try {
      if (step == 0) {
        outcome = runner(d, step, step_seed);
      } else {
        DCConfig dc;
        dc.n = n;
        dc.theta = cfg.theta;
        dc.seed = step_seed;
        dc.randstr = cfg.randstr;
        outcome = runner(ConstructDataset(d, dc).dataset, step, step_seed);
      }
    } catch (const Error& e) {
      trace.status = SearchTrace::Status::kFailed;
      trace.error = "step " + std::to_string(step) + ": " + e.what();
      break;
    }

    SearchStep rec;
    rec.step = step;
    rec.n = step == 0 ? 1 : n;
    rec.seen_f1 = outcome.seen_f1;
    rec.unseen_f1 = outcome.unseen_f1;
    rec.overall = (outcome.seen_f1 + outcome.unseen_f1) / 2.0;
    trace.steps.push_back(rec);
    res.push_back(rec.overall);
    if (step >= 1) n *= 2;

    if (trace.steps.size() == 1 || rec.overall > trace.best_overall) {
      trace.best_overall = rec.overall;
      trace.best_step = step;
      trace.best_n = rec.n;
      result.best_model = std::move(outcome.model);
    }
    if (ShouldStop(res, cfg.eps)) {
      trace.status = SearchTrace::Status::kConverged;
      break;
    }
  }
  trace.final_n = n;
  return result;
}

StepRunner MakeTrackerRunner(const Dataset& seen, const Dataset& unseen,
                             const SearchConfig& cfg,
                             const tracker::TrainOptions& options) {
  return [seen, unseen, cfg, options](const Dataset& train, int step,
                                      std::uint64_t step_seed) {
    tracker::TrackerConfig tc = cfg.tracker;
    tc.seed = step_seed;
    // Same dialogues held out at every step: the split keys on dialogue ids,
    // which DC preserves.
    TrainDev split = SplitDev(train, cfg.dev_fraction, cfg.seed);
    if (split.dev.empty() || split.train.empty()) {
      Fail(ErrorCode::kArgument,
           "search step " + std::to_string(step) +
               ": dev split left an empty partition; corpus too small");
    }
    if (options.log) {
      options.log("search step " + std::to_string(step) + ": " +
                  std::to_string(split.train.size()) + " train / " +
                  std::to_string(split.dev.size()) + " dev samples");
    }
    tracker::TrainResult trained = tracker::Train(split.train, split.dev, tc, options);
    StepOutcome out;
    out.seen_f1 = Score(tracker::Predict(seen, trained.model, cfg.threads), seen).f1;
    out.unseen_f1 =
        Score(tracker::Predict(unseen, trained.model, cfg.threads), unseen).f1;
    out.model = std::move(trained.model);
    return out;
  };
}

SearchResult DoublingSearch(const Dataset& d, const Dataset& seen,
                            const Dataset& unseen, const SearchConfig& cfg,
                            const tracker::TrainOptions& options) {
  if (seen.empty() || unseen.empty()) {
    Fail(ErrorCode::kArgument, "search: seen and unseen test sets must be non-empty");
  }
  return DoublingSearch(d, cfg, MakeTrackerRunner(seen, unseen, cfg, options));
}

void WriteTraceCsv(const SearchTrace& trace, std::ostream& out) {
  out << "step,n,seen_f1,unseen_f1,overall\n";
  char buf[128];
  for (const auto& s : trace.steps) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f\n", s.step, s.n,
                  s.seen_f1, s.unseen_f1, s.overall);
    out << buf;
  }
}

}  // namespace copyaug
