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

// Value-level slot F1, micro-averaged over samples.
//
//   tp: gate active, gold active, start and end both exact.
//   fp: gate active and not a tp (gold inactive, or span mismatch).
//   fn: gold active and not a tp (gate inactive, or span mismatch).
//
// A span mismatch on an active gold sample therefore counts as one fp and one
// fn. Spans of gate-inactive predictions are ignored.

#ifndef COPYAUG_EVAL_H_
#define COPYAUG_EVAL_H_

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "copyaug/corpus.h"
#include "copyaug/prediction.h"

namespace copyaug {

enum class Partition { kAll, kSeen, kUnseen };

std::string_view PartitionName(Partition p);

struct F1Report {
  Partition partition = Partition::kAll;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

F1Report Score(const std::vector<Prediction>& preds, const Dataset& gold,
               Partition partition = Partition::kAll);

struct PartitionScores {
  // Absent when that partition has no active gold samples.
  std::optional<F1Report> seen;
  std::optional<F1Report> unseen;
  double overall = 0.0;
  // Set when one partition was absent and overall fell back to the other.
  bool fell_back = false;
};

// Splits gold by value membership in train's inventory (inactive samples in
// both partitions) and averages the two F1 scores.
PartitionScores ScorePartitions(const std::vector<Prediction>& preds,
                                const Dataset& gold, const Dataset& train);

// Mean of two F1 scores, with the same fallback rule as ScorePartitions.
double OverallPerformance(const std::optional<double>& seen_f1,
                          const std::optional<double>& unseen_f1);

// CSV with columns partition,tp,fp,fn,precision,recall,f1.
void WriteReportCsv(const std::vector<F1Report>& reports, std::ostream& out);

}  // namespace copyaug

#endif  // COPYAUG_EVAL_H_
