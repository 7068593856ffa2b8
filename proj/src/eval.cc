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

#include "copyaug/eval.h"

#include <cstdio>
#include <ostream>
#include <string>

#include "copyaug/error.h"

namespace copyaug {
namespace {

void Finish(F1Report& r) {
  const double pd = static_cast<double>(r.tp + r.fp);
  const double rd = static_cast<double>(r.tp + r.fn);
  r.precision = pd > 0 ? r.tp / pd : 0.0;
  r.recall = rd > 0 ? r.tp / rd : 0.0;
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0 ? 2.0 * r.precision * r.recall / sum : 0.0;
}

void Accumulate(const Prediction& pred, const Sample& gold, F1Report& r) {
  const bool hit = pred.active && gold.HasSpan() &&
                   pred.start == gold.span->start && pred.end == gold.span->end;
  if (hit) {
    ++r.tp;
    return;
  }
  if (pred.active) ++r.fp;
  if (gold.active) ++r.fn;
}

}  // namespace

std::string_view PartitionName(Partition p) {
  switch (p) {
    case Partition::kAll:
      return "all";
    case Partition::kSeen:
      return "seen";
    case Partition::kUnseen:
      return "unseen";
  }
  return "?";
}

F1Report Score(const std::vector<Prediction>& preds, const Dataset& gold,
               Partition partition) {
  if (preds.size() != gold.size()) {
    Fail(ErrorCode::kArgument,
         "score: " + std::to_string(preds.size()) + " predictions for " +
             std::to_string(gold.size()) + " gold samples");
  }
  F1Report r;
  r.partition = partition;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    Accumulate(preds[i], gold.samples()[i], r);
  }
  Finish(r);
  return r;
}

double OverallPerformance(const std::optional<double>& seen_f1,
                          const std::optional<double>& unseen_f1) {
  if (seen_f1 && unseen_f1) return (*seen_f1 + *unseen_f1) / 2.0;
  if (seen_f1) return *seen_f1;
  if (unseen_f1) return *unseen_f1;
  return 0.0;
}

PartitionScores ScorePartitions(const std::vector<Prediction>& preds,
                                const Dataset& gold, const Dataset& train) {
  if (preds.size() != gold.size()) {
    Fail(ErrorCode::kArgument, "score_partitions: prediction/gold length mismatch");
  }
  F1Report seen;
  F1Report unseen;
  seen.partition = Partition::kSeen;
  unseen.partition = Partition::kUnseen;
  bool any_seen = false;
  bool any_unseen = false;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const Sample& s = gold.samples()[i];
    if (!s.active) {
      Accumulate(preds[i], s, seen);
      Accumulate(preds[i], s, unseen);
    } else if (s.value && train.Contains(s.slot, *s.value)) {
      Accumulate(preds[i], s, seen);
      any_seen = true;
    } else {
      Accumulate(preds[i], s, unseen);
      any_unseen = true;
    }
  }
  Finish(seen);
  Finish(unseen);
  PartitionScores out;
  if (any_seen) out.seen = seen;
  if (any_unseen) out.unseen = unseen;
  out.fell_back = any_seen != any_unseen;
  out.overall = OverallPerformance(out.seen ? std::optional(out.seen->f1) : std::nullopt,
                                   out.unseen ? std::optional(out.unseen->f1) : std::nullopt);
  return out;
}

void WriteReportCsv(const std::vector<F1Report>& reports, std::ostream& out) {
  out << "partition,tp,fp,fn,precision,recall,f1\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%s,%ld,%ld,%ld,%.6f,%.6f,%.6f\n",
                  std::string(PartitionName(r.partition)).c_str(), r.tp, r.fp,
                  r.fn, r.precision, r.recall, r.f1);
    out << buf;
  }
}

}  // namespace copyaug
