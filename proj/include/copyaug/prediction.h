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

#ifndef COPYAUG_PREDICTION_H_
#define COPYAUG_PREDICTION_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace copyaug {

// Tracker output for one sample. start/end index the joined token sequence
// and are the independent argmaxes of the two pointer distributions; end may
// precede start.
struct Prediction {
  bool active = false;
  double cls_prob = 0.0;
  int start = 0;
  int end = 0;
  // Empty when read back from a predictions file.
  std::vector<double> scores_p;
  std::vector<double> scores_q;
};

// Line-delimited predictions file: a header record followed by one
// {"active","cls_prob","start","end"} record per sample.
void WritePredictions(const std::vector<Prediction>& preds, std::ostream& out);
void WritePredictions(const std::vector<Prediction>& preds,
                      const std::filesystem::path& path);
std::vector<Prediction> ReadPredictions(std::istream& in);
std::vector<Prediction> ReadPredictions(const std::filesystem::path& path);

}  // namespace copyaug

#endif  // COPYAUG_PREDICTION_H_
