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

// Checkpoint container (little-endian):
//
//   magic "CPAUGCKP" | u32 version
//   string config_json | u32 n_words, string... | u32 n_slots, string...
//   u32 n_tensors, then per tensor: string name | u64 rows | u64 cols |
//   rows*cols f64 in row-major order
//
// Strings are u32 length + bytes.

#ifndef COPYAUG_TRACKER_CHECKPOINT_H_
#define COPYAUG_TRACKER_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "copyaug/tracker/model.h"

namespace copyaug::tracker {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const TrackerModel& model, std::ostream& out);
void SaveCheckpoint(const TrackerModel& model, const std::filesystem::path& path);
TrackerModel LoadCheckpoint(std::istream& in);
TrackerModel LoadCheckpoint(const std::filesystem::path& path);

std::string ConfigToJson(const TrackerConfig& cfg);
TrackerConfig ConfigFromJson(const std::string& text);

}  // namespace copyaug::tracker

#endif  // COPYAUG_TRACKER_CHECKPOINT_H_
