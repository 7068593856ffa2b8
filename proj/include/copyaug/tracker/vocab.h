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

#ifndef COPYAUG_TRACKER_VOCAB_H_
#define COPYAUG_TRACKER_VOCAB_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace copyaug::tracker {

// Bidirectional string <-> id map. Ids are assigned in insertion order.
class Vocabulary {
 public:
  static constexpr std::string_view kPad = "<pad>";
  static constexpr std::string_view kUnk = "<unk>";
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> entries);

  // Word vocabulary: <pad>, <unk>, <usr>, then entries in first-seen order.
  static Vocabulary ForWords();

  int Add(std::string_view entry);
  std::optional<int> Find(std::string_view entry) const;
  // Unknown words map to kUnkId.
  int WordId(std::string_view word) const;

  const std::string& at(int id) const { return entries_.at(id); }
  const std::vector<std::string>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace copyaug::tracker

#endif  // COPYAUG_TRACKER_VOCAB_H_
