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

#include "copyaug/tracker/vocab.h"

#include "copyaug/corpus.h"

namespace copyaug::tracker {

Vocabulary::Vocabulary(std::vector<std::string> entries) {
  for (auto& e : entries) Add(e);
}

Vocabulary Vocabulary::ForWords() {
  Vocabulary v;
  v.Add(kPad);
  v.Add(kUnk);
  v.Add(kUsrToken);
  return v;
}

int Vocabulary::Add(std::string_view entry) {
  auto [it, inserted] =
      index_.emplace(std::string(entry), static_cast<int>(entries_.size()));
  if (inserted) entries_.emplace_back(entry);
  return it->second;
}

std::optional<int> Vocabulary::Find(std::string_view entry) const {
  auto it = index_.find(std::string(entry));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::WordId(std::string_view word) const {
  return Find(word).value_or(kUnkId);
}

}  // namespace copyaug::tracker
