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

// Core data model: one Sample is a (turn, slot) pair, a Dataset is an
// ordered list of samples together with the value inventory derived from
// its active samples.

#ifndef COPYAUG_CORPUS_H_
#define COPYAUG_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace copyaug {

// Separator between system and user tokens in the joined sequence.
inline constexpr std::string_view kUsrToken = "<usr>";

// Inclusive token range into the joined sequence (separator counted).
struct Span {
  int start = 0;
  int end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Utterance {
  std::vector<std::string> sys;
  std::vector<std::string> usr;

  // sys ++ <usr> ++ usr.
  std::vector<std::string> Joined() const;
  int JoinedLength() const { return static_cast<int>(sys.size() + usr.size()) + 1; }

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Sample {
  Utterance utterance;
  std::string slot;
  bool active = false;
  std::optional<std::string> value;
  // Absent for inactive samples and for "gate-only" active samples whose
  // value does not occur in the current turn pair.
  std::optional<Span> span;
  // Source dialogue; used for dev hold-out. Empty when unknown.
  std::string dialogue_id;

  bool HasSpan() const { return active && span.has_value(); }

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Checks the Sample invariants. Returns an empty string when valid,
// otherwise a description of the first violation.
std::string ValidateSample(const Sample& sample);

// Text covered by `span` joined with single spaces.
std::string SpanText(const Utterance& utterance, const Span& span);

// Rightmost occurrence of the token sequence `value_tokens` in the joined
// sequence. Never matches across the separator.
std::optional<Span> LocateValue(const Utterance& utterance,
                                const std::vector<std::string>& value_tokens);

struct Provenance {
  enum class Kind { kOriginal, kSynthetic };
  Kind kind = Kind::kOriginal;
  int n = 1;
  double theta = 0.0;
  std::uint64_t seed = 0;

  static Provenance Original() { return {}; }
  static Provenance Synthetic(int n, double theta, std::uint64_t seed) {
    return {Kind::kSynthetic, n, theta, seed};
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

using ValueInventory = std::map<std::string, std::set<std::string>>;

// Immutable after construction. The value inventory is always recomputed
// from the samples, so it cannot drift out of sync.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Sample> samples,
                   Provenance provenance = Provenance::Original());

  const std::vector<Sample>& samples() const { return samples_; }
  const ValueInventory& value_inventory() const { return inventory_; }
  const Provenance& provenance() const { return provenance_; }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t ActiveCount() const;
  std::set<std::string> Slots() const;
  bool Contains(std::string_view slot, std::string_view value) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.samples_ == b.samples_ && a.provenance_ == b.provenance_;
  }

 private:
  std::vector<Sample> samples_;
  ValueInventory inventory_;
  Provenance provenance_;
};

}  // namespace copyaug

#endif  // COPYAUG_CORPUS_H_
