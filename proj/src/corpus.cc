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

#include "copyaug/corpus.h"

#include <algorithm>

#include "copyaug/tokenizer.h"

namespace copyaug {

std::vector<std::string> Utterance::Joined() const {
  std::vector<std::string> out;
  out.reserve(sys.size() + usr.size() + 1);
  out.insert(out.end(), sys.begin(), sys.end());
  out.emplace_back(kUsrToken);
  out.insert(out.end(), usr.begin(), usr.end());
  return out;
}

std::string SpanText(const Utterance& utterance, const Span& span) {
  const auto joined = utterance.Joined();
  if (span.start < 0 || span.end < span.start ||
      span.end >= static_cast<int>(joined.size())) {
    return {};
  }
  return JoinTokens(std::span<const std::string>(joined).subspan(
      span.start, span.end - span.start + 1));
}

std::optional<Span> LocateValue(const Utterance& utterance,
                                const std::vector<std::string>& value_tokens) {
  if (value_tokens.empty()) return std::nullopt;
  const auto joined = utterance.Joined();
  const int n = static_cast<int>(joined.size());
  const int k = static_cast<int>(value_tokens.size());
  for (int start = n - k; start >= 0; --start) {
    if (std::equal(value_tokens.begin(), value_tokens.end(),
                   joined.begin() + start)) {
      return Span{start, start + k - 1};
    }
  }
  return std::nullopt;
}

std::string ValidateSample(const Sample& s) {
  if (s.utterance.JoinedLength() < 1) return "empty utterance";
  if (s.slot.empty()) return "empty slot";
  for (const auto* part : {&s.utterance.sys, &s.utterance.usr}) {
    for (const auto& t : *part) {
      if (t.empty()) return "empty token";
      if (t.find_first_of(" \t\n\r") != std::string::npos) {
        return "token with whitespace: '" + t + "'";
      }
    }
  }
  if (!s.active) {
    if (s.value || s.span) return "inactive sample carries a value or span";
    return {};
  }
  if (!s.value || s.value->empty()) return "active sample without value";
  if (s.span) {
    const int len = s.utterance.JoinedLength();
    if (s.span->start < 0 || s.span->start > s.span->end ||
        s.span->end >= len) {
      return "span out of range";
    }
    if (SpanText(s.utterance, *s.span) != NormalizeValue(*s.value)) {
      return "span text '" + SpanText(s.utterance, *s.span) +
             "' does not match value '" + *s.value + "'";
    }
  }
  return {};
}

Dataset::Dataset(std::vector<Sample> samples, Provenance provenance)
    : samples_(std::move(samples)), provenance_(provenance) {
  for (const auto& s : samples_) {
    if (s.active && s.value) inventory_[s.slot].insert(*s.value);
  }
}

std::size_t Dataset::ActiveCount() const {
  return static_cast<std::size_t>(std::count_if(
      samples_.begin(), samples_.end(), [](const Sample& s) { return s.active; }));
}

std::set<std::string> Dataset::Slots() const {
  std::set<std::string> out;
  for (const auto& s : samples_) out.insert(s.slot);
  return out;
}

bool Dataset::Contains(std::string_view slot, std::string_view value) const {
  auto it = inventory_.find(std::string(slot));
  return it != inventory_.end() && it->second.count(std::string(value)) > 0;
}

}  // namespace copyaug
