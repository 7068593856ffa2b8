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

#include "copyaug/tokenizer.h"

#include <cctype>

namespace copyaug {
namespace {

bool IsDetached(char c) {
  switch (c) {
    case '.':
    case ',':
    case '?':
    case '!':
    case '\'':
    case ':':
      return true;
    default:
      return false;
  }
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char c : text) {
    if (IsSpace(c)) {
      flush();
    } else if (IsDetached(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      auto u = static_cast<unsigned char>(c);
      current.push_back(u < 128 ? static_cast<char>(std::tolower(u)) : c);
    }
  }
  flush();
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string NormalizeValue(std::string_view value) {
  return JoinTokens(Tokenize(value));
}

}  // namespace copyaug
