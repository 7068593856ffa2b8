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

#ifndef COPYAUG_TOKENIZER_H_
#define COPYAUG_TOKENIZER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace copyaug {

// Identifier written into canonical file headers. Files produced under a
// different tokenizer are rejected on read.
inline constexpr std::string_view kTokenizerId = "lower-ws-punct6-v1";

// Lowercases ASCII, splits on whitespace and detaches each of . , ? ! ' :
// as a standalone token. Bytes outside ASCII pass through unchanged.
std::vector<std::string> Tokenize(std::string_view text);

// Tokenize + join with single spaces. Used to compare values with spans.
std::string NormalizeValue(std::string_view value);

std::string JoinTokens(std::span<const std::string> tokens);

}  // namespace copyaug

#endif  // COPYAUG_TOKENIZER_H_
