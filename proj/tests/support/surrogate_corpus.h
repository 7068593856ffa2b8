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

// Templated restaurant-search dialogues emitted in the WoZ turn-label JSON
// layout. Used where the real corpora are not available.

#ifndef COPYAUG_TESTS_SUPPORT_SURROGATE_CORPUS_H_
#define COPYAUG_TESTS_SUPPORT_SURROGATE_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace copyaug::testing {

struct SurrogateSpec {
  int dialogues = 200;
  std::uint64_t seed = 1;
  // Food values that may appear. Empty = the built-in cuisine list.
  std::vector<std::string> foods;
};

const std::vector<std::string>& SurrogateFoods();

// Returns a JSON document accepted by Ingest(..., CorpusFormat::kWoz).
std::string MakeSurrogateWozJson(const SurrogateSpec& spec);

}  // namespace copyaug::testing

#endif  // COPYAUG_TESTS_SUPPORT_SURROGATE_CORPUS_H_
