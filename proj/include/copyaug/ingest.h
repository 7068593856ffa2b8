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

// Corpus ingestion. WoZ 2.0, DSTC2 and Multi-WoZ are read from the common
// turn-label JSON layout (a list of dialogues, each with a "dialogue" list of
// turns carrying "system_transcript", "transcript" and "turn_label").
// Canonical files are the line-delimited format written by WriteCanonical.

#ifndef COPYAUG_INGEST_H_
#define COPYAUG_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "copyaug/corpus.h"

namespace copyaug {

enum class CorpusFormat { kWoz, kDstc2, kMultiWoz, kCanonical };

CorpusFormat ParseCorpusFormat(std::string_view name);
std::string_view CorpusFormatName(CorpusFormat format);

// Non-enumerable slots tracked for each corpus. Empty for kCanonical, which
// accepts any slot.
const std::vector<std::string>& TrackedSlots(CorpusFormat format);

// Label value -> surface forms to try when the label does not occur verbatim
// in the turn. Keyed by (format, slot, normalized label).
class AliasTable {
 public:
  AliasTable() = default;

  // Tab-separated rows: format, slot, label, surface. '#' starts a comment.
  static AliasTable Parse(std::istream& in);
  static AliasTable Load(const std::filesystem::path& path);

  void Add(CorpusFormat format, std::string slot, std::string label,
           std::string surface);
  const std::vector<std::string>& Surfaces(CorpusFormat format,
                                           const std::string& slot,
                                           const std::string& label) const;
  std::size_t size() const { return size_; }

 private:
  std::map<std::tuple<CorpusFormat, std::string, std::string>,
           std::vector<std::string>>
      rows_;
  std::size_t size_ = 0;
};

struct IngestOptions {
  // Restricts tracking to these slots. Empty = TrackedSlots(format).
  std::vector<std::string> slots;
  AliasTable aliases;
};

struct IngestReport {
  std::size_t dialogues = 0;
  std::size_t turns = 0;
  std::size_t samples = 0;
  std::size_t active = 0;
  // Active samples kept as gate-only because no span could be located.
  std::size_t dropped_spans = 0;
  // Subset of dropped_spans whose label has no alias table row.
  std::size_t unmapped_aliases = 0;
  // Samples whose span was found through an alias surface form.
  std::size_t aliased = 0;
};

struct IngestResult {
  Dataset dataset;
  IngestReport report;
};

IngestResult Ingest(const std::filesystem::path& path, CorpusFormat format,
                    const IngestOptions& options = {});

// Parses a turn-label JSON document already in memory.
IngestResult IngestTurnLabelJson(std::string_view text, CorpusFormat format,
                                 const IngestOptions& options = {});

// Canonical line-delimited format.
void WriteCanonical(const Dataset& dataset, std::ostream& out);
void WriteCanonical(const Dataset& dataset, const std::filesystem::path& path);
Dataset ReadCanonical(std::istream& in);
Dataset ReadCanonical(const std::filesystem::path& path);

struct SeenUnseen {
  Dataset seen;
  Dataset unseen;
};

// Active test samples whose value occurs in train's inventory for the same
// slot go to `seen`, the rest to `unseen`. Inactive samples go to both.
SeenUnseen SplitSeenUnseen(const Dataset& test, const Dataset& train);

struct TrainDev {
  Dataset train;
  Dataset dev;
};

// Holds out roughly `fraction` of dialogues (by hashed dialogue id, keyed by
// seed). Samples without a dialogue id are bucketed by index.
TrainDev SplitDev(const Dataset& data, double fraction, std::uint64_t seed);

// Keeps roughly `fraction` of dialogues; used for desk-scale subcorpora.
Dataset SubsampleDialogues(const Dataset& data, double fraction,
                           std::uint64_t seed);

}  // namespace copyaug

#endif  // COPYAUG_INGEST_H_
