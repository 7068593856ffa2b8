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

#include "copyaug/ingest.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "copyaug/error.h"
#include "copyaug/randgen.h"
#include "copyaug/tokenizer.h"
#include "json.hpp"

namespace copyaug {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kCanonicalVersion = 1;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string DialogueKey(const json& dialogue, std::size_t index) {
  auto it = dialogue.find("dialogue_idx");
  if (it == dialogue.end()) return std::to_string(index);
  if (it->is_string()) return it->get<std::string>();
  return it->dump();
}

const std::string& TurnString(const json& turn, const char* key,
                              const std::string& where) {
  auto it = turn.find(key);
  if (it == turn.end() || !it->is_string()) {
    Fail(ErrorCode::kFormat, where + ": missing string field '" + key + "'");
  }
  return it->get_ref<const std::string&>();
}

// Values that mean "slot not set" in turn labels.
bool IsNullValue(const std::string& v) { return v.empty() || v == "none"; }

}  // namespace

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "woz") return CorpusFormat::kWoz;
  if (name == "dstc2") return CorpusFormat::kDstc2;
  if (name == "multiwoz") return CorpusFormat::kMultiWoz;
  if (name == "canonical") return CorpusFormat::kCanonical;
  Fail(ErrorCode::kConfig, "unknown corpus format '" + std::string(name) + "'");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kWoz:
      return "woz";
    case CorpusFormat::kDstc2:
      return "dstc2";
    case CorpusFormat::kMultiWoz:
      return "multiwoz";
    case CorpusFormat::kCanonical:
      return "canonical";
  }
  return "?";
}

const std::vector<std::string>& TrackedSlots(CorpusFormat format) {
  static const std::vector<std::string> kFood = {"food"};
  static const std::vector<std::string> kMulti = {
      "hotel-name",       "train-destination", "train-departure",
      "attraction-name",  "taxi-destination",  "taxi-departure",
      "restaurant-name",  "restaurant-food",   "bus-departure",
      "bus-destination"};
  static const std::vector<std::string> kAny;
  switch (format) {
    case CorpusFormat::kWoz:
    case CorpusFormat::kDstc2:
      return kFood;
    case CorpusFormat::kMultiWoz:
      return kMulti;
    case CorpusFormat::kCanonical:
      return kAny;
  }
  return kAny;
}

AliasTable AliasTable::Parse(std::istream& in) {
  AliasTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() != 4) {
      Fail(ErrorCode::kFormat, "alias table line " + std::to_string(lineno) +
                                   ": expected 4 tab-separated fields");
    }
    table.Add(ParseCorpusFormat(fields[0]), fields[1], fields[2], fields[3]);
  }
  return table;
}

AliasTable AliasTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open alias table " + path.string());
  return Parse(in);
}

void AliasTable::Add(CorpusFormat format, std::string slot, std::string label,
                     std::string surface) {
  rows_[{format, std::move(slot), NormalizeValue(label)}].push_back(
      NormalizeValue(surface));
  ++size_;
}

const std::vector<std::string>& AliasTable::Surfaces(
    CorpusFormat format, const std::string& slot,
    const std::string& label) const {
  static const std::vector<std::string> kNone;
  auto it = rows_.find({format, slot, label});
  return it == rows_.end() ? kNone : it->second;
}

IngestResult IngestTurnLabelJson(std::string_view text, CorpusFormat format,
                                 const IngestOptions& options) {
  if (format == CorpusFormat::kCanonical) {
    std::istringstream in{std::string(text)};
    Dataset d = ReadCanonical(in);
    IngestReport report;
    report.samples = d.size();
    report.active = d.ActiveCount();
    return {std::move(d), report};
  }

  const auto& known = TrackedSlots(format);
  std::vector<std::string> slots = options.slots.empty() ? known : options.slots;
  for (const auto& s : slots) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      Fail(ErrorCode::kConfig, "slot '" + s + "' is not tracked for format " +
                                   std::string(CorpusFormatName(format)));
    }
  }

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kFormat, std::string("json parse error at byte ") +
                                 std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.is_array()) {
    Fail(ErrorCode::kFormat, "top level must be a list of dialogues");
  }

  IngestReport report;
  std::vector<Sample> samples;
  for (std::size_t di = 0; di < root.size(); ++di) {
    const json& dialogue = root[di];
    const std::string where_d = "dialogue " + std::to_string(di);
    if (!dialogue.is_object() || !dialogue.contains("dialogue") ||
        !dialogue["dialogue"].is_array()) {
      Fail(ErrorCode::kFormat, where_d + ": missing 'dialogue' turn list");
    }
    ++report.dialogues;
    const std::string dialogue_id = DialogueKey(dialogue, di);
    const json& turns = dialogue["dialogue"];
    for (std::size_t ti = 0; ti < turns.size(); ++ti) {
      const json& turn = turns[ti];
      const std::string where = where_d + " turn " + std::to_string(ti);
      if (!turn.is_object()) Fail(ErrorCode::kFormat, where + ": not an object");
      ++report.turns;
      Utterance utt{Tokenize(TurnString(turn, "system_transcript", where)),
                    Tokenize(TurnString(turn, "transcript", where))};

      std::map<std::string, std::string> labels;
      if (auto it = turn.find("turn_label"); it != turn.end()) {
        if (!it->is_array()) {
          Fail(ErrorCode::kFormat, where + ": 'turn_label' must be a list");
        }
        for (const auto& pair : *it) {
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
              !pair[1].is_string()) {
            Fail(ErrorCode::kFormat,
                 where + ": turn_label entries must be [slot, value]");
          }
          labels[pair[0].get<std::string>()] = pair[1].get<std::string>();
        }
      }

      for (const auto& slot : slots) {
        Sample s;
        s.utterance = utt;
        s.slot = slot;
        s.dialogue_id = dialogue_id;
        auto lab = labels.find(slot);
        if (lab != labels.end() && !IsNullValue(NormalizeValue(lab->second))) {
          s.active = true;
          const std::string label = NormalizeValue(lab->second);
          s.value = label;
          s.span = LocateValue(utt, Tokenize(label));
          if (!s.span) {
            const auto& surfaces = options.aliases.Surfaces(format, slot, label);
            for (const auto& surface : surfaces) {
              if (auto span = LocateValue(utt, Tokenize(surface))) {
                s.value = surface;
                s.span = span;
                ++report.aliased;
                break;
              }
            }
            if (!s.span) {
              ++report.dropped_spans;
              if (surfaces.empty()) ++report.unmapped_aliases;
            }
          }
          ++report.active;
        }
        samples.push_back(std::move(s));
        ++report.samples;
      }
    }
  }
  return {Dataset(std::move(samples)), report};
}

IngestResult Ingest(const std::filesystem::path& path, CorpusFormat format,
                    const IngestOptions& options) {
  const std::string text = ReadFile(path);
  try {
    return IngestTurnLabelJson(text, format, options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFormat) {
      Fail(e.code(), path.string() + ": " + e.what());
    }
    throw;
  }
}

void WriteCanonical(const Dataset& dataset, std::ostream& out) {
  ordered_json header;
  header["version"] = kCanonicalVersion;
  header["tokenizer_id"] = std::string(kTokenizerId);
  const auto& p = dataset.provenance();
  ordered_json prov;
  if (p.kind == Provenance::Kind::kOriginal) {
    prov["kind"] = "original";
  } else {
    prov["kind"] = "synthetic";
    prov["n"] = p.n;
    prov["theta"] = p.theta;
    prov["seed"] = p.seed;
  }
  header["provenance"] = prov;
  out << header.dump() << '\n';
  for (const auto& s : dataset.samples()) {
    ordered_json rec;
    rec["sys"] = s.utterance.sys;
    rec["usr"] = s.utterance.usr;
    rec["slot"] = s.slot;
    rec["active"] = s.active;
    if (s.value) rec["value"] = *s.value;
    if (s.span) rec["span"] = {s.span->start, s.span->end};
    if (!s.dialogue_id.empty()) rec["dialogue"] = s.dialogue_id;
    out << rec.dump() << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, "write failed");
}

void WriteCanonical(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  WriteCanonical(dataset, out);
}

Dataset ReadCanonical(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto where = [&] { return "canonical line " + std::to_string(lineno); };
  auto parse = [&](const std::string& text) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kFormat, where() + ": " + e.what());
    }
  };

  Provenance provenance;
  bool have_header = false;
  std::vector<Sample> samples;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = parse(line);
    if (!rec.is_object()) Fail(ErrorCode::kFormat, where() + ": not an object");
    try {
      if (!have_header) {
        if (rec.at("version").get<int>() != kCanonicalVersion) {
          Fail(ErrorCode::kFormat, where() + ": unsupported version");
        }
        if (rec.at("tokenizer_id").get<std::string>() != kTokenizerId) {
          Fail(ErrorCode::kFormat,
               where() + ": tokenizer mismatch (file uses '" +
                   rec.at("tokenizer_id").get<std::string>() + "')");
        }
        if (auto it = rec.find("provenance"); it != rec.end()) {
          const std::string kind = it->at("kind").get<std::string>();
          if (kind == "synthetic") {
            provenance = Provenance::Synthetic(
                it->at("n").get<int>(), it->at("theta").get<double>(),
                it->at("seed").get<std::uint64_t>());
          } else if (kind != "original") {
            Fail(ErrorCode::kFormat, where() + ": bad provenance kind");
          }
        }
        have_header = true;
        continue;
      }
      Sample s;
      s.utterance.sys = rec.at("sys").get<std::vector<std::string>>();
      s.utterance.usr = rec.at("usr").get<std::vector<std::string>>();
      s.slot = rec.at("slot").get<std::string>();
      s.active = rec.at("active").get<bool>();
      if (auto it = rec.find("value"); it != rec.end()) {
        s.value = it->get<std::string>();
      }
      if (auto it = rec.find("span"); it != rec.end()) {
        auto v = it->get<std::vector<int>>();
        if (v.size() != 2) Fail(ErrorCode::kFormat, where() + ": span must be [start,end]");
        s.span = Span{v[0], v[1]};
      }
      if (auto it = rec.find("dialogue"); it != rec.end()) {
        s.dialogue_id = it->get<std::string>();
      }
      if (auto problem = ValidateSample(s); !problem.empty()) {
        Fail(ErrorCode::kFormat, where() + ": " + problem);
      }
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      Fail(ErrorCode::kFormat, where() + ": " + e.what());
    }
  }
  return Dataset(std::move(samples), provenance);
}

Dataset ReadCanonical(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return ReadCanonical(in);
  } catch (const Error& e) {
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

SeenUnseen SplitSeenUnseen(const Dataset& test, const Dataset& train) {
  std::vector<Sample> seen;
  std::vector<Sample> unseen;
  for (const auto& s : test.samples()) {
    if (!s.active) {
      seen.push_back(s);
      unseen.push_back(s);
    } else if (s.value && train.Contains(s.slot, *s.value)) {
      seen.push_back(s);
    } else {
      unseen.push_back(s);
    }
  }
  return {Dataset(std::move(seen), test.provenance()),
          Dataset(std::move(unseen), test.provenance())};
}

namespace {

// Fraction in [0,1) for a sample's dialogue under seed.
double DialogueBucket(const Sample& s, std::size_t index, std::uint64_t seed) {
  const std::uint64_t key =
      s.dialogue_id.empty() ? SplitMix64(index) : Fnv1a(s.dialogue_id);
  return static_cast<double>(DeriveSeed(seed, {key}) >> 11) * 0x1.0p-53;
}

}  // namespace

TrainDev SplitDev(const Dataset& data, double fraction, std::uint64_t seed) {
  std::vector<Sample> train;
  std::vector<Sample> dev;
  const auto& samples = data.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (DialogueBucket(samples[i], i, seed) < fraction ? dev : train)
        .push_back(samples[i]);
  }
  return {Dataset(std::move(train), data.provenance()),
          Dataset(std::move(dev), data.provenance())};
}

Dataset SubsampleDialogues(const Dataset& data, double fraction,
                           std::uint64_t seed) {
  std::vector<Sample> kept;
  const auto& samples = data.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (DialogueBucket(samples[i], i, seed ^ 0x5eedULL) < fraction) {
      kept.push_back(samples[i]);
    }
  }
  return Dataset(std::move(kept), data.provenance());
}

}  // namespace copyaug
