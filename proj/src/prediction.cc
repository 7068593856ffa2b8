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

#include "copyaug/prediction.h"

#include <fstream>

#include "copyaug/error.h"
#include "json.hpp"

namespace copyaug {

using nlohmann::json;
using nlohmann::ordered_json;

void WritePredictions(const std::vector<Prediction>& preds, std::ostream& out) {
  out << R"({"version":1,"kind":"predictions"})" << '\n';
  for (const auto& p : preds) {
    ordered_json rec;
    rec["active"] = p.active;
    rec["cls_prob"] = p.cls_prob;
    rec["start"] = p.start;
    rec["end"] = p.end;
    out << rec.dump() << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, "write failed");
}

void WritePredictions(const std::vector<Prediction>& preds,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  WritePredictions(preds, out);
}

std::vector<Prediction> ReadPredictions(std::istream& in) {
  std::vector<Prediction> preds;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json rec = json::parse(line);
      if (!have_header) {
        if (rec.value("kind", "") != "predictions") {
          Fail(ErrorCode::kFormat, "not a predictions file");
        }
        have_header = true;
        continue;
      }
      Prediction p;
      p.active = rec.at("active").get<bool>();
      p.cls_prob = rec.at("cls_prob").get<double>();
      p.start = rec.at("start").get<int>();
      p.end = rec.at("end").get<int>();
      preds.push_back(p);
    } catch (const json::exception& e) {
      Fail(ErrorCode::kFormat,
           "predictions line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return preds;
}

std::vector<Prediction> ReadPredictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  return ReadPredictions(in);
}

}  // namespace copyaug
