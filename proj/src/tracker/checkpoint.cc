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

#include "copyaug/tracker/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "copyaug/error.h"
#include "json.hpp"

namespace copyaug::tracker {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'C', 'P', 'A', 'U', 'G', 'C', 'K', 'P'};
// Sanity bound for lengths read from disk.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 34;

template <typename T>
void WritePod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) Fail(ErrorCode::kFormat, "checkpoint truncated");
  return value;
}

void WriteString(std::ostream& out, const std::string& s) {
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string ReadString(std::istream& in) {
  const auto n = ReadPod<std::uint32_t>(in);
  if (n > kMaxElements) Fail(ErrorCode::kFormat, "checkpoint string too long");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) Fail(ErrorCode::kFormat, "checkpoint truncated");
  return s;
}

void WriteStrings(std::ostream& out, const std::vector<std::string>& v) {
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
  for (const auto& s : v) WriteString(out, s);
}

std::vector<std::string> ReadStrings(std::istream& in) {
  const auto n = ReadPod<std::uint32_t>(in);
  std::vector<std::string> v;
  v.reserve(std::min<std::uint32_t>(n, 1u << 20));
  for (std::uint32_t i = 0; i < n; ++i) v.push_back(ReadString(in));
  return v;
}

}  // namespace

std::string ConfigToJson(const TrackerConfig& cfg) {
  nlohmann::ordered_json j;
  j["d_emb"] = cfg.d_emb;
  j["d_h"] = cfg.d_h;
  j["dropout"] = cfg.dropout;
  j["lr"] = cfg.lr;
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size;
  j["seed"] = cfg.seed;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["adam_eps"] = cfg.adam_eps;
  j["clip_norm"] = cfg.clip_norm;
  j["init_range"] = cfg.init_range;
  return j.dump();
}

TrackerConfig ConfigFromJson(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    TrackerConfig cfg;
    cfg.d_emb = j.at("d_emb").get<int>();
    cfg.d_h = j.at("d_h").get<int>();
    cfg.dropout = j.at("dropout").get<double>();
    cfg.lr = j.at("lr").get<double>();
    cfg.epochs = j.at("epochs").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.adam_beta1 = j.at("adam_beta1").get<double>();
    cfg.adam_beta2 = j.at("adam_beta2").get<double>();
    cfg.adam_eps = j.at("adam_eps").get<double>();
    cfg.clip_norm = j.at("clip_norm").get<double>();
    cfg.init_range = j.at("init_range").get<double>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("checkpoint config: ") + e.what());
  }
}

void SaveCheckpoint(const TrackerModel& model, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  WritePod<std::uint32_t>(out, kCheckpointVersion);
  WriteString(out, ConfigToJson(model.config));
  WriteStrings(out, model.words.entries());
  WriteStrings(out, model.slots.entries());
  std::uint32_t count = 0;
  model.params.ForEach([&count](std::string_view, const Matrix&) { ++count; });
  WritePod<std::uint32_t>(out, count);
  model.params.ForEach([&out](std::string_view name, const Matrix& m) {
    WriteString(out, std::string(name));
    WritePod<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    WritePod<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    out.write(reinterpret_cast<const char*>(rm.data()),
              static_cast<std::streamsize>(rm.size() * sizeof(double)));
  });
  if (!out) Fail(ErrorCode::kIo, "checkpoint write failed");
}

void SaveCheckpoint(const TrackerModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  SaveCheckpoint(model, out);
}

TrackerModel LoadCheckpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    Fail(ErrorCode::kFormat, "not a checkpoint file");
  }
  const auto version = ReadPod<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    Fail(ErrorCode::kFormat, "unsupported checkpoint version " + std::to_string(version));
  }
  TrackerModel model;
  model.config = ConfigFromJson(ReadString(in));
  model.config.Validate();
  model.words = Vocabulary(ReadStrings(in));
  model.slots = Vocabulary(ReadStrings(in));

  std::map<std::string, Matrix> tensors;
  const auto count = ReadPod<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = ReadString(in);
    const auto rows = ReadPod<std::uint64_t>(in);
    const auto cols = ReadPod<std::uint64_t>(in);
    if (rows * cols > kMaxElements) Fail(ErrorCode::kFormat, "tensor too large");
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(
        static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    in.read(reinterpret_cast<char*>(rm.data()),
            static_cast<std::streamsize>(rm.size() * sizeof(double)));
    if (!in) Fail(ErrorCode::kFormat, "checkpoint truncated in tensor " + name);
    tensors[name] = rm;
  }

  model.params = TrackerParams::Zeros(model.config, model.words.size(),
                                      model.slots.size());
  model.params.ForEach([&tensors](std::string_view name, Matrix& m) {
    auto it = tensors.find(std::string(name));
    if (it == tensors.end()) {
      Fail(ErrorCode::kFormat, "checkpoint missing tensor " + std::string(name));
    }
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      Fail(ErrorCode::kFormat, "checkpoint tensor " + std::string(name) +
                                   " has the wrong shape");
    }
    m = it->second;
  });
  return model;
}

TrackerModel LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  return LoadCheckpoint(in);
}

}  // namespace copyaug::tracker
