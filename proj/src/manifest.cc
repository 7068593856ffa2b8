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

#include "copyaug/manifest.h"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "copyaug/augment.h"
#include "copyaug/error.h"
#include "copyaug/experiments.h"
#include "copyaug/tracker/checkpoint.h"
#include "json.hpp"
#include "toml.hpp"

namespace copyaug {
namespace {

namespace fs = std::filesystem;

constexpr std::pair<Recipe, std::string_view> kRecipes[] = {
    {Recipe::kMemorization, "memorization"}, {Recipe::kDiversityGrid, "diversity_grid"},
    {Recipe::kCopySweep, "copy_sweep"},      {Recipe::kThetaSweep, "theta_sweep"},
    {Recipe::kEpsSweep, "eps_sweep"},        {Recipe::kFullDA, "full_da"},
};

[[noreturn]] void ConfigError(const std::string& msg) {
  Fail(ErrorCode::kConfig, "manifest: " + msg);
}

void RejectUnknownKeys(const toml::table& t, std::string_view where,
                       std::initializer_list<std::string_view> known) {
  for (const auto& [key, node] : t) {
    bool ok = false;
    for (auto k : known) ok = ok || key.str() == k;
    if (!ok) ConfigError("unknown key '" + std::string(key.str()) + "' in " + std::string(where));
  }
}

const toml::table* Section(const toml::table& root, std::string_view name) {
  const toml::node* n = root.get(name);
  if (n == nullptr) return nullptr;
  if (!n->is_table()) ConfigError("'" + std::string(name) + "' must be a table");
  return n->as_table();
}

template <typename T>
void Read(const toml::table& t, std::string_view key, T& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = n->value<double>()) {
      out = *v;
      return;
    }
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = n->value_exact<std::string>()) {
      out = *v;
      return;
    }
  } else {
    if (auto v = n->value_exact<std::int64_t>()) {
      if constexpr (std::is_unsigned_v<T>) {
        if (*v < 0) ConfigError("'" + std::string(key) + "' must be non-negative");
      }
      out = static_cast<T>(*v);
      return;
    }
  }
  ConfigError("'" + std::string(key) + "' has the wrong type");
}

template <typename T>
void ReadArray(const toml::table& t, std::string_view key, std::vector<T>& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return;
  const toml::array* arr = n->as_array();
  if (arr == nullptr) ConfigError("'" + std::string(key) + "' must be an array");
  out.clear();
  for (const auto& el : *arr) {
    std::optional<T> v;
    if constexpr (std::is_same_v<T, double>) {
      v = el.value<double>();
    } else {
      if (auto i = el.value_exact<std::int64_t>()) v = static_cast<T>(*i);
    }
    if (!v) ConfigError("'" + std::string(key) + "' has an element of the wrong type");
    out.push_back(*v);
  }
}

void ReadTracker(const toml::table& t, tracker::TrackerConfig& cfg) {
  RejectUnknownKeys(t, "[tracker]",
                    {"d_emb", "d_h", "dropout", "lr", "epochs", "batch_size",
                     "adam_beta1", "adam_beta2", "adam_eps", "clip_norm",
                     "init_range"});
  Read(t, "d_emb", cfg.d_emb);
  Read(t, "d_h", cfg.d_h);
  Read(t, "dropout", cfg.dropout);
  Read(t, "lr", cfg.lr);
  Read(t, "epochs", cfg.epochs);
  Read(t, "batch_size", cfg.batch_size);
  Read(t, "adam_beta1", cfg.adam_beta1);
  Read(t, "adam_beta2", cfg.adam_beta2);
  Read(t, "adam_eps", cfg.adam_eps);
  Read(t, "clip_norm", cfg.clip_norm);
  Read(t, "init_range", cfg.init_range);
}

toml::table ParseToml(std::string_view text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ": " << e.description();
    Fail(ErrorCode::kConfig, msg.str());
  }
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path Resolve(const std::string& p, const fs::path& base) {
  fs::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

template <typename T>
toml::array ToArray(const std::vector<T>& v) {
  toml::array a;
  for (const auto& x : v) {
    if constexpr (std::is_integral_v<T>) {
      a.push_back(static_cast<std::int64_t>(x));
    } else {
      a.push_back(x);
    }
  }
  return a;
}

Dataset LoadData(const ExperimentManifest& m, const fs::path& path,
                 const IngestOptions& opts, std::uint64_t subsample_seed) {
  Dataset d = m.format == CorpusFormat::kCanonical ? ReadCanonical(path)
                                                    : Ingest(path, m.format, opts).dataset;
  if (m.subsample < 1.0) d = SubsampleDialogues(d, m.subsample, subsample_seed);
  if (d.empty()) Fail(ErrorCode::kArgument, "dataset " + path.string() + " is empty");
  return d;
}

template <typename F>
fs::path WriteText(const fs::path& path, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  body(out);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
  return path;
}

}  // namespace

Recipe ParseRecipe(std::string_view name) {
  for (const auto& [r, n] : kRecipes) {
    if (n == name) return r;
  }
  ConfigError("unknown recipe '" + std::string(name) + "'");
}

std::string_view RecipeName(Recipe r) {
  for (const auto& [rr, n] : kRecipes) {
    if (rr == r) return n;
  }
  return "unknown";
}

void ExperimentManifest::Validate() const {
  if (name.empty()) ConfigError("name is required");
  if (train.empty()) ConfigError("data.train is required");
  if (test.empty()) ConfigError("data.test is required");
  if (!(subsample > 0.0 && subsample <= 1.0)) ConfigError("data.subsample must be in (0, 1]");
  search.Validate();
  switch (recipe) {
    case Recipe::kMemorization:
      if (pool_size < 0) ConfigError("params.pool_size must be >= 0");
      break;
    case Recipe::kDiversityGrid:
      if (points < 1 || n_min < 1 || n_max < n_min) {
        ConfigError("params need 1 <= n_min <= n_max and points >= 1");
      }
      break;
    case Recipe::kCopySweep:
      if (copies.empty()) ConfigError("params.copies must be non-empty");
      for (int n : copies) {
        if (n < 1) ConfigError("params.copies entries must be >= 1");
      }
      if (!(sweep_theta >= 0.0 && sweep_theta <= 1.0)) ConfigError("params.theta must be in [0, 1]");
      break;
    case Recipe::kThetaSweep:
      if (thetas.empty()) ConfigError("params.thetas must be non-empty");
      for (double t : thetas) {
        if (!(t >= 0.0 && t <= 1.0)) ConfigError("params.thetas entries must be in [0, 1]");
      }
      break;
    case Recipe::kEpsSweep:
      if (eps_values.empty()) ConfigError("params.eps_values must be non-empty");
      for (double e : eps_values) {
        if (!(e > 0.0)) ConfigError("params.eps_values entries must be positive");
      }
      break;
    case Recipe::kFullDA:
      break;
  }
}

void ExperimentManifest::CheckPaths() const {
  for (const fs::path& p : {train, test}) {
    if (!fs::exists(p)) Fail(ErrorCode::kIo, "missing data file " + p.string());
  }
  if (aliases && !fs::exists(*aliases)) {
    Fail(ErrorCode::kIo, "missing alias table " + aliases->string());
  }
}

ExperimentManifest ParseManifest(std::string_view text, const fs::path& base) {
  const toml::table root = ParseToml(text, "manifest");
  RejectUnknownKeys(root, "manifest",
                    {"name", "recipe", "seed", "data", "tracker", "search", "randstr", "params"});
  ExperimentManifest m;
  Read(root, "name", m.name);
  std::string recipe;
  Read(root, "recipe", recipe);
  if (recipe.empty()) ConfigError("recipe is required");
  m.recipe = ParseRecipe(recipe);
  Read(root, "seed", m.seed);

  if (const toml::table* data = Section(root, "data")) {
    RejectUnknownKeys(*data, "[data]", {"format", "train", "test", "aliases", "subsample"});
    std::string format = "canonical";
    Read(*data, "format", format);
    m.format = ParseCorpusFormat(format);
    std::string p;
    Read(*data, "train", p);
    if (!p.empty()) m.train = Resolve(p, base);
    p.clear();
    Read(*data, "test", p);
    if (!p.empty()) m.test = Resolve(p, base);
    p.clear();
    Read(*data, "aliases", p);
    if (!p.empty()) m.aliases = Resolve(p, base);
    Read(*data, "subsample", m.subsample);
  }
  if (const toml::table* t = Section(root, "tracker")) ReadTracker(*t, m.search.tracker);
  if (const toml::table* s = Section(root, "search")) {
    RejectUnknownKeys(*s, "[search]", {"theta", "eps", "max_steps", "dev_fraction"});
    Read(*s, "theta", m.search.theta);
    Read(*s, "eps", m.search.eps);
    Read(*s, "max_steps", m.search.max_steps);
    Read(*s, "dev_fraction", m.search.dev_fraction);
  }
  if (const toml::table* r = Section(root, "randstr")) {
    RejectUnknownKeys(*r, "[randstr]", {"strlen", "n_spaces"});
    Read(*r, "strlen", m.search.randstr.strlen);
    Read(*r, "n_spaces", m.search.randstr.n_spaces);
  }
  if (const toml::table* params = Section(root, "params")) {
    RejectUnknownKeys(*params, "[params]",
                      {"pool_size", "n_min", "n_max", "points", "copies", "theta",
                       "thetas", "eps_values"});
    Read(*params, "pool_size", m.pool_size);
    Read(*params, "n_min", m.n_min);
    Read(*params, "n_max", m.n_max);
    Read(*params, "points", m.points);
    ReadArray(*params, "copies", m.copies);
    Read(*params, "theta", m.sweep_theta);
    ReadArray(*params, "thetas", m.thetas);
    ReadArray(*params, "eps_values", m.eps_values);
  }
  m.search.seed = m.seed;
  m.Validate();
  return m;
}

ExperimentManifest LoadManifest(const fs::path& path,
                                const std::optional<fs::path>& data_root) {
  const fs::path base = data_root ? *data_root : path.parent_path();
  return ParseManifest(ReadFile(path), base);
}

std::string ManifestToToml(const ExperimentManifest& m) {
  const tracker::TrackerConfig& t = m.search.tracker;
  toml::table data{{"format", std::string(CorpusFormatName(m.format))},
                   {"train", m.train.string()},
                   {"test", m.test.string()},
                   {"subsample", m.subsample}};
  if (m.aliases) data.insert("aliases", m.aliases->string());
  toml::table root{
      {"name", m.name},
      {"recipe", std::string(RecipeName(m.recipe))},
      {"seed", static_cast<std::int64_t>(m.seed)},
      {"data", data},
      {"tracker",
       toml::table{{"d_emb", t.d_emb},
                   {"d_h", t.d_h},
                   {"dropout", t.dropout},
                   {"lr", t.lr},
                   {"epochs", t.epochs},
                   {"batch_size", t.batch_size},
                   {"adam_beta1", t.adam_beta1},
                   {"adam_beta2", t.adam_beta2},
                   {"adam_eps", t.adam_eps},
                   {"clip_norm", t.clip_norm},
                   {"init_range", t.init_range}}},
      {"search", toml::table{{"theta", m.search.theta},
                             {"eps", m.search.eps},
                             {"max_steps", m.search.max_steps},
                             {"dev_fraction", m.search.dev_fraction}}},
      {"randstr", toml::table{{"strlen", m.search.randstr.strlen},
                              {"n_spaces", m.search.randstr.n_spaces}}},
      {"params", toml::table{{"pool_size", m.pool_size},
                             {"n_min", m.n_min},
                             {"n_max", m.n_max},
                             {"points", m.points},
                             {"copies", ToArray(m.copies)},
                             {"theta", m.sweep_theta},
                             {"thetas", ToArray(m.thetas)},
                             {"eps_values", ToArray(m.eps_values)}}},
  };
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

tracker::TrackerConfig LoadTrackerConfigToml(const fs::path& path,
                                             tracker::TrackerConfig base) {
  const toml::table root = ParseToml(ReadFile(path), path.string());
  const toml::table* t = Section(root, "tracker");
  ReadTracker(t != nullptr ? *t : root, base);
  base.Validate();
  return base;
}

std::vector<fs::path> RunManifest(const ExperimentManifest& m, const fs::path& out_dir,
                                  const RunOptions& options) {
  m.Validate();
  auto log = [&](const std::string& line) {
    if (options.log) options.log(line);
  };
  if (options.dry_run) {
    log("manifest '" + m.name + "' is valid (recipe " + std::string(RecipeName(m.recipe)) + ")");
    return {};
  }
  m.CheckPaths();

  IngestOptions ingest_opts;
  if (m.aliases) ingest_opts.aliases = AliasTable::Load(*m.aliases);
  const Dataset train = LoadData(m, m.train, ingest_opts, DeriveSeed(m.seed, {0x71}));
  const Dataset test = LoadData(m, m.test, ingest_opts, DeriveSeed(m.seed, {0x72}));
  log("loaded " + std::to_string(train.size()) + " train and " +
      std::to_string(test.size()) + " test samples");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<fs::path> files;
  files.push_back(WriteText(out_dir / "config.toml",
                            [&](std::ostream& o) { o << ManifestToToml(m); }));

  SearchConfig search = m.search;
  search.threads = options.threads;
  ExperimentContext ctx;
  ctx.tracker = m.search.tracker;
  ctx.dev_fraction = m.search.dev_fraction;
  ctx.seed = m.seed;
  ctx.threads = options.threads;
  ctx.randstr = m.search.randstr;
  ctx.train_options.log = options.log;
  tracker::TrainOptions train_opts;
  train_opts.log = options.log;

  nlohmann::ordered_json summary;
  summary["name"] = m.name;
  summary["recipe"] = RecipeName(m.recipe);
  summary["seed"] = m.seed;
  summary["train_samples"] = train.size();
  summary["test_samples"] = test.size();

  auto record_trace = [&](const SearchResult& res) {
    files.push_back(WriteText(out_dir / "trace.csv",
                              [&](std::ostream& o) { WriteTraceCsv(res.trace, o); }));
    if (res.best_model) {
      files.push_back(out_dir / "best.ckpt");
      tracker::SaveCheckpoint(*res.best_model, files.back());
    }
    const char* status = res.trace.status == SearchTrace::Status::kConverged ? "converged"
                         : res.trace.status == SearchTrace::Status::kStepLimit ? "step_limit"
                                                                               : "failed";
    summary["search"] = {{"status", status},
                         {"steps", res.trace.steps.size()},
                         {"best_step", res.trace.best_step},
                         {"best_n", res.trace.best_n},
                         {"final_n", res.trace.final_n},
                         {"best_overall", res.trace.best_overall}};
    if (!res.trace.steps.empty()) {
      const SearchStep& base = res.trace.steps.front();
      const SearchStep& best = res.trace.steps.at(static_cast<std::size_t>(res.trace.best_step));
      summary["search"]["baseline"] = {{"seen_f1", base.seen_f1}, {"unseen_f1", base.unseen_f1}};
      summary["search"]["best"] = {{"seen_f1", best.seen_f1}, {"unseen_f1", best.unseen_f1}};
    }
    if (res.trace.status == SearchTrace::Status::kFailed) {
      summary["search"]["error"] = res.trace.error;
    }
  };

  switch (m.recipe) {
    case Recipe::kMemorization: {
      MemorizationResult r = RunMemorization(train, test, ctx, m.pool_size);
      files.push_back(WriteText(out_dir / "memorization.csv",
                                [&](std::ostream& o) { WriteMemorizationCsv(r, o); }));
      files.push_back(out_dir / "original.ckpt");
      tracker::SaveCheckpoint(*r.original_model, files.back());
      files.push_back(out_dir / "synthetic.ckpt");
      tracker::SaveCheckpoint(*r.synthetic_model, files.back());
      summary["pool_size"] = r.pool_size;
      summary["f1"] = {{r.f1[0][0], r.f1[0][1]}, {r.f1[1][0], r.f1[1][1]}};
      break;
    }
    case Recipe::kDiversityGrid: {
      const std::vector<int> grid =
          m.points == 1 ? std::vector<int>{m.n_min} : DiversityGrid(m.n_min, m.n_max, m.points);
      auto rows = RunDiversity(train, test, grid, ctx);
      files.push_back(WriteText(out_dir / "diversity.csv",
                                [&](std::ostream& o) { WriteDiversityCsv(rows, o); }));
      std::vector<double> logk, unseen;
      for (const auto& r : rows) {
        logk.push_back(std::log(static_cast<double>(r.pool_size)));
        unseen.push_back(r.unseen_f1);
      }
      summary["grid"] = grid;
      summary["spearman_unseen"] = SpearmanCorrelation(logk, unseen);
      break;
    }
    case Recipe::kCopySweep: {
      auto rows = RunCopySweep(train, test, m.copies, m.sweep_theta, ctx);
      files.push_back(WriteText(out_dir / "copy_sweep.csv",
                                [&](std::ostream& o) { WriteCopySweepCsv(rows, o); }));
      summary["copies"] = m.copies;
      break;
    }
    case Recipe::kThetaSweep: {
      TestPair tests = MakeSeenUnseenTests(test, DeriveSeed(m.seed, {0x61}), m.search.randstr);
      auto rows = RunThetaSweep(train, tests, m.thetas, search, train_opts);
      files.push_back(WriteText(out_dir / "theta_sweep.csv",
                                [&](std::ostream& o) { WriteThetaCsv(rows, o); }));
      summary["thetas"] = m.thetas;
      break;
    }
    case Recipe::kEpsSweep: {
      TestPair tests = MakeSeenUnseenTests(test, DeriveSeed(m.seed, {0x61}), m.search.randstr);
      SearchConfig cfg = search;
      cfg.eps = *std::min_element(m.eps_values.begin(), m.eps_values.end());
      SearchResult res = DoublingSearch(train, tests.seen, tests.unseen, cfg, train_opts);
      record_trace(res);
      auto rows = ReplayEpsSweep(res.trace, m.eps_values);
      files.push_back(WriteText(out_dir / "eps_sweep.csv",
                                [&](std::ostream& o) { WriteEpsCsv(rows, o); }));
      break;
    }
    case Recipe::kFullDA: {
      TestPair tests = MakeSeenUnseenTests(test, DeriveSeed(m.seed, {0x61}), m.search.randstr);
      SearchResult res = DoublingSearch(train, tests.seen, tests.unseen, search, train_opts);
      record_trace(res);
      break;
    }
  }

  nlohmann::json names = nlohmann::json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  names.push_back("summary.json");
  summary["files"] = names;
  files.push_back(WriteText(out_dir / "summary.json",
                            [&](std::ostream& o) { o << summary.dump(2) << "\n"; }));
  return files;
}

}  // namespace copyaug
