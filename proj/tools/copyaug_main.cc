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

// copyaug command-line tool. Errors print one line to stderr:
//   error code=<CODE> msg=<message>
// and exit with a code-specific non-zero status.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "copyaug/augment.h"
#include "copyaug/error.h"
#include "copyaug/eval.h"
#include "copyaug/ingest.h"
#include "copyaug/manifest.h"
#include "copyaug/prediction.h"
#include "copyaug/randgen.h"
#include "copyaug/search.h"
#include "copyaug/tracker/checkpoint.h"
#include "copyaug/tracker/trainer.h"

namespace fs = std::filesystem;
using namespace copyaug;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;
};

std::function<void(std::string_view)> Logger(const Globals& g) {
  if (g.quiet) return nullptr;
  return [](std::string_view line) { std::cerr << line << "\n"; };
}

std::optional<fs::path> DataRoot() {
  if (const char* env = std::getenv("COPYAUG_DATA_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return std::nullopt;
}

// Relative input paths that do not exist under the working directory are
// looked up under COPYAUG_DATA_DIR.
fs::path InputPath(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || fs::exists(path)) return path;
  if (auto root = DataRoot(); root && fs::exists(*root / path)) return *root / path;
  return path;
}

std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

template <typename F>
void WriteFile(const std::string& path, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  body(out);
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

std::string OneLine(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

tracker::TrackerConfig TrackerFromFlags(const std::string& config_path,
                                        std::uint64_t seed) {
  tracker::TrackerConfig cfg;
  if (!config_path.empty()) cfg = LoadTrackerConfigToml(InputPath(config_path));
  cfg.seed = seed;
  cfg.Validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"copyaug: copy-mechanism dialogue state tracking with synthetic value augmentation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for prediction")
      ->check(CLI::Range(1, 1 << 30))
      ->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Convert a raw corpus to the canonical format");
  std::string ing_format, ing_in, ing_out, ing_aliases;
  std::vector<std::string> ing_slots;
  bool ing_no_aliases = false;
  double ing_subsample = 1.0;
  ingest->add_option("--format", ing_format, "woz, dstc2, multiwoz or canonical")->required();
  ingest->add_option("--in", ing_in, "Input corpus")->required();
  ingest->add_option("--out", ing_out, "Output canonical file")->required();
  ingest->add_option("--slots", ing_slots, "Slots to track (default: per format)")->delimiter(',');
  ingest->add_option("--aliases", ing_aliases, "Alias table TSV")
      ->default_str(COPYAUG_DEFAULT_ALIASES);
  ingest->add_flag("--no-aliases", ing_no_aliases, "Do not use an alias table");
  ingest->add_option("--subsample", ing_subsample, "Fraction of dialogues kept")
      ->check(CLI::Range(0.0, 1.0));

  // gen-values
  auto* gen = app.add_subcommand("gen-values", "Print random strings, one per line");
  int gen_count = 0;
  RandStrConfig gen_cfg;
  gen->add_option("--count", gen_count, "Number of distinct values")->required()->check(CLI::Range(1, 1 << 30));
  gen->add_option("--strlen", gen_cfg.strlen, "Characters per value")->capture_default_str();
  gen->add_option("--n-spaces", gen_cfg.n_spaces, "Space slots in the alphabet")->capture_default_str();

  // augment
  auto* augment = app.add_subcommand("augment", "Build DC(D, n, theta)");
  std::string aug_in, aug_out, aug_pool;
  DCConfig dc;
  augment->add_option("--in", aug_in, "Canonical input")->required();
  augment->add_option("--out", aug_out, "Canonical output")->required();
  augment->add_option("--n", dc.n, "Copy count")->required()->check(CLI::Range(1, 1 << 30));
  augment->add_option("--theta", dc.theta, "Replacement probability")->required()->check(CLI::Range(0.0, 1.0));
  augment->add_option("--pool", aug_pool, "Draw replacement values from this file");
  augment->add_option("--strlen", dc.randstr.strlen, "Random value length")->capture_default_str();

  // split
  auto* split = app.add_subcommand("split", "Split a test set into seen and unseen parts");
  std::string sp_test, sp_train, sp_seen, sp_unseen;
  split->add_option("--test", sp_test, "Canonical test set")->required();
  split->add_option("--train", sp_train, "Canonical training set")->required();
  split->add_option("--seen-out", sp_seen, "Seen partition output")->required();
  split->add_option("--unseen-out", sp_unseen, "Unseen partition output")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a tracker");
  std::string tr_train, tr_dev, tr_config, tr_out;
  train->add_option("--train", tr_train, "Canonical training set")->required();
  train->add_option("--dev", tr_dev, "Canonical dev set")->required();
  train->add_option("--config", tr_config, "Tracker config TOML");
  train->add_option("--out", tr_out, "Checkpoint output")->required();

  // predict
  auto* predict = app.add_subcommand("predict", "Run a checkpoint over a dataset");
  std::string pr_ckpt, pr_in, pr_out;
  predict->add_option("--ckpt", pr_ckpt, "Checkpoint")->required();
  predict->add_option("--in", pr_in, "Canonical dataset")->required();
  predict->add_option("--out", pr_out, "Predictions output")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions");
  std::string ev_gold, ev_preds, ev_train, ev_out;
  eval->add_option("--gold", ev_gold, "Canonical gold set")->required();
  eval->add_option("--preds", ev_preds, "Predictions file")->required();
  eval->add_option("--train", ev_train, "Training set; enables seen/unseen rows");
  eval->add_option("--out", ev_out, "CSV report (default: stdout)");

  // search
  auto* search = app.add_subcommand("search", "Doubling search over the copy count");
  std::string se_train, se_seen, se_unseen, se_config, se_out, se_ckpt;
  SearchConfig se_cfg;
  search->add_option("--train", se_train, "Canonical training set")->required();
  search->add_option("--seen", se_seen, "Seen test set")->required();
  search->add_option("--unseen", se_unseen, "Unseen test set")->required();
  search->add_option("--theta", se_cfg.theta, "Replacement probability")->capture_default_str();
  search->add_option("--eps", se_cfg.eps, "Stopping precision")->capture_default_str();
  search->add_option("--max-steps", se_cfg.max_steps, "Cap on recorded results")->capture_default_str();
  search->add_option("--dev-fraction", se_cfg.dev_fraction, "Held-out dialogue fraction")
      ->capture_default_str();
  search->add_option("--config", se_config, "Tracker config TOML");
  search->add_option("--out", se_out, "Trace CSV")->required();
  search->add_option("--ckpt", se_ckpt, "Best checkpoint output");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run an experiment manifest");
  experiment->alias("run");
  std::string ex_manifest, ex_out, ex_data;
  bool ex_dry = false;
  experiment->add_option("--manifest", ex_manifest, "Manifest TOML")->required();
  experiment->add_option("--out-dir", ex_out, "Artifact directory");
  experiment->add_option("--data-dir", ex_data, "Corpus root (default: COPYAUG_DATA_DIR)");
  experiment->add_flag("--dry-run", ex_dry, "Validate the manifest and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error code=" << ErrorCodeName(ErrorCode::kArgument)
              << " msg=" << OneLine(e.what()) << "\n";
    return ErrorExitStatus(ErrorCode::kArgument);
  }

  const auto log = Logger(g);
  try {
    if (*ingest) {
      const CorpusFormat format = ParseCorpusFormat(ing_format);
      IngestOptions opts;
      opts.slots = ing_slots;
      if (!ing_no_aliases) {
        const bool explicit_table = ingest->count("--aliases") > 0;
        const fs::path table = ing_aliases.empty() ? fs::path(COPYAUG_DEFAULT_ALIASES)
                                                   : InputPath(ing_aliases);
        if (explicit_table || fs::exists(table)) opts.aliases = AliasTable::Load(table);
      }
      Dataset data;
      IngestReport report;
      if (format == CorpusFormat::kCanonical) {
        data = ReadCanonical(InputPath(ing_in));
      } else {
        IngestResult r = Ingest(InputPath(ing_in), format, opts);
        data = std::move(r.dataset);
        report = r.report;
      }
      if (ing_subsample < 1.0) data = SubsampleDialogues(data, ing_subsample, g.seed);
      WriteCanonical(data, fs::path(ing_out));
      if (log) {
        log("ingested " + std::to_string(report.dialogues) + " dialogues, " +
            std::to_string(report.turns) + " turns, " + std::to_string(data.size()) +
            " samples (" + std::to_string(data.ActiveCount()) + " active, " +
            std::to_string(report.dropped_spans) + " gate-only, " +
            std::to_string(report.aliased) + " aliased, " +
            std::to_string(report.unmapped_aliases) + " unmapped)");
      }
    } else if (*gen) {
      Rng rng(g.seed);
      for (const auto& v : FreshValueSet(gen_count, gen_cfg, rng)) std::cout << v << "\n";
    } else if (*augment) {
      const Dataset in = ReadCanonical(InputPath(aug_in));
      dc.seed = g.seed;
      if (!aug_pool.empty()) {
        dc.value_source = DCConfig::ValueSource::kSharedPool;
        dc.pool = ReadLines(InputPath(aug_pool));
      }
      DCResult r = ConstructDataset(in, dc);
      WriteCanonical(r.dataset, fs::path(aug_out));
      if (log) {
        log("wrote " + std::to_string(r.dataset.size()) + " samples, " +
            std::to_string(r.report.replaced) + " values replaced, " +
            std::to_string(r.report.skipped_no_span) + " gate-only copies kept");
      }
    } else if (*split) {
      SeenUnseen parts =
          SplitSeenUnseen(ReadCanonical(InputPath(sp_test)), ReadCanonical(InputPath(sp_train)));
      WriteCanonical(parts.seen, fs::path(sp_seen));
      WriteCanonical(parts.unseen, fs::path(sp_unseen));
    } else if (*train) {
      const tracker::TrackerConfig cfg = TrackerFromFlags(tr_config, g.seed);
      tracker::TrainOptions opts;
      opts.log = log;
      tracker::TrainResult r = tracker::Train(ReadCanonical(InputPath(tr_train)),
                                              ReadCanonical(InputPath(tr_dev)), cfg, opts);
      tracker::SaveCheckpoint(r.model, fs::path(tr_out));
      if (log) log("best epoch " + std::to_string(r.best_epoch));
    } else if (*predict) {
      const tracker::TrackerModel model = tracker::LoadCheckpoint(InputPath(pr_ckpt));
      const Dataset data = ReadCanonical(InputPath(pr_in));
      WritePredictions(tracker::Predict(data, model, g.threads), fs::path(pr_out));
    } else if (*eval) {
      const Dataset gold = ReadCanonical(InputPath(ev_gold));
      const std::vector<Prediction> preds = ReadPredictions(InputPath(ev_preds));
      std::vector<F1Report> rows = {Score(preds, gold, Partition::kAll)};
      if (!ev_train.empty()) {
        PartitionScores ps = ScorePartitions(preds, gold, ReadCanonical(InputPath(ev_train)));
        if (ps.seen) rows.push_back(*ps.seen);
        if (ps.unseen) rows.push_back(*ps.unseen);
        if (ps.fell_back && log) log("warning: one partition is empty; overall uses the other");
        if (log) log("overall " + std::to_string(ps.overall));
      }
      if (ev_out.empty()) {
        WriteReportCsv(rows, std::cout);
      } else {
        WriteFile(ev_out, [&](std::ostream& o) { WriteReportCsv(rows, o); });
      }
    } else if (*search) {
      se_cfg.tracker = TrackerFromFlags(se_config, g.seed);
      se_cfg.seed = g.seed;
      se_cfg.threads = g.threads;
      tracker::TrainOptions opts;
      opts.log = log;
      SearchResult r = DoublingSearch(ReadCanonical(InputPath(se_train)),
                                      ReadCanonical(InputPath(se_seen)),
                                      ReadCanonical(InputPath(se_unseen)), se_cfg, opts);
      WriteFile(se_out, [&](std::ostream& o) { WriteTraceCsv(r.trace, o); });
      if (!se_ckpt.empty() && r.best_model) {
        tracker::SaveCheckpoint(*r.best_model, fs::path(se_ckpt));
      }
      if (r.trace.status == SearchTrace::Status::kFailed) {
        Fail(ErrorCode::kNumeric, r.trace.error);
      }
      if (log) {
        log("best n " + std::to_string(r.trace.best_n) + " overall " +
            std::to_string(r.trace.best_overall) + " final n " +
            std::to_string(r.trace.final_n));
      }
    } else if (*experiment) {
      std::optional<fs::path> root = DataRoot();
      if (!ex_data.empty()) root = fs::path(ex_data);
      const ExperimentManifest m = LoadManifest(fs::path(ex_manifest), root);
      if (!ex_dry && ex_out.empty()) {
        Fail(ErrorCode::kArgument, "--out-dir is required unless --dry-run is given");
      }
      RunOptions opts;
      opts.dry_run = ex_dry;
      opts.threads = g.threads;
      opts.log = log;
      for (const auto& f : RunManifest(m, fs::path(ex_out), opts)) std::cout << f.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error code=" << ErrorCodeName(e.code()) << " msg=" << OneLine(e.what())
              << "\n";
    return ErrorExitStatus(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error code=INTERNAL_ERROR msg=" << OneLine(e.what()) << "\n";
    return 1;
  }
  return 0;
}
