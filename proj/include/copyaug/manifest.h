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

// TOML experiment manifests.
//
//   name = "woz-memorization"
//   recipe = "memorization"   # diversity_grid, copy_sweep, theta_sweep,
//                             # eps_sweep, full_da
//   seed = 7
//
//   [data]
//   format = "woz"            # dstc2, multiwoz, canonical
//   train = "woz/woz_train_en.json"
//   test = "woz/woz_test_en.json"
//   aliases = "aliases.tsv"   # optional
//   subsample = 1.0           # fraction of dialogues kept
//
//   [tracker]                 # any TrackerConfig field
//   [search]                  # theta, eps, max_steps, dev_fraction
//   [randstr]                 # strlen, n_spaces
//   [params]                  # pool_size, n_min, n_max, points, copies,
//                             # theta, thetas, eps_values
//
// Relative data paths resolve against the data root (COPYAUG_DATA_DIR) when
// one is given, otherwise against the manifest's directory.

#ifndef COPYAUG_MANIFEST_H_
#define COPYAUG_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "copyaug/ingest.h"
#include "copyaug/search.h"
#include "copyaug/tracker/model.h"

namespace copyaug {

enum class Recipe {
  kMemorization,
  kDiversityGrid,
  kCopySweep,
  kThetaSweep,
  kEpsSweep,
  kFullDA,
};

Recipe ParseRecipe(std::string_view name);
std::string_view RecipeName(Recipe r);

struct ExperimentManifest {
  std::string name;
  Recipe recipe = Recipe::kMemorization;
  std::uint64_t seed = 0;

  CorpusFormat format = CorpusFormat::kCanonical;
  std::filesystem::path train;
  std::filesystem::path test;
  std::optional<std::filesystem::path> aliases;
  double subsample = 1.0;

  SearchConfig search;  // search.tracker holds the tracker overlay

  int pool_size = 0;
  int n_min = 20;
  int n_max = 2560;
  int points = 8;
  std::vector<int> copies = {1, 2, 4, 8};
  double sweep_theta = 1.0;
  std::vector<double> thetas = {0.25, 0.5, 0.75};
  std::vector<double> eps_values = {0.01, 0.02, 0.03, 0.04, 0.05};

  // Checks value ranges and recipe parameters. Paths are checked by
  // CheckPaths, since a dry run may be performed without the data.
  void Validate() const;
  void CheckPaths() const;
};

// Parses manifest text. `base` resolves relative data paths.
ExperimentManifest ParseManifest(std::string_view text,
                                 const std::filesystem::path& base);
ExperimentManifest LoadManifest(const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& data_root);

// Resolved manifest as TOML (absolute paths, every field explicit).
std::string ManifestToToml(const ExperimentManifest& m);

// Reads a TOML file of TrackerConfig fields on top of `base`.
tracker::TrackerConfig LoadTrackerConfigToml(const std::filesystem::path& path,
                                             tracker::TrackerConfig base = {});

struct RunOptions {
  bool dry_run = false;
  int threads = 1;
  std::function<void(std::string_view)> log;
};

// Runs the recipe and writes into `out_dir`: config.toml, the recipe CSV(s),
// checkpoints where the recipe produces a model, and summary.json. Returns
// the list of files written.
std::vector<std::filesystem::path> RunManifest(const ExperimentManifest& m,
                                               const std::filesystem::path& out_dir,
                                               const RunOptions& options = {});

}  // namespace copyaug

#endif  // COPYAUG_MANIFEST_H_
