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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "copyaug/error.h"
#include "copyaug/experiments.h"
#include "copyaug/ingest.h"
#include "copyaug/manifest.h"
#include "support/surrogate_corpus.h"

namespace copyaug {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kArgument;
}

// ---------------------------------------------------------------------------

TEST(SpearmanTest, KnownValues) {
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  // Monotone but nonlinear is still perfect.
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3, 4, 5}, {1, 8, 27, 64, 125}), 1.0);
  // Hand-ranked: x ranks 1..5, y ranks 2,1,4,3,5 -> d^2 sum 4 -> 1 - 24/120.
  EXPECT_NEAR(SpearmanCorrelation({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}), 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3}, {5, 5, 5}), 0.0);
  EXPECT_THROW(SpearmanCorrelation({1, 2}, {1}), Error);
}

TEST(SpearmanTest, TiesUseAverageRanks) {
  // x ranks 1, 2.5, 2.5, 4; y ranks 1..4. Pearson on ranks.
  const double rx[] = {1, 2.5, 2.5, 4}, ry[] = {1, 2, 3, 4};
  double mx = 2.5, my = 2.5, sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  EXPECT_NEAR(SpearmanCorrelation({1, 2, 2, 3}, {1, 2, 3, 4}), sxy / std::sqrt(sxx * syy),
              1e-12);
}

TEST(EpsSweepTest, ReplaysTheStoppingRule) {
  SearchTrace trace;
  const double overall[] = {0.7521, 0.7971, 0.8321, 0.8671, 0.8821, 0.8901, 0.8946};
  for (int i = 0; i < 7; ++i) {
    SearchStep s;
    s.step = i;
    s.n = CopyCountForStep(i);
    s.seen_f1 = s.unseen_f1 = s.overall = overall[i];
    trace.steps.push_back(s);
  }
  const auto rows = ReplayEpsSweep(trace, {0.01, 0.02, 0.03, 0.04, 0.05, 0.001});
  ASSERT_EQ(rows.size(), 6u);
  const int steps[] = {7, 6, 6, 4, 3};
  const int final_n[] = {64, 32, 32, 8, 4};
  for (int i = 0; i < 5; ++i) {
    ASSERT_TRUE(rows[i].steps.has_value());
    EXPECT_EQ(*rows[i].steps, steps[i]);
    EXPECT_EQ(rows[i].final_n, final_n[i]);
    EXPECT_DOUBLE_EQ(rows[i].best_overall, overall[steps[i] - 1]);
  }
  EXPECT_FALSE(rows[5].steps.has_value());
  std::ostringstream out;
  WriteEpsCsv(rows, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "eps,steps,final_n,best_overall");
}

TEST(TestPairTest, UnseenValuesAreFresh) {
  testing::SurrogateSpec spec;
  spec.dialogues = 20;
  const Dataset test =
      IngestTurnLabelJson(testing::MakeSurrogateWozJson(spec), CorpusFormat::kWoz).dataset;
  const TestPair p = MakeSeenUnseenTests(test, 3);
  EXPECT_EQ(p.seen, test);
  EXPECT_EQ(p.unseen.size(), test.size());
  for (const Sample& s : p.unseen.samples()) {
    if (s.HasSpan()) {
      EXPECT_FALSE(test.Contains(s.slot, *s.value));
    }
  }
}

// ---------------------------------------------------------------------------

constexpr char kManifest[] = R"(
name = "unit"
recipe = "copy_sweep"
seed = 3

[data]
format = "woz"
train = "train.json"
test = "test.json"

[tracker]
d_emb = 8
d_h = 8
epochs = 2
lr = 0.01

[search]
eps = 0.02

[params]
copies = [1, 2]
theta = 0.5
)";

TEST(ManifestTest, ParsesAndResolvesPaths) {
  const ExperimentManifest m = ParseManifest(kManifest, "/data/root");
  EXPECT_EQ(m.name, "unit");
  EXPECT_EQ(m.recipe, Recipe::kCopySweep);
  EXPECT_EQ(m.seed, 3u);
  EXPECT_EQ(m.format, CorpusFormat::kWoz);
  EXPECT_EQ(m.train, fs::path("/data/root/train.json"));
  EXPECT_EQ(m.search.tracker.d_h, 8);
  EXPECT_DOUBLE_EQ(m.search.eps, 0.02);
  EXPECT_EQ(m.search.seed, 3u);
  EXPECT_EQ(m.copies, (std::vector<int>{1, 2}));
  EXPECT_DOUBLE_EQ(m.sweep_theta, 0.5);
  // Untouched fields keep defaults.
  EXPECT_EQ(m.search.tracker.batch_size, 32);
  EXPECT_EQ(m.thetas, (std::vector<double>{0.25, 0.5, 0.75}));
}

TEST(ManifestTest, SnapshotRoundTrips) {
  const ExperimentManifest m = ParseManifest(kManifest, "/data/root");
  const std::string snap = ManifestToToml(m);
  const ExperimentManifest back = ParseManifest(snap, "/elsewhere");
  EXPECT_EQ(ManifestToToml(back), snap);
  EXPECT_EQ(back.train, m.train);
}

TEST(ManifestTest, RejectsBadInput) {
  EXPECT_EQ(CodeOf([] { ParseManifest("name = \"x\"\nrecipe = \"nope\"\n", "/"); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ParseManifest(std::string(kManifest) + "bogus = 1\n", "/"); }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ParseManifest("name = = \"x\"", "/"); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              std::string t = kManifest;
              t.replace(t.find("copies = [1, 2]"), 15, "copies = []");
              ParseManifest(t, "/");
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] {
              std::string t = kManifest;
              t.replace(t.find("d_h = 8"), 7, "d_h = \"wide\"");
              ParseManifest(t, "/");
            }),
            ErrorCode::kConfig);
  try {
    std::string t = kManifest;
    t.replace(t.find("theta = 0.5"), 11, "theta = 1.5");
    ParseManifest(t, "/");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("params.theta"), std::string::npos) << e.what();
  }
}

class RunManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("copyaug_exp_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    testing::SurrogateSpec spec;
    spec.dialogues = 20;
    spec.seed = 1;
    std::ofstream(dir_ / "train.json") << testing::MakeSurrogateWozJson(spec);
    spec.dialogues = 8;
    spec.seed = 2;
    std::ofstream(dir_ / "test.json") << testing::MakeSurrogateWozJson(spec);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentManifest Manifest(const std::string& recipe, const std::string& params) {
    std::string text = kManifest;
    text.replace(text.find("copy_sweep"), 10, recipe);
    text = text.substr(0, text.find("[params]")) + "[params]\n" + params;
    return ParseManifest(text, dir_);
  }

  fs::path dir_;
};

TEST_F(RunManifestTest, DryRunWritesNothing) {
  RunOptions opts;
  opts.dry_run = true;
  const auto files = RunManifest(Manifest("copy_sweep", "copies = [1, 2]\n"), dir_ / "out", opts);
  EXPECT_TRUE(files.empty());
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(RunManifestTest, MissingDataIsAnIoError) {
  ExperimentManifest m = Manifest("copy_sweep", "copies = [1]\n");
  m.train = dir_ / "absent.json";
  EXPECT_EQ(CodeOf([&] { RunManifest(m, dir_ / "out"); }), ErrorCode::kIo);
}

TEST_F(RunManifestTest, CopySweepIsReproducible) {
  const ExperimentManifest m = Manifest("copy_sweep", "copies = [1, 2]\ntheta = 1.0\n");
  RunManifest(m, dir_ / "a");
  RunManifest(m, dir_ / "b");
  const std::string a = Slurp(dir_ / "a" / "copy_sweep.csv");
  EXPECT_EQ(a, Slurp(dir_ / "b" / "copy_sweep.csv"));
  EXPECT_EQ(Slurp(dir_ / "a" / "summary.json"), Slurp(dir_ / "b" / "summary.json"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3);
  // The embedded snapshot parses back to the same manifest.
  EXPECT_EQ(ManifestToToml(ParseManifest(Slurp(dir_ / "a" / "config.toml"), "/")),
            ManifestToToml(m));
}

TEST_F(RunManifestTest, MemorizationWritesMatrixAndModels) {
  const auto files = RunManifest(Manifest("memorization", "pool_size = 10\n"), dir_ / "m");
  EXPECT_TRUE(fs::exists(dir_ / "m" / "memorization.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "m" / "original.ckpt"));
  EXPECT_TRUE(fs::exists(dir_ / "m" / "synthetic.ckpt"));
  const std::string csv = Slurp(dir_ / "m" / "memorization.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "train,test_original,test_synthetic");
  EXPECT_GE(files.size(), 4u);
}

TEST_F(RunManifestTest, EpsSweepAndFullDa) {
  RunManifest(Manifest("eps_sweep", "eps_values = [0.5, 1.0]\n"), dir_ / "e");
  const std::string eps = Slurp(dir_ / "e" / "eps_sweep.csv");
  EXPECT_EQ(std::count(eps.begin(), eps.end(), '\n'), 3);
  EXPECT_TRUE(fs::exists(dir_ / "e" / "trace.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "e" / "best.ckpt"));

  ExperimentManifest full = Manifest("full_da", "");
  full.search.eps = 1.0;
  RunManifest(full, dir_ / "f");
  const std::string trace = Slurp(dir_ / "f" / "trace.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 4);
}

TEST_F(RunManifestTest, DiversityAndThetaSweeps) {
  RunManifest(Manifest("diversity_grid", "n_min = 5\nn_max = 20\npoints = 3\n"), dir_ / "d");
  const std::string div = Slurp(dir_ / "d" / "diversity.csv");
  EXPECT_EQ(div.substr(0, div.find('\n')), "pool_size,seen_f1,unseen_f1,overall");
  EXPECT_EQ(std::count(div.begin(), div.end(), '\n'), 4);

  ExperimentManifest th = Manifest("theta_sweep", "thetas = [0.0, 1.0]\n");
  th.search.eps = 1.0;
  RunManifest(th, dir_ / "t");
  const std::string csv = Slurp(dir_ / "t" / "theta_sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

}  // namespace
}  // namespace copyaug
