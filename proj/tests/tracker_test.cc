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

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "copyaug/error.h"
#include "copyaug/eval.h"
#include "copyaug/tokenizer.h"
#include "copyaug/tracker/checkpoint.h"
#include "copyaug/tracker/model.h"
#include "copyaug/tracker/trainer.h"

namespace copyaug::tracker {
namespace {

Sample MakeSample(const std::string& sys, const std::string& usr, const std::string& slot,
                  const std::optional<std::string>& value) {
  Sample s;
  s.utterance.sys = Tokenize(sys);
  s.utterance.usr = Tokenize(usr);
  s.slot = slot;
  if (value) {
    s.active = true;
    s.value = NormalizeValue(*value);
    s.span = LocateValue(s.utterance, Tokenize(*value));
  }
  return s;
}

TrackerConfig TinyConfig() {
  TrackerConfig cfg;
  cfg.d_emb = 5;
  cfg.d_h = 6;
  cfg.dropout = 0.0;
  cfg.lr = 1e-2;
  cfg.epochs = 5;
  cfg.batch_size = 2;
  cfg.seed = 17;
  cfg.init_range = 0.5;
  return cfg;
}

Dataset ThreeSamples() {
  return Dataset({MakeSample("what food ?", "i want modern european food", "food",
                             "modern european"),
                  MakeSample("", "thank you goodbye", "food", std::nullopt),
                  MakeSample("there is no thai place", "ok then", "area", "thai")});
}

// ---------------------------------------------------------------------------
// Straight-line forward pass over plain vectors, written from the model
// equations without touching the library's internals.

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major

Mat ToMat(const Matrix& m) {
  Mat out(m.rows(), Vec(m.cols()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

Vec RowTimes(const Vec& x, const Mat& w) {
  Vec out(w[0].size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += x[i] * w[i][j];
  return out;
}

Vec Add(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vec Linear(const LinearParams& p, const Vec& x) {
  return Add(RowTimes(x, ToMat(p.w)), ToMat(p.b)[0]);
}

Mat Lstm(const LstmParams& p, const Mat& xs, bool reverse) {
  const Mat wx = ToMat(p.wx), wh = ToMat(p.wh);
  const Vec b = ToMat(p.b)[0];
  const std::size_t h = wh.size();
  Mat out(xs.size(), Vec(h));
  Vec hp(h, 0.0), cp(h, 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const std::size_t t = reverse ? xs.size() - 1 - k : k;
    const Vec z = Add(Add(RowTimes(xs[t], wx), RowTimes(hp, wh)), b);
    Vec hn(h), cn(h);
    for (std::size_t j = 0; j < h; ++j) {
      const double i = Sig(z[j]), f = Sig(z[h + j]), g = std::tanh(z[2 * h + j]),
                   o = Sig(z[3 * h + j]);
      cn[j] = f * cp[j] + i * g;
      hn[j] = o * std::tanh(cn[j]);
    }
    out[t] = hn;
    hp = hn;
    cp = cn;
  }
  return out;
}

struct OracleAttn {
  Vec scores;
  Vec ctx;
};

OracleAttn Attn(const Vec& q, const Mat& hidden, const AttentionParams& a) {
  const Vec qp = Add(RowTimes(q, ToMat(a.wq)), ToMat(a.bq)[0]);
  const Vec bv = ToMat(a.bv)[0];
  const Mat wv = ToMat(a.wv);
  Mat vp;
  for (const Vec& row : hidden) vp.push_back(Add(RowTimes(row, wv), bv));
  Vec logits;
  for (const Vec& v : vp) {
    double d = 0;
    for (std::size_t j = 0; j < v.size(); ++j) d += v[j] * qp[j];
    logits.push_back(d);
  }
  double z = 0;
  for (double l : logits) z += std::exp(l);
  OracleAttn out;
  out.ctx.assign(qp.size(), 0.0);
  for (std::size_t t = 0; t < logits.size(); ++t) {
    out.scores.push_back(std::exp(logits[t]) / z);
    for (std::size_t j = 0; j < qp.size(); ++j) out.ctx[j] += out.scores.back() * vp[t][j];
  }
  return out;
}

struct OracleOut {
  double gate;
  Vec p, q;
};

OracleOut OracleForward(const TrackerModel& m, const Sample& s) {
  const auto& P = m.params;
  Mat xs;
  for (const auto& tok : s.utterance.Joined()) {
    const int id = m.words.WordId(tok);
    Vec row(P.word_emb.cols());
    for (int c = 0; c < P.word_emb.cols(); ++c) row[c] = P.word_emb(id, c);
    xs.push_back(row);
  }
  const Mat f = Lstm(P.fwd, xs, false), b = Lstm(P.bwd, xs, true);
  Mat hidden;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    Vec row = f[t];
    row.insert(row.end(), b[t].begin(), b[t].end());
    hidden.push_back(row);
  }
  const int sid = *m.slots.Find(s.slot);
  Vec s_emb(P.slot_emb.cols());
  for (int c = 0; c < P.slot_emb.cols(); ++c) s_emb[c] = P.slot_emb(sid, c);

  const Vec s_enc = Linear(P.lin_slot, s_emb);
  const OracleAttn ap = Attn(Linear(P.lin_p, s_enc), hidden, P.span_head);
  Vec q_in = s_enc;
  q_in.insert(q_in.end(), ap.ctx.begin(), ap.ctx.end());
  const OracleAttn aq = Attn(Linear(P.lin_q, q_in), hidden, P.span_head);
  const OracleAttn ac = Attn(Linear(P.lin_cls1, s_emb), hidden, P.cls_head);
  return {Sig(Linear(P.lin_cls2, ac.ctx)[0]), ap.scores, aq.scores};
}

// ---------------------------------------------------------------------------

TEST(ModelShapeTest, TensorShapesFollowConfig) {
  TrackerConfig cfg = TinyConfig();
  const TrackerModel m = InitModel(ThreeSamples(), cfg);
  EXPECT_EQ(m.slots.size(), 2);
  EXPECT_EQ(m.words.at(0), "<pad>");
  EXPECT_EQ(m.words.at(2), std::string(kUsrToken));
  std::vector<std::string> names;
  m.params.ForEach([&](std::string_view name, const Matrix&) { names.emplace_back(name); });
  EXPECT_EQ(names.size(), 26u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  const auto& p = m.params;
  EXPECT_EQ(p.word_emb.rows(), m.words.size());
  EXPECT_EQ(p.word_emb.cols(), 5);
  EXPECT_EQ(p.fwd.wx.cols(), 4 * 3);
  EXPECT_EQ(p.fwd.wh.rows(), 3);
  EXPECT_EQ(p.span_head.wv.rows(), 6);
  EXPECT_EQ(p.lin_q.w.rows(), 5 + 6);
  EXPECT_EQ(p.lin_cls2.w.cols(), 1);
  EXPECT_TRUE(p.word_emb.row(Vocabulary::kPadId).isZero());
  const Matrix h = Encode(m, ThreeSamples().samples()[0].utterance);
  EXPECT_EQ(h.rows(), ThreeSamples().samples()[0].utterance.JoinedLength());
  EXPECT_EQ(h.cols(), 6);
}

TEST(AttendTest, SoftmaxOfOneTwoThree) {
  AttentionParams head;
  head.wq = Matrix::Identity(1, 1);
  head.bq = Matrix::Zero(1, 1);
  head.wv = Matrix::Identity(1, 1);
  head.bv = Matrix::Zero(1, 1);
  Matrix values(3, 1);
  values << 1, 2, 3;
  const AttentionResult r = Attend(RowVector::Constant(1, 1.0), values, head);
  ASSERT_EQ(r.scores.size(), 3);
  EXPECT_NEAR(r.scores(0), 0.0900, 5e-5);
  EXPECT_NEAR(r.scores(1), 0.2447, 5e-5);
  EXPECT_NEAR(r.scores(2), 0.6652, 5e-5);
  EXPECT_NEAR(r.scores.sum(), 1.0, 1e-12);
  EXPECT_NEAR(r.contexts(0), r.scores(0) + 2 * r.scores(1) + 3 * r.scores(2), 1e-12);
}

TEST(AttendTest, ScoresAreADistribution) {
  Rng rng(3);
  TrackerConfig cfg = TinyConfig();
  const TrackerParams p = TrackerParams::Random(cfg, 10, 2, rng);
  for (int len : {1, 2, 9}) {
    Matrix values = Matrix::Random(len, cfg.d_h) * 3.0;
    const auto r = Attend(RowVector::Random(cfg.d_emb), values, p.span_head);
    EXPECT_NEAR(r.scores.sum(), 1.0, 1e-12);
    EXPECT_TRUE((r.scores.array() >= 0).all());
  }
  EXPECT_THROW(Attend(RowVector::Random(cfg.d_emb), Matrix(0, cfg.d_h), p.span_head),
               Error);
}

TEST(ForwardTest, MatchesStraightLineOracle) {
  TrackerConfig cfg = TinyConfig();
  const Dataset d = ThreeSamples();
  const TrackerModel m = InitModel(d, cfg);
  for (const Sample& s : d.samples()) {
    const Prediction pred = PredictSample(m, s);
    const OracleOut o = OracleForward(m, s);
    EXPECT_NEAR(pred.cls_prob, o.gate, 1e-5);
    EXPECT_GT(pred.cls_prob, 0.0);
    EXPECT_LT(pred.cls_prob, 1.0);
    ASSERT_EQ(pred.scores_p.size(), o.p.size());
    ASSERT_EQ(pred.scores_q.size(), o.q.size());
    for (std::size_t t = 0; t < o.p.size(); ++t) {
      EXPECT_NEAR(pred.scores_p[t], o.p[t], 1e-5);
      EXPECT_NEAR(pred.scores_q[t], o.q[t], 1e-5);
    }
    EXPECT_EQ(pred.scores_p.size(), static_cast<std::size_t>(s.utterance.JoinedLength()));
  }
}

TEST(ForwardTest, DeterministicAndRejectsEmptyOrUnknown) {
  const Dataset d = ThreeSamples();
  const TrackerModel m = InitModel(d, TinyConfig());
  const Prediction a = PredictSample(m, d.samples()[0]);
  const Prediction b = PredictSample(m, d.samples()[0]);
  EXPECT_EQ(a.scores_p, b.scores_p);
  EXPECT_EQ(a.cls_prob, b.cls_prob);
  Sample empty;
  empty.slot = "food";
  EXPECT_THROW(PredictSample(m, empty), Error);
  Sample odd = d.samples()[0];
  odd.slot = "price";
  EXPECT_THROW(PredictSample(m, odd), Error);
  // Unknown words fall back to <unk> instead of failing.
  Sample unk = d.samples()[0];
  unk.utterance.usr.push_back("zzzunseen");
  EXPECT_NO_THROW(PredictSample(m, unk));
}

TEST(GradientTest, MatchesCentralDifferences) {
  TrackerConfig cfg = TinyConfig();
  const Dataset d = ThreeSamples();
  TrackerModel m = InitModel(d, cfg);
  Gradients g = Gradients::Zeros(cfg, m.words.size(), m.slots.size());
  BatchLossAndGradient(m, d.samples(), &g);

  // Analytic gradient for a given tensor name and entry.
  auto analytic = [&](const std::string& name, int r, int c) {
    if (name == "word_emb") {
      auto it = g.word_rows.find(r);
      return it == g.word_rows.end() ? 0.0 : it->second(c);
    }
    double v = 0.0;
    g.dense.ForEach([&](std::string_view n, const Matrix& t) {
      if (n == name) v = t(r, c);
    });
    return v;
  };

  const double h = 1e-5;
  int checked = 0;
  double worst = 0.0;
  std::string worst_name;
  std::vector<std::pair<std::string, Matrix*>> tensors;
  m.params.ForEach([&](std::string_view n, Matrix& t) { tensors.emplace_back(n, &t); });
  for (auto& [name, t] : tensors) {
    for (int r = 0; r < t->rows(); ++r) {
      for (int c = 0; c < t->cols(); ++c) {
        const double orig = (*t)(r, c);
        (*t)(r, c) = orig + h;
        const double up = BatchLossAndGradient(m, d.samples(), nullptr);
        (*t)(r, c) = orig - h;
        const double down = BatchLossAndGradient(m, d.samples(), nullptr);
        (*t)(r, c) = orig;
        const double numeric = (up - down) / (2 * h);
        const double a = analytic(name, r, c);
        const double scale = std::abs(a) + std::abs(numeric);
        // Entries this small are dominated by finite-difference round-off.
        const double rel = scale > 1e-5 ? std::abs(a - numeric) / scale : 0.0;
        if (rel > worst) {
          worst = rel;
          worst_name = name;
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 500);
  EXPECT_LT(worst, 1e-4) << "worst tensor " << worst_name;
}

TEST(GradientTest, DropoutMaskIsAppliedToGradient) {
  TrackerConfig cfg = TinyConfig();
  cfg.dropout = 0.5;
  const Dataset d = ThreeSamples();
  TrackerModel m = InitModel(d, cfg);
  const Sample& s = d.samples()[0];
  // Same rng seed -> same mask in every call.
  Gradients g = Gradients::Zeros(cfg, m.words.size(), m.slots.size());
  Rng r0(5);
  SampleLossAndGradient(m, s, &g, &r0);
  const int id = m.words.WordId("european");
  const double h = 1e-5;
  for (int c = 0; c < cfg.d_emb; ++c) {
    const double orig = m.params.word_emb(id, c);
    m.params.word_emb(id, c) = orig + h;
    Rng r1(5);
    const double up = SampleLossAndGradient(m, s, nullptr, &r1);
    m.params.word_emb(id, c) = orig - h;
    Rng r2(5);
    const double down = SampleLossAndGradient(m, s, nullptr, &r2);
    m.params.word_emb(id, c) = orig;
    EXPECT_NEAR(g.word_rows.at(id)(c), (up - down) / (2 * h), 1e-6);
  }
}

Dataset ToySet() {
  const char* foods[] = {"thai", "korean", "greek", "indian", "modern european"};
  std::vector<Sample> out;
  for (int i = 0; i < 5; ++i) {
    out.push_back(MakeSample("what would you like ?",
                             std::string("i want ") + foods[i] + " food", "food", foods[i]));
    out.push_back(MakeSample("anything else ?", std::string("no thanks bye ") +
                                                    std::to_string(i), "food",
                             std::nullopt));
  }
  return Dataset(std::move(out));
}

TEST(TrainTest, LossDecreasesOverFirstEpochs) {
  TrackerConfig cfg = TinyConfig();
  cfg.d_emb = 16;
  cfg.d_h = 16;
  cfg.epochs = 5;
  std::vector<double> losses;
  TrainOptions opts;
  opts.on_epoch = [&](const EpochRecord& r) { losses.push_back(r.train_loss); };
  const Dataset d = ToySet();
  const TrainResult r = Train(d, d, cfg, opts);
  ASSERT_EQ(losses.size(), 5u);
  ASSERT_EQ(r.history.size(), 5u);
  EXPECT_LT(losses.back(), losses.front());
  EXPECT_GE(r.best_epoch, 1);
  EXPECT_LE(r.best_epoch, 5);
}

TEST(TrainTest, OverfitsTenSamples) {
  TrackerConfig cfg = TinyConfig();
  cfg.d_emb = 16;
  cfg.d_h = 16;
  cfg.epochs = 200;
  cfg.lr = 1e-2;
  const Dataset d = ToySet();
  const TrainResult r = Train(d, d, cfg);
  EXPECT_DOUBLE_EQ(Score(Predict(d, r.model), d).f1, 1.0);
}

TEST(TrainTest, MemorizesASingleSample) {
  TrackerConfig cfg = TinyConfig();
  cfg.epochs = 60;
  cfg.batch_size = 1;
  const Dataset d({MakeSample("hi", "i want thai food", "food", "thai")});
  const TrainResult r = Train(d, d, cfg);
  const Prediction p = PredictSample(r.model, d.samples()[0]);
  EXPECT_TRUE(p.active);
  EXPECT_EQ(p.start, d.samples()[0].span->start);
  EXPECT_EQ(p.end, d.samples()[0].span->end);
}

TEST(TrainTest, SameSeedSameModel) {
  TrackerConfig cfg = TinyConfig();
  cfg.dropout = 0.3;
  const Dataset d = ToySet();
  const TrainResult a = Train(d, d, cfg);
  const TrainResult b = Train(d, d, cfg);
  std::ostringstream sa, sb;
  SaveCheckpoint(a.model, sa);
  SaveCheckpoint(b.model, sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(TrainTest, PredictIsThreadCountInvariant) {
  TrackerConfig cfg = TinyConfig();
  const Dataset d = ToySet();
  const TrackerModel m = InitModel(d, cfg);
  const auto one = Predict(d, m, 1);
  const auto three = Predict(d, m, 3);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].scores_p, three[i].scores_p);
    EXPECT_EQ(one[i].cls_prob, three[i].cls_prob);
  }
}

TEST(TrainTest, DivergenceRaisesNumericError) {
  TrackerConfig cfg = TinyConfig();
  cfg.lr = 1e300;
  cfg.epochs = 5;
  const Dataset d = ToySet();
  try {
    Train(d, d, cfg);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumeric);
  }
}

TEST(TrainTest, RejectsEmptyInputsAndBadConfig) {
  const Dataset d = ToySet();
  EXPECT_THROW(Train(Dataset(), d, TinyConfig()), Error);
  EXPECT_THROW(Train(d, Dataset(), TinyConfig()), Error);
  TrackerConfig bad = TinyConfig();
  bad.d_h = 7;
  EXPECT_THROW(bad.Validate(), Error);
  bad = TinyConfig();
  bad.dropout = 1.0;
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  TrackerConfig cfg = TinyConfig();
  cfg.lr = 0.1;
  Rng rng(1);
  TrackerParams p = TrackerParams::Random(cfg, 6, 1, rng);
  const TrackerParams before = p;
  Gradients g = Gradients::Zeros(cfg, 6, 1);
  g.dense.lin_p.w.setConstant(2.0);
  g.word_rows[3] = RowVector::Constant(cfg.d_emb, -0.5);
  AdamOptimizer adam(cfg, p);
  adam.Step(p, g);
  // With bias correction the first update is lr * sign(g) (up to eps).
  EXPECT_NEAR((p.lin_p.w - before.lin_p.w).maxCoeff(), -0.1, 1e-6);
  EXPECT_NEAR((p.lin_p.w - before.lin_p.w).minCoeff(), -0.1, 1e-6);
  EXPECT_NEAR((p.word_emb.row(3) - before.word_emb.row(3)).maxCoeff(), 0.1, 1e-6);
  // Rows without gradient do not move.
  EXPECT_EQ(p.word_emb.row(4), before.word_emb.row(4));
  EXPECT_EQ(p.lin_slot.w, before.lin_slot.w);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(CheckpointTest, RoundTripPreservesPredictions) {
  const Dataset d = ThreeSamples();
  const TrackerModel m = InitModel(d, TinyConfig());
  std::stringstream buf;
  SaveCheckpoint(m, buf);
  const TrackerModel back = LoadCheckpoint(buf);
  EXPECT_EQ(back.words, m.words);
  EXPECT_EQ(back.slots, m.slots);
  EXPECT_EQ(ConfigToJson(back.config), ConfigToJson(m.config));
  for (const Sample& s : d.samples()) {
    EXPECT_EQ(PredictSample(back, s).scores_q, PredictSample(m, s).scores_q);
  }
}

TEST(CheckpointTest, RejectsGarbage) {
  std::stringstream buf("not a checkpoint at all");
  EXPECT_THROW(LoadCheckpoint(buf), Error);
  const TrackerModel m = InitModel(ThreeSamples(), TinyConfig());
  std::stringstream full;
  SaveCheckpoint(m, full);
  std::stringstream cut(full.str().substr(0, full.str().size() / 2));
  EXPECT_THROW(LoadCheckpoint(cut), Error);
}

}  // namespace
}  // namespace copyaug::tracker
