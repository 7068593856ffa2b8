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

// Copy-mechanism slot tracker.
//
// The turn pair is joined as sys ++ <usr> ++ usr, embedded and encoded by a
// one-layer bidirectional LSTM into H (one row per token). A slot embedding
// is projected into a pointer query; a dot-product attention head over H
// yields the start distribution, and a second query built from the slot
// encoding and the start head's context vector yields the end distribution
// through the same head. A separate attention head feeds a logistic slot
// gate.
//
// Row-vector convention throughout: Linear(x) = x W + b.

#ifndef COPYAUG_TRACKER_MODEL_H_
#define COPYAUG_TRACKER_MODEL_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copyaug/corpus.h"
#include "copyaug/prediction.h"
#include "copyaug/randgen.h"
#include "copyaug/tracker/vocab.h"

namespace copyaug::tracker {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

struct TrackerConfig {
  int d_emb = 300;
  // Width of H; each LSTM direction has d_h / 2 units.
  int d_h = 256;
  double dropout = 0.5;
  double lr = 1e-4;
  int epochs = 80;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Global gradient-norm clip; 0 disables.
  double clip_norm = 0.0;
  double init_range = 0.1;

  // Throws kConfig on invalid values.
  void Validate() const;
};

struct LstmParams {
  Matrix wx;  // in x 4h, gate blocks ordered i, f, g, o
  Matrix wh;  // h x 4h
  Matrix b;   // 1 x 4h
};

struct AttentionParams {
  Matrix wq;  // d_q x d_a
  Matrix bq;  // 1 x d_a
  Matrix wv;  // d_h x d_a
  Matrix bv;  // 1 x d_a
};

struct LinearParams {
  Matrix w;  // in x out
  Matrix b;  // 1 x out
};

struct TrackerParams {
  Matrix word_emb;  // |V| x d_emb
  Matrix slot_emb;  // |S| x d_emb
  LstmParams fwd;
  LstmParams bwd;
  AttentionParams span_head;
  AttentionParams cls_head;
  LinearParams lin_slot;  // d_emb -> d_emb
  LinearParams lin_p;     // d_emb -> d_emb
  LinearParams lin_q;     // d_emb + d_h -> d_emb
  LinearParams lin_cls1;  // d_emb -> d_emb
  LinearParams lin_cls2;  // d_h -> 1

  // Zero tensors with the shapes of a model over |V| words and |S| slots.
  static TrackerParams Zeros(const TrackerConfig& cfg, int vocab_size,
                             int slot_count);
  static TrackerParams Random(const TrackerConfig& cfg, int vocab_size,
                              int slot_count, Rng& rng);

  // Visits every tensor under a stable name, in a stable order.
  void ForEach(const std::function<void(std::string_view, Matrix&)>& fn);
  void ForEach(
      const std::function<void(std::string_view, const Matrix&)>& fn) const;

  bool AllFinite() const;
};

// Gradient of the loss. Word-embedding rows are kept sparse; everything
// else has the same layout as TrackerParams (dense.word_emb stays empty).
struct Gradients {
  TrackerParams dense;
  std::unordered_map<int, RowVector> word_rows;

  static Gradients Zeros(const TrackerConfig& cfg, int vocab_size,
                         int slot_count);
  void SetZero();
  void Scale(double factor);
  double SquaredNorm() const;
};

// Model = config + vocabularies + parameters. Immutable once trained.
struct TrackerModel {
  TrackerConfig config;
  Vocabulary words;
  Vocabulary slots;
  TrackerParams params;
};

// Builds vocabularies from the training set and initializes parameters.
TrackerModel InitModel(const Dataset& train, const TrackerConfig& cfg);

struct AttentionResult {
  RowVector contexts;  // 1 x d_a
  Eigen::VectorXd scores;
};

// softmax((Q Wq + bq) (V Wv + bv)^T); contexts = scores^T (V Wv + bv).
AttentionResult Attend(const RowVector& query, const Matrix& values,
                       const AttentionParams& head);

// H with one row per token of the joined sequence. `dropout_rng` non-null
// enables embedding dropout.
Matrix Encode(const TrackerModel& model, const Utterance& utterance,
              Rng* dropout_rng = nullptr);

struct SpanScores {
  int start = 0;
  int end = 0;
  Eigen::VectorXd scores_p;
  Eigen::VectorXd scores_q;
};

SpanScores PredictSpan(const RowVector& slot_emb, const Matrix& hidden,
                       const TrackerParams& params);

double Gate(const RowVector& slot_emb, const Matrix& hidden,
            const TrackerParams& params);

// Full forward pass with dropout off.
Prediction PredictSample(const TrackerModel& model, const Sample& sample);

// Loss for one sample: CE(start) + CE(end) when the sample has a span, plus
// gate binary cross-entropy. Accumulates d(loss)/d(params) into `grads` when
// non-null. `dropout_rng` non-null enables dropout.
double SampleLossAndGradient(const TrackerModel& model, const Sample& sample,
                             Gradients* grads, Rng* dropout_rng = nullptr);

}  // namespace copyaug::tracker

#endif  // COPYAUG_TRACKER_MODEL_H_
