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

#include "copyaug/tracker/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "copyaug/error.h"
#include "copyaug/eval.h"

namespace copyaug::tracker {
namespace {

void NumericFailure(int epoch, long step, const std::string& what) {
  std::ostringstream msg;
  msg << "training diverged at epoch " << epoch << " step " << step << ": "
      << what;
  Fail(ErrorCode::kNumeric, msg.str());
}

}  // namespace

AdamOptimizer::AdamOptimizer(const TrackerConfig& cfg,
                             const TrackerParams& params)
    : lr_(cfg.lr),
      beta1_(cfg.adam_beta1),
      beta2_(cfg.adam_beta2),
      eps_(cfg.adam_eps) {
  m_ = TrackerParams::Zeros(cfg, 0, static_cast<int>(params.slot_emb.rows()));
  v_ = m_;
}

void AdamOptimizer::Step(TrackerParams& params, const Gradients& grads) {
  ++step_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  const double step_size = lr_ / bc1;
  const double sqrt_bc2 = std::sqrt(bc2);

  // Walk params, grads and both moment sets in lockstep.
  std::vector<Matrix*> p_list;
  std::vector<const Matrix*> g_list;
  std::vector<Matrix*> m_list;
  std::vector<Matrix*> v_list;
  params.ForEach([&](std::string_view name, Matrix& m) {
    if (name != "word_emb") p_list.push_back(&m);
  });
  grads.dense.ForEach([&](std::string_view name, const Matrix& m) {
    if (name != "word_emb") g_list.push_back(&m);
  });
  m_.ForEach([&](std::string_view name, Matrix& m) {
    if (name != "word_emb") m_list.push_back(&m);
  });
  v_.ForEach([&](std::string_view name, Matrix& m) {
    if (name != "word_emb") v_list.push_back(&m);
  });
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    const Matrix& g = *g_list[k];
    Matrix& m = *m_list[k];
    Matrix& v = *v_list[k];
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseAbs2();
    p_list[k]->array() -=
        step_size * m.array() / (v.array().sqrt() / sqrt_bc2 + eps_);
  }

  const Eigen::Index width = params.word_emb.cols();
  for (const auto& [id, g] : grads.word_rows) {
    auto [it, inserted] = word_moments_.try_emplace(
        id, RowVector::Zero(width), RowVector::Zero(width));
    RowVector& m = it->second.first;
    RowVector& v = it->second.second;
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseAbs2();
    params.word_emb.row(id).array() -=
        step_size * m.array() / (v.array().sqrt() / sqrt_bc2 + eps_);
  }
}

double BatchLossAndGradient(const TrackerModel& model,
                            const std::vector<Sample>& samples,
                            Gradients* grads) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : samples) total += SampleLossAndGradient(model, s, grads);
  const double scale = 1.0 / static_cast<double>(samples.size());
  if (grads != nullptr) grads->Scale(scale);
  return total * scale;
}

std::vector<Prediction> Predict(const Dataset& data, const TrackerModel& model,
                                int threads) {
  const auto& samples = data.samples();
  std::vector<Prediction> preds(samples.size());
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)),
                               samples.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      preds[i] = PredictSample(model, samples[i]);
    }
    return preds;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < samples.size(); i += workers) {
          preds[i] = PredictSample(model, samples[i]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return preds;
}

TrainResult Train(const Dataset& train, const Dataset& dev,
                  const TrackerConfig& cfg, const TrainOptions& options) {
  if (train.empty()) Fail(ErrorCode::kArgument, "train: empty training set");
  if (dev.empty()) Fail(ErrorCode::kArgument, "train: empty dev set");
  auto log = [&](const std::string& line) {
    if (options.log) options.log(line);
  };
  if (train.ActiveCount() == 0) {
    log("warning: training set has no active samples; gate-only training");
  }

  TrackerModel model = InitModel(train, cfg);
  AdamOptimizer adam(cfg, model.params);
  Gradients grads = Gradients::Zeros(cfg, model.words.size(), model.slots.size());

  TrainResult result;
  result.model = model;
  double best_f1 = -1.0;
  const auto& samples = train.samples();
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(DeriveSeed(cfg.seed, {0x5f, static_cast<std::uint64_t>(epoch)}));
    Rng dropout_rng(DeriveSeed(cfg.seed, {0xd0, static_cast<std::uint64_t>(epoch)}));
    shuffle_rng.Shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += batch) {
      const std::size_t hi = std::min(order.size(), lo + batch);
      grads.SetZero();
      double batch_loss = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        batch_loss +=
            SampleLossAndGradient(model, samples[order[k]], &grads, &dropout_rng);
      }
      if (!std::isfinite(batch_loss)) {
        NumericFailure(epoch, adam.steps() + 1, "non-finite loss");
      }
      loss_sum += batch_loss;
      grads.Scale(1.0 / static_cast<double>(hi - lo));
      const double norm2 = grads.SquaredNorm();
      if (!std::isfinite(norm2)) {
        NumericFailure(epoch, adam.steps() + 1, "non-finite gradient");
      }
      if (cfg.clip_norm > 0.0 && norm2 > cfg.clip_norm * cfg.clip_norm) {
        grads.Scale(cfg.clip_norm / std::sqrt(norm2));
      }
      adam.Step(model.params, grads);
    }
    if (!model.params.AllFinite()) {
      NumericFailure(epoch, adam.steps(), "non-finite parameter");
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(samples.size());
    rec.dev_f1 = Score(Predict(dev, model), dev).f1;
    result.history.push_back(rec);
    if (rec.dev_f1 > best_f1) {
      best_f1 = rec.dev_f1;
      result.model = model;
      result.best_epoch = epoch;
    }
    std::ostringstream line;
    line << "epoch " << epoch << " loss " << rec.train_loss << " dev_f1 "
         << rec.dev_f1;
    log(line.str());
    if (options.on_epoch) options.on_epoch(rec);
  }
  return result;
}

}  // namespace copyaug::tracker
