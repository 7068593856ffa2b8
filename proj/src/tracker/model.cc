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

#include "copyaug/tracker/model.h"

#include <cmath>

#include "copyaug/error.h"

namespace copyaug::tracker {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

double LogSumExp(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  return m + std::log((logits.array() - m).exp().sum());
}

int ArgMax(const Eigen::VectorXd& v) {
  Eigen::Index idx = 0;
  v.maxCoeff(&idx);
  return static_cast<int>(idx);
}

void FillUniform(Matrix& m, double range, Rng& rng) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = (2.0 * rng.UniformReal() - 1.0) * range;
    }
  }
}

// ---------------------------------------------------------------------------
// LSTM

struct LstmCache {
  Matrix x;       // L x in
  Matrix gates;   // L x 4h, post-activation
  Matrix c;       // L x h
  Matrix tanh_c;  // L x h
  Matrix h;       // L x h
  bool reverse = false;
};

void LstmForward(const LstmParams& p, const Matrix& x, bool reverse,
                 LstmCache& cache) {
  const Eigen::Index len = x.rows();
  const Eigen::Index hs = p.wh.rows();
  cache.x = x;
  cache.reverse = reverse;
  cache.gates.resize(len, 4 * hs);
  cache.c.resize(len, hs);
  cache.tanh_c.resize(len, hs);
  cache.h.resize(len, hs);

  Matrix z_in = x * p.wx;
  z_in.rowwise() += p.b.row(0);
  RowVector h_prev = RowVector::Zero(hs);
  RowVector c_prev = RowVector::Zero(hs);
  for (Eigen::Index k = 0; k < len; ++k) {
    const Eigen::Index t = reverse ? len - 1 - k : k;
    RowVector z = z_in.row(t) + h_prev * p.wh;
    for (Eigen::Index j = 0; j < hs; ++j) {
      z(j) = Sigmoid(z(j));
      z(hs + j) = Sigmoid(z(hs + j));
      z(2 * hs + j) = std::tanh(z(2 * hs + j));
      z(3 * hs + j) = Sigmoid(z(3 * hs + j));
    }
    const auto i = z.segment(0, hs).array();
    const auto f = z.segment(hs, hs).array();
    const auto g = z.segment(2 * hs, hs).array();
    const auto o = z.segment(3 * hs, hs).array();
    RowVector c = (f * c_prev.array() + i * g).matrix();
    RowVector tc = c.array().tanh().matrix();
    RowVector h = (o * tc.array()).matrix();
    cache.gates.row(t) = z;
    cache.c.row(t) = c;
    cache.tanh_c.row(t) = tc;
    cache.h.row(t) = h;
    h_prev = h;
    c_prev = c;
  }
}

// Returns dL/dx and accumulates parameter gradients.
Matrix LstmBackward(const LstmParams& p, const LstmCache& cache,
                    const Matrix& d_h, LstmParams& grad) {
  const Eigen::Index len = cache.x.rows();
  const Eigen::Index hs = p.wh.rows();
  Matrix dz(len, 4 * hs);
  Matrix h_prev_rows = Matrix::Zero(len, hs);
  RowVector dh_next = RowVector::Zero(hs);
  RowVector dc_next = RowVector::Zero(hs);
  for (Eigen::Index k = 0; k < len; ++k) {
    // Walk opposite to the forward direction.
    const Eigen::Index t = cache.reverse ? k : len - 1 - k;
    const Eigen::Index tp = cache.reverse ? t + 1 : t - 1;
    const bool has_prev = tp >= 0 && tp < len;
    RowVector c_prev = RowVector::Zero(hs);
    if (has_prev) {
      c_prev = cache.c.row(tp);
      h_prev_rows.row(t) = cache.h.row(tp);
    }

    const auto gates = cache.gates.row(t);
    const auto i = gates.segment(0, hs).array();
    const auto f = gates.segment(hs, hs).array();
    const auto g = gates.segment(2 * hs, hs).array();
    const auto o = gates.segment(3 * hs, hs).array();
    const auto tc = cache.tanh_c.row(t).array();

    const Eigen::ArrayXXd dh = (d_h.row(t) + dh_next).array();
    const Eigen::ArrayXXd d_o = dh * tc;
    const Eigen::ArrayXXd dc = dc_next.array() + dh * o * (1.0 - tc.square());
    const Eigen::ArrayXXd d_i = dc * g;
    const Eigen::ArrayXXd d_g = dc * i;
    const Eigen::ArrayXXd d_f = dc * c_prev.array();
    dc_next = (dc * f).matrix();

    dz.row(t).segment(0, hs) = (d_i * i * (1.0 - i)).matrix();
    dz.row(t).segment(hs, hs) = (d_f * f * (1.0 - f)).matrix();
    dz.row(t).segment(2 * hs, hs) = (d_g * (1.0 - g.square())).matrix();
    dz.row(t).segment(3 * hs, hs) = (d_o * o * (1.0 - o)).matrix();
    dh_next = dz.row(t) * p.wh.transpose();
  }
  grad.wx.noalias() += cache.x.transpose() * dz;
  grad.wh.noalias() += h_prev_rows.transpose() * dz;
  grad.b += dz.colwise().sum();
  return dz * p.wx.transpose();
}

// ---------------------------------------------------------------------------
// Attention

struct AttentionCache {
  RowVector query;   // 1 x d_q
  RowVector qprime;  // 1 x d_a
  Eigen::VectorXd logits;
  Eigen::VectorXd scores;
  RowVector contexts;
};

Matrix ProjectValues(const Matrix& values, const AttentionParams& head) {
  Matrix v = values * head.wv;
  v.rowwise() += head.bv.row(0);
  return v;
}

void AttendProjected(const RowVector& query, const Matrix& vprime,
                     const AttentionParams& head, AttentionCache& cache) {
  cache.query = query;
  cache.qprime = query * head.wq + head.bq;
  cache.logits = vprime * cache.qprime.transpose();
  cache.scores = Softmax(cache.logits);
  cache.contexts = cache.scores.transpose() * vprime;
}

// d_logits_direct is a gradient on the logits from a loss applied directly
// to the distribution (may be empty). Accumulates head gradients and
// d(vprime); returns d(query).
RowVector AttentionBackward(const AttentionParams& head,
                            const AttentionCache& cache, const Matrix& vprime,
                            const RowVector* d_contexts,
                            const Eigen::VectorXd* d_logits_direct,
                            AttentionParams& grad, Matrix& d_vprime) {
  Eigen::VectorXd d_logits = Eigen::VectorXd::Zero(cache.scores.size());
  if (d_contexts != nullptr) {
    Eigen::VectorXd d_scores = vprime * d_contexts->transpose();
    const double dot = cache.scores.dot(d_scores);
    d_logits.array() += cache.scores.array() * (d_scores.array() - dot);
    d_vprime.noalias() += cache.scores * (*d_contexts);
  }
  if (d_logits_direct != nullptr) d_logits += *d_logits_direct;
  d_vprime.noalias() += d_logits * cache.qprime;
  RowVector d_qprime = d_logits.transpose() * vprime;
  grad.wq.noalias() += cache.query.transpose() * d_qprime;
  grad.bq += d_qprime;
  return d_qprime * head.wq.transpose();
}

void ValuesBackward(const AttentionParams& head, const Matrix& values,
                    const Matrix& d_vprime, AttentionParams& grad,
                    Matrix& d_values) {
  grad.wv.noalias() += values.transpose() * d_vprime;
  grad.bv += d_vprime.colwise().sum();
  d_values.noalias() += d_vprime * head.wv.transpose();
}

RowVector LinearForward(const LinearParams& p, const RowVector& x) {
  return x * p.w + p.b;
}

RowVector LinearBackward(const LinearParams& p, const RowVector& x,
                         const RowVector& dy, LinearParams& grad) {
  grad.w.noalias() += x.transpose() * dy;
  grad.b += dy;
  return dy * p.w.transpose();
}

// ---------------------------------------------------------------------------
// Full forward pass

struct ForwardCache {
  std::vector<int> ids;
  Matrix dropout_mask;  // empty when dropout is off
  LstmCache fwd;
  LstmCache bwd;
  Matrix hidden;  // L x d_h

  int slot_id = 0;
  RowVector s_emb;
  RowVector s_enc;
  RowVector p_enc;
  RowVector q_in;
  RowVector q_enc;
  RowVector s_cls;
  Matrix span_v;  // projected values of the span head
  Matrix cls_v;   // projected values of the gate head
  AttentionCache attn_p;
  AttentionCache attn_q;
  AttentionCache attn_cls;
  double gate_logit = 0.0;
};

std::vector<int> TokenIds(const TrackerModel& model, const Utterance& u) {
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(u.JoinedLength()));
  for (const auto& t : u.sys) ids.push_back(model.words.WordId(t));
  ids.push_back(model.words.WordId(kUsrToken));
  for (const auto& t : u.usr) ids.push_back(model.words.WordId(t));
  return ids;
}

int SlotId(const TrackerModel& model, const std::string& slot) {
  auto id = model.slots.Find(slot);
  if (!id) Fail(ErrorCode::kArgument, "slot '" + slot + "' unknown to the model");
  return *id;
}

void EncodeInto(const TrackerModel& model, const Utterance& u, Rng* dropout_rng,
                ForwardCache& cache) {
  const auto& p = model.params;
  cache.ids = TokenIds(model, u);
  const auto len = static_cast<Eigen::Index>(cache.ids.size());
  Matrix x(len, p.word_emb.cols());
  for (Eigen::Index t = 0; t < len; ++t) x.row(t) = p.word_emb.row(cache.ids[t]);
  const double rate = model.config.dropout;
  if (dropout_rng != nullptr && rate > 0.0) {
    cache.dropout_mask.resize(x.rows(), x.cols());
    const double keep_scale = 1.0 / (1.0 - rate);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        cache.dropout_mask(r, c) =
            dropout_rng->UniformReal() < rate ? 0.0 : keep_scale;
      }
    }
    x.array() *= cache.dropout_mask.array();
  } else {
    cache.dropout_mask.resize(0, 0);
  }
  LstmForward(p.fwd, x, /*reverse=*/false, cache.fwd);
  LstmForward(p.bwd, x, /*reverse=*/true, cache.bwd);
  cache.hidden.resize(len, cache.fwd.h.cols() + cache.bwd.h.cols());
  cache.hidden << cache.fwd.h, cache.bwd.h;
}

void HeadsForward(const TrackerParams& p, const RowVector& s_emb,
                  ForwardCache& cache) {
  cache.s_emb = s_emb;
  cache.s_enc = LinearForward(p.lin_slot, s_emb);
  cache.p_enc = LinearForward(p.lin_p, cache.s_enc);
  cache.span_v = ProjectValues(cache.hidden, p.span_head);
  AttendProjected(cache.p_enc, cache.span_v, p.span_head, cache.attn_p);
  cache.q_in.resize(cache.s_enc.size() + cache.attn_p.contexts.size());
  cache.q_in << cache.s_enc, cache.attn_p.contexts;
  cache.q_enc = LinearForward(p.lin_q, cache.q_in);
  AttendProjected(cache.q_enc, cache.span_v, p.span_head, cache.attn_q);

  cache.s_cls = LinearForward(p.lin_cls1, s_emb);
  cache.cls_v = ProjectValues(cache.hidden, p.cls_head);
  AttendProjected(cache.s_cls, cache.cls_v, p.cls_head, cache.attn_cls);
  cache.gate_logit = LinearForward(p.lin_cls2, cache.attn_cls.contexts)(0);
}

void RequireNonEmpty(const Utterance& u) {
  // The separator alone is a valid (length-1) sequence, but a turn pair with
  // no words at all carries nothing to encode.
  if (u.sys.empty() && u.usr.empty()) {
    Fail(ErrorCode::kArgument, "encode: empty utterance");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void TrackerConfig::Validate() const {
  auto bad = [](const std::string& what) {
    Fail(ErrorCode::kConfig, "tracker config: " + what);
  };
  if (d_emb < 1) bad("d_emb must be positive");
  if (d_h < 2 || d_h % 2 != 0) bad("d_h must be a positive even number");
  if (!(dropout >= 0.0 && dropout < 1.0)) bad("dropout must be in [0, 1)");
  if (!(lr > 0.0)) bad("lr must be positive");
  if (epochs < 1) bad("epochs must be positive");
  if (batch_size < 1) bad("batch_size must be positive");
  if (!(adam_eps > 0.0)) bad("adam_eps must be positive");
  if (clip_norm < 0.0) bad("clip_norm must be >= 0");
}

TrackerParams TrackerParams::Zeros(const TrackerConfig& cfg, int vocab_size,
                                   int slot_count) {
  const int e = cfg.d_emb;
  const int dh = cfg.d_h;
  const int h = cfg.d_h / 2;
  TrackerParams p;
  p.word_emb = Matrix::Zero(vocab_size, e);
  p.slot_emb = Matrix::Zero(slot_count, e);
  for (LstmParams* l : {&p.fwd, &p.bwd}) {
    l->wx = Matrix::Zero(e, 4 * h);
    l->wh = Matrix::Zero(h, 4 * h);
    l->b = Matrix::Zero(1, 4 * h);
  }
  for (AttentionParams* a : {&p.span_head, &p.cls_head}) {
    a->wq = Matrix::Zero(e, dh);
    a->bq = Matrix::Zero(1, dh);
    a->wv = Matrix::Zero(dh, dh);
    a->bv = Matrix::Zero(1, dh);
  }
  auto linear = [](LinearParams& l, int in, int out) {
    l.w = Matrix::Zero(in, out);
    l.b = Matrix::Zero(1, out);
  };
  linear(p.lin_slot, e, e);
  linear(p.lin_p, e, e);
  linear(p.lin_q, e + dh, e);
  linear(p.lin_cls1, e, e);
  linear(p.lin_cls2, dh, 1);
  return p;
}

TrackerParams TrackerParams::Random(const TrackerConfig& cfg, int vocab_size,
                                    int slot_count, Rng& rng) {
  TrackerParams p = Zeros(cfg, vocab_size, slot_count);
  FillUniform(p.word_emb, cfg.init_range, rng);
  FillUniform(p.slot_emb, cfg.init_range, rng);
  p.word_emb.row(Vocabulary::kPadId).setZero();
  const double lstm_range = 1.0 / std::sqrt(static_cast<double>(cfg.d_h / 2));
  for (LstmParams* l : {&p.fwd, &p.bwd}) {
    FillUniform(l->wx, lstm_range, rng);
    FillUniform(l->wh, lstm_range, rng);
    FillUniform(l->b, lstm_range, rng);
  }
  for (AttentionParams* a : {&p.span_head, &p.cls_head}) {
    const double rq = 1.0 / std::sqrt(static_cast<double>(a->wq.rows()));
    const double rv = 1.0 / std::sqrt(static_cast<double>(a->wv.rows()));
    FillUniform(a->wq, rq, rng);
    FillUniform(a->bq, rq, rng);
    FillUniform(a->wv, rv, rng);
    FillUniform(a->bv, rv, rng);
  }
  for (LinearParams* l :
       {&p.lin_slot, &p.lin_p, &p.lin_q, &p.lin_cls1, &p.lin_cls2}) {
    const double r = 1.0 / std::sqrt(static_cast<double>(l->w.rows()));
    FillUniform(l->w, r, rng);
    FillUniform(l->b, r, rng);
  }
  return p;
}

void TrackerParams::ForEach(
    const std::function<void(std::string_view, Matrix&)>& fn) {
  fn("word_emb", word_emb);
  fn("slot_emb", slot_emb);
  fn("lstm_fwd.wx", fwd.wx);
  fn("lstm_fwd.wh", fwd.wh);
  fn("lstm_fwd.b", fwd.b);
  fn("lstm_bwd.wx", bwd.wx);
  fn("lstm_bwd.wh", bwd.wh);
  fn("lstm_bwd.b", bwd.b);
  fn("attn_span.wq", span_head.wq);
  fn("attn_span.bq", span_head.bq);
  fn("attn_span.wv", span_head.wv);
  fn("attn_span.bv", span_head.bv);
  fn("attn_cls.wq", cls_head.wq);
  fn("attn_cls.bq", cls_head.bq);
  fn("attn_cls.wv", cls_head.wv);
  fn("attn_cls.bv", cls_head.bv);
  fn("linear_slot.w", lin_slot.w);
  fn("linear_slot.b", lin_slot.b);
  fn("linear_p.w", lin_p.w);
  fn("linear_p.b", lin_p.b);
  fn("linear_q.w", lin_q.w);
  fn("linear_q.b", lin_q.b);
  fn("linear_cls1.w", lin_cls1.w);
  fn("linear_cls1.b", lin_cls1.b);
  fn("linear_cls2.w", lin_cls2.w);
  fn("linear_cls2.b", lin_cls2.b);
}

void TrackerParams::ForEach(
    const std::function<void(std::string_view, const Matrix&)>& fn) const {
  const_cast<TrackerParams*>(this)->ForEach(
      [&fn](std::string_view name, Matrix& m) { fn(name, m); });
}

bool TrackerParams::AllFinite() const {
  bool finite = true;
  ForEach([&finite](std::string_view, const Matrix& m) {
    finite = finite && m.allFinite();
  });
  return finite;
}

Gradients Gradients::Zeros(const TrackerConfig& cfg, int vocab_size,
                           int slot_count) {
  (void)vocab_size;
  Gradients g;
  g.dense = TrackerParams::Zeros(cfg, 0, slot_count);
  return g;
}

void Gradients::SetZero() {
  dense.ForEach([](std::string_view, Matrix& m) { m.setZero(); });
  word_rows.clear();
}

void Gradients::Scale(double factor) {
  dense.ForEach([factor](std::string_view, Matrix& m) { m *= factor; });
  for (auto& [id, row] : word_rows) row *= factor;
}

double Gradients::SquaredNorm() const {
  double total = 0.0;
  dense.ForEach(
      [&total](std::string_view, const Matrix& m) { total += m.squaredNorm(); });
  for (const auto& [id, row] : word_rows) total += row.squaredNorm();
  return total;
}

TrackerModel InitModel(const Dataset& train, const TrackerConfig& cfg) {
  cfg.Validate();
  TrackerModel model;
  model.config = cfg;
  model.words = Vocabulary::ForWords();
  for (const auto& s : train.samples()) {
    for (const auto& t : s.utterance.sys) model.words.Add(t);
    for (const auto& t : s.utterance.usr) model.words.Add(t);
    model.slots.Add(s.slot);
  }
  Rng rng(DeriveSeed(cfg.seed, {0x1417}));
  model.params = TrackerParams::Random(cfg, model.words.size(),
                                       model.slots.size(), rng);
  return model;
}

AttentionResult Attend(const RowVector& query, const Matrix& values,
                       const AttentionParams& head) {
  if (values.rows() < 1) Fail(ErrorCode::kArgument, "attn: empty context");
  AttentionCache cache;
  AttendProjected(query, ProjectValues(values, head), head, cache);
  return {cache.contexts, cache.scores};
}

Matrix Encode(const TrackerModel& model, const Utterance& utterance,
              Rng* dropout_rng) {
  RequireNonEmpty(utterance);
  ForwardCache cache;
  EncodeInto(model, utterance, dropout_rng, cache);
  return cache.hidden;
}

SpanScores PredictSpan(const RowVector& slot_emb, const Matrix& hidden,
                       const TrackerParams& params) {
  ForwardCache cache;
  cache.hidden = hidden;
  HeadsForward(params, slot_emb, cache);
  return {ArgMax(cache.attn_p.scores), ArgMax(cache.attn_q.scores),
          cache.attn_p.scores, cache.attn_q.scores};
}

double Gate(const RowVector& slot_emb, const Matrix& hidden,
            const TrackerParams& params) {
  ForwardCache cache;
  cache.hidden = hidden;
  HeadsForward(params, slot_emb, cache);
  return Sigmoid(cache.gate_logit);
}

Prediction PredictSample(const TrackerModel& model, const Sample& sample) {
  RequireNonEmpty(sample.utterance);
  ForwardCache cache;
  EncodeInto(model, sample.utterance, nullptr, cache);
  const int slot = SlotId(model, sample.slot);
  HeadsForward(model.params, model.params.slot_emb.row(slot), cache);
  Prediction pred;
  pred.cls_prob = Sigmoid(cache.gate_logit);
  pred.active = pred.cls_prob > 0.5;
  pred.start = ArgMax(cache.attn_p.scores);
  pred.end = ArgMax(cache.attn_q.scores);
  pred.scores_p.assign(cache.attn_p.scores.data(),
                       cache.attn_p.scores.data() + cache.attn_p.scores.size());
  pred.scores_q.assign(cache.attn_q.scores.data(),
                       cache.attn_q.scores.data() + cache.attn_q.scores.size());
  return pred;
}

double SampleLossAndGradient(const TrackerModel& model, const Sample& sample,
                             Gradients* grads, Rng* dropout_rng) {
  RequireNonEmpty(sample.utterance);
  const auto& p = model.params;
  ForwardCache cache;
  EncodeInto(model, sample.utterance, dropout_rng, cache);
  cache.slot_id = SlotId(model, sample.slot);
  HeadsForward(p, p.slot_emb.row(cache.slot_id), cache);

  const bool has_span = sample.HasSpan();
  const double y = sample.active ? 1.0 : 0.0;
  double loss = y > 0.5 ? Softplus(-cache.gate_logit) : Softplus(cache.gate_logit);
  if (has_span) {
    loss += LogSumExp(cache.attn_p.logits) - cache.attn_p.logits(sample.span->start);
    loss += LogSumExp(cache.attn_q.logits) - cache.attn_q.logits(sample.span->end);
  }
  if (grads == nullptr) return loss;

  TrackerParams& g = grads->dense;
  const Eigen::Index len = cache.hidden.rows();
  Matrix d_hidden = Matrix::Zero(len, cache.hidden.cols());
  RowVector d_s_emb = RowVector::Zero(cache.s_emb.size());

  // Gate.
  {
    const double d_logit = Sigmoid(cache.gate_logit) - y;
    RowVector d_ctx = LinearBackward(p.lin_cls2, cache.attn_cls.contexts,
                                     RowVector::Constant(1, d_logit), g.lin_cls2);
    Matrix d_vprime = Matrix::Zero(len, cache.cls_v.cols());
    RowVector d_query = AttentionBackward(p.cls_head, cache.attn_cls, cache.cls_v,
                                          &d_ctx, nullptr, g.cls_head, d_vprime);
    ValuesBackward(p.cls_head, cache.hidden, d_vprime, g.cls_head, d_hidden);
    d_s_emb += LinearBackward(p.lin_cls1, cache.s_emb, d_query, g.lin_cls1);
  }

  // Pointer heads.
  if (has_span) {
    Matrix d_vprime = Matrix::Zero(len, cache.span_v.cols());
    Eigen::VectorXd d_end = cache.attn_q.scores;
    d_end(sample.span->end) -= 1.0;
    RowVector d_q_enc = AttentionBackward(p.span_head, cache.attn_q, cache.span_v,
                                          nullptr, &d_end, g.span_head, d_vprime);
    RowVector d_q_in = LinearBackward(p.lin_q, cache.q_in, d_q_enc, g.lin_q);
    const Eigen::Index e = cache.s_enc.size();
    RowVector d_s_enc = d_q_in.head(e);
    RowVector d_ctx_p = d_q_in.tail(d_q_in.size() - e);

    Eigen::VectorXd d_start = cache.attn_p.scores;
    d_start(sample.span->start) -= 1.0;
    RowVector d_p_enc = AttentionBackward(p.span_head, cache.attn_p, cache.span_v,
                                          &d_ctx_p, &d_start, g.span_head, d_vprime);
    d_s_enc += LinearBackward(p.lin_p, cache.s_enc, d_p_enc, g.lin_p);
    ValuesBackward(p.span_head, cache.hidden, d_vprime, g.span_head, d_hidden);
    d_s_emb += LinearBackward(p.lin_slot, cache.s_emb, d_s_enc, g.lin_slot);
  }

  g.slot_emb.row(cache.slot_id) += d_s_emb;

  const Eigen::Index hf = cache.fwd.h.cols();
  Matrix d_x = LstmBackward(p.fwd, cache.fwd, d_hidden.leftCols(hf), g.fwd);
  d_x += LstmBackward(p.bwd, cache.bwd, d_hidden.rightCols(d_hidden.cols() - hf), g.bwd);
  if (cache.dropout_mask.size() > 0) d_x.array() *= cache.dropout_mask.array();
  for (Eigen::Index t = 0; t < len; ++t) {
    auto [it, inserted] = grads->word_rows.try_emplace(cache.ids[t], d_x.row(t));
    if (!inserted) it->second += d_x.row(t);
  }
  return loss;
}

}  // namespace copyaug::tracker
