// Copyright 2026 The Tenyisyl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tenyisyl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tenyisyl/alphabet.hpp"
#include "tenyisyl/text.hpp"

namespace tenyisyl {

// ---------------------------------------------------------------- vocabulary

namespace vocab {

std::size_t id_of(char32_t c) {
  if (alphabet::is_hyphen(c)) return kHyphenId;
  const auto letters = alphabet::letters_in_order();
  const auto pos = letters.find(c);
  if (pos == std::u32string_view::npos) {
    throw std::invalid_argument("vocab: character outside the alphabet");
  }
  return pos + 2;
}

char32_t char_of(std::size_t id) {
  if (id == kHyphenId) return alphabet::kHyphen;
  if (id < 2 || id >= kSize) {
    throw std::invalid_argument("vocab: id without a character");
  }
  return alphabet::letters_in_order()[id - 2];
}

std::vector<std::uint16_t> encode(std::u32string_view surface,
                                  bool keep_hyphens) {
  std::vector<std::uint16_t> ids;
  ids.reserve(surface.size());
  for (char32_t c : surface) {
    if (alphabet::is_hyphen(c) && !keep_hyphens) continue;
    ids.push_back(static_cast<std::uint16_t>(id_of(c)));
  }
  return ids;
}

std::string table() {
  std::u32string chars;
  for (std::size_t id = 1; id < kSize; ++id) chars.push_back(char_of(id));
  return utf8_encode(chars);
}

}  // namespace vocab

// ---------------------------------------------------------------- parameters

void Param::init(const std::string& param_name, std::size_t rows,
                 std::size_t cols) {
  name = param_name;
  value = Tensor(rows, cols);
  grad = Tensor(rows, cols);
  m = Tensor(rows, cols);
  v = Tensor(rows, cols);
}

void init_uniform(Tensor& t, Rng& rng, double lo, double hi) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    t.data()[i] = rng.uniform(lo, hi);
  }
}

void init_glorot(Tensor& t, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
  init_uniform(t, rng, -limit, limit);
}

Adam::Adam(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(const std::vector<Param*>& params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (Param* p : params) {
    double* value = p->value.data();
    double* grad = p->grad.data();
    double* m = p->m.data();
    double* v = p->v.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = grad[i];
      if (!std::isfinite(g)) {
        throw std::runtime_error("adam: non-finite gradient in " + p->name);
      }
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

// ------------------------------------------------------------------- batches

TagExample make_tag_example(const SyllabifiedWord& word) {
  TagExample ex;
  ex.ids = vocab::encode(word.surface, /*keep_hyphens=*/false);
  ex.tags = encode_tags(word);
  return ex;
}

TagExample make_tag_example(std::u32string_view surface) {
  TagExample ex;
  ex.ids = vocab::encode(surface, /*keep_hyphens=*/false);
  return ex;
}

TagBatch make_tag_batch(const std::vector<const TagExample*>& examples) {
  if (examples.empty()) {
    throw std::invalid_argument("make_tag_batch: empty batch");
  }
  TagBatch batch;
  batch.rows = examples.size();
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return examples[a]->ids.size() > examples[b]->ids.size();
                   });
  batch.steps = examples[order.front()]->ids.size();
  if (examples[order.back()]->ids.size() == 0) {
    throw std::invalid_argument("make_tag_batch: empty example");
  }
  batch.ids.assign(batch.rows * batch.steps, vocab::kPad);
  batch.gold.assign(batch.rows * batch.steps, 2);
  batch.lengths.resize(batch.rows);
  batch.source.resize(batch.rows);
  for (std::size_t r = 0; r < batch.rows; ++r) {
    const TagExample& ex = *examples[order[r]];
    batch.source[r] = order[r];
    batch.lengths[r] = ex.ids.size();
    if (!ex.tags.empty() && ex.tags.size() != ex.ids.size()) {
      throw std::invalid_argument("make_tag_batch: tag/id length mismatch");
    }
    for (std::size_t t = 0; t < ex.ids.size(); ++t) {
      batch.ids[r * batch.steps + t] = ex.ids[t];
      if (!ex.tags.empty()) {
        batch.gold[r * batch.steps + t] = ex.tags[t] == kTagStart ? 0 : 1;
      }
    }
  }
  batch.live.resize(batch.steps);
  for (std::size_t t = 0; t < batch.steps; ++t) {
    std::size_t n = 0;
    while (n < batch.rows && batch.lengths[n] > t) ++n;
    batch.live[t] = n;
  }
  return batch;
}

TagBatch make_tag_batch(const std::vector<TagExample>& examples,
                        std::size_t first, std::size_t count) {
  std::vector<const TagExample*> view;
  view.reserve(count);
  for (std::size_t i = first; i < first + count; ++i) {
    view.push_back(&examples[i]);
  }
  return make_tag_batch(view);
}

// ----------------------------------------------------------------- lstm cells

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One LSTM direction over a padded batch. The time axis is walked forward
// or in reverse; at step t only the first live[t] rows are touched, which
// both skips pad work and gives the reversed direction a zero initial state
// at each row's true last character.
struct LstmCells {
  const Tensor& w;  // embed×4H, gate order i f g o
  const Tensor& u;  // H×4H
  const Tensor& b;  // 1×4H
  bool reversed;
  std::size_t hid;

  std::vector<Tensor> act;     // per step, B×4H post-activation gates
  std::vector<Tensor> cell;    // per step, B×H
  std::vector<Tensor> hidden;  // per step, B×H

  LstmCells(const Tensor& w_in, const Tensor& u_in, const Tensor& b_in,
            bool reversed_in)
      : w(w_in), u(u_in), b(b_in), reversed(reversed_in), hid(u_in.rows()) {}

  void forward(const std::vector<Tensor>& x,
               const std::vector<std::size_t>& live) {
    const std::size_t steps = x.size();
    const std::size_t rows = x[0].rows();
    act.assign(steps, Tensor(rows, 4 * hid));
    cell.assign(steps, Tensor(rows, hid));
    hidden.assign(steps, Tensor(rows, hid));
    const Tensor* h_prev = nullptr;
    const Tensor* c_prev = nullptr;
    for (std::size_t k = 0; k < steps; ++k) {
      const std::size_t t = reversed ? steps - 1 - k : k;
      const std::size_t m = live[t];
      Tensor& g = act[t];
      lin::matmul(x[t], w, g, false, m);
      lin::add_row(g, b, m);
      if (h_prev != nullptr) lin::matmul(*h_prev, u, g, true, m);
      for (std::size_t r = 0; r < m; ++r) {
        double* gr = g.row(r);
        double* cr = cell[t].row(r);
        double* hr = hidden[t].row(r);
        const double* cp = c_prev != nullptr ? c_prev->row(r) : nullptr;
        for (std::size_t j = 0; j < hid; ++j) {
          const double gi = sigmoid(gr[j]);
          const double gf = sigmoid(gr[hid + j]);
          const double gg = std::tanh(gr[2 * hid + j]);
          const double go = sigmoid(gr[3 * hid + j]);
          gr[j] = gi;
          gr[hid + j] = gf;
          gr[2 * hid + j] = gg;
          gr[3 * hid + j] = go;
          const double c = gf * (cp != nullptr ? cp[j] : 0.0) + gi * gg;
          cr[j] = c;
          hr[j] = go * std::tanh(c);
        }
      }
      h_prev = &hidden[t];
      c_prev = &cell[t];
    }
  }

  // dh_out: head gradient per step. dx accumulates input gradients; dw, du,
  // dbias accumulate parameter gradients.
  void backward(const std::vector<Tensor>& x,
                const std::vector<Tensor>& dh_out, std::vector<Tensor>& dx,
                const std::vector<std::size_t>& live, Tensor& dw, Tensor& du,
                Tensor& dbias) {
    const std::size_t steps = x.size();
    const std::size_t rows = x[0].rows();
    const Tensor wt = lin::transposed(w);
    const Tensor ut = lin::transposed(u);
    Tensor dh_carry(rows, hid);
    Tensor dc_carry(rows, hid);
    Tensor dgates(rows, 4 * hid);
    for (std::size_t k = steps; k-- > 0;) {
      const std::size_t t = reversed ? steps - 1 - k : k;
      const std::size_t m = live[t];
      const std::size_t t_prev = reversed ? t + 1 : t - 1;
      const Tensor* c_prev = k > 0 ? &cell[t_prev] : nullptr;
      for (std::size_t r = 0; r < m; ++r) {
        const double* gr = act[t].row(r);
        const double* cr = cell[t].row(r);
        const double* cp = c_prev != nullptr ? c_prev->row(r) : nullptr;
        const double* dh_head = dh_out[t].row(r);
        double* dhc = dh_carry.row(r);
        double* dcc = dc_carry.row(r);
        double* dg = dgates.row(r);
        for (std::size_t j = 0; j < hid; ++j) {
          const double gi = gr[j];
          const double gf = gr[hid + j];
          const double gg = gr[2 * hid + j];
          const double go = gr[3 * hid + j];
          const double tc = std::tanh(cr[j]);
          const double dh = dh_head[j] + dhc[j];
          const double dout = dh * tc;
          double dc = dh * go * (1.0 - tc * tc) + dcc[j];
          const double df = dc * (cp != nullptr ? cp[j] : 0.0);
          const double di = dc * gg;
          const double dgg = dc * gi;
          dcc[j] = dc * gf;
          dg[j] = di * gi * (1.0 - gi);
          dg[hid + j] = df * gf * (1.0 - gf);
          dg[2 * hid + j] = dgg * (1.0 - gg * gg);
          dg[3 * hid + j] = dout * go * (1.0 - go);
        }
      }
      lin::matmul_tn(x[t], dgates, dw, true, m);
      if (k > 0) lin::matmul_tn(hidden[t_prev], dgates, du, true, m);
      for (std::size_t r = 0; r < m; ++r) {
        const double* dg = dgates.row(r);
        double* dbr = dbias.data();
        for (std::size_t j = 0; j < 4 * hid; ++j) dbr[j] += dg[j];
      }
      lin::matmul(dgates, wt, dx[t], true, m);
      lin::matmul(dgates, ut, dh_carry, false, m);
    }
  }
};

}  // namespace

// ------------------------------------------------------------- tagger model

std::string to_string(TaggerKind kind) {
  switch (kind) {
    case TaggerKind::kLstm: return "lstm";
    case TaggerKind::kBlstm: return "blstm";
    case TaggerKind::kBlstmCrf: return "blstm-crf";
  }
  throw std::logic_error("to_string: bad tagger kind");
}

TaggerKind tagger_kind_from_string(const std::string& name) {
  if (name == "lstm") return TaggerKind::kLstm;
  if (name == "blstm") return TaggerKind::kBlstm;
  if (name == "blstm-crf") return TaggerKind::kBlstmCrf;
  throw std::invalid_argument("unknown tagger kind: " + name);
}

TaggerModel::TaggerModel(TaggerKind kind, TaggerDims dims, std::uint64_t seed)
    : kind_(kind), dims_(dims) {
  Rng rng(seed);
  const std::size_t h = dims.hidden;
  const bool bidir = kind != TaggerKind::kLstm;
  const std::size_t head_in = bidir ? 2 * h : h;

  embedding_.init("embedding", dims.vocab, dims.embed);
  init_uniform(embedding_.value, rng, -0.05, 0.05);

  auto init_direction = [&](Param& pw, Param& pu, Param& pb,
                            const std::string& prefix) {
    pw.init(prefix + ".w", dims.embed, 4 * h);
    pu.init(prefix + ".u", h, 4 * h);
    pb.init(prefix + ".b", 1, 4 * h);
    init_glorot(pw.value, rng);
    init_glorot(pu.value, rng);
    for (std::size_t j = 0; j < h; ++j) pb.value(0, h + j) = 1.0;
  };
  init_direction(fwd_w_, fwd_u_, fwd_b_, bidir ? "lstm_fwd" : "lstm");
  if (bidir) init_direction(bwd_w_, bwd_u_, bwd_b_, "lstm_bwd");

  dense_w_.init("dense.w", head_in, dims.classes);
  dense_b_.init("dense.b", 1, dims.classes);
  init_glorot(dense_w_.value, rng);

  if (kind == TaggerKind::kBlstmCrf) {
    const std::size_t n = dims.classes;
    crf_kernel_.init("crf.kernel", n, n);
    crf_chain_.init("crf.chain", n, n);
    crf_bias_.init("crf.bias", 1, n);
    crf_left_.init("crf.left", 1, n);
    crf_right_.init("crf.right", 1, n);
    for (std::size_t j = 0; j < n; ++j) crf_kernel_.value(j, j) = 1.0;
  }
}

std::vector<Param*> TaggerModel::trainable() {
  std::vector<Param*> out;
  for (Param* p : {&embedding_, &fwd_w_, &fwd_u_, &fwd_b_, &bwd_w_, &bwd_u_,
                   &bwd_b_, &dense_w_, &dense_b_, &crf_kernel_, &crf_chain_,
                   &crf_bias_, &crf_left_, &crf_right_}) {
    if (!p->empty()) out.push_back(p);
  }
  return out;
}

std::vector<const Param*> TaggerModel::trainable() const {
  std::vector<const Param*> out;
  for (const Param* p :
       {&embedding_, &fwd_w_, &fwd_u_, &fwd_b_, &bwd_w_, &bwd_u_, &bwd_b_,
        &dense_w_, &dense_b_, &crf_kernel_, &crf_chain_, &crf_bias_,
        &crf_left_, &crf_right_}) {
    if (!p->empty()) out.push_back(p);
  }
  return out;
}

std::size_t TaggerModel::parameter_count() const {
  std::size_t total = 0;
  for (const Param* p : trainable()) total += p->value.size();
  return total;
}

void TaggerModel::zero_grads() {
  for (Param* p : trainable()) p->grad.fill(0.0);
}

CrfLayer TaggerModel::crf_view() const {
  CrfLayer layer(dims_.classes);
  layer.kernel = crf_kernel_.value;
  layer.chain = crf_chain_.value;
  layer.bias = crf_bias_.value;
  layer.left = crf_left_.value;
  layer.right = crf_right_.value;
  return layer;
}

std::vector<Tensor> TaggerModel::snapshot_values() const {
  std::vector<Tensor> values;
  for (const Param* p : trainable()) values.push_back(p->value);
  return values;
}

void TaggerModel::restore_values(const std::vector<Tensor>& values) {
  const auto params = trainable();
  if (values.size() != params.size()) {
    throw std::invalid_argument("restore_values: parameter count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (values[i].rows() != params[i]->value.rows() ||
        values[i].cols() != params[i]->value.cols()) {
      throw std::invalid_argument("restore_values: shape mismatch");
    }
    params[i]->value = values[i];
  }
}

BatchStats TaggerModel::forward_backward(const TagBatch& batch,
                                         bool compute_grads) {
  const std::size_t rows = batch.rows;
  const std::size_t steps = batch.steps;
  const std::size_t h = dims_.hidden;
  const bool bidir = kind_ != TaggerKind::kLstm;
  const std::size_t head_in = bidir ? 2 * h : h;

  // Embedding gather.
  std::vector<Tensor> x(steps, Tensor(rows, dims_.embed));
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      const double* src = embedding_.value.row(batch.id_at(r, t));
      double* dst = x[t].row(r);
      for (std::size_t j = 0; j < dims_.embed; ++j) dst[j] = src[j];
    }
  }

  LstmCells fwd(fwd_w_.value, fwd_u_.value, fwd_b_.value, false);
  fwd.forward(x, batch.live);
  LstmCells bwd(bwd_w_.value, bwd_u_.value, bwd_b_.value, true);
  if (bidir) bwd.forward(x, batch.live);

  std::vector<Tensor> hcat(steps, Tensor(rows, head_in));
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      double* dst = hcat[t].row(r);
      const double* hf = fwd.hidden[t].row(r);
      for (std::size_t j = 0; j < h; ++j) dst[j] = hf[j];
      if (bidir) {
        const double* hb = bwd.hidden[t].row(r);
        for (std::size_t j = 0; j < h; ++j) dst[h + j] = hb[j];
      }
    }
  }

  std::vector<Tensor> logits(steps, Tensor(rows, dims_.classes));
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t m = batch.live[t];
    lin::matmul(hcat[t], dense_w_.value, logits[t], false, m);
    lin::add_row(logits[t], dense_b_.value, m);
  }

  std::size_t total_tokens = 0;
  for (std::size_t r = 0; r < rows; ++r) total_tokens += batch.lengths[r];

  BatchStats stats;
  stats.tokens = total_tokens;
  std::vector<Tensor> dlogits;
  if (compute_grads) dlogits.assign(steps, Tensor(rows, dims_.classes));

  if (kind_ != TaggerKind::kBlstmCrf) {
    stats.denom = total_tokens;
    const double scale = 1.0 / static_cast<double>(total_tokens);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t r = 0; r < batch.live[t]; ++r) {
        const double* z = logits[t].row(r);
        double mx = z[0];
        for (std::size_t j = 1; j < dims_.classes; ++j) mx = std::max(mx, z[j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < dims_.classes; ++j) {
          denom += std::exp(z[j] - mx);
        }
        const int gold = batch.gold_at(r, t);
        const double log_p = z[gold] - mx - std::log(denom);
        stats.loss_sum -= log_p;
        const int pred = z[0] >= z[1] ? 0 : 1;  // pad class never predicted
        stats.correct += pred == gold;
        if (compute_grads) {
          double* dz = dlogits[t].row(r);
          for (std::size_t j = 0; j < dims_.classes; ++j) {
            const double p = std::exp(z[j] - mx) / denom;
            dz[j] = (p - (static_cast<int>(j) == gold ? 1.0 : 0.0)) * scale;
          }
        }
      }
    }
  } else {
    stats.denom = rows;
    const double scale = 1.0 / static_cast<double>(rows);
    const CrfLayer layer = crf_view();
    const Tensor kernel_t = lin::transposed(crf_kernel_.value);
    Tensor dkernel(dims_.classes, dims_.classes);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t len = batch.lengths[r];
      Tensor z(len, dims_.classes);
      std::vector<int> gold(len);
      for (std::size_t t = 0; t < len; ++t) {
        const double* src = logits[t].row(r);
        for (std::size_t j = 0; j < dims_.classes; ++j) z(t, j) = src[j];
        gold[t] = batch.gold_at(r, t);
      }
      Tensor emissions(len, dims_.classes);
      lin::matmul(z, crf_kernel_.value, emissions);

      CrfGrads grads;
      const double nll =
          crf_nll(emissions, gold, layer, compute_grads ? &grads : nullptr);
      stats.loss_sum += nll;

      // Tag accuracy from the decoder the model actually uses: Viterbi with
      // the pad class masked out.
      Tensor masked = emissions;
      for (std::size_t t = 0; t < len; ++t) {
        masked(t, dims_.classes - 1) = -1e30;
      }
      const auto path = viterbi_decode(masked, layer).first;
      for (std::size_t t = 0; t < len; ++t) {
        stats.correct += path[t] == gold[t];
      }

      if (compute_grads) {
        Tensor dz(len, dims_.classes);
        lin::matmul(grads.d_emissions, kernel_t, dz);
        for (std::size_t t = 0; t < len; ++t) {
          double* dst = dlogits[t].row(r);
          for (std::size_t j = 0; j < dims_.classes; ++j) {
            dst[j] += dz(t, j) * scale;
          }
        }
        lin::matmul_tn(z, grads.d_emissions, dkernel, true);
        auto add_scaled = [scale](Tensor& dst, const Tensor& src) {
          for (std::size_t i = 0; i < dst.size(); ++i) {
            dst.data()[i] += src.data()[i] * scale;
          }
        };
        add_scaled(crf_chain_.grad, grads.d_chain);
        add_scaled(crf_bias_.grad, grads.d_bias);
        add_scaled(crf_left_.grad, grads.d_left);
        add_scaled(crf_right_.grad, grads.d_right);
      }
    }
    if (compute_grads) {
      for (std::size_t i = 0; i < dkernel.size(); ++i) {
        crf_kernel_.grad.data()[i] += dkernel.data()[i] * scale;
      }
    }
  }

  if (!compute_grads) return stats;

  // Dense head backward.
  std::vector<Tensor> dhcat(steps, Tensor(rows, head_in));
  const Tensor dense_wt = lin::transposed(dense_w_.value);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t m = batch.live[t];
    lin::matmul_tn(hcat[t], dlogits[t], dense_w_.grad, true, m);
    for (std::size_t r = 0; r < m; ++r) {
      const double* dz = dlogits[t].row(r);
      for (std::size_t j = 0; j < dims_.classes; ++j) {
        dense_b_.grad(0, j) += dz[j];
      }
    }
    lin::matmul(dlogits[t], dense_wt, dhcat[t], false, m);
  }

  // Split the concat gradient back into per-direction streams.
  std::vector<Tensor> dh_fwd(steps, Tensor(rows, h));
  std::vector<Tensor> dh_bwd;
  if (bidir) dh_bwd.assign(steps, Tensor(rows, h));
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      const double* src = dhcat[t].row(r);
      double* df = dh_fwd[t].row(r);
      for (std::size_t j = 0; j < h; ++j) df[j] = src[j];
      if (bidir) {
        double* db = dh_bwd[t].row(r);
        for (std::size_t j = 0; j < h; ++j) db[j] = src[h + j];
      }
    }
  }

  std::vector<Tensor> dx(steps, Tensor(rows, dims_.embed));
  fwd.backward(x, dh_fwd, dx, batch.live, fwd_w_.grad, fwd_u_.grad,
               fwd_b_.grad);
  if (bidir) {
    bwd.backward(x, dh_bwd, dx, batch.live, bwd_w_.grad, bwd_u_.grad,
                 bwd_b_.grad);
  }

  // Embedding scatter.
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      double* dst = embedding_.grad.row(batch.id_at(r, t));
      const double* src = dx[t].row(r);
      for (std::size_t j = 0; j < dims_.embed; ++j) dst[j] += src[j];
    }
  }
  return stats;
}

std::vector<TagSequence> TaggerModel::predict(
    const std::vector<TagExample>& examples) {
  std::vector<TagSequence> out(examples.size());
  constexpr std::size_t kChunk = 128;
  for (std::size_t first = 0; first < examples.size(); first += kChunk) {
    const std::size_t count = std::min(kChunk, examples.size() - first);
    const TagBatch batch = make_tag_batch(examples, first, count);

    // Forward only; reuse the training path without gradients by running
    // the statistic-free pieces directly.
    const std::size_t rows = batch.rows;
    const std::size_t steps = batch.steps;
    const std::size_t h = dims_.hidden;
    const bool bidir = kind_ != TaggerKind::kLstm;
    const std::size_t head_in = bidir ? 2 * h : h;

    std::vector<Tensor> x(steps, Tensor(rows, dims_.embed));
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t r = 0; r < batch.live[t]; ++r) {
        const double* src = embedding_.value.row(batch.id_at(r, t));
        double* dst = x[t].row(r);
        for (std::size_t j = 0; j < dims_.embed; ++j) dst[j] = src[j];
      }
    }
    LstmCells fwd(fwd_w_.value, fwd_u_.value, fwd_b_.value, false);
    fwd.forward(x, batch.live);
    LstmCells bwd(bwd_w_.value, bwd_u_.value, bwd_b_.value, true);
    if (bidir) bwd.forward(x, batch.live);

    std::vector<Tensor> hcat(steps, Tensor(rows, head_in));
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t r = 0; r < batch.live[t]; ++r) {
        double* dst = hcat[t].row(r);
        const double* hf = fwd.hidden[t].row(r);
        for (std::size_t j = 0; j < h; ++j) dst[j] = hf[j];
        if (bidir) {
          const double* hb = bwd.hidden[t].row(r);
          for (std::size_t j = 0; j < h; ++j) dst[h + j] = hb[j];
        }
      }
    }
    std::vector<Tensor> logits(steps, Tensor(rows, dims_.classes));
    for (std::size_t t = 0; t < steps; ++t) {
      const std::size_t m = batch.live[t];
      lin::matmul(hcat[t], dense_w_.value, logits[t], false, m);
      lin::add_row(logits[t], dense_b_.value, m);
    }

    const CrfLayer layer =
        kind_ == TaggerKind::kBlstmCrf ? crf_view() : CrfLayer(dims_.classes);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t len = batch.lengths[r];
      Tensor z(len, dims_.classes);
      for (std::size_t t = 0; t < len; ++t) {
        const double* src = logits[t].row(r);
        for (std::size_t j = 0; j < dims_.classes; ++j) z(t, j) = src[j];
      }

      TagSequence tags(len, kTagCont);
      if (kind_ == TaggerKind::kBlstmCrf) {
        Tensor emissions(len, dims_.classes);
        lin::matmul(z, crf_kernel_.value, emissions);
        for (std::size_t t = 0; t < len; ++t) {
          emissions(t, dims_.classes - 1) = -1e30;
        }
        const auto path = viterbi_decode(emissions, layer).first;
        for (std::size_t t = 0; t < len; ++t) {
          tags[t] = path[t] == 0 ? kTagStart : kTagCont;
        }
      } else {
        for (std::size_t t = 0; t < len; ++t) {
          tags[t] = z(t, 0) >= z(t, 1) ? kTagStart : kTagCont;
        }
      }
      if (!tags.empty()) tags[0] = kTagStart;
      out[first + batch.source[r]] = std::move(tags);
    }
  }
  return out;
}

TagSequence TaggerModel::predict_one(std::u32string_view surface) {
  if (taggable_length(surface) == 0) {
    throw std::invalid_argument("predict: no taggable letters");
  }
  std::vector<TagExample> one{make_tag_example(surface)};
  return predict(one)[0];
}

// ------------------------------------------------------------------ training

std::string metrics_csv(const std::vector<EpochMetrics>& metrics) {
  std::string out = "epoch,train_loss,train_acc,valid_loss,valid_acc\n";
  char line[160];
  for (const auto& m : metrics) {
    std::snprintf(line, sizeof line, "%zu,%.6f,%.6f,%.6f,%.6f\n", m.epoch,
                  m.train_loss, m.train_acc, m.valid_loss, m.valid_acc);
    out += line;
  }
  return out;
}

TaggerTrainResult train_tagger(TaggerKind kind,
                               const std::vector<SyllabifiedWord>& train,
                               const std::vector<SyllabifiedWord>& valid,
                               const TrainConfig& cfg,
                               const TaggerDims& dims) {
  if (train.empty() || valid.empty()) {
    throw std::invalid_argument("train_tagger: empty split");
  }
  if (cfg.epochs == 0 || cfg.batch_size == 0) {
    throw std::invalid_argument("train_tagger: bad config");
  }

  std::vector<TagExample> train_ex, valid_ex;
  train_ex.reserve(train.size());
  for (const auto& w : train) train_ex.push_back(make_tag_example(w));
  valid_ex.reserve(valid.size());
  for (const auto& w : valid) valid_ex.push_back(make_tag_example(w));

  TaggerTrainResult result{TaggerModel(kind, dims, cfg.seed), {}, 0};
  TaggerModel& model = result.model;
  Adam adam(cfg.lr);
  Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(train_ex.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best_values = model.snapshot_values();

  auto run_split = [&](const std::vector<TagExample>& examples,
                       const std::vector<std::size_t>* perm, bool learn) {
    BatchStats tally;
    for (std::size_t first = 0; first < examples.size();
         first += cfg.batch_size) {
      const std::size_t count =
          std::min(cfg.batch_size, examples.size() - first);
      std::vector<const TagExample*> view;
      view.reserve(count);
      for (std::size_t i = first; i < first + count; ++i) {
        view.push_back(&examples[perm != nullptr ? (*perm)[i] : i]);
      }
      const TagBatch batch = make_tag_batch(view);
      if (learn) model.zero_grads();
      const BatchStats s = model.forward_backward(batch, learn);
      if (!std::isfinite(s.loss_sum)) {
        throw std::runtime_error("train_tagger: loss diverged at epoch " +
                                 std::to_string(result.metrics.size() + 1));
      }
      if (learn) adam.step(model.trainable());
      tally.loss_sum += s.loss_sum;
      tally.denom += s.denom;
      tally.tokens += s.tokens;
      tally.correct += s.correct;
    }
    return tally;
  };

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    const BatchStats tr = run_split(train_ex, &order, true);
    const BatchStats va = run_split(valid_ex, nullptr, false);
    EpochMetrics row;
    row.epoch = epoch;
    row.train_loss = tr.mean_loss();
    row.train_acc = tr.accuracy();
    row.valid_loss = va.mean_loss();
    row.valid_acc = va.accuracy();
    result.metrics.push_back(row);
    if (row.valid_loss < best_loss) {
      best_loss = row.valid_loss;
      best_values = model.snapshot_values();
      result.best_epoch = epoch;
    }
  }
  model.restore_values(best_values);
  return result;
}

}  // namespace tenyisyl
