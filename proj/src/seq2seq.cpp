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

#include "tenyisyl/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "tenyisyl/text.hpp"

namespace tenyisyl {

// ------------------------------------------------------------------- batches

SeqExample make_seq_example(const SyllabifiedWord& word) {
  SeqExample ex;
  ex.src = vocab::encode(word.surface, /*keep_hyphens=*/true);
  for (char tag : encode_tags(word)) {
    ex.tgt.push_back(tag == kTagStart ? tgt::kS : tgt::kC);
  }
  return ex;
}

SeqExample make_seq_example(std::u32string_view surface) {
  SeqExample ex;
  ex.src = vocab::encode(surface, /*keep_hyphens=*/true);
  return ex;
}

SeqBatch make_seq_batch(const std::vector<const SeqExample*>& examples) {
  if (examples.empty()) {
    throw std::invalid_argument("make_seq_batch: empty batch");
  }
  SeqBatch batch;
  batch.rows = examples.size();
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return examples[a]->src.size() > examples[b]->src.size();
                   });
  batch.src_steps = examples[order.front()]->src.size();
  for (const SeqExample* ex : examples) {
    if (ex->src.empty() || ex->tgt.empty()) {
      throw std::invalid_argument("make_seq_batch: empty example");
    }
    batch.dec_steps = std::max(batch.dec_steps, ex->tgt.size() + 1);
  }
  batch.src.assign(batch.rows * batch.src_steps, vocab::kPad);
  batch.y_in.assign(batch.rows * batch.dec_steps, tgt::kPad);
  batch.y_out.assign(batch.rows * batch.dec_steps, tgt::kPad);
  batch.src_lengths.resize(batch.rows);
  batch.tgt_lengths.resize(batch.rows);
  batch.source.resize(batch.rows);
  for (std::size_t r = 0; r < batch.rows; ++r) {
    const SeqExample& ex = *examples[order[r]];
    batch.source[r] = order[r];
    batch.src_lengths[r] = ex.src.size();
    batch.tgt_lengths[r] = ex.tgt.size() + 1;
    for (std::size_t t = 0; t < ex.src.size(); ++t) {
      batch.src[r * batch.src_steps + t] = ex.src[t];
    }
    batch.y_in[r * batch.dec_steps] = tgt::kGo;
    for (std::size_t t = 0; t < ex.tgt.size(); ++t) {
      batch.y_in[r * batch.dec_steps + t + 1] = ex.tgt[t];
      batch.y_out[r * batch.dec_steps + t] = ex.tgt[t];
    }
    batch.y_out[r * batch.dec_steps + ex.tgt.size()] = tgt::kEos;
  }
  batch.live.resize(batch.src_steps);
  for (std::size_t t = 0; t < batch.src_steps; ++t) {
    std::size_t n = 0;
    while (n < batch.rows && batch.src_lengths[n] > t) ++n;
    batch.live[t] = n;
  }
  return batch;
}

SeqBatch make_seq_batch(const std::vector<SeqExample>& examples,
                        std::size_t first, std::size_t count) {
  std::vector<const SeqExample*> view;
  view.reserve(count);
  for (std::size_t i = first; i < first + count; ++i) {
    view.push_back(&examples[i]);
  }
  return make_seq_batch(view);
}

// ----------------------------------------------------------------- gru cells

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct GruWeights {
  const Tensor* w_zr;
  const Tensor* w_h;
  const Tensor* u_zr;
  const Tensor* u_h;
  const Tensor* b_zr;
  const Tensor* b_h;
};

struct GruGrads {
  Tensor* w_zr;
  Tensor* w_h;
  Tensor* u_zr;
  Tensor* u_h;
  Tensor* b_zr;
  Tensor* b_h;
};

// Transposed kernels, built once per backward pass.
struct GruTrans {
  Tensor w_zr_t, w_h_t, u_zr_t, u_h_t;
  explicit GruTrans(const GruWeights& w)
      : w_zr_t(lin::transposed(*w.w_zr)),
        w_h_t(lin::transposed(*w.w_h)),
        u_zr_t(lin::transposed(*w.u_zr)),
        u_h_t(lin::transposed(*w.u_h)) {}
};

// Post-activation caches of one step: zr holds [z | r], rh the reset-gated
// previous state feeding the candidate, cand the tanh candidate.
struct GruStepCache {
  Tensor zr;    // B×2H
  Tensor rh;    // B×H
  Tensor cand;  // B×H
};

void add_col_sums(const Tensor& src, Tensor& dst, std::size_t m) {
  for (std::size_t r = 0; r < m; ++r) {
    const double* row = src.row(r);
    for (std::size_t j = 0; j < src.cols(); ++j) dst.data()[j] += row[j];
  }
}

// Classic reset-before GRU: z and r from x and h, candidate from x and r∘h,
// new state z∘h + (1−z)∘candidate. h_prev == nullptr means a zero state.
void gru_step_forward(const Tensor& x, const Tensor* h_prev,
                      const GruWeights& w, GruStepCache& cache, Tensor& h_out,
                      std::size_t m) {
  const std::size_t hid = w.u_h->rows();
  lin::matmul(x, *w.w_zr, cache.zr, false, m);
  lin::add_row(cache.zr, *w.b_zr, m);
  if (h_prev != nullptr) lin::matmul(*h_prev, *w.u_zr, cache.zr, true, m);
  for (std::size_t r = 0; r < m; ++r) {
    double* zr = cache.zr.row(r);
    double* rh = cache.rh.row(r);
    const double* hp = h_prev != nullptr ? h_prev->row(r) : nullptr;
    for (std::size_t j = 0; j < 2 * hid; ++j) zr[j] = sigmoid(zr[j]);
    for (std::size_t j = 0; j < hid; ++j) {
      rh[j] = zr[hid + j] * (hp != nullptr ? hp[j] : 0.0);
    }
  }
  lin::matmul(x, *w.w_h, cache.cand, false, m);
  lin::add_row(cache.cand, *w.b_h, m);
  lin::matmul(cache.rh, *w.u_h, cache.cand, true, m);
  for (std::size_t r = 0; r < m; ++r) {
    const double* zr = cache.zr.row(r);
    double* cand = cache.cand.row(r);
    double* h = h_out.row(r);
    const double* hp = h_prev != nullptr ? h_prev->row(r) : nullptr;
    for (std::size_t j = 0; j < hid; ++j) {
      cand[j] = std::tanh(cand[j]);
      h[j] = zr[j] * (hp != nullptr ? hp[j] : 0.0) + (1.0 - zr[j]) * cand[j];
    }
  }
}

// Consumes dh (gradient of h_out, already summed over every consumer) and
// adds into dx and the weight grads. dh_prev is SET for the first m rows,
// so the caller can chain it as a carry buffer.
void gru_step_backward(const Tensor& x, const Tensor* h_prev,
                       const GruStepCache& cache, const Tensor& dh,
                       Tensor& dx, Tensor& dh_prev, const GruWeights& w,
                       const GruTrans& tr, const GruGrads& g, Tensor& dzr,
                       Tensor& dcand, Tensor& drh, std::size_t m) {
  const std::size_t hid = w.u_h->rows();
  for (std::size_t r = 0; r < m; ++r) {
    const double* zr = cache.zr.row(r);
    const double* cand = cache.cand.row(r);
    const double* hp = h_prev != nullptr ? h_prev->row(r) : nullptr;
    const double* dh_r = dh.row(r);
    double* dzr_r = dzr.row(r);
    double* dcand_r = dcand.row(r);
    double* dhp = dh_prev.row(r);
    for (std::size_t j = 0; j < hid; ++j) {
      const double z = zr[j];
      const double c = cand[j];
      const double h0 = hp != nullptr ? hp[j] : 0.0;
      const double d = dh_r[j];
      dcand_r[j] = d * (1.0 - z) * (1.0 - c * c);
      dzr_r[j] = d * (h0 - c);  // raw dz, squashed below
      dhp[j] = d * z;
    }
  }
  lin::matmul(dcand, tr.u_h_t, drh, false, m);
  lin::matmul_tn(cache.rh, dcand, *g.u_h, true, m);
  lin::matmul_tn(x, dcand, *g.w_h, true, m);
  add_col_sums(dcand, *g.b_h, m);
  lin::matmul(dcand, tr.w_h_t, dx, true, m);
  for (std::size_t r = 0; r < m; ++r) {
    const double* zr = cache.zr.row(r);
    const double* hp = h_prev != nullptr ? h_prev->row(r) : nullptr;
    const double* drh_r = drh.row(r);
    double* dzr_r = dzr.row(r);
    double* dhp = dh_prev.row(r);
    for (std::size_t j = 0; j < hid; ++j) {
      const double z = zr[j];
      const double rr = zr[hid + j];
      const double h0 = hp != nullptr ? hp[j] : 0.0;
      dhp[j] += drh_r[j] * rr;
      dzr_r[j] *= z * (1.0 - z);
      dzr_r[hid + j] = drh_r[j] * h0 * rr * (1.0 - rr);
    }
  }
  lin::matmul(dzr, tr.w_zr_t, dx, true, m);
  lin::matmul_tn(x, dzr, *g.w_zr, true, m);
  add_col_sums(dzr, *g.b_zr, m);
  if (h_prev != nullptr) {
    lin::matmul(dzr, tr.u_zr_t, dh_prev, true, m);
    lin::matmul_tn(*h_prev, dzr, *g.u_zr, true, m);
  }
}

// One GRU direction over a padded batch with live-prefix stepping, same
// scheme as the tagger's LSTM cells.
struct GruCells {
  GruWeights w;
  bool reversed;
  std::size_t hid;
  std::vector<GruStepCache> cache;
  std::vector<Tensor> hidden;

  GruCells(const GruWeights& w_in, bool reversed_in)
      : w(w_in), reversed(reversed_in), hid(w_in.u_h->rows()) {}

  void forward(const std::vector<Tensor>& x,
               const std::vector<std::size_t>& live) {
    const std::size_t steps = x.size();
    const std::size_t rows = x[0].rows();
    cache.clear();
    cache.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      cache.push_back(
          {Tensor(rows, 2 * hid), Tensor(rows, hid), Tensor(rows, hid)});
    }
    hidden.assign(steps, Tensor(rows, hid));
    const Tensor* h_prev = nullptr;
    for (std::size_t k = 0; k < steps; ++k) {
      const std::size_t t = reversed ? steps - 1 - k : k;
      gru_step_forward(x[t], h_prev, w, cache[t], hidden[t], live[t]);
      h_prev = &hidden[t];
    }
  }

  void backward(const std::vector<Tensor>& x,
                const std::vector<Tensor>& dh_out, std::vector<Tensor>& dx,
                const std::vector<std::size_t>& live, const GruGrads& g) {
    const std::size_t steps = x.size();
    const std::size_t rows = x[0].rows();
    const GruTrans tr(w);
    Tensor dh_carry(rows, hid);
    Tensor dh_total(rows, hid);
    Tensor dzr(rows, 2 * hid);
    Tensor dcand(rows, hid);
    Tensor drh(rows, hid);
    for (std::size_t k = steps; k-- > 0;) {
      const std::size_t t = reversed ? steps - 1 - k : k;
      const std::size_t m = live[t];
      for (std::size_t r = 0; r < m; ++r) {
        const double* a = dh_out[t].row(r);
        const double* b = dh_carry.row(r);
        double* dst = dh_total.row(r);
        for (std::size_t j = 0; j < hid; ++j) dst[j] = a[j] + b[j];
      }
      const std::size_t t_prev = reversed ? t + 1 : t - 1;
      const Tensor* h_prev = k > 0 ? &hidden[t_prev] : nullptr;
      gru_step_backward(x[t], h_prev, cache[t], dh_total, dx[t], dh_carry, w,
                        tr, g, dzr, dcand, drh, m);
    }
  }
};

void gather_embeddings(const Tensor& table, const std::vector<std::uint16_t>&
                       ids, std::size_t steps, std::size_t rows,
                       const std::vector<std::size_t>& live,
                       std::vector<Tensor>& x) {
  const std::size_t width = table.cols();
  x.assign(steps, Tensor(rows, width));
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t r = 0; r < live[t]; ++r) {
      const double* src = table.row(ids[r * steps + t]);
      double* dst = x[t].row(r);
      for (std::size_t j = 0; j < width; ++j) dst[j] = src[j];
    }
  }
}

}  // namespace

// --------------------------------------------------------------------- model

Seq2SeqModel::Seq2SeqModel(Seq2SeqDims dims, std::uint64_t seed)
    : dims_(dims) {
  Rng rng(seed);
  const std::size_t e = dims.embed;
  const std::size_t h = dims.units;
  const std::size_t a = dims.attn;
  const std::size_t te = dims.tgt_embed;

  auto glorot = [&rng](Param& p, const std::string& name, std::size_t rows,
                       std::size_t cols) {
    p.init(name, rows, cols);
    init_glorot(p.value, rng);
  };
  auto zeros = [](Param& p, const std::string& name, std::size_t rows,
                  std::size_t cols) { p.init(name, rows, cols); };

  src_emb_.init("src_emb", dims.vocab, e);
  init_uniform(src_emb_.value, rng, -0.05, 0.05);
  auto init_gru = [&](const std::string& prefix, std::size_t in, Param& w_zr,
                      Param& w_h, Param& u_zr, Param& u_h, Param& b_zr,
                      Param& b_h) {
    glorot(w_zr, prefix + ".w_zr", in, 2 * h);
    glorot(w_h, prefix + ".w_h", in, h);
    glorot(u_zr, prefix + ".u_zr", h, 2 * h);
    glorot(u_h, prefix + ".u_h", h, h);
    zeros(b_zr, prefix + ".b_zr", 1, 2 * h);
    zeros(b_h, prefix + ".b_h", 1, h);
  };
  init_gru("enc_fwd", e, enc_fwd_w_zr_, enc_fwd_w_h_, enc_fwd_u_zr_,
           enc_fwd_u_h_, enc_fwd_b_zr_, enc_fwd_b_h_);
  init_gru("enc_bwd", e, enc_bwd_w_zr_, enc_bwd_w_h_, enc_bwd_u_zr_,
           enc_bwd_u_h_, enc_bwd_b_zr_, enc_bwd_b_h_);
  glorot(proj_w_, "proj.w", 2 * h, h);
  zeros(proj_b_, "proj.b", 1, h);
  tgt_emb_.init("tgt_emb", dims.tgt_vocab, te);
  init_uniform(tgt_emb_.value, rng, -0.05, 0.05);
  init_gru("dec", te, dec_w_zr_, dec_w_h_, dec_u_zr_, dec_u_h_, dec_b_zr_,
           dec_b_h_);
  glorot(attn_w1_, "attn.w1", 2 * h, a);
  glorot(attn_w2_, "attn.w2", h, a);
  glorot(attn_v_, "attn.v", a, 1);
  glorot(comb_w_, "comb.w", 3 * h, h);
  zeros(comb_b_, "comb.b", 1, h);
  glorot(out_w_, "out.w", h, dims.tgt_vocab);
  zeros(out_b_, "out.b", 1, dims.tgt_vocab);
}

std::vector<Param*> Seq2SeqModel::trainable() {
  return {&src_emb_,      &enc_fwd_w_zr_, &enc_fwd_w_h_,  &enc_fwd_u_zr_,
          &enc_fwd_u_h_,  &enc_fwd_b_zr_, &enc_fwd_b_h_,  &enc_bwd_w_zr_,
          &enc_bwd_w_h_,  &enc_bwd_u_zr_, &enc_bwd_u_h_,  &enc_bwd_b_zr_,
          &enc_bwd_b_h_,  &proj_w_,       &proj_b_,       &tgt_emb_,
          &dec_w_zr_,     &dec_w_h_,      &dec_u_zr_,     &dec_u_h_,
          &dec_b_zr_,     &dec_b_h_,      &attn_w1_,      &attn_w2_,
          &attn_v_,       &comb_w_,       &comb_b_,       &out_w_,
          &out_b_};
}

std::vector<const Param*> Seq2SeqModel::trainable() const {
  auto params = const_cast<Seq2SeqModel*>(this)->trainable();
  return {params.begin(), params.end()};
}

std::size_t Seq2SeqModel::parameter_count() const {
  std::size_t total = 0;
  for (const Param* p : trainable()) total += p->value.size();
  return total;
}

void Seq2SeqModel::zero_grads() {
  for (Param* p : trainable()) p->grad.fill(0.0);
}

std::vector<Tensor> Seq2SeqModel::snapshot_values() const {
  std::vector<Tensor> values;
  for (const Param* p : trainable()) values.push_back(p->value);
  return values;
}

void Seq2SeqModel::restore_values(const std::vector<Tensor>& values) {
  auto params = trainable();
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

BatchStats Seq2SeqModel::forward_backward(const SeqBatch& batch,
                                          bool compute_grads) {
  const std::size_t rows = batch.rows;
  const std::size_t ts = batch.src_steps;
  const std::size_t td = batch.dec_steps;
  const std::size_t h = dims_.units;
  const std::size_t a = dims_.attn;
  const std::size_t nt = dims_.tgt_vocab;

  // Encoder: embeddings, both GRU directions, concatenated contexts.
  std::vector<Tensor> xe;
  gather_embeddings(src_emb_.value, batch.src, ts, rows, batch.live, xe);
  const GruWeights enc_fw{&enc_fwd_w_zr_.value, &enc_fwd_w_h_.value,
                          &enc_fwd_u_zr_.value, &enc_fwd_u_h_.value,
                          &enc_fwd_b_zr_.value, &enc_fwd_b_h_.value};
  const GruWeights enc_bw{&enc_bwd_w_zr_.value, &enc_bwd_w_h_.value,
                          &enc_bwd_u_zr_.value, &enc_bwd_u_h_.value,
                          &enc_bwd_b_zr_.value, &enc_bwd_b_h_.value};
  GruCells fwd(enc_fw, false);
  GruCells bwd(enc_bw, true);
  fwd.forward(xe, batch.live);
  bwd.forward(xe, batch.live);

  std::vector<Tensor> contexts(ts, Tensor(rows, 2 * h));
  for (std::size_t t = 0; t < ts; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      double* dst = contexts[t].row(r);
      const double* hf = fwd.hidden[t].row(r);
      const double* hb = bwd.hidden[t].row(r);
      for (std::size_t j = 0; j < h; ++j) dst[j] = hf[j];
      for (std::size_t j = 0; j < h; ++j) dst[h + j] = hb[j];
    }
  }

  // Decoder initial state from the concatenated final states.
  Tensor cf(rows, 2 * h);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t last = batch.src_lengths[r] - 1;
    const double* hf = fwd.hidden[last].row(r);
    const double* hb = bwd.hidden[0].row(r);
    double* dst = cf.row(r);
    for (std::size_t j = 0; j < h; ++j) dst[j] = hf[j];
    for (std::size_t j = 0; j < h; ++j) dst[h + j] = hb[j];
  }
  Tensor s0(rows, h);
  lin::matmul(cf, proj_w_.value, s0);
  lin::add_row(s0, proj_b_.value, rows);
  for (std::size_t i = 0; i < s0.size(); ++i) {
    s0.data()[i] = std::tanh(s0.data()[i]);
  }

  // Attention keys, shared across decode steps.
  std::vector<Tensor> keys(ts, Tensor(rows, a));
  for (std::size_t t = 0; t < ts; ++t) {
    lin::matmul(contexts[t], attn_w1_.value, keys[t]);
  }

  // Decoder: teacher-forced GRU + attention. Every row runs the full step
  // count; padded target positions are masked out of the loss instead.
  std::vector<std::size_t> all_live(td, rows);
  std::vector<Tensor> xd;
  gather_embeddings(tgt_emb_.value, std::vector<std::uint16_t>(
                        batch.y_in.begin(), batch.y_in.end()),
                    td, rows, all_live, xd);
  const GruWeights dec_w{&dec_w_zr_.value, &dec_w_h_.value, &dec_u_zr_.value,
                         &dec_u_h_.value,  &dec_b_zr_.value, &dec_b_h_.value};
  std::vector<GruStepCache> dec_cache;
  dec_cache.reserve(td);
  std::vector<Tensor> s(td, Tensor(rows, h));
  std::vector<Tensor> alphas(td, Tensor(rows, ts));
  std::vector<std::vector<Tensor>> tanh_att(td);
  std::vector<Tensor> ctx(td, Tensor(rows, 2 * h));
  std::vector<Tensor> cat(td, Tensor(rows, 3 * h));
  std::vector<Tensor> comb(td, Tensor(rows, h));
  std::vector<Tensor> logits(td, Tensor(rows, nt));

  for (std::size_t t = 0; t < td; ++t) {
    dec_cache.push_back(
        {Tensor(rows, 2 * h), Tensor(rows, h), Tensor(rows, h)});
    const Tensor* s_prev = t > 0 ? &s[t - 1] : &s0;
    gru_step_forward(xd[t], s_prev, dec_w, dec_cache[t], s[t], rows);

    // Additive attention against every valid source position.
    Tensor query(rows, a);
    lin::matmul(s[t], attn_w2_.value, query);
    tanh_att[t].assign(ts, Tensor(rows, a));
    Tensor& al = alphas[t];
    for (std::size_t j = 0; j < ts; ++j) {
      Tensor& th = tanh_att[t][j];
      for (std::size_t r = 0; r < rows; ++r) {
        const double* key = keys[j].row(r);
        const double* q = query.row(r);
        double* dst = th.row(r);
        double score = 0.0;
        for (std::size_t c = 0; c < a; ++c) {
          const double v = std::tanh(key[c] + q[c]);
          dst[c] = v;
          score += v * attn_v_.value(c, 0);
        }
        al(r, j) = j < batch.src_lengths[r] ? score : -1e300;
      }
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double* arow = al.row(r);
      double mx = arow[0];
      for (std::size_t j = 1; j < ts; ++j) mx = std::max(mx, arow[j]);
      double denom = 0.0;
      for (std::size_t j = 0; j < ts; ++j) {
        arow[j] = std::exp(arow[j] - mx);
        denom += arow[j];
      }
      for (std::size_t j = 0; j < ts; ++j) arow[j] /= denom;
    }
    ctx[t].fill(0.0);
    for (std::size_t j = 0; j < ts; ++j) {
      for (std::size_t r = 0; r < rows; ++r) {
        const double w = al(r, j);
        if (w == 0.0) continue;
        const double* src = contexts[j].row(r);
        double* dst = ctx[t].row(r);
        for (std::size_t c = 0; c < 2 * h; ++c) dst[c] += w * src[c];
      }
    }

    for (std::size_t r = 0; r < rows; ++r) {
      double* dst = cat[t].row(r);
      const double* sr = s[t].row(r);
      const double* cr = ctx[t].row(r);
      for (std::size_t j = 0; j < h; ++j) dst[j] = sr[j];
      for (std::size_t j = 0; j < 2 * h; ++j) dst[h + j] = cr[j];
    }
    lin::matmul(cat[t], comb_w_.value, comb[t]);
    lin::add_row(comb[t], comb_b_.value, rows);
    for (std::size_t i = 0; i < comb[t].size(); ++i) {
      comb[t].data()[i] = std::tanh(comb[t].data()[i]);
    }
    lin::matmul(comb[t], out_w_.value, logits[t]);
    lin::add_row(logits[t], out_b_.value, rows);
  }

  // Masked cross-entropy over target tokens, EOS included.
  BatchStats stats;
  for (std::size_t r = 0; r < rows; ++r) stats.tokens += batch.tgt_lengths[r];
  stats.denom = stats.tokens;
  const double scale = 1.0 / static_cast<double>(stats.tokens);
  std::vector<Tensor> dlogits;
  if (compute_grads) dlogits.assign(td, Tensor(rows, nt));
  for (std::size_t t = 0; t < td; ++t) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (t >= batch.tgt_lengths[r]) continue;
      const double* z = logits[t].row(r);
      double mx = z[0];
      for (std::size_t j = 1; j < nt; ++j) mx = std::max(mx, z[j]);
      double denom = 0.0;
      for (std::size_t j = 0; j < nt; ++j) denom += std::exp(z[j] - mx);
      const std::size_t gold = batch.y_out[r * td + t];
      stats.loss_sum -= z[gold] - mx - std::log(denom);
      std::size_t pred = tgt::kEos;
      for (std::size_t j : {tgt::kS, tgt::kC}) {
        if (z[j] > z[pred]) pred = j;
      }
      stats.correct += pred == gold;
      if (compute_grads) {
        double* dz = dlogits[t].row(r);
        for (std::size_t j = 0; j < nt; ++j) {
          const double p = std::exp(z[j] - mx) / denom;
          dz[j] = (p - (j == gold ? 1.0 : 0.0)) * scale;
        }
      }
    }
  }
  if (!compute_grads) return stats;

  // Decoder backward, newest step first.
  const GruGrads dec_g{&dec_w_zr_.grad, &dec_w_h_.grad, &dec_u_zr_.grad,
                       &dec_u_h_.grad,  &dec_b_zr_.grad, &dec_b_h_.grad};
  const GruTrans dec_tr(dec_w);
  const Tensor out_wt = lin::transposed(out_w_.value);
  const Tensor comb_wt = lin::transposed(comb_w_.value);
  const Tensor attn_w2t = lin::transposed(attn_w2_.value);
  const Tensor attn_w1t = lin::transposed(attn_w1_.value);

  std::vector<Tensor> dkeys(ts, Tensor(rows, a));
  std::vector<Tensor> dcontexts(ts, Tensor(rows, 2 * h));
  std::vector<Tensor> dxd(td, Tensor(rows, dims_.tgt_embed));
  Tensor ds_carry(rows, h);
  Tensor ds0(rows, h);
  Tensor dzr(rows, 2 * h);
  Tensor dcand(rows, h);
  Tensor drh(rows, h);

  for (std::size_t t = td; t-- > 0;) {
    // Output head.
    Tensor dcomb(rows, h);
    lin::matmul_tn(comb[t], dlogits[t], out_w_.grad, true);
    add_col_sums(dlogits[t], out_b_.grad, rows);
    lin::matmul(dlogits[t], out_wt, dcomb);
    for (std::size_t i = 0; i < dcomb.size(); ++i) {
      const double c = comb[t].data()[i];
      dcomb.data()[i] *= 1.0 - c * c;
    }
    Tensor dcat(rows, 3 * h);
    lin::matmul_tn(cat[t], dcomb, comb_w_.grad, true);
    add_col_sums(dcomb, comb_b_.grad, rows);
    lin::matmul(dcomb, comb_wt, dcat);

    Tensor ds(rows, h);
    Tensor dctx(rows, 2 * h);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* src = dcat.row(r);
      double* dsr = ds.row(r);
      double* dcr = dctx.row(r);
      for (std::size_t j = 0; j < h; ++j) dsr[j] = src[j];
      for (std::size_t j = 0; j < 2 * h; ++j) dcr[j] = src[h + j];
    }

    // Attention: context mixture, softmax, additive scores.
    const Tensor& al = alphas[t];
    Tensor dalpha(rows, ts);
    for (std::size_t j = 0; j < ts; ++j) {
      for (std::size_t r = 0; r < rows; ++r) {
        const double w = al(r, j);
        const double* dcr = dctx.row(r);
        const double* cj = contexts[j].row(r);
        double* dcj = dcontexts[j].row(r);
        double dot = 0.0;
        for (std::size_t c = 0; c < 2 * h; ++c) {
          dot += dcr[c] * cj[c];
          dcj[c] += w * dcr[c];
        }
        dalpha(r, j) = dot;
      }
    }
    Tensor dscore(rows, ts);
    for (std::size_t r = 0; r < rows; ++r) {
      double inner = 0.0;
      for (std::size_t j = 0; j < ts; ++j) inner += al(r, j) * dalpha(r, j);
      for (std::size_t j = 0; j < ts; ++j) {
        dscore(r, j) = al(r, j) * (dalpha(r, j) - inner);
      }
    }
    Tensor dquery(rows, a);
    for (std::size_t j = 0; j < ts; ++j) {
      const Tensor& th = tanh_att[t][j];
      for (std::size_t r = 0; r < rows; ++r) {
        const double dsc = dscore(r, j);
        if (dsc == 0.0) continue;
        const double* thr = th.row(r);
        double* dk = dkeys[j].row(r);
        double* dq = dquery.row(r);
        double* dv = attn_v_.grad.data();
        for (std::size_t c = 0; c < a; ++c) {
          const double tv = thr[c];
          dv[c] += dsc * tv;
          const double dpre = dsc * attn_v_.value(c, 0) * (1.0 - tv * tv);
          dk[c] += dpre;
          dq[c] += dpre;
        }
      }
    }
    lin::matmul(dquery, attn_w2t, ds, true);
    lin::matmul_tn(s[t], dquery, attn_w2_.grad, true);

    // GRU step, chaining into the previous state.
    for (std::size_t r = 0; r < rows; ++r) {
      const double* carry = ds_carry.row(r);
      double* dsr = ds.row(r);
      for (std::size_t j = 0; j < h; ++j) dsr[j] += carry[j];
    }
    const Tensor* s_prev = t > 0 ? &s[t - 1] : &s0;
    Tensor& dh_prev = t > 0 ? ds_carry : ds0;
    gru_step_backward(xd[t], s_prev, dec_cache[t], ds, dxd[t], dh_prev,
                      dec_w, dec_tr, dec_g, dzr, dcand, drh, rows);
  }

  // Target embedding scatter.
  for (std::size_t t = 0; t < td; ++t) {
    for (std::size_t r = 0; r < rows; ++r) {
      double* dst = tgt_emb_.grad.row(batch.y_in[r * td + t]);
      const double* src = dxd[t].row(r);
      for (std::size_t j = 0; j < dims_.tgt_embed; ++j) dst[j] += src[j];
    }
  }

  // Initial-state projection.
  Tensor dcf(rows, 2 * h);
  for (std::size_t i = 0; i < ds0.size(); ++i) {
    const double v = s0.data()[i];
    ds0.data()[i] *= 1.0 - v * v;
  }
  lin::matmul_tn(cf, ds0, proj_w_.grad, true);
  add_col_sums(ds0, proj_b_.grad, rows);
  lin::matmul(ds0, lin::transposed(proj_w_.value), dcf);

  // Attention keys fold into the context gradients.
  for (std::size_t j = 0; j < ts; ++j) {
    lin::matmul_tn(contexts[j], dkeys[j], attn_w1_.grad, true);
    lin::matmul(dkeys[j], attn_w1t, dcontexts[j], true);
  }

  // Split context gradients back into the two encoder streams, adding the
  // final-state contributions at each row's boundary positions.
  std::vector<Tensor> dh_fwd(ts, Tensor(rows, h));
  std::vector<Tensor> dh_bwd(ts, Tensor(rows, h));
  for (std::size_t t = 0; t < ts; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      const double* src = dcontexts[t].row(r);
      double* df = dh_fwd[t].row(r);
      double* db = dh_bwd[t].row(r);
      for (std::size_t j = 0; j < h; ++j) df[j] = src[j];
      for (std::size_t j = 0; j < h; ++j) db[j] = src[h + j];
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t last = batch.src_lengths[r] - 1;
    const double* src = dcf.row(r);
    double* df = dh_fwd[last].row(r);
    double* db = dh_bwd[0].row(r);
    for (std::size_t j = 0; j < h; ++j) df[j] += src[j];
    for (std::size_t j = 0; j < h; ++j) db[j] += src[h + j];
  }

  const GruGrads fwd_g{&enc_fwd_w_zr_.grad, &enc_fwd_w_h_.grad,
                       &enc_fwd_u_zr_.grad, &enc_fwd_u_h_.grad,
                       &enc_fwd_b_zr_.grad, &enc_fwd_b_h_.grad};
  const GruGrads bwd_g{&enc_bwd_w_zr_.grad, &enc_bwd_w_h_.grad,
                       &enc_bwd_u_zr_.grad, &enc_bwd_u_h_.grad,
                       &enc_bwd_b_zr_.grad, &enc_bwd_b_h_.grad};
  std::vector<Tensor> dxe(ts, Tensor(rows, dims_.embed));
  fwd.backward(xe, dh_fwd, dxe, batch.live, fwd_g);
  bwd.backward(xe, dh_bwd, dxe, batch.live, bwd_g);

  // Source embedding scatter.
  for (std::size_t t = 0; t < ts; ++t) {
    for (std::size_t r = 0; r < batch.live[t]; ++r) {
      double* dst = src_emb_.grad.row(batch.src_at(r, t));
      const double* src = dxe[t].row(r);
      for (std::size_t j = 0; j < dims_.embed; ++j) dst[j] += src[j];
    }
  }
  return stats;
}

DecodeResult Seq2SeqModel::decode_greedy(std::u32string_view surface) {
  const auto ids = vocab::encode(surface, /*keep_hyphens=*/true);
  if (ids.empty()) {
    throw std::invalid_argument("decode: empty input");
  }
  const std::size_t ts = ids.size();
  const std::size_t h = dims_.units;
  const std::size_t a = dims_.attn;
  const std::vector<std::size_t> live(ts, 1);

  std::vector<Tensor> xe;
  gather_embeddings(src_emb_.value, ids, ts, 1, live, xe);
  const GruWeights enc_fw{&enc_fwd_w_zr_.value, &enc_fwd_w_h_.value,
                          &enc_fwd_u_zr_.value, &enc_fwd_u_h_.value,
                          &enc_fwd_b_zr_.value, &enc_fwd_b_h_.value};
  const GruWeights enc_bw{&enc_bwd_w_zr_.value, &enc_bwd_w_h_.value,
                          &enc_bwd_u_zr_.value, &enc_bwd_u_h_.value,
                          &enc_bwd_b_zr_.value, &enc_bwd_b_h_.value};
  GruCells fwd(enc_fw, false);
  GruCells bwd(enc_bw, true);
  fwd.forward(xe, live);
  bwd.forward(xe, live);

  Tensor cf(1, 2 * h);
  for (std::size_t j = 0; j < h; ++j) {
    cf(0, j) = fwd.hidden[ts - 1](0, j);
    cf(0, h + j) = bwd.hidden[0](0, j);
  }
  Tensor state(1, h);
  lin::matmul(cf, proj_w_.value, state);
  lin::add_row(state, proj_b_.value, 1);
  for (std::size_t j = 0; j < h; ++j) state(0, j) = std::tanh(state(0, j));

  std::vector<Tensor> keys(ts, Tensor(1, a));
  Tensor context_row(1, 2 * h);
  std::vector<Tensor> contexts(ts, Tensor(1, 2 * h));
  for (std::size_t t = 0; t < ts; ++t) {
    for (std::size_t j = 0; j < h; ++j) {
      contexts[t](0, j) = fwd.hidden[t](0, j);
      contexts[t](0, h + j) = bwd.hidden[t](0, j);
    }
    lin::matmul(contexts[t], attn_w1_.value, keys[t]);
  }

  const GruWeights dec_w{&dec_w_zr_.value, &dec_w_h_.value, &dec_u_zr_.value,
                         &dec_u_h_.value,  &dec_b_zr_.value, &dec_b_h_.value};
  GruStepCache cache{Tensor(1, 2 * h), Tensor(1, h), Tensor(1, h)};
  Tensor x(1, dims_.tgt_embed);
  Tensor next(1, h);
  Tensor query(1, a);
  Tensor comb_in(1, 3 * h);
  Tensor comb_out(1, h);
  Tensor logits(1, dims_.tgt_vocab);

  TagSequence tags;
  std::vector<double> weight_rows;
  std::size_t y_prev = tgt::kGo;
  const std::size_t cap = 2 * ts;
  while (tags.size() < cap) {
    const double* emb = tgt_emb_.value.row(y_prev);
    for (std::size_t j = 0; j < dims_.tgt_embed; ++j) x(0, j) = emb[j];
    gru_step_forward(x, &state, dec_w, cache, next, 1);
    state = next;

    lin::matmul(state, attn_w2_.value, query);
    std::vector<double> scores(ts);
    for (std::size_t j = 0; j < ts; ++j) {
      double score = 0.0;
      for (std::size_t c = 0; c < a; ++c) {
        score += std::tanh(keys[j](0, c) + query(0, c)) *
                 attn_v_.value(c, 0);
      }
      scores[j] = score;
    }
    const double mx = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (double& sc : scores) {
      sc = std::exp(sc - mx);
      denom += sc;
    }
    context_row.fill(0.0);
    for (std::size_t j = 0; j < ts; ++j) {
      scores[j] /= denom;
      for (std::size_t c = 0; c < 2 * h; ++c) {
        context_row(0, c) += scores[j] * contexts[j](0, c);
      }
    }

    for (std::size_t j = 0; j < h; ++j) comb_in(0, j) = state(0, j);
    for (std::size_t j = 0; j < 2 * h; ++j) {
      comb_in(0, h + j) = context_row(0, j);
    }
    lin::matmul(comb_in, comb_w_.value, comb_out);
    lin::add_row(comb_out, comb_b_.value, 1);
    for (std::size_t j = 0; j < h; ++j) {
      comb_out(0, j) = std::tanh(comb_out(0, j));
    }
    lin::matmul(comb_out, out_w_.value, logits);
    lin::add_row(logits, out_b_.value, 1);

    std::size_t best = tgt::kEos;
    for (std::size_t j : {tgt::kS, tgt::kC}) {
      if (logits(0, j) > logits(0, best)) best = j;
    }
    if (best == tgt::kEos) break;
    tags.push_back(best == tgt::kS ? kTagStart : kTagCont);
    weight_rows.insert(weight_rows.end(), scores.begin(), scores.end());
    y_prev = best;
  }

  DecodeResult result;
  result.tags = tags;
  result.trace.source = std::u32string(surface);
  result.trace.tags = tags;
  if (!tags.empty()) {
    result.trace.weights = Tensor(tags.size(), ts);
    for (std::size_t t = 0; t < tags.size(); ++t) {
      for (std::size_t j = 0; j < ts; ++j) {
        result.trace.weights(t, j) = weight_rows[t * ts + j];
      }
    }
  }
  return result;
}

std::string AttentionTrace::to_csv() const {
  std::string out = "tag";
  for (char32_t c : source) {
    out += ',';
    out += utf8_encode(std::u32string(1, c));
  }
  out += '\n';
  char cell[32];
  for (std::size_t t = 0; t < tags.size(); ++t) {
    out += tags[t];
    for (std::size_t j = 0; j < source.size(); ++j) {
      std::snprintf(cell, sizeof cell, ",%.6f", weights(t, j));
      out += cell;
    }
    out += '\n';
  }
  return out;
}

// ------------------------------------------------------------------ training

Seq2SeqTrainResult train_seq2seq(const std::vector<SyllabifiedWord>& train,
                                 const std::vector<SyllabifiedWord>& valid,
                                 const TrainConfig& cfg,
                                 const Seq2SeqDims& dims) {
  if (train.empty() || valid.empty()) {
    throw std::invalid_argument("train_seq2seq: empty split");
  }
  if (cfg.epochs == 0 || cfg.batch_size == 0) {
    throw std::invalid_argument("train_seq2seq: bad config");
  }

  std::vector<SeqExample> train_ex, valid_ex;
  train_ex.reserve(train.size());
  for (const auto& w : train) train_ex.push_back(make_seq_example(w));
  valid_ex.reserve(valid.size());
  for (const auto& w : valid) valid_ex.push_back(make_seq_example(w));

  Seq2SeqTrainResult result{Seq2SeqModel(dims, cfg.seed), {}, 0};
  Seq2SeqModel& model = result.model;
  Adam adam(cfg.lr);
  Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(train_ex.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best_values = model.snapshot_values();

  auto run_split = [&](const std::vector<SeqExample>& examples,
                       const std::vector<std::size_t>* perm, bool learn) {
    BatchStats tally;
    for (std::size_t first = 0; first < examples.size();
         first += cfg.batch_size) {
      const std::size_t count =
          std::min(cfg.batch_size, examples.size() - first);
      std::vector<const SeqExample*> view;
      view.reserve(count);
      for (std::size_t i = first; i < first + count; ++i) {
        view.push_back(&examples[perm != nullptr ? (*perm)[i] : i]);
      }
      const SeqBatch batch = make_seq_batch(view);
      if (learn) model.zero_grads();
      const BatchStats s = model.forward_backward(batch, learn);
      if (!std::isfinite(s.loss_sum)) {
        throw std::runtime_error("train_seq2seq: loss diverged at epoch " +
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
