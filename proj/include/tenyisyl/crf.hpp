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

#pragma once

#include <utility>
#include <vector>

#include "tenyisyl/tensor.hpp"

namespace tenyisyl {

/// Linear-chain CRF over n tags (n = 3 in the taggers). The input kernel
/// maps upstream dense logits to emission scores and is applied by the
/// model before any of the functions below, so they see transformed
/// emissions; scoring itself adds the per-tag bias, chain transitions, and
/// boundary scores. At n = 3 the layer holds exactly 27 parameters.
struct CrfLayer {
  Tensor kernel;  // n×n, logits → emissions (consumed upstream)
  Tensor chain;   // n×n, chain(i, j) scores the transition i→j
  Tensor bias;    // 1×n
  Tensor left;    // 1×n, start-boundary score
  Tensor right;   // 1×n, end-boundary score

  explicit CrfLayer(std::size_t n = 3)
      : kernel(n, n), chain(n, n), bias(1, n), left(1, n), right(1, n) {}

  std::size_t tag_count() const { return bias.cols(); }
  std::size_t parameter_count() const {
    return kernel.size() + chain.size() + bias.size() + left.size() +
           right.size();
  }
};

/// Score of one tag path: Σ_t (emission + bias) + Σ_t chain + boundaries.
double crf_sequence_score(const Tensor& emissions, const std::vector<int>& path,
                          const CrfLayer& layer);

/// log Σ_paths exp(score), by the forward recursion in log space.
double crf_log_partition(const Tensor& emissions, const CrfLayer& layer);

/// Gradients of the negative log-likelihood, same shapes as their sources.
struct CrfGrads {
  Tensor d_emissions;
  Tensor d_chain;
  Tensor d_bias;
  Tensor d_left;
  Tensor d_right;
};

/// log_partition − sequence_score; ≥ 0. When grads is non-null it receives
/// exact derivatives from forward-backward marginals.
double crf_nll(const Tensor& emissions, const std::vector<int>& gold,
               const CrfLayer& layer, CrfGrads* grads = nullptr);

/// Exact best path and its score; ties resolved toward the lower tag index.
std::pair<std::vector<int>, double> viterbi_decode(const Tensor& emissions,
                                                   const CrfLayer& layer);

}  // namespace tenyisyl
