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

#include "tenyisyl/crf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tenyisyl {

namespace {

double log_sum_exp(const double* v, std::size_t n) {
  double mx = v[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, v[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

void check_instance(const Tensor& emissions, const CrfLayer& layer) {
  if (emissions.rows() == 0 || emissions.cols() != layer.tag_count()) {
    throw std::invalid_argument("crf: emissions shape mismatch");
  }
  if (!lin::all_finite(emissions)) {
    throw std::invalid_argument("crf: non-finite emissions");
  }
}

// Forward variables in log space: alpha(t, j) = log-sum over paths ending in
// tag j at step t.
Tensor forward_alphas(const Tensor& e, const CrfLayer& layer) {
  const std::size_t tt = e.rows(), n = e.cols();
  Tensor alpha(tt, n);
  for (std::size_t j = 0; j < n; ++j) {
    alpha(0, j) = e(0, j) + layer.bias(0, j) + layer.left(0, j);
  }
  std::vector<double> scratch(n);
  for (std::size_t t = 1; t < tt; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        scratch[i] = alpha(t - 1, i) + layer.chain(i, j);
      }
      alpha(t, j) =
          e(t, j) + layer.bias(0, j) + log_sum_exp(scratch.data(), n);
    }
  }
  return alpha;
}

}  // namespace

double crf_sequence_score(const Tensor& emissions, const std::vector<int>& path,
                          const CrfLayer& layer) {
  check_instance(emissions, layer);
  if (path.size() != emissions.rows()) {
    throw std::invalid_argument("crf_sequence_score: path length mismatch");
  }
  const std::size_t n = layer.tag_count();
  double score = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    const int y = path[t];
    if (y < 0 || static_cast<std::size_t>(y) >= n) {
      throw std::invalid_argument("crf_sequence_score: tag out of range");
    }
    score += emissions(t, y) + layer.bias(0, y);
    if (t > 0) score += layer.chain(path[t - 1], y);
  }
  score += layer.left(0, path.front()) + layer.right(0, path.back());
  return score;
}

double crf_log_partition(const Tensor& emissions, const CrfLayer& layer) {
  check_instance(emissions, layer);
  const std::size_t tt = emissions.rows(), n = emissions.cols();
  const Tensor alpha = forward_alphas(emissions, layer);
  std::vector<double> last(n);
  for (std::size_t j = 0; j < n; ++j) {
    last[j] = alpha(tt - 1, j) + layer.right(0, j);
  }
  return log_sum_exp(last.data(), n);
}

double crf_nll(const Tensor& emissions, const std::vector<int>& gold,
               const CrfLayer& layer, CrfGrads* grads) {
  const double log_z = crf_log_partition(emissions, layer);
  const double gold_score = crf_sequence_score(emissions, gold, layer);
  if (grads == nullptr) return log_z - gold_score;

  const std::size_t tt = emissions.rows(), n = emissions.cols();
  const Tensor alpha = forward_alphas(emissions, layer);

  // Backward variables: beta(t, i) = log-sum over path suffixes from tag i.
  Tensor beta(tt, n);
  for (std::size_t i = 0; i < n; ++i) beta(tt - 1, i) = layer.right(0, i);
  std::vector<double> scratch(n);
  for (std::size_t t = tt - 1; t-- > 0;) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        scratch[j] = layer.chain(i, j) + emissions(t + 1, j) +
                     layer.bias(0, j) + beta(t + 1, j);
      }
      beta(t, i) = log_sum_exp(scratch.data(), n);
    }
  }

  grads->d_emissions = Tensor(tt, n);
  grads->d_chain = Tensor(n, n);
  grads->d_bias = Tensor(1, n);
  grads->d_left = Tensor(1, n);
  grads->d_right = Tensor(1, n);

  for (std::size_t t = 0; t < tt; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      const double marginal = std::exp(alpha(t, j) + beta(t, j) - log_z);
      const double d = marginal - (gold[t] == static_cast<int>(j) ? 1.0 : 0.0);
      grads->d_emissions(t, j) = d;
      grads->d_bias(0, j) += d;
    }
  }
  for (std::size_t t = 0; t + 1 < tt; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double pair =
            std::exp(alpha(t, i) + layer.chain(i, j) + emissions(t + 1, j) +
                     layer.bias(0, j) + beta(t + 1, j) - log_z);
        const bool on_gold = gold[t] == static_cast<int>(i) &&
                             gold[t + 1] == static_cast<int>(j);
        grads->d_chain(i, j) += pair - (on_gold ? 1.0 : 0.0);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double first = std::exp(alpha(0, j) + beta(0, j) - log_z);
    grads->d_left(0, j) = first - (gold.front() == static_cast<int>(j));
    const double last =
        std::exp(alpha(tt - 1, j) + layer.right(0, j) - log_z);
    grads->d_right(0, j) = last - (gold.back() == static_cast<int>(j));
  }
  return log_z - gold_score;
}

std::pair<std::vector<int>, double> viterbi_decode(const Tensor& emissions,
                                                   const CrfLayer& layer) {
  check_instance(emissions, layer);
  const std::size_t tt = emissions.rows(), n = emissions.cols();
  Tensor best(tt, n);
  std::vector<std::vector<int>> back(tt, std::vector<int>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    best(0, j) = emissions(0, j) + layer.bias(0, j) + layer.left(0, j);
  }
  for (std::size_t t = 1; t < tt; ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      double mx = best(t - 1, 0) + layer.chain(0, j);
      int arg = 0;
      for (std::size_t i = 1; i < n; ++i) {
        const double cand = best(t - 1, i) + layer.chain(i, j);
        if (cand > mx) {
          mx = cand;
          arg = static_cast<int>(i);
        }
      }
      best(t, j) = emissions(t, j) + layer.bias(0, j) + mx;
      back[t][j] = arg;
    }
  }
  double mx = best(tt - 1, 0) + layer.right(0, 0);
  int arg = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double cand = best(tt - 1, j) + layer.right(0, j);
    if (cand > mx) {
      mx = cand;
      arg = static_cast<int>(j);
    }
  }
  std::vector<int> path(tt);
  path[tt - 1] = arg;
  for (std::size_t t = tt - 1; t > 0; --t) {
    path[t - 1] = back[t][path[t]];
  }
  return {std::move(path), mx};
}

}  // namespace tenyisyl
