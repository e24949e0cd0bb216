// Copyright 2026 The canex Authors. All Rights Reserved.
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

#include "canex/nlu/crf.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "canex/error.hpp"
#include "canex/numerics/functions.hpp"

namespace canex::nlu {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

int check_shapes(const Tensor& emissions, const Tensor& transitions) {
  const auto k = static_cast<int>(emissions.rows());
  if (k < 1) throw ContractViolation("crf: emissions need at least one tag row");
  if (emissions.cols() < 1) throw ContractViolation("crf: empty sequence");
  if (transitions.rows() != k + 2 || transitions.cols() != k + 2) {
    throw ContractViolation("crf: transitions must be (tags+2)x(tags+2) = " +
                            std::to_string(k + 2) + " square");
  }
  return k;
}

void check_tags(std::span<const int> tags, int k, Eigen::Index len) {
  if (static_cast<Eigen::Index>(tags.size()) != len) {
    throw ContractViolation("crf: tag sequence length " + std::to_string(tags.size()) +
                            " differs from emission length " + std::to_string(len));
  }
  for (int t : tags) {
    if (t < 0 || t >= k) throw ContractViolation("crf: tag index " + std::to_string(t) + " out of range");
  }
}

// alpha(j, i): log-sum of all prefixes ending in tag j at position i.
Tensor forward_scores(const Tensor& e, const Tensor& tr, int k) {
  const Eigen::Index len = e.cols();
  Tensor alpha(k, len);
  const int bos = crf_bos(k);
  for (int j = 0; j < k; ++j) alpha(j, 0) = tr(bos, j) + e(j, 0);
  std::vector<double> terms(static_cast<std::size_t>(k));
  for (Eigen::Index i = 1; i < len; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int p = 0; p < k; ++p) terms[static_cast<std::size_t>(p)] = alpha(p, i - 1) + tr(p, j);
      alpha(j, i) = numerics::log_sum_exp(terms) + e(j, i);
    }
  }
  return alpha;
}

// beta(j, i): log-sum of all suffixes after tag j at position i, EOS included.
Tensor backward_scores(const Tensor& e, const Tensor& tr, int k) {
  const Eigen::Index len = e.cols();
  Tensor beta(k, len);
  const int eos = crf_eos(k);
  for (int j = 0; j < k; ++j) beta(j, len - 1) = tr(j, eos);
  std::vector<double> terms(static_cast<std::size_t>(k));
  for (Eigen::Index i = len - 1; i-- > 0;) {
    for (int j = 0; j < k; ++j) {
      for (int n = 0; n < k; ++n) {
        terms[static_cast<std::size_t>(n)] = tr(j, n) + e(n, i + 1) + beta(n, i + 1);
      }
      beta(j, i) = numerics::log_sum_exp(terms);
    }
  }
  return beta;
}

double partition_from_alpha(const Tensor& alpha, const Tensor& tr, int k) {
  const int eos = crf_eos(k);
  double z = kNegInf;
  for (int j = 0; j < k; ++j) z = lse2(z, alpha(j, alpha.cols() - 1) + tr(j, eos));
  return z;
}

}  // namespace

void mask_transitions(Tensor& transitions, int tag_count) {
  transitions.col(crf_bos(tag_count)).setConstant(kNegInf);
  transitions.row(crf_eos(tag_count)).setConstant(kNegInf);
}

double crf_path_score(const Tensor& emissions, const Tensor& transitions, std::span<const int> tags) {
  const int k = check_shapes(emissions, transitions);
  check_tags(tags, k, emissions.cols());
  double s = transitions(crf_bos(k), tags[0]);
  for (std::size_t i = 0; i < tags.size(); ++i) {
    s += emissions(tags[i], static_cast<Eigen::Index>(i));
    if (i + 1 < tags.size()) s += transitions(tags[i], tags[i + 1]);
  }
  return s + transitions(tags.back(), crf_eos(k));
}

double crf_log_partition(const Tensor& emissions, const Tensor& transitions) {
  const int k = check_shapes(emissions, transitions);
  return partition_from_alpha(forward_scores(emissions, transitions, k), transitions, k);
}

double crf_negative_log_likelihood(const Tensor& emissions, const Tensor& transitions,
                                   std::span<const int> tags) {
  const double score = crf_path_score(emissions, transitions, tags);
  return crf_log_partition(emissions, transitions) - score;
}

ViterbiResult crf_viterbi_decode(const Tensor& emissions, const Tensor& transitions) {
  const int k = check_shapes(emissions, transitions);
  const Eigen::Index len = emissions.cols();
  Tensor best(k, len);
  Eigen::MatrixXi back(k, len);
  for (int j = 0; j < k; ++j) {
    best(j, 0) = transitions(crf_bos(k), j) + emissions(j, 0);
    back(j, 0) = -1;
  }
  for (Eigen::Index i = 1; i < len; ++i) {
    for (int j = 0; j < k; ++j) {
      int arg = 0;
      double val = best(0, i - 1) + transitions(0, j);
      for (int p = 1; p < k; ++p) {
        const double cand = best(p, i - 1) + transitions(p, j);
        if (cand > val) {
          val = cand;
          arg = p;
        }
      }
      best(j, i) = val + emissions(j, i);
      back(j, i) = arg;
    }
  }
  int last = 0;
  double score = best(0, len - 1) + transitions(0, crf_eos(k));
  for (int j = 1; j < k; ++j) {
    const double cand = best(j, len - 1) + transitions(j, crf_eos(k));
    if (cand > score) {
      score = cand;
      last = j;
    }
  }
  ViterbiResult out;
  out.score = score;
  out.tags.assign(static_cast<std::size_t>(len), 0);
  out.tags.back() = last;
  for (Eigen::Index i = len - 1; i > 0; --i) {
    out.tags[static_cast<std::size_t>(i - 1)] = back(out.tags[static_cast<std::size_t>(i)], i);
  }
  return out;
}

numerics::Var crf_nll(numerics::Var emissions, numerics::Var transitions, std::span<const int> tags) {
  const Tensor& e = emissions.value();
  const Tensor& tr = transitions.value();
  const int k = check_shapes(e, tr);
  check_tags(tags, k, e.cols());

  auto alpha = std::make_shared<Tensor>(forward_scores(e, tr, k));
  const double log_z = partition_from_alpha(*alpha, tr, k);
  const double gold = crf_path_score(e, tr, tags);
  Tensor out(1, 1);
  out(0, 0) = log_z - gold;

  std::vector<int> gold_tags(tags.begin(), tags.end());
  const Tensor* ev = &e;
  const Tensor* tv = &tr;
  return emissions.tape().record(
      std::move(out), {emissions, transitions},
      [alpha, log_z, gold_tags = std::move(gold_tags), ev, tv, k](
          const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
        const double scale = g(0, 0);
        const Tensor& e = *ev;
        const Tensor& tr = *tv;
        const Eigen::Index len = e.cols();
        const Tensor beta = backward_scores(e, tr, k);
        const int bos = crf_bos(k);
        const int eos = crf_eos(k);
        if (gi[0]) {
          Tensor& ge = *gi[0];
          for (Eigen::Index i = 0; i < len; ++i) {
            for (int j = 0; j < k; ++j) ge(j, i) += scale * std::exp((*alpha)(j, i) + beta(j, i) - log_z);
            ge(gold_tags[static_cast<std::size_t>(i)], i) -= scale;
          }
        }
        if (gi[1]) {
          Tensor& gt = *gi[1];
          for (int j = 0; j < k; ++j) {
            gt(bos, j) += scale * std::exp(tr(bos, j) + e(j, 0) + beta(j, 0) - log_z);
            gt(j, eos) += scale * std::exp((*alpha)(j, len - 1) + tr(j, eos) - log_z);
          }
          for (Eigen::Index i = 1; i < len; ++i) {
            for (int p = 0; p < k; ++p) {
              for (int n = 0; n < k; ++n) {
                gt(p, n) += scale *
                            std::exp((*alpha)(p, i - 1) + tr(p, n) + e(n, i) + beta(n, i) - log_z);
              }
            }
          }
          gt(bos, gold_tags.front()) -= scale;
          for (std::size_t i = 0; i + 1 < gold_tags.size(); ++i) gt(gold_tags[i], gold_tags[i + 1]) -= scale;
          gt(gold_tags.back(), eos) -= scale;
        }
      });
}

}  // namespace canex::nlu
