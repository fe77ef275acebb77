// Copyright 2026 The jointbeam Authors.
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

#include "jointbeam/oracle.h"

#include <cmath>
#include <string>

#include "jointbeam/alignment.h"
#include "jointbeam/errors.h"

namespace jointbeam::oracle {

namespace {

void check_ctc_guard(const CtcGrid& grid) {
  const double size = std::pow(static_cast<double>(grid.num_symbols()), static_cast<double>(grid.frames()));
  if (size > kCtcAlignmentLimit) throw GuardError("brute_force_ctc", size, kCtcAlignmentLimit);
}

// Calls fn(alignment, probability) for every alignment in (V + blank)^T.
template <typename Fn>
void for_each_ctc_alignment(const CtcGrid& grid, Fn&& fn) {
  check_ctc_guard(grid);
  const std::size_t T = grid.frames();
  const std::size_t K = grid.num_symbols();
  Alignment a{AlignmentKind::kCtc, grid.blank_id(), std::vector<TokenId>(T, 0)};
  while (true) {
    double p = 1.0;
    for (std::size_t t = 0; t < T; ++t) p *= grid.posterior(t)[static_cast<std::size_t>(a.labels[t])];
    fn(a, p);
    // Odometer increment, last frame fastest.
    std::size_t t = T;
    while (t > 0) {
      --t;
      if (static_cast<std::size_t>(++a.labels[t]) < K) break;
      a.labels[t] = 0;
      if (t == 0) return;
    }
  }
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Depth-first walk over the transducer lattice; every leaf is one path.
double rnnt_paths(const TransducerModel& model, const TokenSeq& y, std::size_t frames, std::size_t t,
                  std::size_t s, double prob) {
  const std::span<const TokenId> context(y.data(), s);
  const std::vector<double> dist = model.posterior(t, context);
  const double p_blank = dist[static_cast<std::size_t>(model.blank_id())];
  double total = 0.0;
  if (s < y.size())
    total += rnnt_paths(model, y, frames, t, s + 1, prob * dist[static_cast<std::size_t>(y[s])]);
  if (t + 1 < frames)
    total += rnnt_paths(model, y, frames, t + 1, s, prob * p_blank);
  else if (s == y.size())
    total += prob * p_blank;
  return total;
}

}  // namespace

double brute_force_ctc(const CtcGrid& grid, const TokenSeq& y) {
  double total = 0.0;
  for_each_ctc_alignment(grid, [&](const Alignment& a, double p) {
    if (ctc_collapse(a) == y) total += p;
  });
  return total;
}

std::map<TokenSeq, double> brute_force_ctc_distribution(const CtcGrid& grid) {
  std::map<TokenSeq, double> dist;
  for_each_ctc_alignment(grid, [&](const Alignment& a, double p) {
    if (p > 0.0) dist[ctc_collapse(a)] += p;
  });
  return dist;
}

double brute_force_rnnt(const TransducerModel& model, const TokenSeq& y, std::size_t frames) {
  if (frames == 0 || frames > model.frames())
    throw UsageError("brute_force_rnnt: frames must be in [1, " + std::to_string(model.frames()) + "]");
  const double paths = binomial(frames - 1 + y.size(), y.size());
  if (paths > kRnntPathLimit) throw GuardError("brute_force_rnnt", paths, kRnntPathLimit);
  return rnnt_paths(model, y, frames, 0, 0, 1.0);
}

double brute_force_attention(const AttentionModel& model, const TokenSeq& y) {
  double p = 1.0;
  for (std::size_t s = 0; s < y.size(); ++s)
    p *= model.posterior(std::span<const TokenId>(y.data(), s))[model.column_of(y[s])];
  return p * model.posterior(y)[model.eos_column()];
}

std::vector<TokenSeq> enumerate_sequences(std::size_t vocab_size, std::size_t max_len) {
  double count = 0.0;
  for (std::size_t s = 0; s <= max_len; ++s)
    count += std::pow(static_cast<double>(vocab_size), static_cast<double>(s));
  if (count > kCandidateLimit) throw GuardError("enumerate_sequences", count, kCandidateLimit);

  std::vector<TokenSeq> out;
  TokenSeq cur;
  // Preorder DFS yields lexicographic order.
  auto visit = [&](auto&& self) -> void {
    out.push_back(cur);
    if (cur.size() == max_len) return;
    for (std::size_t v = 0; v < vocab_size; ++v) {
      cur.push_back(static_cast<TokenId>(v));
      self(self);
      cur.pop_back();
    }
  };
  visit(visit);
  return out;
}

namespace {

void check_weighted_models(const ModelBundle& models, const DecoderWeights& w) {
  w.validate();
  if (w.uses_ctc() && !models.ctc) throw UsageError("oracle: mu_ctc > 0 but no CTC grid");
  if (w.uses_rnnt() && !models.transducer) throw UsageError("oracle: mu_rnnt > 0 but no transducer");
  if (w.uses_att() && !models.attention) throw UsageError("oracle: mu_att > 0 but no attention model");
}

BestJoint score_candidate(const ModelBundle& models, const DecoderWeights& w, const TokenSeq& y,
                          const std::map<TokenSeq, double>* ctc_dist) {
  BestJoint b;
  b.tokens = y;
  if (w.uses_ctc()) {
    double p = 0.0;
    if (ctc_dist) {
      auto it = ctc_dist->find(y);
      if (it != ctc_dist->end()) p = it->second;
    } else {
      p = brute_force_ctc(*models.ctc, y);
    }
    b.scores.ctc = p > 0.0 ? std::log(p) : kLogZero;
  }
  if (w.uses_rnnt()) {
    const double p = brute_force_rnnt(*models.transducer, y, models.transducer->frames());
    b.scores.rnnt = p > 0.0 ? std::log(p) : kLogZero;
  }
  if (w.uses_att()) {
    const double p = brute_force_attention(*models.attention, y);
    b.scores.att = p > 0.0 ? std::log(p) : kLogZero;
  }
  b.joint = joint_score(b.scores, y.size(), w);
  return b;
}

}  // namespace

BestJoint brute_force_joint(const ModelBundle& models, const DecoderWeights& w, const TokenSeq& y) {
  check_weighted_models(models, w);
  return score_candidate(models, w, y, nullptr);
}

BestJoint brute_force_best_joint(const ModelBundle& models, const DecoderWeights& w,
                                 std::size_t max_len) {
  check_weighted_models(models, w);
  const std::vector<TokenSeq> candidates = enumerate_sequences(models.vocab.size(), max_len);
  std::map<TokenSeq, double> ctc_dist;
  if (w.uses_ctc()) ctc_dist = brute_force_ctc_distribution(*models.ctc);

  BestJoint best;
  bool have = false;
  for (const TokenSeq& y : candidates) {
    BestJoint b = score_candidate(models, w, y, w.uses_ctc() ? &ctc_dist : nullptr);
    if (!have || ranks_before(b.joint, b.tokens, best.joint, best.tokens)) {
      best = std::move(b);
      have = true;
    }
  }
  return best;
}

}  // namespace jointbeam::oracle
