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

#ifndef JOINTBEAM_SCORERS_H_
#define JOINTBEAM_SCORERS_H_

#include <memory>
#include <span>
#include <vector>

#include "jointbeam/log_math.h"
#include "jointbeam/models.h"
#include "jointbeam/vocabulary.h"

namespace jointbeam {

// CTC prefix forward variables for one prefix l, frames 0..T-1:
//   nonblank[t]: log P(z_{0..t} collapses to l, z_t is the last token of l)
//   blank[t]:    log P(z_{0..t} collapses to l, z_t is blank)
struct CtcPrefixCache {
  TokenSeq prefix;
  std::vector<LogProb> nonblank;
  std::vector<LogProb> blank;
};

// RNN-T prefix state for one prefix l: emit[t] is the log probability of
// reaching lattice node (t, |l|) through the emission of the last token of l.
// For the empty prefix emit[0] = 0 (the lattice origin) and emit[t>0] = -inf.
struct RnntPrefixCache {
  TokenSeq prefix;
  std::vector<LogProb> emit;
};

template <typename Cache>
struct ScoreResult {
  LogProb alpha = kLogZero;
  // Successor cache for prefix + y. Null when y is eos.
  std::shared_ptr<const Cache> cache;
};

using CtcScoreResult = ScoreResult<CtcPrefixCache>;
using RnntScoreResult = ScoreResult<RnntPrefixCache>;

CtcPrefixCache ctc_prefix_init(const CtcGrid& grid);

// y regular: log of the CTC prefix probability of prefix + y (all alignments
//   whose collapse starts with prefix + y). Extending by the last token of the
//   prefix only consumes blank-ending mass.
// y eos: log P_ctc(prefix), the complete-sequence probability.
// Throws UsageError if cache.prefix != prefix or y is neither.
CtcScoreResult ctc_prefix_score(const CtcGrid& grid, const TokenSeq& prefix,
                                TokenId y, const CtcPrefixCache& cache);

// Empty-prefix state: probability one at the lattice origin.
RnntPrefixCache rnnt_prefix_init(const TransducerModel& model);

// gamma[t] = log of the total probability of sitting at node (t, |prefix|)
// having emitted prefix: emit[t] plus blank transitions from gamma[t-1].
// `log_blank[t]` is log P(blank | t, prefix).
std::vector<LogProb> rnnt_gamma(const RnntPrefixCache& cache,
                                std::span<const LogProb> log_blank);

// y regular: log sum_t emit'[t] where emit'[t] = gamma[t] + log P(y | t, prefix).
// y eos: log(gamma[T-1] * P(blank | T-1, prefix)) = log P_rnnt(prefix).
// Throws UsageError on cache mismatch or an invalid y.
RnntScoreResult rnnt_prefix_score(const TransducerModel& model,
                                  const TokenSeq& prefix, TokenId y,
                                  const RnntPrefixCache& cache);

// rnnt_prefix_score for several extensions of one prefix, sharing the
// per-frame posteriors. Results are in the order of `ys`.
std::vector<RnntScoreResult> rnnt_prefix_score_many(
    const TransducerModel& model, const TokenSeq& prefix,
    std::span<const TokenId> ys, const RnntPrefixCache& cache);

// Single-step log P(y | prefix); y is a regular token or eos.
LogProb attention_score(const AttentionModel& model, const TokenSeq& prefix,
                        TokenId y);

}  // namespace jointbeam

#endif  // JOINTBEAM_SCORERS_H_
