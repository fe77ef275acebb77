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

#ifndef JOINTBEAM_HYPOTHESIS_H_
#define JOINTBEAM_HYPOTHESIS_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jointbeam/log_math.h"
#include "jointbeam/vocabulary.h"

namespace jointbeam {

struct CtcPrefixCache;
struct RnntPrefixCache;

// Decoder weights (mu) plus the additive per-token length penalty (beta).
struct DecoderWeights {
  double mu_ctc = 0.0;
  double mu_rnnt = 0.0;
  double mu_att = 0.0;
  double beta = 0.0;

  bool uses_ctc() const { return mu_ctc > 0.0; }
  bool uses_rnnt() const { return mu_rnnt > 0.0; }
  bool uses_att() const { return mu_att > 0.0; }

  // Throws UsageError unless all mu >= 0 (finite) and at least one mu > 0.
  void validate() const;

  friend bool operator==(const DecoderWeights&, const DecoderWeights&) = default;
};

struct WeightPreset {
  std::string_view name;
  DecoderWeights weights;
};

// Named (mu_ctc, mu_rnnt, mu_att) presets. Which three-decoder triple
// belongs to which search is not settled, so each gets an explicit name:
//   att-driven-default  (0.3, 0.3, 0.4)
//   ctc-driven-default  (0.1, 0.4, 0.5)
//   rnnt-driven-default (0.1, 0.4, 0.5)
// Two-decoder presets: ctc-rnnt (0.3, 0.7, 0), ctc-att (0.3, 0, 0.7),
// rnnt-att (0, 0.5, 0.5).
const std::vector<WeightPreset>& weight_presets();

// Throws UsageError naming the valid presets when `name` is unknown.
DecoderWeights find_weight_preset(std::string_view name);

// Per-decoder cumulative scores. An empty optional means the decoder is not
// part of the joint score.
struct DecoderScores {
  std::optional<LogProb> ctc;
  std::optional<LogProb> rnnt;
  std::optional<LogProb> att;

  friend bool operator==(const DecoderScores&, const DecoderScores&) = default;
};

// mu_ctc * ctc + mu_rnnt * rnnt + mu_att * att + beta * length. Decoders with
// mu == 0 contribute nothing; a nonzero mu with a missing score throws
// UsageError. A zero weight never multiplies a -inf score.
LogProb joint_score(const DecoderScores& scores, std::size_t length,
                    const DecoderWeights& w);

// A search hypothesis. `joint` is kept equal to joint_score(scores,
// prefix.size(), weights) by the search drivers; caches are keyed to prefix.
struct Hypothesis {
  TokenSeq prefix;
  DecoderScores scores;
  LogProb joint = kLogOne;
  std::shared_ptr<const CtcPrefixCache> ctc_cache;
  std::shared_ptr<const RnntPrefixCache> rnnt_cache;
  bool complete = false;
};

inline LogProb joint_score(const Hypothesis& h, const DecoderWeights& w) {
  return joint_score(h.scores, h.prefix.size(), w);
}

// Ranking used everywhere: higher joint first, ties broken by the
// lexicographically smaller token sequence.
inline bool ranks_before(LogProb joint_a, const TokenSeq& a, LogProb joint_b,
                         const TokenSeq& b) {
  if (joint_a != joint_b) return joint_a > joint_b;
  return a < b;
}

inline bool ranks_before(const Hypothesis& a, const Hypothesis& b) {
  return ranks_before(a.joint, a.prefix, b.joint, b.prefix);
}

}  // namespace jointbeam

#endif  // JOINTBEAM_HYPOTHESIS_H_
