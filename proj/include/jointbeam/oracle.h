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

#ifndef JOINTBEAM_ORACLE_H_
#define JOINTBEAM_ORACLE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jointbeam/hypothesis.h"
#include "jointbeam/model_io.h"

// Brute-force references in linear-domain arithmetic. Nothing in here shares
// code with the log-domain scorers or the search drivers.
namespace jointbeam::oracle {

inline constexpr double kCtcAlignmentLimit = 1e7;
inline constexpr double kRnntPathLimit = 1e6;
inline constexpr double kCandidateLimit = 1e5;

// Sum over every alignment in (V + blank)^T that collapses to y.
// Throws GuardError when (|V| + 1)^T > kCtcAlignmentLimit.
double brute_force_ctc(const CtcGrid& grid, const TokenSeq& y);

// All sequences with nonzero mass from one pass over the alignment space.
std::map<TokenSeq, double> brute_force_ctc_distribution(const CtcGrid& grid);

// Sum over every lattice path: interleavings of |y| emissions and `frames`
// blanks ending in the blank of the last frame. Throws GuardError when
// C(frames - 1 + |y|, |y|) > kRnntPathLimit.
double brute_force_rnnt(const TransducerModel& model, const TokenSeq& y,
                        std::size_t frames);

// prod_s P(y_s | y_<s) * P(eos | y).
double brute_force_attention(const AttentionModel& model, const TokenSeq& y);

// Every sequence over `vocab_size` tokens with length <= max_len, in
// lexicographic order. Throws GuardError past kCandidateLimit.
std::vector<TokenSeq> enumerate_sequences(std::size_t vocab_size, std::size_t max_len);

struct BestJoint {
  TokenSeq tokens;
  LogProb joint = kLogZero;
  DecoderScores scores;
};

// Complete-sequence joint score of y computed from the brute-force oracles.
BestJoint brute_force_joint(const ModelBundle& models, const DecoderWeights& w,
                            const TokenSeq& y);

// Argmax of the joint score over every sequence with |y| <= max_len, ties to
// the lexicographically smaller sequence. Throws UsageError when a weighted
// decoder has no model.
BestJoint brute_force_best_joint(const ModelBundle& models, const DecoderWeights& w,
                                 std::size_t max_len);

struct Check {
  std::string name;
  bool skipped = false;
  std::optional<double> max_abs_err;
  std::optional<bool> pass;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;

  // True when every check that ran passed.
  bool all_passed() const;
  // {"checks": [{"name", "max_abs_err", "pass", "skipped", "detail"}, ...],
  //  "all_passed": bool}
  nlohmann::json to_json() const;
};

// Linear-domain agreement tolerance between scorers and brute force.
inline constexpr double kAgreementTolerance = 1e-9;

// Runs every scorer/oracle agreement check the bundle supports, for output
// sequences up to max_len (clipped to table capacity and, for CTC, to T).
// Checks for absent models are reported as skipped. Throws GuardError when an
// enumeration would exceed its limit.
Report verify_bundle(const ModelBundle& models, std::size_t max_len);

}  // namespace jointbeam::oracle

#endif  // JOINTBEAM_ORACLE_H_
