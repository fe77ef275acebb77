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

#ifndef JOINTBEAM_SRC_SEARCH_INTERNAL_H_
#define JOINTBEAM_SRC_SEARCH_INTERNAL_H_

#include <span>
#include <vector>

#include "jointbeam/hypothesis.h"
#include "jointbeam/model_io.h"
#include "jointbeam/search.h"

namespace jointbeam::internal {

enum class Decoder { kCtc, kRnnt, kAtt };

// Joint scoring by the non-primary decoders. Only decoders with a positive
// weight are ever consulted; the primary decoder's score is owned by the
// driver.
class SecondaryScorers {
 public:
  SecondaryScorers(const ModelBundle& models, const DecoderWeights& weights, Decoder primary,
                   SearchStats& stats);

  // Empty-prefix hypothesis with caches for the active secondaries and zero
  // scores for every weighted decoder (primary included).
  Hypothesis root() const;

  // Children prefix + y for each y, with secondary scores and caches updated.
  // The primary score is copied from the parent; joint is not refreshed.
  std::vector<Hypothesis> extend(const Hypothesis& parent, std::span<const TokenId> ys) const;

  // Replaces secondary prefix scores by complete-sequence (eos) scores.
  void complete(Hypothesis& h) const;

 private:
  const ModelBundle& models_;
  const DecoderWeights& weights_;
  SearchStats& stats_;
  bool ctc_ = false;
  bool rnnt_ = false;
  bool att_ = false;
};

// Indices of the k largest scores, ordered by score descending then index
// ascending.
std::vector<std::size_t> top_k(std::span<const LogProb> scores, std::size_t k);

// Sorts by ranks_before and keeps the first `k`.
void prune(std::vector<Hypothesis>& hyps, std::size_t k);

NBestList to_nbest(std::vector<Hypothesis> finished, std::size_t n_best);

// Validates cfg and the models a driver needs. Throws UsageError.
void check_models(const ModelBundle& models, const SearchConfig& cfg, Decoder primary);

}  // namespace jointbeam::internal

#endif  // JOINTBEAM_SRC_SEARCH_INTERNAL_H_
