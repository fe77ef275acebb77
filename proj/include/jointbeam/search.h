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

#ifndef JOINTBEAM_SEARCH_H_
#define JOINTBEAM_SEARCH_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "jointbeam/hypothesis.h"
#include "jointbeam/model_io.h"

namespace jointbeam {

enum class Algorithm { kAttentionDriven, kCtcDriven, kRnntDriven };

// "att", "ctc", "rnnt".
std::string_view algorithm_name(Algorithm a);
// Throws UsageError listing the valid names.
Algorithm parse_algorithm(std::string_view name);

// Default preset for the driver (att-driven-default etc.).
DecoderWeights default_weights(Algorithm a);

struct SearchConfig {
  Algorithm algorithm = Algorithm::kAttentionDriven;
  DecoderWeights weights;
  std::size_t k_beam = 20;
  // Per-hypothesis expansion width of the primary decoder; k_pre >= k_beam.
  std::size_t k_pre = 30;
  // Cap on |Y|. Unset means 2T for label-synchronous search and T for the
  // time-synchronous drivers, clipped to what table models can condition on.
  std::optional<std::size_t> max_output_len;
  std::size_t n_best = 1;

  // Throws UsageError on inconsistent sizes or weights.
  void validate() const;
};

struct NBestEntry {
  TokenSeq tokens;
  LogProb joint = kLogZero;
  DecoderScores scores;

  friend bool operator==(const NBestEntry&, const NBestEntry&) = default;
};

// Sorted by joint score descending, ties by token sequence ascending.
using NBestList = std::vector<NBestEntry>;

// How often each decoder was consulted. `*_scorer_calls` count joint-scoring
// invocations of a secondary decoder (one per scored extension);
// `primary_calls` counts posterior lookups made by the driving decoder to
// expand hypotheses.
struct SearchStats {
  std::size_t ctc_scorer_calls = 0;
  std::size_t rnnt_scorer_calls = 0;
  std::size_t att_scorer_calls = 0;
  std::size_t primary_calls = 0;
  std::size_t steps = 0;
};

struct SearchResult {
  NBestList nbest;
  SearchStats stats;
};

// Effective |Y| cap for this bundle and config. Throws UsageError when an
// explicit cap exceeds what a table model supports.
std::size_t resolve_max_output_len(const ModelBundle& models, const SearchConfig& cfg);

// Label-synchronous search driven by the attention decoder, scored jointly
// with CTC and RNN-T prefix scoring.
SearchResult attention_driven_search(const ModelBundle& models, const SearchConfig& cfg);

// Time-synchronous CTC prefix beam search, scored jointly with attention and
// RNN-T prefix scoring.
SearchResult ctc_driven_search(const ModelBundle& models, const SearchConfig& cfg);

// Time-synchronous transducer beam search, scored jointly with attention and
// CTC prefix scoring.
SearchResult rnnt_driven_search(const ModelBundle& models, const SearchConfig& cfg);

// Dispatches on cfg.algorithm.
SearchResult run_search(const ModelBundle& models, const SearchConfig& cfg);

// [{"tokens": [labels], "joint": x, "ctc": x|null, "rnnt": x|null,
//   "att": x|null}, ...]. -inf scores serialize as null.
nlohmann::json nbest_to_json(const NBestList& nbest, const Vocabulary& vocab);

}  // namespace jointbeam

#endif  // JOINTBEAM_SEARCH_H_
