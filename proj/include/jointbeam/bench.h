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

#ifndef JOINTBEAM_BENCH_H_
#define JOINTBEAM_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jointbeam/model_io.h"
#include "jointbeam/search.h"

namespace jointbeam::bench {

// Synthetic duration of one encoder frame (4x subsampled 10 ms features).
inline constexpr double kFrameShiftSeconds = 0.04;

// Processing time over speech duration. Throws UsageError unless speech_s > 0.
double real_time_factor(double proc_s, double speech_s);

struct Utterance {
  std::string name;
  std::shared_ptr<const ModelBundle> models;
  double speech_duration_s = 0.0;
};

// Duration = frames * kFrameShiftSeconds. Throws UsageError for a bundle
// without a time axis.
Utterance make_utterance(std::string name, std::shared_ptr<const ModelBundle> models);

// Hash-backed utterances used for RTF measurements (8 tokens, 24..38 frames).
std::vector<Utterance> synthetic_suite();

struct BenchRecord {
  std::string algorithm;
  std::size_t k_beam = 0;
  std::size_t k_pre = 0;
  DecoderWeights weights;
  double mean_rtf = 0.0;
  double mean_joint_score = 0.0;
  double wall_time_s = 0.0;
  std::size_t repeats = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct Measurement {
  BenchRecord record;
  // FNV-1a over the serialized n-best lists of every utterance.
  std::uint64_t output_checksum = 0;
  // False if any repeat produced a different checksum than the warm-up.
  bool deterministic = true;
};

// RTF = sum T_proc / sum T_speech per repeat, averaged over `repeats` timed
// runs after one untimed warm-up. mean_joint_score averages the top-1 joint
// score over utterances. Throws UsageError on an empty set or repeats == 0.
Measurement measure_rtf(std::span<const Utterance> utterances, const SearchConfig& cfg,
                        std::size_t repeats);

struct WeightChoice {
  std::string name;  // preset name, "default", or "c:r:a"
  // Empty means the per-algorithm default.
  std::optional<DecoderWeights> weights;
};

// Preset name, "default", "rnnt-weight-sweep" (expands to five choices), or
// an explicit "mu_ctc:mu_rnnt:mu_att" triple.
std::vector<WeightChoice> parse_weight_choices(std::string_view spec);

struct SweepGrid {
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> k_beams;
  std::vector<WeightChoice> weights;
  // Prebeam per row is max(k_pre, k_beam).
  std::size_t k_pre = 30;
  double beta = 0.0;
  std::size_t repeats = 3;
};

// One record per (algorithm, k_beam, weights) in that nesting order. A decode
// failure is rethrown as Error naming the grid point. `on_row` (optional)
// sees each record as soon as it is measured.
std::vector<BenchRecord> sweep(const SweepGrid& grid, std::span<const Utterance> utterances,
                               const std::function<void(const BenchRecord&)>& on_row = {});

// algorithm,k_beam,k_pre,mu_ctc,mu_rnnt,mu_att,beta,mean_rtf,mean_joint_score,wall_time_s,repeats
std::string_view csv_header();
// Floating fields use the shortest round-trip representation.
std::string to_csv_row(const BenchRecord& r);
// Throws UsageError on malformed rows.
BenchRecord parse_csv_row(std::string_view row);

// Levenshtein distance between token sequences.
std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b);

}  // namespace jointbeam::bench

#endif  // JOINTBEAM_BENCH_H_
