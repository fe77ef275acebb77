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

#ifndef JOINTBEAM_MODELS_H_
#define JOINTBEAM_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jointbeam/log_math.h"
#include "jointbeam/vocabulary.h"

namespace jointbeam {

// Linear-domain tolerance for "this row sums to one".
inline constexpr double kNormalizationTolerance = 1e-9;

// kUnchecked skips the sums-to-one validation. Only useful for building
// deliberately unnormalized models in tests (e.g. uniform score shifts).
enum class Normalization { kChecked, kUnchecked };

// FNV-1a (64-bit) over little-endian encoded fields. This is the stable hash
// behind the hash-backed models; the byte encoding is part of the model
// definition and must not change.
class StableHash {
 public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  void add_byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= kPrime;
  }
  void add_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) add_byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = kOffsetBasis;
};

// Softmax over logits concentration * u(sym), where u(sym) in [0, 1) is the
// top 53 bits of the hash of `context` extended by the u32 symbol index.
std::vector<LogProb> hash_log_distribution(const StableHash& context,
                                           std::size_t num_symbols,
                                           double concentration);

// T x (|V| + 1) frame posteriors; column |V| is blank. Frames are 0-based.
class CtcGrid {
 public:
  CtcGrid() = default;

  // Rows of linear probabilities, one per frame.
  static CtcGrid from_probs(std::size_t vocab_size,
                            const std::vector<std::vector<double>>& rows,
                            Normalization check = Normalization::kChecked);

  // Grid whose row t is hash_log_distribution over ('C', seed, t).
  static CtcGrid from_hash(std::size_t vocab_size, std::size_t frames,
                           std::uint64_t seed, double concentration);

  std::size_t frames() const { return frames_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_symbols() const { return vocab_size_ + 1; }
  TokenId blank_id() const { return static_cast<TokenId>(vocab_size_); }

  // Row t in log domain. Throws UsageError if t >= frames().
  std::span<const LogProb> log_posterior(std::size_t t) const;
  // Row t in linear domain, exactly as supplied (or exp of the log row).
  std::span<const double> posterior(std::size_t t) const;

  // Unchecked element access for inner loops.
  LogProb log_prob(std::size_t t, TokenId symbol) const {
    return log_probs_[t * num_symbols() + static_cast<std::size_t>(symbol)];
  }

  friend bool operator==(const CtcGrid&, const CtcGrid&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t vocab_size_ = 0;
  std::vector<double> probs_;
  std::vector<LogProb> log_probs_;
};

// One conditional distribution of a table transducer: P(. | t, s, last) over
// V plus blank (blank last). `last` is empty exactly when s == 0.
struct TransducerTableRow {
  std::size_t t = 0;
  std::size_t s = 0;
  std::optional<TokenId> last;
  std::vector<double> probs;

  friend bool operator==(const TransducerTableRow&, const TransducerTableRow&) = default;
};

// P(z | t, prefix) over V plus blank.
//   kTable: first-order context (t, |prefix|, last token), |prefix| <= max_len.
//   kHash:  depends on (seed, t, full prefix) via StableHash.
class TransducerModel {
 public:
  enum class Kind { kTable, kHash };

  TransducerModel() = default;

  // Rows must cover every (t, s, last) context exactly once.
  static TransducerModel from_table(std::size_t vocab_size, std::size_t frames,
                                    std::size_t max_len,
                                    std::vector<TransducerTableRow> rows,
                                    Normalization check = Normalization::kChecked);
  static TransducerModel from_hash(std::size_t vocab_size, std::size_t frames,
                                   std::uint64_t seed, double concentration);

  Kind kind() const { return kind_; }
  std::size_t frames() const { return frames_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_symbols() const { return vocab_size_ + 1; }
  TokenId blank_id() const { return static_cast<TokenId>(vocab_size_); }
  // Longest prefix the model can condition on; empty for hash models.
  std::optional<std::size_t> max_len() const {
    return kind_ == Kind::kTable ? std::optional(max_len_) : std::nullopt;
  }
  std::uint64_t seed() const { return seed_; }
  double concentration() const { return concentration_; }

  // Throws UsageError for t >= frames() or a prefix longer than max_len().
  std::vector<LogProb> log_posterior(std::size_t t, std::span<const TokenId> prefix) const;
  std::vector<double> posterior(std::size_t t, std::span<const TokenId> prefix) const;
  // log_posterior(t, prefix) for every t, frame-major: frames() x num_symbols().
  std::vector<LogProb> log_posterior_frames(std::span<const TokenId> prefix) const;

  // Table rows in canonical (t, s, last) order. Empty for hash models.
  std::vector<TransducerTableRow> table_rows() const;

  friend bool operator==(const TransducerModel&, const TransducerModel&) = default;

 private:
  std::size_t row_index(std::size_t t, std::span<const TokenId> prefix) const;

  Kind kind_ = Kind::kHash;
  std::size_t vocab_size_ = 0;
  std::size_t frames_ = 0;
  std::size_t max_len_ = 0;
  std::uint64_t seed_ = 0;
  double concentration_ = 1.0;
  std::vector<double> probs_;
  std::vector<LogProb> log_probs_;
};

// One conditional distribution of a table attention model: P(. | s, last)
// over V plus eos (eos last).
struct AttentionTableRow {
  std::size_t s = 0;
  std::optional<TokenId> last;
  std::vector<double> probs;

  friend bool operator==(const AttentionTableRow&, const AttentionTableRow&) = default;
};

inline constexpr double kDefaultEosFloor = 0.01;

// P(y | prefix) over V plus eos. Distributions are indexed by column: regular
// tokens at their id, eos at column |V| (use column_of()).
class AttentionModel {
 public:
  enum class Kind { kTable, kHash };

  AttentionModel() = default;

  // Every row must give eos probability >= eos_floor.
  static AttentionModel from_table(std::size_t vocab_size, std::size_t max_len,
                                   std::vector<AttentionTableRow> rows,
                                   double eos_floor = kDefaultEosFloor,
                                   Normalization check = Normalization::kChecked);
  static AttentionModel from_hash(std::size_t vocab_size, std::uint64_t seed,
                                  double concentration);

  Kind kind() const { return kind_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_symbols() const { return vocab_size_ + 1; }
  TokenId eos_id() const { return static_cast<TokenId>(vocab_size_ + 1); }
  std::size_t eos_column() const { return vocab_size_; }
  std::optional<std::size_t> max_len() const {
    return kind_ == Kind::kTable ? std::optional(max_len_) : std::nullopt;
  }
  std::uint64_t seed() const { return seed_; }
  double concentration() const { return concentration_; }
  double eos_floor() const { return eos_floor_; }

  // Column of a regular token or eos. Throws UsageError for anything else.
  std::size_t column_of(TokenId y) const;

  // Throws UsageError for a prefix longer than max_len().
  std::vector<LogProb> log_posterior(std::span<const TokenId> prefix) const;
  std::vector<double> posterior(std::span<const TokenId> prefix) const;

  std::vector<AttentionTableRow> table_rows() const;

  friend bool operator==(const AttentionModel&, const AttentionModel&) = default;

 private:
  std::size_t row_index(std::span<const TokenId> prefix) const;

  Kind kind_ = Kind::kHash;
  std::size_t vocab_size_ = 0;
  std::size_t max_len_ = 0;
  std::uint64_t seed_ = 0;
  double concentration_ = 1.0;
  double eos_floor_ = kDefaultEosFloor;
  std::vector<double> probs_;
  std::vector<LogProb> log_probs_;
};

}  // namespace jointbeam

#endif  // JOINTBEAM_MODELS_H_
