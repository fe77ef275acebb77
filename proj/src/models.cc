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

#include "jointbeam/models.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "jointbeam/errors.h"

namespace jointbeam {

namespace {

constexpr std::uint8_t kCtcTag = 'C';
constexpr std::uint8_t kTransducerTag = 'T';
constexpr std::uint8_t kAttentionTag = 'A';

// Validates one linear row and appends it (and its logs) to the flat tables.
void append_row(const std::vector<double>& row, std::size_t width, Normalization check,
                const std::string& where, std::vector<double>& probs,
                std::vector<LogProb>& log_probs) {
  if (row.size() != width)
    throw UsageError(where + ": expected " + std::to_string(width) + " probabilities, got " +
                     std::to_string(row.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!std::isfinite(row[i]) || row[i] < 0.0)
      throw UsageError(where + "[" + std::to_string(i) + "]: probability must be finite and >= 0");
    sum += row[i];
  }
  if (check == Normalization::kChecked && std::abs(sum - 1.0) > kNormalizationTolerance)
    throw UsageError(where + ": row sums to " + std::to_string(sum) + ", not 1");
  for (double p : row) {
    probs.push_back(p);
    log_probs.push_back(safe_log(p));
  }
}

void append_log_row(const std::vector<LogProb>& row, std::vector<double>& probs,
                    std::vector<LogProb>& log_probs) {
  for (LogProb lp : row) {
    probs.push_back(std::exp(lp));
    log_probs.push_back(lp);
  }
}

void check_concentration(double c) {
  if (!std::isfinite(c) || c <= 0.0) throw UsageError("hash model concentration must be positive");
}

void add_prefix(StableHash& h, std::span<const TokenId> prefix) {
  h.add_u32(static_cast<std::uint32_t>(prefix.size()));
  for (TokenId tok : prefix) h.add_u32(static_cast<std::uint32_t>(tok));
}

void check_prefix_tokens(std::span<const TokenId> prefix, std::size_t vocab_size) {
  for (TokenId tok : prefix) {
    if (tok < 0 || static_cast<std::size_t>(tok) >= vocab_size)
      throw UsageError("prefix holds non-regular token id " + std::to_string(tok));
  }
}

}  // namespace

std::vector<LogProb> hash_log_distribution(const StableHash& context, std::size_t num_symbols,
                                           double concentration) {
  std::vector<LogProb> logits(num_symbols);
  for (std::size_t sym = 0; sym < num_symbols; ++sym) {
    StableHash h = context;
    h.add_u32(static_cast<std::uint32_t>(sym));
    const double unit = static_cast<double>(h.value() >> 11) * 0x1.0p-53;
    logits[sym] = concentration * unit;
  }
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - max);
  const double log_norm = max + std::log(sum);
  for (double& l : logits) l -= log_norm;
  return logits;
}

// ---------------------------------------------------------------------------
// CtcGrid

CtcGrid CtcGrid::from_probs(std::size_t vocab_size, const std::vector<std::vector<double>>& rows,
                            Normalization check) {
  if (rows.empty()) throw UsageError("ctc_grid: needs at least one frame");
  CtcGrid g;
  g.frames_ = rows.size();
  g.vocab_size_ = vocab_size;
  g.probs_.reserve(rows.size() * g.num_symbols());
  g.log_probs_.reserve(rows.size() * g.num_symbols());
  for (std::size_t t = 0; t < rows.size(); ++t)
    append_row(rows[t], g.num_symbols(), check, "ctc_grid[" + std::to_string(t) + "]", g.probs_,
               g.log_probs_);
  return g;
}

CtcGrid CtcGrid::from_hash(std::size_t vocab_size, std::size_t frames, std::uint64_t seed,
                           double concentration) {
  if (frames == 0) throw UsageError("ctc_grid: needs at least one frame");
  check_concentration(concentration);
  CtcGrid g;
  g.frames_ = frames;
  g.vocab_size_ = vocab_size;
  for (std::size_t t = 0; t < frames; ++t) {
    StableHash h;
    h.add_byte(kCtcTag);
    h.add_u64(seed);
    h.add_u32(static_cast<std::uint32_t>(t));
    append_log_row(hash_log_distribution(h, g.num_symbols(), concentration), g.probs_,
                   g.log_probs_);
  }
  return g;
}

std::span<const LogProb> CtcGrid::log_posterior(std::size_t t) const {
  if (t >= frames_)
    throw UsageError("ctc_grid: frame " + std::to_string(t) + " out of range [0, " +
                     std::to_string(frames_) + ")");
  return std::span<const LogProb>(log_probs_).subspan(t * num_symbols(), num_symbols());
}

std::span<const double> CtcGrid::posterior(std::size_t t) const {
  if (t >= frames_)
    throw UsageError("ctc_grid: frame " + std::to_string(t) + " out of range [0, " +
                     std::to_string(frames_) + ")");
  return std::span<const double>(probs_).subspan(t * num_symbols(), num_symbols());
}

// ---------------------------------------------------------------------------
// TransducerModel
//
// Table layout: per frame, one row for the start context (s = 0) followed by
// max_len * |V| rows for (s, last) with s >= 1.

TransducerModel TransducerModel::from_table(std::size_t vocab_size, std::size_t frames,
                                            std::size_t max_len,
                                            std::vector<TransducerTableRow> rows,
                                            Normalization check) {
  if (frames == 0) throw UsageError("transducer: needs at least one frame");
  if (vocab_size == 0) throw UsageError("transducer: empty vocabulary");
  TransducerModel m;
  m.kind_ = Kind::kTable;
  m.vocab_size_ = vocab_size;
  m.frames_ = frames;
  m.max_len_ = max_len;
  const std::size_t per_frame = 1 + max_len * vocab_size;
  const std::size_t expected = frames * per_frame;
  const std::size_t width = m.num_symbols();

  std::vector<const TransducerTableRow*> slots(expected, nullptr);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string where = "transducer.rows[" + std::to_string(i) + "]";
    if (r.t >= frames) throw UsageError(where + ": t out of range");
    if (r.s > max_len) throw UsageError(where + ": s exceeds max_len");
    if ((r.s == 0) != !r.last.has_value())
      throw UsageError(where + ": last must be null exactly when s == 0");
    if (r.last && (*r.last < 0 || static_cast<std::size_t>(*r.last) >= vocab_size))
      throw UsageError(where + ": last is not a regular token");
    const std::size_t idx =
        r.t * per_frame + (r.s == 0 ? 0 : 1 + (r.s - 1) * vocab_size + static_cast<std::size_t>(*r.last));
    if (slots[idx]) throw UsageError(where + ": duplicate context");
    slots[idx] = &r;
  }
  m.probs_.reserve(expected * width);
  m.log_probs_.reserve(expected * width);
  for (std::size_t idx = 0; idx < expected; ++idx) {
    if (!slots[idx]) {
      const std::size_t t = idx / per_frame;
      const std::size_t rem = idx % per_frame;
      std::string ctx = rem == 0 ? "s=0"
                                 : "s=" + std::to_string((rem - 1) / vocab_size + 1) +
                                       ", last=" + std::to_string((rem - 1) % vocab_size);
      throw UsageError("transducer: missing row for t=" + std::to_string(t) + ", " + ctx);
    }
    append_row(slots[idx]->probs, width, check,
               "transducer.rows[" + std::to_string(slots[idx] - rows.data()) + "].probs", m.probs_,
               m.log_probs_);
  }
  return m;
}

TransducerModel TransducerModel::from_hash(std::size_t vocab_size, std::size_t frames,
                                           std::uint64_t seed, double concentration) {
  if (frames == 0) throw UsageError("transducer: needs at least one frame");
  if (vocab_size == 0) throw UsageError("transducer: empty vocabulary");
  check_concentration(concentration);
  TransducerModel m;
  m.kind_ = Kind::kHash;
  m.vocab_size_ = vocab_size;
  m.frames_ = frames;
  m.seed_ = seed;
  m.concentration_ = concentration;
  return m;
}

std::size_t TransducerModel::row_index(std::size_t t, std::span<const TokenId> prefix) const {
  if (t >= frames_)
    throw UsageError("transducer: frame " + std::to_string(t) + " out of range [0, " +
                     std::to_string(frames_) + ")");
  check_prefix_tokens(prefix, vocab_size_);
  if (prefix.size() > max_len_)
    throw UsageError("transducer: prefix length " + std::to_string(prefix.size()) +
                     " exceeds table max_len " + std::to_string(max_len_));
  const std::size_t per_frame = 1 + max_len_ * vocab_size_;
  const std::size_t ctx =
      prefix.empty() ? 0
                     : 1 + (prefix.size() - 1) * vocab_size_ + static_cast<std::size_t>(prefix.back());
  return t * per_frame + ctx;
}

std::vector<LogProb> TransducerModel::log_posterior(std::size_t t,
                                                    std::span<const TokenId> prefix) const {
  if (kind_ == Kind::kHash) {
    if (t >= frames_)
      throw UsageError("transducer: frame " + std::to_string(t) + " out of range [0, " +
                       std::to_string(frames_) + ")");
    check_prefix_tokens(prefix, vocab_size_);
    StableHash h;
    h.add_byte(kTransducerTag);
    h.add_u64(seed_);
    add_prefix(h, prefix);
    h.add_u32(static_cast<std::uint32_t>(t));
    return hash_log_distribution(h, num_symbols(), concentration_);
  }
  const std::size_t row = row_index(t, prefix);
  auto first = log_probs_.begin() + static_cast<std::ptrdiff_t>(row * num_symbols());
  return std::vector<LogProb>(first, first + static_cast<std::ptrdiff_t>(num_symbols()));
}

std::vector<LogProb> TransducerModel::log_posterior_frames(std::span<const TokenId> prefix) const {
  std::vector<LogProb> out;
  out.reserve(frames_ * num_symbols());
  if (kind_ == Kind::kHash) {
    check_prefix_tokens(prefix, vocab_size_);
    // The prefix is hashed once; only the frame index differs per row.
    StableHash ctx;
    ctx.add_byte(kTransducerTag);
    ctx.add_u64(seed_);
    add_prefix(ctx, prefix);
    for (std::size_t t = 0; t < frames_; ++t) {
      StableHash h = ctx;
      h.add_u32(static_cast<std::uint32_t>(t));
      const auto row = hash_log_distribution(h, num_symbols(), concentration_);
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }
  for (std::size_t t = 0; t < frames_; ++t) {
    auto first = log_probs_.begin() + static_cast<std::ptrdiff_t>(row_index(t, prefix) * num_symbols());
    out.insert(out.end(), first, first + static_cast<std::ptrdiff_t>(num_symbols()));
  }
  return out;
}

std::vector<double> TransducerModel::posterior(std::size_t t, std::span<const TokenId> prefix) const {
  if (kind_ == Kind::kHash) {
    std::vector<double> out = log_posterior(t, prefix);
    for (double& v : out) v = std::exp(v);
    return out;
  }
  const std::size_t row = row_index(t, prefix);
  auto first = probs_.begin() + static_cast<std::ptrdiff_t>(row * num_symbols());
  return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(num_symbols()));
}

std::vector<TransducerTableRow> TransducerModel::table_rows() const {
  std::vector<TransducerTableRow> rows;
  if (kind_ != Kind::kTable) return rows;
  const std::size_t width = num_symbols();
  std::size_t idx = 0;
  for (std::size_t t = 0; t < frames_; ++t) {
    for (std::size_t s = 0; s <= max_len_; ++s) {
      const std::size_t contexts = s == 0 ? 1 : vocab_size_;
      for (std::size_t c = 0; c < contexts; ++c, ++idx) {
        TransducerTableRow r;
        r.t = t;
        r.s = s;
        if (s > 0) r.last = static_cast<TokenId>(c);
        r.probs.assign(probs_.begin() + static_cast<std::ptrdiff_t>(idx * width),
                       probs_.begin() + static_cast<std::ptrdiff_t>((idx + 1) * width));
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// AttentionModel

AttentionModel AttentionModel::from_table(std::size_t vocab_size, std::size_t max_len,
                                          std::vector<AttentionTableRow> rows, double eos_floor,
                                          Normalization check) {
  if (vocab_size == 0) throw UsageError("attention: empty vocabulary");
  if (!(eos_floor > 0.0 && eos_floor < 1.0)) throw UsageError("attention: eos_floor must be in (0, 1)");
  AttentionModel m;
  m.kind_ = Kind::kTable;
  m.vocab_size_ = vocab_size;
  m.max_len_ = max_len;
  m.eos_floor_ = eos_floor;
  const std::size_t expected = 1 + max_len * vocab_size;
  const std::size_t width = m.num_symbols();

  std::vector<const AttentionTableRow*> slots(expected, nullptr);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string where = "attention.rows[" + std::to_string(i) + "]";
    if (r.s > max_len) throw UsageError(where + ": s exceeds max_len");
    if ((r.s == 0) != !r.last.has_value())
      throw UsageError(where + ": last must be null exactly when s == 0");
    if (r.last && (*r.last < 0 || static_cast<std::size_t>(*r.last) >= vocab_size))
      throw UsageError(where + ": last is not a regular token");
    const std::size_t idx =
        r.s == 0 ? 0 : 1 + (r.s - 1) * vocab_size + static_cast<std::size_t>(*r.last);
    if (slots[idx]) throw UsageError(where + ": duplicate context");
    slots[idx] = &r;
  }
  for (std::size_t idx = 0; idx < expected; ++idx) {
    if (!slots[idx]) {
      std::string ctx = idx == 0 ? "s=0"
                                 : "s=" + std::to_string((idx - 1) / vocab_size + 1) +
                                       ", last=" + std::to_string((idx - 1) % vocab_size);
      throw UsageError("attention: missing row for " + ctx);
    }
    const std::string where =
        "attention.rows[" + std::to_string(slots[idx] - rows.data()) + "].probs";
    append_row(slots[idx]->probs, width, check, where, m.probs_, m.log_probs_);
    if (slots[idx]->probs[vocab_size] < eos_floor)
      throw UsageError(where + ": eos probability " + std::to_string(slots[idx]->probs[vocab_size]) +
                       " below floor " + std::to_string(eos_floor));
  }
  return m;
}

AttentionModel AttentionModel::from_hash(std::size_t vocab_size, std::uint64_t seed,
                                         double concentration) {
  if (vocab_size == 0) throw UsageError("attention: empty vocabulary");
  check_concentration(concentration);
  AttentionModel m;
  m.kind_ = Kind::kHash;
  m.vocab_size_ = vocab_size;
  m.seed_ = seed;
  m.concentration_ = concentration;
  return m;
}

std::size_t AttentionModel::column_of(TokenId y) const {
  if (y >= 0 && static_cast<std::size_t>(y) < vocab_size_) return static_cast<std::size_t>(y);
  if (y == eos_id()) return eos_column();
  throw UsageError("attention: symbol " + std::to_string(y) + " is neither a token nor eos");
}

std::size_t AttentionModel::row_index(std::span<const TokenId> prefix) const {
  check_prefix_tokens(prefix, vocab_size_);
  if (prefix.size() > max_len_)
    throw UsageError("attention: prefix length " + std::to_string(prefix.size()) +
                     " exceeds table max_len " + std::to_string(max_len_));
  return prefix.empty() ? 0
                        : 1 + (prefix.size() - 1) * vocab_size_ + static_cast<std::size_t>(prefix.back());
}

std::vector<LogProb> AttentionModel::log_posterior(std::span<const TokenId> prefix) const {
  if (kind_ == Kind::kHash) {
    check_prefix_tokens(prefix, vocab_size_);
    StableHash h;
    h.add_byte(kAttentionTag);
    h.add_u64(seed_);
    add_prefix(h, prefix);
    return hash_log_distribution(h, num_symbols(), concentration_);
  }
  const std::size_t row = row_index(prefix);
  auto first = log_probs_.begin() + static_cast<std::ptrdiff_t>(row * num_symbols());
  return std::vector<LogProb>(first, first + static_cast<std::ptrdiff_t>(num_symbols()));
}

std::vector<double> AttentionModel::posterior(std::span<const TokenId> prefix) const {
  if (kind_ == Kind::kHash) {
    std::vector<double> out = log_posterior(prefix);
    for (double& v : out) v = std::exp(v);
    return out;
  }
  const std::size_t row = row_index(prefix);
  auto first = probs_.begin() + static_cast<std::ptrdiff_t>(row * num_symbols());
  return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(num_symbols()));
}

std::vector<AttentionTableRow> AttentionModel::table_rows() const {
  std::vector<AttentionTableRow> rows;
  if (kind_ != Kind::kTable) return rows;
  const std::size_t width = num_symbols();
  std::size_t idx = 0;
  for (std::size_t s = 0; s <= max_len_; ++s) {
    const std::size_t contexts = s == 0 ? 1 : vocab_size_;
    for (std::size_t c = 0; c < contexts; ++c, ++idx) {
      AttentionTableRow r;
      r.s = s;
      if (s > 0) r.last = static_cast<TokenId>(c);
      r.probs.assign(probs_.begin() + static_cast<std::ptrdiff_t>(idx * width),
                     probs_.begin() + static_cast<std::ptrdiff_t>((idx + 1) * width));
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace jointbeam
