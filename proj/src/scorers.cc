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

#include "jointbeam/scorers.h"

#include <string>

#include "jointbeam/errors.h"

namespace jointbeam {

namespace {

bool is_regular(TokenId y, std::size_t vocab_size) {
  return y >= 0 && static_cast<std::size_t>(y) < vocab_size;
}

TokenId eos_of(std::size_t vocab_size) { return static_cast<TokenId>(vocab_size + 1); }

void check_extension(TokenId y, std::size_t vocab_size, const char* who) {
  if (!is_regular(y, vocab_size) && y != eos_of(vocab_size))
    throw UsageError(std::string(who) + ": symbol " + std::to_string(y) +
                     " is neither a regular token nor eos");
}

}  // namespace

// ---------------------------------------------------------------------------
// CTC prefix scoring

CtcPrefixCache ctc_prefix_init(const CtcGrid& grid) {
  const std::size_t T = grid.frames();
  CtcPrefixCache cache;
  cache.nonblank.assign(T, kLogZero);
  cache.blank.resize(T);
  LogProb acc = kLogOne;
  for (std::size_t t = 0; t < T; ++t) {
    acc += grid.log_prob(t, grid.blank_id());
    cache.blank[t] = acc;
  }
  return cache;
}

CtcScoreResult ctc_prefix_score(const CtcGrid& grid, const TokenSeq& prefix, TokenId y,
                                const CtcPrefixCache& cache) {
  if (cache.prefix != prefix) throw UsageError("ctc_prefix_score: cache belongs to a different prefix");
  check_extension(y, grid.vocab_size(), "ctc_prefix_score");
  const std::size_t T = grid.frames();
  if (cache.nonblank.size() != T || cache.blank.size() != T)
    throw UsageError("ctc_prefix_score: cache length does not match the grid");

  CtcScoreResult result;
  if (y == eos_of(grid.vocab_size())) {
    result.alpha = log_add(cache.nonblank[T - 1], cache.blank[T - 1]);
    return result;
  }

  auto next = std::make_shared<CtcPrefixCache>();
  next->prefix = prefix;
  next->prefix.push_back(y);
  next->nonblank.resize(T);
  next->blank.resize(T);

  const bool repeat = !prefix.empty() && prefix.back() == y;
  const TokenId blank = grid.blank_id();
  next->nonblank[0] = prefix.empty() ? grid.log_prob(0, y) : kLogZero;
  next->blank[0] = kLogZero;
  LogProb psi = next->nonblank[0];
  for (std::size_t t = 1; t < T; ++t) {
    // Mass that may emit y as a new token at frame t.
    const LogProb phi = repeat ? cache.blank[t - 1] : log_add(cache.blank[t - 1], cache.nonblank[t - 1]);
    const LogProb emit = grid.log_prob(t, y);
    next->nonblank[t] = log_add(next->nonblank[t - 1], phi) + emit;
    next->blank[t] = log_add(next->blank[t - 1], next->nonblank[t - 1]) + grid.log_prob(t, blank);
    psi = log_add(psi, phi + emit);
  }
  result.alpha = psi;
  result.cache = std::move(next);
  return result;
}

// ---------------------------------------------------------------------------
// RNN-T prefix scoring

RnntPrefixCache rnnt_prefix_init(const TransducerModel& model) {
  RnntPrefixCache cache;
  cache.emit.assign(model.frames(), kLogZero);
  cache.emit[0] = kLogOne;
  return cache;
}

std::vector<LogProb> rnnt_gamma(const RnntPrefixCache& cache, std::span<const LogProb> log_blank) {
  const std::size_t T = cache.emit.size();
  std::vector<LogProb> gamma(T);
  gamma[0] = cache.emit[0];
  for (std::size_t t = 1; t < T; ++t) gamma[t] = log_add(cache.emit[t], gamma[t - 1] + log_blank[t - 1]);
  return gamma;
}

std::vector<RnntScoreResult> rnnt_prefix_score_many(const TransducerModel& model,
                                                    const TokenSeq& prefix,
                                                    std::span<const TokenId> ys,
                                                    const RnntPrefixCache& cache) {
  if (cache.prefix != prefix) throw UsageError("rnnt_prefix_score: cache belongs to a different prefix");
  const std::size_t T = model.frames();
  if (cache.emit.size() != T) throw UsageError("rnnt_prefix_score: cache length does not match the model");
  for (TokenId y : ys) check_extension(y, model.vocab_size(), "rnnt_prefix_score");

  // P(. | t, prefix) for every frame; shared by all extensions.
  const std::size_t S = model.num_symbols();
  const std::vector<LogProb> posteriors = model.log_posterior_frames(prefix);
  std::vector<LogProb> log_blank(T);
  for (std::size_t t = 0; t < T; ++t) log_blank[t] = posteriors[t * S + static_cast<std::size_t>(model.blank_id())];
  const std::vector<LogProb> gamma = rnnt_gamma(cache, log_blank);

  std::vector<RnntScoreResult> results;
  results.reserve(ys.size());
  const TokenId eos = eos_of(model.vocab_size());
  for (TokenId y : ys) {
    RnntScoreResult r;
    if (y == eos) {
      r.alpha = gamma[T - 1] + log_blank[T - 1];
      results.push_back(std::move(r));
      continue;
    }
    auto next = std::make_shared<RnntPrefixCache>();
    next->prefix = prefix;
    next->prefix.push_back(y);
    next->emit.resize(T);
    LogProb total = kLogZero;
    for (std::size_t t = 0; t < T; ++t) {
      next->emit[t] = gamma[t] + posteriors[t * S + static_cast<std::size_t>(y)];
      total = log_add(total, next->emit[t]);
    }
    r.alpha = total;
    r.cache = std::move(next);
    results.push_back(std::move(r));
  }
  return results;
}

RnntScoreResult rnnt_prefix_score(const TransducerModel& model, const TokenSeq& prefix, TokenId y,
                                  const RnntPrefixCache& cache) {
  const TokenId ys[] = {y};
  return std::move(rnnt_prefix_score_many(model, prefix, ys, cache).front());
}

// ---------------------------------------------------------------------------
// Attention

LogProb attention_score(const AttentionModel& model, const TokenSeq& prefix, TokenId y) {
  const std::size_t col = model.column_of(y);
  return model.log_posterior(prefix)[col];
}

}  // namespace jointbeam
