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

#include "jointbeam/search.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "jointbeam/errors.h"
#include "jointbeam/scorers.h"
#include "search_internal.h"

namespace jointbeam {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kAttentionDriven: return "att";
    case Algorithm::kCtcDriven: return "ctc";
    case Algorithm::kRnntDriven: return "rnnt";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "att") return Algorithm::kAttentionDriven;
  if (name == "ctc") return Algorithm::kCtcDriven;
  if (name == "rnnt") return Algorithm::kRnntDriven;
  throw UsageError("unknown algorithm \"" + std::string(name) + "\" (valid: att, ctc, rnnt)");
}

DecoderWeights default_weights(Algorithm a) {
  switch (a) {
    case Algorithm::kAttentionDriven: return find_weight_preset("att-driven-default");
    case Algorithm::kCtcDriven: return find_weight_preset("ctc-driven-default");
    case Algorithm::kRnntDriven: return find_weight_preset("rnnt-driven-default");
  }
  return {};
}

void SearchConfig::validate() const {
  weights.validate();
  if (k_beam < 1) throw UsageError("k_beam must be >= 1");
  if (k_pre < k_beam) throw UsageError("k_pre must be >= k_beam");
  if (n_best < 1) throw UsageError("n_best must be >= 1");
}

std::size_t resolve_max_output_len(const ModelBundle& models, const SearchConfig& cfg) {
  const bool label_sync = cfg.algorithm == Algorithm::kAttentionDriven;
  const bool uses_att = label_sync || cfg.weights.uses_att();
  const bool uses_rnnt = cfg.algorithm == Algorithm::kRnntDriven || cfg.weights.uses_rnnt();

  std::optional<std::size_t> capacity;
  auto clip = [&](std::optional<std::size_t> cap) {
    if (cap) capacity = capacity ? std::min(*capacity, *cap) : *cap;
  };
  if (uses_att && models.attention) clip(models.attention->max_len());
  if (uses_rnnt && models.transducer) clip(models.transducer->max_len());

  if (cfg.max_output_len) {
    if (capacity && *cfg.max_output_len > *capacity)
      throw UsageError("max output length " + std::to_string(*cfg.max_output_len) +
                       " exceeds the table models' max_len " + std::to_string(*capacity));
    return *cfg.max_output_len;
  }
  const auto frames = models.frames();
  if (!frames) {
    if (capacity) return *capacity;
    throw UsageError("bundle has no time axis; set an explicit max output length");
  }
  const std::size_t by_frames = label_sync ? 2 * *frames : *frames;
  return capacity ? std::min(by_frames, *capacity) : by_frames;
}

SearchResult run_search(const ModelBundle& models, const SearchConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::kAttentionDriven: return attention_driven_search(models, cfg);
    case Algorithm::kCtcDriven: return ctc_driven_search(models, cfg);
    case Algorithm::kRnntDriven: return rnnt_driven_search(models, cfg);
  }
  throw UsageError("unknown algorithm");
}

nlohmann::json nbest_to_json(const NBestList& nbest, const Vocabulary& vocab) {
  auto number = [](const std::optional<LogProb>& v) -> nlohmann::json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : nbest) {
    nlohmann::json tokens = nlohmann::json::array();
    for (TokenId tok : e.tokens) tokens.push_back(vocab.label(tok));
    out.push_back({{"tokens", std::move(tokens)},
                   {"joint", number(e.joint)},
                   {"ctc", number(e.scores.ctc)},
                   {"rnnt", number(e.scores.rnnt)},
                   {"att", number(e.scores.att)}});
  }
  return out;
}

namespace internal {

SecondaryScorers::SecondaryScorers(const ModelBundle& models, const DecoderWeights& weights,
                                   Decoder primary, SearchStats& stats)
    : models_(models), weights_(weights), stats_(stats) {
  ctc_ = primary != Decoder::kCtc && weights.uses_ctc();
  rnnt_ = primary != Decoder::kRnnt && weights.uses_rnnt();
  att_ = primary != Decoder::kAtt && weights.uses_att();
}

Hypothesis SecondaryScorers::root() const {
  Hypothesis h;
  if (weights_.uses_ctc()) h.scores.ctc = kLogOne;
  if (weights_.uses_rnnt()) h.scores.rnnt = kLogOne;
  if (weights_.uses_att()) h.scores.att = kLogOne;
  if (ctc_) {
    auto cache = std::make_shared<CtcPrefixCache>(ctc_prefix_init(*models_.ctc));
    h.ctc_cache = std::move(cache);
  }
  if (rnnt_) h.rnnt_cache = std::make_shared<RnntPrefixCache>(rnnt_prefix_init(*models_.transducer));
  h.joint = joint_score(h, weights_);
  return h;
}

std::vector<Hypothesis> SecondaryScorers::extend(const Hypothesis& parent,
                                                 std::span<const TokenId> ys) const {
  std::vector<Hypothesis> children;
  if (ys.empty()) return children;
  children.reserve(ys.size());
  for (TokenId y : ys) {
    Hypothesis c;
    c.prefix = parent.prefix;
    c.prefix.push_back(y);
    c.scores = parent.scores;
    children.push_back(std::move(c));
  }
  if (ctc_) {
    for (std::size_t i = 0; i < ys.size(); ++i) {
      auto r = ctc_prefix_score(*models_.ctc, parent.prefix, ys[i], *parent.ctc_cache);
      children[i].scores.ctc = r.alpha;
      children[i].ctc_cache = std::move(r.cache);
    }
    stats_.ctc_scorer_calls += ys.size();
  }
  if (rnnt_) {
    auto results = rnnt_prefix_score_many(*models_.transducer, parent.prefix, ys, *parent.rnnt_cache);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      children[i].scores.rnnt = results[i].alpha;
      children[i].rnnt_cache = std::move(results[i].cache);
    }
    stats_.rnnt_scorer_calls += ys.size();
  }
  if (att_) {
    const std::vector<LogProb> dist = models_.attention->log_posterior(parent.prefix);
    for (std::size_t i = 0; i < ys.size(); ++i)
      children[i].scores.att = *parent.scores.att + dist[models_.attention->column_of(ys[i])];
    stats_.att_scorer_calls += ys.size();
  }
  return children;
}

void SecondaryScorers::complete(Hypothesis& h) const {
  if (ctc_) {
    h.scores.ctc = ctc_prefix_score(*models_.ctc, h.prefix, models_.vocab.eos_id(), *h.ctc_cache).alpha;
    ++stats_.ctc_scorer_calls;
  }
  if (rnnt_) {
    h.scores.rnnt =
        rnnt_prefix_score(*models_.transducer, h.prefix, models_.vocab.eos_id(), *h.rnnt_cache).alpha;
    ++stats_.rnnt_scorer_calls;
  }
  if (att_) {
    h.scores.att = *h.scores.att + attention_score(*models_.attention, h.prefix, models_.vocab.eos_id());
    ++stats_.att_scorer_calls;
  }
}

std::vector<std::size_t> top_k(std::span<const LogProb> scores, std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

void prune(std::vector<Hypothesis>& hyps, std::size_t k) {
  auto by_rank = [](const Hypothesis& a, const Hypothesis& b) { return ranks_before(a, b); };
  if (hyps.size() > k) {
    std::partial_sort(hyps.begin(), hyps.begin() + static_cast<std::ptrdiff_t>(k), hyps.end(), by_rank);
    hyps.resize(k);
  } else {
    std::sort(hyps.begin(), hyps.end(), by_rank);
  }
}

NBestList to_nbest(std::vector<Hypothesis> finished, std::size_t n_best) {
  prune(finished, n_best);
  NBestList out;
  out.reserve(finished.size());
  for (auto& h : finished) out.push_back({std::move(h.prefix), h.joint, h.scores});
  return out;
}

void check_models(const ModelBundle& models, const SearchConfig& cfg, Decoder primary) {
  cfg.validate();
  const DecoderWeights& w = cfg.weights;
  const std::size_t n = models.vocab.size();
  if ((primary == Decoder::kCtc || w.uses_ctc()) && !models.ctc)
    throw UsageError("search needs a CTC grid (primary decoder or mu_ctc > 0)");
  if ((primary == Decoder::kRnnt || w.uses_rnnt()) && !models.transducer)
    throw UsageError("search needs a transducer model (primary decoder or mu_rnnt > 0)");
  if ((primary == Decoder::kAtt || w.uses_att()) && !models.attention)
    throw UsageError("search needs an attention model (primary decoder or mu_att > 0)");
  if (models.ctc && models.ctc->vocab_size() != n)
    throw UsageError("CTC grid vocabulary size disagrees with the bundle vocabulary");
  if (models.transducer && models.transducer->vocab_size() != n)
    throw UsageError("transducer vocabulary size disagrees with the bundle vocabulary");
  if (models.attention && models.attention->vocab_size() != n)
    throw UsageError("attention vocabulary size disagrees with the bundle vocabulary");
  if (models.ctc && models.transducer && models.ctc->frames() != models.transducer->frames())
    throw UsageError("CTC grid and transducer disagree on the frame count");
}

}  // namespace internal
}  // namespace jointbeam
