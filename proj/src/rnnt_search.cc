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

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "jointbeam/errors.h"
#include "jointbeam/search.h"
#include "search_internal.h"

namespace jointbeam {

using internal::Decoder;

namespace {

// Lattice state of one prefix within frame t: `mass` is the log probability
// of sitting at node (t, |prefix|) having emitted the prefix.
struct RnntBeamEntry {
  LogProb mass = kLogZero;
  Hypothesis hyp;
  std::optional<std::vector<LogProb>> dist;  // P(. | t, prefix), filled on demand
};

using RnntBeam = std::map<TokenSeq, RnntBeamEntry>;

// Ranks the pool with the transducer score set to the lattice mass and keeps
// the best k entries. With `only_len` set, entries of other lengths are left
// alone: shorter prefixes have not taken their blank yet and their mass is not
// comparable.
void prune_pool(RnntBeam& pool, const DecoderWeights& w, std::size_t k,
                std::optional<std::size_t> only_len = std::nullopt) {
  std::vector<std::pair<LogProb, const TokenSeq*>> ranked;
  ranked.reserve(pool.size());
  for (auto& [prefix, e] : pool) {
    if (only_len && prefix.size() != *only_len) continue;
    if (w.uses_rnnt()) e.hyp.scores.rnnt = e.mass;
    e.hyp.joint = joint_score(e.hyp, w);
    ranked.emplace_back(e.hyp.joint, &prefix);
  }
  if (ranked.size() <= k) return;
  std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(),
                   [](const auto& a, const auto& b) { return ranks_before(a.first, *a.second, b.first, *b.second); });
  std::vector<TokenSeq> drop;
  for (auto it = ranked.begin() + static_cast<std::ptrdiff_t>(k); it != ranked.end(); ++it)
    drop.push_back(*it->second);
  for (const TokenSeq& p : drop) pool.erase(p);
}

}  // namespace

SearchResult rnnt_driven_search(const ModelBundle& models, const SearchConfig& cfg) {
  internal::check_models(models, cfg, Decoder::kRnnt);
  const std::size_t max_len = resolve_max_output_len(models, cfg);
  const TransducerModel& tdx = *models.transducer;
  const DecoderWeights& w = cfg.weights;
  const std::size_t blank = static_cast<std::size_t>(tdx.blank_id());
  const std::size_t T = tdx.frames();

  SearchResult result;
  internal::SecondaryScorers scorers(models, w, Decoder::kRnnt, result.stats);

  auto posterior = [&](std::size_t t, RnntBeamEntry& e, const TokenSeq& prefix) -> const std::vector<LogProb>& {
    if (!e.dist) {
      e.dist = tdx.log_posterior(t, prefix);
      ++result.stats.primary_calls;
    }
    return *e.dist;
  };

  RnntBeam carried;
  carried[{}] = RnntBeamEntry{kLogOne, scorers.root(), std::nullopt};
  std::vector<Hypothesis> finished;
  std::vector<TokenId> fresh;

  for (std::size_t t = 0; t < T; ++t) {
    RnntBeam pool = std::move(carried);
    carried.clear();
    for (auto& [prefix, e] : pool) e.dist.reset();

    // Emission closure at frame t, one output length at a time: every
    // contribution to length len + 1 comes from length len, so masses are
    // final when the level is pruned.
    std::size_t len = pool.begin()->first.size();
    for (const auto& [prefix, e] : pool) len = std::min(len, prefix.size());
    while (len < max_len) {
      std::vector<TokenSeq> frontier;
      bool longer = false;
      for (const auto& [prefix, e] : pool) {
        if (prefix.size() == len) frontier.push_back(prefix);
        if (prefix.size() > len) longer = true;
      }
      if (frontier.empty() && !longer) break;

      for (const TokenSeq& prefix : frontier) {
        RnntBeamEntry& e = pool.at(prefix);
        const std::vector<LogProb>& dist = posterior(t, e, prefix);
        const std::vector<std::size_t> cand =
            internal::top_k(std::span<const LogProb>(dist).first(blank), cfg.k_pre);

        fresh.clear();
        TokenSeq child = prefix;
        child.push_back(0);
        for (std::size_t c : cand) {
          child.back() = static_cast<TokenId>(c);
          if (!pool.contains(child)) fresh.push_back(static_cast<TokenId>(c));
        }
        for (Hypothesis& h : scorers.extend(e.hyp, fresh)) {
          TokenSeq key = h.prefix;
          pool.emplace(std::move(key), RnntBeamEntry{kLogZero, std::move(h), std::nullopt});
        }
        for (std::size_t c : cand) {
          child.back() = static_cast<TokenId>(c);
          RnntBeamEntry& ext = pool.at(child);
          ext.mass = log_add(ext.mass, e.mass + dist[c]);
        }
      }
      prune_pool(pool, w, cfg.k_beam, len + 1);
      ++len;
    }

    // Blank: advance to frame t + 1, or terminate at the last frame.
    for (auto& [prefix, e] : pool) {
      const LogProb mass = e.mass + posterior(t, e, prefix)[blank];
      if (t + 1 < T) {
        carried.emplace(prefix, RnntBeamEntry{mass, std::move(e.hyp), std::nullopt});
        continue;
      }
      Hypothesis h = std::move(e.hyp);
      scorers.complete(h);
      if (w.uses_rnnt()) h.scores.rnnt = mass;
      h.joint = joint_score(h, w);
      h.complete = true;
      finished.push_back(std::move(h));
    }
    if (t + 1 < T) prune_pool(carried, w, cfg.k_beam);
    ++result.stats.steps;
  }
  result.nbest = internal::to_nbest(std::move(finished), cfg.n_best);
  return result;
}

}  // namespace jointbeam
