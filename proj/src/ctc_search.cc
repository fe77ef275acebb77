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

#include <map>
#include <vector>

#include "jointbeam/errors.h"
#include "jointbeam/search.h"
#include "search_internal.h"

namespace jointbeam {

using internal::Decoder;

namespace {

// Prefix-beam state: forward mass of the prefix ending in blank / in its
// last token at the current frame.
struct CtcBeamEntry {
  LogProb blank = kLogZero;
  LogProb nonblank = kLogZero;
  Hypothesis hyp;
};

using CtcBeam = std::map<TokenSeq, CtcBeamEntry>;

}  // namespace

SearchResult ctc_driven_search(const ModelBundle& models, const SearchConfig& cfg) {
  internal::check_models(models, cfg, Decoder::kCtc);
  const std::size_t max_len = resolve_max_output_len(models, cfg);
  const CtcGrid& grid = *models.ctc;
  const DecoderWeights& w = cfg.weights;
  const std::size_t blank = static_cast<std::size_t>(grid.blank_id());

  SearchResult result;
  internal::SecondaryScorers scorers(models, w, Decoder::kCtc, result.stats);

  CtcBeam beam;
  beam[{}] = CtcBeamEntry{kLogOne, kLogZero, scorers.root()};

  std::vector<TokenId> fresh;
  for (std::size_t t = 0; t < grid.frames(); ++t) {
    const auto row = grid.log_posterior(t);
    ++result.stats.primary_calls;
    const std::vector<std::size_t> cand = internal::top_k(row.first(blank), cfg.k_pre);

    CtcBeam next;
    for (const auto& [prefix, e] : beam) next[prefix] = CtcBeamEntry{kLogZero, kLogZero, e.hyp};

    for (const auto& [prefix, e] : beam) {
      const LogProb total = log_add(e.blank, e.nonblank);
      CtcBeamEntry& self = next[prefix];
      self.blank = log_add(self.blank, total + row[blank]);
      if (!prefix.empty())
        self.nonblank = log_add(self.nonblank, e.nonblank + row[static_cast<std::size_t>(prefix.back())]);
      if (prefix.size() >= max_len) continue;

      // Joint-score only prefixes that are new this frame.
      fresh.clear();
      TokenSeq child = prefix;
      child.push_back(0);
      for (std::size_t c : cand) {
        child.back() = static_cast<TokenId>(c);
        if (!next.contains(child)) fresh.push_back(static_cast<TokenId>(c));
      }
      for (Hypothesis& h : scorers.extend(e.hyp, fresh)) {
        TokenSeq key = h.prefix;
        next.emplace(std::move(key), CtcBeamEntry{kLogZero, kLogZero, std::move(h)});
      }
      for (std::size_t c : cand) {
        child.back() = static_cast<TokenId>(c);
        CtcBeamEntry& ext = next.at(child);
        const bool repeat = !prefix.empty() && prefix.back() == child.back();
        ext.nonblank = log_add(ext.nonblank, (repeat ? e.blank : total) + row[c]);
      }
    }

    std::vector<Hypothesis> ranked;
    ranked.reserve(next.size());
    for (auto& [prefix, e] : next) {
      if (w.uses_ctc()) e.hyp.scores.ctc = log_add(e.blank, e.nonblank);
      e.hyp.joint = joint_score(e.hyp, w);
      ranked.push_back(e.hyp);
    }
    internal::prune(ranked, cfg.k_beam);
    beam.clear();
    for (Hypothesis& h : ranked) {
      auto it = next.find(h.prefix);
      beam.emplace(h.prefix, std::move(it->second));
    }
    ++result.stats.steps;
  }

  std::vector<Hypothesis> finished;
  for (auto& [prefix, e] : beam) {
    Hypothesis h = std::move(e.hyp);
    scorers.complete(h);
    if (w.uses_ctc()) h.scores.ctc = log_add(e.blank, e.nonblank);
    h.joint = joint_score(h, w);
    h.complete = true;
    finished.push_back(std::move(h));
  }
  result.nbest = internal::to_nbest(std::move(finished), cfg.n_best);
  return result;
}

}  // namespace jointbeam
