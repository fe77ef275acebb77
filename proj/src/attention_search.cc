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

#include <vector>

#include "jointbeam/errors.h"
#include "jointbeam/search.h"
#include "search_internal.h"

namespace jointbeam {

using internal::Decoder;

SearchResult attention_driven_search(const ModelBundle& models, const SearchConfig& cfg) {
  internal::check_models(models, cfg, Decoder::kAtt);
  const std::size_t max_len = resolve_max_output_len(models, cfg);
  const AttentionModel& att = *models.attention;
  const DecoderWeights& w = cfg.weights;
  const std::size_t eos_col = att.eos_column();

  SearchResult result;
  internal::SecondaryScorers scorers(models, w, Decoder::kAtt, result.stats);

  std::vector<Hypothesis> live{scorers.root()};
  std::vector<Hypothesis> ended;
  std::vector<TokenId> tokens;
  while (!live.empty()) {
    std::vector<Hypothesis> ext;
    for (const Hypothesis& h : live) {
      const std::vector<LogProb> dist = att.log_posterior(h.prefix);
      ++result.stats.primary_calls;

      // Prebeam over V + eos; at the length cap only eos may follow.
      std::vector<std::size_t> cand;
      if (h.prefix.size() >= max_len)
        cand.push_back(eos_col);
      else
        cand = internal::top_k(dist, cfg.k_pre);

      tokens.clear();
      bool with_eos = false;
      for (std::size_t col : cand) {
        if (col == eos_col)
          with_eos = true;
        else
          tokens.push_back(static_cast<TokenId>(col));
      }

      std::vector<Hypothesis> children = scorers.extend(h, tokens);
      for (std::size_t i = 0; i < children.size(); ++i) {
        Hypothesis& c = children[i];
        if (w.uses_att()) c.scores.att = *h.scores.att + dist[static_cast<std::size_t>(tokens[i])];
        c.joint = joint_score(c, w);
        ext.push_back(std::move(c));
      }
      if (with_eos) {
        Hypothesis done = h;
        scorers.complete(done);
        if (w.uses_att()) done.scores.att = *h.scores.att + dist[eos_col];
        done.joint = joint_score(done, w);
        done.complete = true;
        done.ctc_cache.reset();
        done.rnnt_cache.reset();
        ended.push_back(std::move(done));
      }
    }
    internal::prune(ext, cfg.k_beam);
    live = std::move(ext);
    ++result.stats.steps;
  }
  result.nbest = internal::to_nbest(std::move(ended), cfg.n_best);
  return result;
}

}  // namespace jointbeam
