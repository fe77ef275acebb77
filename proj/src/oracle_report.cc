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
#include <cmath>
#include <string>

#include "jointbeam/errors.h"
#include "jointbeam/oracle.h"
#include "jointbeam/scorers.h"
#include "jointbeam/search.h"

namespace jointbeam::oracle {

namespace {

Check skipped(std::string name, std::string why) {
  Check c;
  c.name = std::move(name);
  c.skipped = true;
  c.detail = std::move(why);
  return c;
}

Check measured(std::string name, double max_abs_err, bool pass, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.max_abs_err = max_abs_err;
  c.pass = pass;
  c.detail = std::move(detail);
  return c;
}

// Complete-sequence log probabilities by threading scorer caches token by token.
LogProb ctc_sequence_score(const CtcGrid& grid, const TokenSeq& y, TokenId eos) {
  CtcPrefixCache cache = ctc_prefix_init(grid);
  TokenSeq prefix;
  for (TokenId tok : y) {
    auto r = ctc_prefix_score(grid, prefix, tok, cache);
    cache = *r.cache;
    prefix.push_back(tok);
  }
  return ctc_prefix_score(grid, prefix, eos, cache).alpha;
}

LogProb rnnt_sequence_score(const TransducerModel& model, const TokenSeq& y, TokenId eos) {
  RnntPrefixCache cache = rnnt_prefix_init(model);
  TokenSeq prefix;
  for (TokenId tok : y) {
    auto r = rnnt_prefix_score(model, prefix, tok, cache);
    cache = *r.cache;
    prefix.push_back(tok);
  }
  return rnnt_prefix_score(model, prefix, eos, cache).alpha;
}

std::size_t clip(std::size_t len, const std::optional<std::size_t>& cap) {
  return cap ? std::min(len, *cap) : len;
}

}  // namespace

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.skipped || c.pass.value_or(false); });
}

nlohmann::json Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Check& c : checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["max_abs_err"] = c.max_abs_err ? nlohmann::json(*c.max_abs_err) : nlohmann::json(nullptr);
    j["pass"] = c.pass ? nlohmann::json(*c.pass) : nlohmann::json(nullptr);
    j["skipped"] = c.skipped;
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  return {{"checks", std::move(arr)}, {"all_passed", all_passed()}};
}

Report verify_bundle(const ModelBundle& models, std::size_t max_len) {
  Report report;
  const std::size_t V = models.vocab.size();
  const TokenId eos = models.vocab.eos_id();

  if (models.ctc) {
    const CtcGrid& g = *models.ctc;
    const auto dist = brute_force_ctc_distribution(g);
    const std::size_t len = std::min(max_len, g.frames());
    double err = 0.0;
    for (const TokenSeq& y : enumerate_sequences(V, len)) {
      auto it = dist.find(y);
      const double expected = it == dist.end() ? 0.0 : it->second;
      err = std::max(err, std::abs(std::exp(ctc_sequence_score(g, y, eos)) - expected));
    }
    report.checks.push_back(measured("ctc_prefix_scoring", err, err <= kAgreementTolerance));

    double total = 0.0;
    for (const auto& [y, p] : dist) total += p;
    const double norm_err = std::abs(total - 1.0);
    report.checks.push_back(measured("ctc_normalization", norm_err, norm_err <= kAgreementTolerance));
  } else {
    report.checks.push_back(skipped("ctc_prefix_scoring", "no ctc_grid"));
    report.checks.push_back(skipped("ctc_normalization", "no ctc_grid"));
  }

  if (models.transducer) {
    const TransducerModel& m = *models.transducer;
    const std::size_t len = clip(max_len, m.max_len());
    double err = 0.0;
    std::vector<double> by_length(len + 1, 0.0);
    for (const TokenSeq& y : enumerate_sequences(V, len)) {
      const double expected = brute_force_rnnt(m, y, m.frames());
      by_length[y.size()] += expected;
      err = std::max(err, std::abs(std::exp(rnnt_sequence_score(m, y, eos)) - expected));
    }
    report.checks.push_back(measured("rnnt_prefix_scoring", err, err <= kAgreementTolerance));

    double partial = 0.0;
    double excess = 0.0;
    bool monotone = true;
    for (double mass : by_length) {
      const double next = partial + mass;
      if (next < partial) monotone = false;
      partial = next;
      excess = std::max(excess, partial - 1.0);
    }
    report.checks.push_back(measured("rnnt_partial_normalization", std::max(0.0, excess),
                                     monotone && excess <= kAgreementTolerance,
                                     "mass of |Y| <= " + std::to_string(len) + ": " + std::to_string(partial)));
  } else {
    report.checks.push_back(skipped("rnnt_prefix_scoring", "no transducer"));
    report.checks.push_back(skipped("rnnt_partial_normalization", "no transducer"));
  }

  if (models.attention) {
    const AttentionModel& m = *models.attention;
    const std::size_t len = clip(max_len, m.max_len());
    double err = 0.0;
    for (const TokenSeq& l : enumerate_sequences(V, len)) {
      double sum = 0.0;
      for (std::size_t v = 0; v < V; ++v) sum += std::exp(attention_score(m, l, static_cast<TokenId>(v)));
      sum += std::exp(attention_score(m, l, eos));
      err = std::max(err, std::abs(sum - 1.0));
    }
    report.checks.push_back(measured("attention_normalization", err, err <= kAgreementTolerance));
  } else {
    report.checks.push_back(skipped("attention_normalization", "no attention model"));
  }

  // Exhaustive beams must recover the brute-force argmax of the joint score.
  for (Algorithm alg : {Algorithm::kAttentionDriven, Algorithm::kCtcDriven, Algorithm::kRnntDriven}) {
    const std::string name = "exhaustive_search_" + std::string(algorithm_name(alg));
    const bool has_primary = alg == Algorithm::kAttentionDriven ? models.attention.has_value()
                             : alg == Algorithm::kCtcDriven     ? models.ctc.has_value()
                                                                : models.transducer.has_value();
    if (!has_primary) {
      report.checks.push_back(skipped(name, "primary decoder model absent"));
      continue;
    }
    DecoderWeights w = default_weights(alg);
    if (!models.ctc) w.mu_ctc = 0.0;
    if (!models.transducer) w.mu_rnnt = 0.0;
    if (!models.attention) w.mu_att = 0.0;
    if (!(w.uses_ctc() || w.uses_rnnt() || w.uses_att())) {
      report.checks.push_back(skipped(name, "no weighted decoder available"));
      continue;
    }

    SearchConfig cfg;
    cfg.algorithm = alg;
    cfg.weights = w;
    std::size_t len = max_len;
    if (alg != Algorithm::kAttentionDriven && models.frames()) len = std::min(len, *models.frames());
    if ((alg == Algorithm::kAttentionDriven || w.uses_att()) && models.attention)
      len = clip(len, models.attention->max_len());
    if ((alg == Algorithm::kRnntDriven || w.uses_rnnt()) && models.transducer)
      len = clip(len, models.transducer->max_len());
    cfg.max_output_len = len;
    const std::size_t candidates = enumerate_sequences(V, len).size();
    cfg.k_beam = candidates;
    cfg.k_pre = std::max(candidates, V + 1);

    const BestJoint best = brute_force_best_joint(models, w, len);
    const SearchResult found = run_search(models, cfg);
    if (found.nbest.empty()) {
      report.checks.push_back(measured(name, INFINITY, false, "search returned no hypothesis"));
      continue;
    }
    const NBestEntry& top = found.nbest.front();
    const double err = top.joint == best.joint ? 0.0 : std::abs(top.joint - best.joint);
    const bool same = top.tokens == best.tokens;
    report.checks.push_back(measured(name, err, same && err <= kAgreementTolerance,
                                     same ? std::string() : "search argmax differs from oracle argmax"));
  }
  return report;
}

}  // namespace jointbeam::oracle
