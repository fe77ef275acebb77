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

#include <cmath>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "jointbeam/alignment.h"
#include "jointbeam/errors.h"
#include "jointbeam/model_io.h"
#include "jointbeam/oracle.h"
#include "jointbeam/search.h"
#include "reference.h"

namespace jointbeam {
namespace {

using testing::fixture_path;

constexpr Algorithm kAll[] = {Algorithm::kAttentionDriven, Algorithm::kCtcDriven, Algorithm::kRnntDriven};

SearchConfig config(Algorithm alg, DecoderWeights w, std::size_t k, std::size_t n_best = 1) {
  SearchConfig c;
  c.algorithm = alg;
  c.weights = w;
  c.k_beam = k;
  c.k_pre = k;
  c.n_best = n_best;
  return c;
}

ModelBundle greedy_attention_bundle() {
  std::vector<AttentionTableRow> rows{{0, std::nullopt, {0.8, 0.1, 0.1}},
                                      {1, 0, {0.1, 0.7, 0.2}},
                                      {1, 1, {0.3, 0.3, 0.4}},
                                      {2, 0, {0.2, 0.2, 0.6}},
                                      {2, 1, {0.05, 0.05, 0.9}}};
  ModelBundle b;
  b.vocab = testing::letters(2);
  b.attention = AttentionModel::from_table(2, 2, rows);
  return b;
}

TEST(AttentionSearchTest, BeamOneIsGreedy) {
  const auto b = greedy_attention_bundle();
  const auto r = run_search(b, config(Algorithm::kAttentionDriven, {0, 0, 1, 0}, 1));
  ASSERT_EQ(r.nbest.size(), 1u);
  EXPECT_EQ(r.nbest[0].tokens, (TokenSeq{0, 1}));
  EXPECT_NEAR(r.nbest[0].joint, std::log(0.8 * 0.7 * 0.9), 1e-12);
  EXPECT_FALSE(r.nbest[0].scores.ctc.has_value());
}

TEST(AttentionSearchTest, LabelSynchronousNeedsMaxLenWithoutTimeAxis) {
  ModelBundle b;
  b.vocab = testing::letters(2);
  b.attention = AttentionModel::from_hash(2, 1, 2.0);
  EXPECT_THROW(run_search(b, config(Algorithm::kAttentionDriven, {0, 0, 1, 0}, 2)), UsageError);
  auto cfg = config(Algorithm::kAttentionDriven, {0, 0, 1, 0}, 2);
  cfg.max_output_len = 3;
  EXPECT_LE(run_search(b, cfg).nbest.at(0).tokens.size(), 3u);
}

TEST(CtcSearchTest, UniformGrid) {
  const auto b = load_models(fixture_path("grid_t2_v1.json"));
  const auto r = run_search(b, config(Algorithm::kCtcDriven, {1, 0, 0, 0}, 3, 2));
  ASSERT_EQ(r.nbest.size(), 2u);
  EXPECT_EQ(r.nbest[0].tokens, (TokenSeq{0}));
  EXPECT_NEAR(r.nbest[0].joint, std::log(0.75), 1e-12);
  EXPECT_EQ(r.nbest[1].tokens, TokenSeq{});
  EXPECT_NEAR(r.nbest[1].joint, std::log(0.25), 1e-12);
}

TEST(CtcSearchTest, OneHotGridYieldsCollapsedArgmax) {
  const std::vector<TokenId> argmax{0, 0, 2, 1, 2, 1, 1};
  std::vector<std::vector<double>> rows;
  for (TokenId a : argmax) {
    std::vector<double> row(3, 0.0);
    row[static_cast<std::size_t>(a)] = 1.0;
    rows.push_back(row);
  }
  ModelBundle b;
  b.vocab = testing::letters(2);
  b.ctc = CtcGrid::from_probs(2, rows);
  const auto r = run_search(b, config(Algorithm::kCtcDriven, {1, 0, 0, 0}, 4, 4));
  const auto finite = std::count_if(r.nbest.begin(), r.nbest.end(), [](const auto& e) { return std::isfinite(e.joint); });
  EXPECT_EQ(finite, 1);
  EXPECT_EQ(r.nbest[0].tokens, ctc_collapse({AlignmentKind::kCtc, 2, argmax}));
  EXPECT_EQ(r.nbest[0].joint, 0.0);
}

TEST(RnntSearchTest, TinyTransducer) {
  const auto b = load_models(fixture_path("tdx_t1_v1.json"));
  const auto greedy = run_search(b, config(Algorithm::kRnntDriven, {0, 1, 0, 0}, 1));
  EXPECT_EQ(greedy.nbest.at(0).tokens, (TokenSeq{0}));
  EXPECT_NEAR(greedy.nbest[0].joint, std::log(0.42), 1e-12);

  const auto both = run_search(b, config(Algorithm::kRnntDriven, {0, 1, 0, 0}, 2, 2));
  ASSERT_EQ(both.nbest.size(), 2u);
  EXPECT_EQ(both.nbest[1].tokens, TokenSeq{});
  EXPECT_NEAR(both.nbest[1].joint, std::log(0.4), 1e-12);
}

TEST(RnntSearchTest, AlwaysBlankModel) {
  std::vector<TransducerTableRow> rows;
  for (std::size_t t = 0; t < 3; ++t) {
    rows.push_back({t, 0, std::nullopt, {0.0, 0.0, 1.0}});
    for (TokenId v : {0, 1}) rows.push_back({t, 1, v, {0.0, 0.0, 1.0}});
  }
  ModelBundle b;
  b.vocab = testing::letters(2);
  b.transducer = TransducerModel::from_table(2, 3, 1, rows);
  const auto r = run_search(b, config(Algorithm::kRnntDriven, {0, 1, 0, 0}, 3));
  EXPECT_EQ(r.nbest.at(0).tokens, TokenSeq{});
  EXPECT_EQ(r.nbest[0].joint, 0.0);
}

TEST(SearchTest, ExhaustiveBeamMatchesOracleOnDesk) {
  const auto b = load_models(fixture_path("desk.json"));
  const std::size_t candidates = oracle::enumerate_sequences(2, 4).size();
  for (Algorithm alg : kAll) {
    for (const auto& preset : weight_presets()) {
      auto cfg = config(alg, preset.weights, candidates);
      cfg.max_output_len = 4;
      const auto best = oracle::brute_force_best_joint(b, cfg.weights, 4);
      const auto r = run_search(b, cfg);
      EXPECT_EQ(r.nbest.at(0).tokens, best.tokens) << algorithm_name(alg) << " " << preset.name;
      EXPECT_NEAR(r.nbest[0].joint, best.joint, 1e-9) << algorithm_name(alg) << " " << preset.name;
    }
  }
}

TEST(SearchTest, ZeroWeightMatchesRemovedModel) {
  const auto full = load_models(fixture_path("desk.json"));
  for (Algorithm alg : kAll) {
    for (int drop = 0; drop < 3; ++drop) {
      DecoderWeights w{0.2, 0.3, 0.5, 0.1};
      ModelBundle reduced = full;
      if (drop == 0) w.mu_ctc = 0, reduced.ctc.reset();
      if (drop == 1) w.mu_rnnt = 0, reduced.transducer.reset();
      if (drop == 2) w.mu_att = 0, reduced.attention.reset();
      // The driving model must stay.
      if ((alg == Algorithm::kCtcDriven && drop == 0) || (alg == Algorithm::kRnntDriven && drop == 1) ||
          (alg == Algorithm::kAttentionDriven && drop == 2))
        continue;
      auto cfg = config(alg, w, 3, 5);
      cfg.k_pre = 3;
      cfg.max_output_len = 4;
      const auto a = run_search(full, cfg);
      const auto r = run_search(reduced, cfg);
      EXPECT_EQ(a.nbest, r.nbest) << algorithm_name(alg) << " drop " << drop;
      const std::size_t calls[] = {a.stats.ctc_scorer_calls, a.stats.rnnt_scorer_calls, a.stats.att_scorer_calls};
      EXPECT_EQ(calls[drop], 0u) << algorithm_name(alg) << " drop " << drop;
    }
  }
}

TEST(SearchTest, DeterministicAndWellFormed) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const auto b = make_hash_bundle({.seed = static_cast<std::uint64_t>(trial), .vocab_size = 3, .frames = 6});
    const Algorithm alg = kAll[trial % 3];
    auto cfg = config(alg, testing::random_weights(rng), 1 + trial % 5, 10);
    cfg.k_pre = cfg.k_beam + 2;
    const auto first = run_search(b, cfg);
    const auto second = run_search(b, cfg);
    EXPECT_EQ(first.nbest, second.nbest);
    EXPECT_EQ(nbest_to_json(first.nbest, b.vocab).dump(), nbest_to_json(second.nbest, b.vocab).dump());

    const std::size_t cap = resolve_max_output_len(b, cfg);
    std::set<TokenSeq> seen;
    for (std::size_t i = 0; i < first.nbest.size(); ++i) {
      const auto& e = first.nbest[i];
      EXPECT_TRUE(seen.insert(e.tokens).second) << "duplicate output";
      EXPECT_LE(e.tokens.size(), cap);
      EXPECT_NO_THROW(b.vocab.check_sequence(e.tokens));
      if (i > 0) {
        EXPECT_TRUE(ranks_before(first.nbest[i - 1].joint, first.nbest[i - 1].tokens, e.joint, e.tokens));
      }
      const LogProb recomputed = joint_score(e.scores, e.tokens.size(), cfg.weights);
      if (std::isfinite(recomputed)) {
        EXPECT_NEAR(e.joint, recomputed, 1e-12);
      } else {
        EXPECT_EQ(e.joint, recomputed);
      }
    }
  }
}

TEST(SearchTest, UniformShiftOfCtcGridPreservesRanking) {
  const auto b = load_models(fixture_path("desk.json"));
  const double c = std::log(0.5);
  std::vector<std::vector<double>> scaled;
  for (std::size_t t = 0; t < b.ctc->frames(); ++t) {
    std::vector<double> row(b.ctc->posterior(t).begin(), b.ctc->posterior(t).end());
    for (double& p : row) p *= 0.5;
    scaled.push_back(row);
  }
  ModelBundle shifted = b;
  shifted.ctc = CtcGrid::from_probs(2, scaled, Normalization::kUnchecked);
  // Prefix scores of live hypotheses shift by frame-dependent amounts, so
  // the beams are exhaustive here; complete scores all shift by T * c.
  const std::size_t candidates = oracle::enumerate_sequences(2, 4).size();
  for (Algorithm alg : kAll) {
    auto cfg = config(alg, {0.4, 0.3, 0.3, 0}, candidates, 8);
    cfg.max_output_len = 4;
    const auto base = run_search(b, cfg);
    const auto moved = run_search(shifted, cfg);
    ASSERT_EQ(base.nbest.size(), moved.nbest.size());
    for (std::size_t i = 0; i < base.nbest.size(); ++i) {
      EXPECT_EQ(base.nbest[i].tokens, moved.nbest[i].tokens) << algorithm_name(alg);
      if (std::isfinite(base.nbest[i].joint)) {
        EXPECT_NEAR(moved.nbest[i].joint - base.nbest[i].joint, 0.4 * 4 * c, 1e-9);
      }
    }
  }
}

TEST(SearchConfigTest, Validation) {
  const auto b = load_models(fixture_path("desk.json"));
  auto cfg = config(Algorithm::kCtcDriven, {1, 0, 0, 0}, 5);
  cfg.k_pre = 4;
  EXPECT_THROW(run_search(b, cfg), UsageError);
  cfg.k_pre = 5;
  cfg.n_best = 0;
  EXPECT_THROW(run_search(b, cfg), UsageError);
  cfg.n_best = 1;
  cfg.max_output_len = 9;  // beyond the table capacity
  cfg.weights = {0, 0, 1, 0};
  cfg.algorithm = Algorithm::kAttentionDriven;
  EXPECT_THROW(run_search(b, cfg), UsageError);

  ModelBundle no_ctc = b;
  no_ctc.ctc.reset();
  EXPECT_THROW(run_search(no_ctc, config(Algorithm::kCtcDriven, {1, 0, 0, 0}, 2)), UsageError);
  EXPECT_THROW(run_search(no_ctc, config(Algorithm::kAttentionDriven, {0.5, 0, 0.5, 0}, 2)), UsageError);
  EXPECT_THROW(parse_algorithm("beam"), UsageError);
}

TEST(SearchConfigTest, DefaultMaxLen) {
  const auto b = make_hash_bundle({.seed = 2, .vocab_size = 3, .frames = 6});
  EXPECT_EQ(resolve_max_output_len(b, config(Algorithm::kAttentionDriven, {0, 0, 1, 0}, 1)), 12u);
  EXPECT_EQ(resolve_max_output_len(b, config(Algorithm::kCtcDriven, {1, 0, 0, 0}, 1)), 6u);
  EXPECT_EQ(resolve_max_output_len(b, config(Algorithm::kRnntDriven, {0, 1, 0, 0}, 1)), 6u);
  const auto desk = load_models(fixture_path("desk.json"));
  EXPECT_EQ(resolve_max_output_len(desk, config(Algorithm::kAttentionDriven, {0, 0, 1, 0}, 1)), 4u);
}

TEST(NBestJsonTest, Shape) {
  const auto b = load_models(fixture_path("grid_t2_v1.json"));
  const auto r = run_search(b, config(Algorithm::kCtcDriven, {1, 0, 0, 0}, 3, 3));
  const auto j = nbest_to_json(r.nbest, b.vocab);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0]["tokens"], nlohmann::json::array({"a"}));
  EXPECT_TRUE(j[0]["rnnt"].is_null());
  EXPECT_TRUE(j[0]["att"].is_null());
  for (const auto& e : j) {
    if (e["tokens"].size() == 2) {
      EXPECT_TRUE(e["joint"].is_null());  // probability zero
    }
  }
}

}  // namespace
}  // namespace jointbeam
