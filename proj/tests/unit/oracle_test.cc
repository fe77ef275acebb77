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

#include "gtest/gtest.h"
#include "jointbeam/errors.h"
#include "jointbeam/model_io.h"
#include "jointbeam/oracle.h"
#include "reference.h"

namespace jointbeam {
namespace {

using namespace oracle;
using testing::fixture_path;

TEST(BruteForceCtcTest, Examples) {
  const auto g = CtcGrid::from_probs(1, {{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_NEAR(brute_force_ctc(g, {0}), 0.75, 1e-15);
  EXPECT_EQ(brute_force_ctc(g, {0, 0}), 0.0);
  EXPECT_EQ(brute_force_ctc(g, {0, 0, 0}), 0.0);
  double total = 0.0;
  for (const auto& [y, p] : brute_force_ctc_distribution(g)) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(BruteForceCtcTest, GuardRefuses) {
  const auto g = CtcGrid::from_hash(6, 12, 1, 1.0);  // 7^12 alignments
  try {
    brute_force_ctc(g, {0});
    FAIL();
  } catch (const GuardError& e) {
    EXPECT_GT(e.instance_size(), kCtcAlignmentLimit);
  }
}

TEST(BruteForceRnntTest, Examples) {
  const auto b = load_models(fixture_path("tdx_t1_v1.json"));
  EXPECT_NEAR(brute_force_rnnt(*b.transducer, {0}, 1), 0.42, 1e-15);
  EXPECT_NEAR(brute_force_rnnt(*b.transducer, {}, 1), 0.4, 1e-15);

  const auto m = TransducerModel::from_hash(2, 4, 3, 2.0);
  double expected = 1.0;
  for (std::size_t t = 0; t < 4; ++t) expected *= m.posterior(t, TokenSeq{})[2];
  EXPECT_NEAR(brute_force_rnnt(m, {}, 4), expected, 1e-15);
}

TEST(BruteForceRnntTest, GuardRefuses) {
  const auto m = TransducerModel::from_hash(2, 40, 3, 2.0);
  EXPECT_THROW(brute_force_rnnt(m, TokenSeq(12, 0), 40), GuardError);
}

TEST(EnumerateTest, CountAndOrder) {
  const auto all = enumerate_sequences(2, 3);
  EXPECT_EQ(all.size(), 1u + 2 + 4 + 8);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  EXPECT_THROW(enumerate_sequences(10, 6), GuardError);
}

TEST(NormalizationTest, CtcSumsToOneRnntPartialSumsBounded) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t V = 1 + trial % 3, T = 1 + trial % 5;
    const auto g = testing::random_grid(rng, V, T);
    double total = 0.0;
    for (const auto& [y, p] : brute_force_ctc_distribution(g)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);

    const auto m = testing::random_transducer_table(rng, V, T, 4);
    double partial = 0.0;
    for (std::size_t S = 0; S <= 4; ++S) {
      double next = 0.0;
      for (const TokenSeq& y : enumerate_sequences(V, S)) next += brute_force_rnnt(m, y, T);
      EXPECT_GE(next, partial);
      EXPECT_LE(next, 1.0 + 1e-9);
      partial = next;
    }
  }
}

TEST(BestJointTest, AttentionOnlyGreedyFixture) {
  // Greedy choice has probability > 0.5 at every step, so it is the global
  // argmax.
  std::vector<AttentionTableRow> rows{{0, std::nullopt, {0.8, 0.1, 0.1}},
                                      {1, 0, {0.1, 0.7, 0.2}},
                                      {1, 1, {0.3, 0.3, 0.4}},
                                      {2, 0, {0.2, 0.2, 0.6}},
                                      {2, 1, {0.05, 0.05, 0.9}}};
  ModelBundle b;
  b.vocab = testing::letters(2);
  b.attention = AttentionModel::from_table(2, 2, rows);
  const auto best = brute_force_best_joint(b, {0, 0, 1, 0}, 2);
  EXPECT_EQ(best.tokens, (TokenSeq{0, 1}));
  EXPECT_NEAR(best.joint, std::log(0.8 * 0.7 * 0.9), 1e-12);
}

TEST(BestJointTest, NegativeLengthBonusPrefersEmpty) {
  ModelBundle b;
  b.vocab = testing::letters(2);
  // Attention strongly prefers long outputs; beta dominates anyway.
  b.attention = AttentionModel::from_hash(2, 1, 0.1);
  const auto best = brute_force_best_joint(b, {0, 0, 1e-9, -10.0}, 3);
  EXPECT_TRUE(best.tokens.empty());
}

TEST(VerifyBundleTest, ShippedFixturesPass) {
  for (const char* name : {"grid_t2_v1.json", "tdx_t1_v1.json", "att_v1.json", "desk.json"}) {
    const auto report = verify_bundle(load_models(fixture_path(name)), 4);
    EXPECT_TRUE(report.all_passed()) << name << "\n" << report.to_json().dump(2);
  }
}

TEST(VerifyBundleTest, AbsentModelsAreSkipped) {
  const auto report = verify_bundle(load_models(fixture_path("grid_t2_v1.json")), 4);
  int skipped = 0;
  for (const auto& c : report.checks) {
    if (c.name.rfind("rnnt", 0) == 0 || c.name.rfind("attention", 0) == 0) {
      EXPECT_TRUE(c.skipped) << c.name;
      EXPECT_FALSE(c.pass.has_value());
    }
    skipped += c.skipped;
  }
  EXPECT_GT(skipped, 0);
}

TEST(VerifyBundleTest, OversizedModelThrowsGuard) {
  const auto b = make_hash_bundle({.seed = 1, .vocab_size = 6, .frames = 20});
  EXPECT_THROW(verify_bundle(b, 4), GuardError);
}

}  // namespace
}  // namespace jointbeam
