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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "jointbeam/alignment.h"
#include "jointbeam/errors.h"
#include "jointbeam/hypothesis.h"
#include "jointbeam/log_math.h"
#include "jointbeam/stage_weights.h"
#include "jointbeam/vocabulary.h"

namespace jointbeam {
namespace {

TEST(LogSumExpTest, Examples) {
  std::vector<LogProb> halves{std::log(0.5), std::log(0.5)};
  EXPECT_NEAR(log_sum_exp(halves), 0.0, 1e-15);

  std::vector<LogProb> zeros{kLogZero, kLogZero};
  EXPECT_EQ(log_sum_exp(zeros), kLogZero);

  std::vector<LogProb> quarters(3, std::log(0.25));
  EXPECT_NEAR(log_sum_exp(quarters), std::log(0.75), 1e-15);
}

TEST(LogSumExpTest, EmptyThrows) {
  std::vector<LogProb> none;
  EXPECT_THROW(log_sum_exp(none), UsageError);
}

TEST(LogSumExpTest, LargeMagnitudesDoNotOverflow) {
  std::vector<LogProb> big{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(big), 1000.0 + std::log(2.0), 1e-12);
  std::vector<LogProb> tiny{-1000.0, -1000.0};
  EXPECT_NEAR(log_sum_exp(tiny), -1000.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExpTest, PermutationAndZeroInvariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 0.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LogProb> xs(1 + trial % 7);
    for (auto& x : xs) x = u(rng);
    const LogProb ref = log_sum_exp(xs);
    std::shuffle(xs.begin(), xs.end(), rng);
    EXPECT_NEAR(log_sum_exp(xs), ref, 1e-12);
    xs.push_back(kLogZero);
    EXPECT_EQ(log_sum_exp(xs), log_sum_exp(std::span(xs).first(xs.size() - 1)));
  }
}

TEST(LogAddTest, NeverNaN) {
  EXPECT_EQ(log_add(kLogZero, kLogZero), kLogZero);
  EXPECT_EQ(log_add(kLogZero, -3.0), -3.0);
  EXPECT_EQ(log_add(-3.0, kLogZero), -3.0);
  EXPECT_FALSE(std::isnan(kLogZero + kLogZero));
}

TEST(VocabularyTest, ReservedIdsAreDistinct) {
  Vocabulary v({"a", "b", "c"});
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.blank_id(), 3);
  EXPECT_EQ(v.eos_id(), 4);
  EXPECT_TRUE(v.is_regular(2));
  EXPECT_FALSE(v.is_regular(v.blank_id()));
  EXPECT_FALSE(v.is_regular(v.eos_id()));
  EXPECT_EQ(v.label(v.blank_id()), "<blk>");
  EXPECT_EQ(v.id("<eos>"), v.eos_id());
  EXPECT_EQ(v.id("b"), 1);
}

TEST(VocabularyTest, RejectsBadInventories) {
  EXPECT_THROW(Vocabulary({"a", "a"}), UsageError);
  EXPECT_THROW(Vocabulary({"a", "<blk>"}), UsageError);
  EXPECT_THROW(Vocabulary({"a"}, "x", "x"), UsageError);
  Vocabulary v({"a"});
  EXPECT_THROW(v.id("zzz"), UsageError);
  EXPECT_THROW(v.label(7), UsageError);
  EXPECT_THROW(v.check_sequence({0, v.blank_id()}), UsageError);
  EXPECT_NO_THROW(v.check_sequence({0, 0}));
}

constexpr TokenId a = 0, b = 1, phi = 2;

TEST(CollapseTest, CtcExamples) {
  EXPECT_EQ(ctc_collapse({AlignmentKind::kCtc, phi, {a, a, phi, a, phi, b, b}}), (TokenSeq{a, a, b}));
  EXPECT_EQ(ctc_collapse({AlignmentKind::kCtc, phi, {phi, phi, phi}}), TokenSeq{});
  EXPECT_EQ(ctc_collapse({AlignmentKind::kCtc, phi, {phi, b, b, phi, b}}), (TokenSeq{b, b}));
}

TEST(CollapseTest, RnntExamples) {
  EXPECT_EQ(rnnt_collapse({AlignmentKind::kRnnt, phi, {a, phi, a, phi}}), (TokenSeq{a, a}));
  EXPECT_EQ(rnnt_collapse({AlignmentKind::kRnnt, phi, {phi, phi}}), TokenSeq{});
  EXPECT_EQ(rnnt_collapse({AlignmentKind::kRnnt, phi, {b, a, phi, b, phi, phi}}), (TokenSeq{b, a, b}));
}

TEST(CollapseTest, WrongKindThrows) {
  EXPECT_THROW(ctc_collapse({AlignmentKind::kRnnt, phi, {a}}), UsageError);
  EXPECT_THROW(rnnt_collapse({AlignmentKind::kCtc, phi, {a}}), UsageError);
}

TEST(CollapseTest, Properties) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<TokenId> sym(0, 2);
  std::uniform_int_distribution<int> len(0, 12);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<TokenId> labels(static_cast<std::size_t>(len(rng)));
    for (auto& l : labels) l = sym(rng);

    const TokenSeq c = ctc_collapse({AlignmentKind::kCtc, phi, labels});
    EXPECT_EQ(std::count(c.begin(), c.end(), phi), 0);
    // Re-embed with separating blanks: collapse is a fixed point.
    std::vector<TokenId> embedded{phi};
    for (TokenId t : c) {
      embedded.push_back(t);
      embedded.push_back(phi);
    }
    EXPECT_EQ(ctc_collapse({AlignmentKind::kCtc, phi, embedded}), c);

    const TokenSeq r = rnnt_collapse({AlignmentKind::kRnnt, phi, labels});
    const auto blanks = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), phi));
    EXPECT_EQ(r.size() + blanks, labels.size());
  }
}

TEST(JointScoreTest, Examples) {
  DecoderScores s{-1.0, -2.0, -3.0};
  EXPECT_EQ(joint_score(s, 4, {1, 0, 0, 0}), -1.0);

  DecoderScores eq{-1.0, -1.0, -1.0};
  EXPECT_NEAR(joint_score(eq, 3, {0.3, 0.3, 0.4, 0}), -1.0, 1e-15);

  DecoderScores d{-2.0, -4.0, -6.0};
  EXPECT_NEAR(joint_score(d, 2, {0.1, 0.4, 0.5, 0.5}), -2 * 0.1 - 4 * 0.4 - 6 * 0.5 + 1.0, 1e-15);
  EXPECT_NEAR(joint_score(d, 2, {0.1, 0.4, 0.5, 0.5}), -3.8, 1e-12);
}

TEST(JointScoreTest, MissingWeightedScoreThrows) {
  DecoderScores s{-1.0, std::nullopt, std::nullopt};
  EXPECT_THROW(joint_score(s, 1, {0.5, 0.5, 0, 0}), UsageError);
  EXPECT_NO_THROW(joint_score(s, 1, {0.5, 0, 0, 0}));
}

TEST(JointScoreTest, ZeroWeightIgnoresMinusInfinity) {
  DecoderScores s{-1.0, kLogZero, -2.0};
  EXPECT_EQ(joint_score(s, 1, {1, 0, 1, 0}), -3.0);
}

TEST(JointScoreTest, LinearInEachScore) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 0), mu(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    DecoderWeights w{mu(rng), mu(rng), mu(rng) + 0.01, u(rng)};
    DecoderScores s{u(rng), u(rng), u(rng)};
    const double base = joint_score(s, 3, w);
    const double delta = u(rng);
    DecoderScores shifted = s;
    *shifted.rnnt += delta;
    EXPECT_NEAR(joint_score(shifted, 3, w) - base, w.mu_rnnt * delta, 1e-12);
  }
}

TEST(DecoderWeightsTest, Validate) {
  EXPECT_THROW((DecoderWeights{0, 0, 0, 0}).validate(), UsageError);
  EXPECT_THROW((DecoderWeights{-0.1, 1, 0, 0}).validate(), UsageError);
  EXPECT_THROW((DecoderWeights{NAN, 1, 0, 0}).validate(), UsageError);
  EXPECT_NO_THROW((DecoderWeights{0, 0, 1, -2}).validate());
}

TEST(DecoderWeightsTest, Presets) {
  EXPECT_EQ(find_weight_preset("att-driven-default"), (DecoderWeights{0.3, 0.3, 0.4, 0}));
  EXPECT_EQ(find_weight_preset("ctc-driven-default"), (DecoderWeights{0.1, 0.4, 0.5, 0}));
  EXPECT_EQ(find_weight_preset("rnnt-driven-default"), (DecoderWeights{0.1, 0.4, 0.5, 0}));
  EXPECT_THROW(find_weight_preset("nope"), UsageError);
  for (const auto& p : weight_presets()) EXPECT_NO_THROW(p.weights.validate()) << p.name;
}

TEST(RanksBeforeTest, TiesBreakLexicographically) {
  EXPECT_TRUE(ranks_before(-1.0, {1}, -2.0, {0}));
  EXPECT_TRUE(ranks_before(-1.0, {0, 1}, -1.0, {1}));
  EXPECT_FALSE(ranks_before(-1.0, {1}, -1.0, {1}));
  EXPECT_TRUE(ranks_before(-1.0, {}, -1.0, {0}));
}

TEST(StageWeightsTest, Examples) {
  const auto w = compute_stage2_weights({10, 10, 10, 70});
  EXPECT_EQ(w[0], 0.1);
  EXPECT_EQ(w[1], 0.1);
  EXPECT_EQ(w[2], 0.1);
  EXPECT_EQ(w[3], 0.7);
  for (double v : compute_stage2_weights({3, 3, 3, 3})) EXPECT_EQ(v, 0.25);
  const auto p = compute_stage2_weights({5, 10, 15, 20});
  EXPECT_NEAR(p[0], 0.1, 1e-15);
  EXPECT_NEAR(p[1], 0.2, 1e-15);
  EXPECT_NEAR(p[2], 0.3, 1e-15);
  EXPECT_NEAR(p[3], 0.4, 1e-15);
}

TEST(StageWeightsTest, NonPositiveThrows) {
  EXPECT_THROW(compute_stage2_weights({0, 1, 1, 1}), UsageError);
  EXPECT_THROW(compute_stage2_weights({1, 1, -4, 1}), UsageError);
}

TEST(StageWeightsTest, SumsToOneAndScaleInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(1, 500);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<int, 4> ep{e(rng), e(rng), e(rng), e(rng)};
    const auto w = compute_stage2_weights(ep);
    EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-12);
    const auto scaled = compute_stage2_weights({ep[0] * 3, ep[1] * 3, ep[2] * 3, ep[3] * 3});
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(scaled[i], w[i], 1e-15);
  }
}

}  // namespace
}  // namespace jointbeam
