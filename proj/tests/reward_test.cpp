// Copyright 2026 The SGR Toolkit Authors. All Rights Reserved.
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

#include <gtest/gtest.h>

#include "sgr/reward.hpp"
#include "test_support.hpp"

namespace sgr {
namespace {

const std::string kMinimal = "<reasoning>\n<step> a → b </step>\n</reasoning>\n<answer> 4 </answer>";

TEST(FormatReward, StrictTemplateOnly) {
    EXPECT_EQ(reward_format(kMinimal), 1);
    EXPECT_EQ(reward_format("Sure, here it is:\n" + kMinimal), 0);
    EXPECT_EQ(reward_format(testing::hand_template({{"a", "b"}, {"b", "a"}}, "4")), 0);
    EXPECT_EQ(reward_format("<answer> 4 </answer>"), 0);
    EXPECT_EQ(reward_format(""), 0);
    EXPECT_EQ(reward_format(testing::slurp(testing::fixture_path("case_study.txt"))), 1);
}

TEST(AnswerReward, TagContentAgainstLabel) {
    EXPECT_EQ(reward_answer("<answer> 4 </answer>", "4"), 1);
    EXPECT_EQ(reward_answer("The answer is 4", "4"), 0);
    EXPECT_EQ(reward_answer("<answer>B</answer>", "(B)"), 1);
    EXPECT_EQ(reward_answer("<answer>B</answer>", "C"), 0);
    EXPECT_EQ(reward_answer("prose <answer> 4.0 </answer> trailing", "4"), 1);
    EXPECT_EQ(reward_answer("<answer>  </answer>", ""), 0);
}

TEST(Score, CombinesWithWeights) {
    const auto both = score(kMinimal, "4");
    EXPECT_EQ(both.format_reward, 1);
    EXPECT_EQ(both.answer_reward, 1);
    EXPECT_DOUBLE_EQ(both.combined, 2.0);
    const auto answer_only = score(kMinimal, "4", {0.0, 1.0});
    EXPECT_DOUBLE_EQ(answer_only.combined, 1.0);
    const auto weighted = score("x <answer>4</answer>", "4", {0.5, 2.0});
    EXPECT_EQ(weighted.format_reward, 0);
    EXPECT_DOUBLE_EQ(weighted.combined, 2.0);
}

TEST(ScoreBatch, ShapesAndErrors) {
    EXPECT_TRUE(score_batch({}, {}).empty());
    const auto s = score_batch({kMinimal, "nothing"}, {"4", "4"});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[0].combined, 2.0);
    EXPECT_LE(s[1].combined, 1.0);
    try {
        score_batch({kMinimal}, {"4", "5"});
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("length mismatch"), std::string::npos);
    }
    EXPECT_THROW(score_batch({kMinimal}, {"4"}, {-1.0, 1.0}), std::invalid_argument);
}

TEST(RewardProperties, RenderedOutputsEarnFullReward) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        const auto out = testing::random_output(rng, 2 + rng() % 20);
        const std::string text = render(out);
        const auto s = score(text, out.answer);
        EXPECT_EQ(s.format_reward, 1) << text;
        EXPECT_EQ(s.answer_reward, 1) << text;
        // Any non-whitespace prefix breaks the strict format but not the answer.
        const auto prefixed = score("Note: " + text, out.answer);
        EXPECT_EQ(prefixed.format_reward, 0);
        EXPECT_EQ(prefixed.answer_reward, 1);
        EXPECT_GE(s.combined, prefixed.combined);
    }
}

}  // namespace
}  // namespace sgr
