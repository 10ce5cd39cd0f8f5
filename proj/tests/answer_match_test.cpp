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

#include <random>

#include "answer_oracle.hpp"
#include "sgr/answer_match.hpp"

namespace sgr {
namespace {

TEST(AnswersMatch, OracleTable) {
    const auto& table = testing::answer_oracle_table();
    ASSERT_EQ(table.size(), 50u);
    for (const auto& p : table)
        EXPECT_EQ(answers_match(p.candidate, p.label, MatchMode::Auto), p.match)
            << '"' << p.candidate << "\" vs \"" << p.label << '"';
}

TEST(AnswersMatch, ExplicitModes) {
    EXPECT_TRUE(answers_match("(b)", "B", MatchMode::Mcq));
    EXPECT_FALSE(answers_match("4", "4", MatchMode::Mcq));
    EXPECT_TRUE(answers_match("4.0000001", "4", MatchMode::Numeric));
    EXPECT_FALSE(answers_match("four", "four", MatchMode::Numeric));
    EXPECT_TRUE(answers_match("Four.", "four", MatchMode::Freeform));
    EXPECT_FALSE(answers_match("4.0", "4", MatchMode::Freeform));
}

TEST(AnswersMatch, ParseMatchMode) {
    EXPECT_EQ(parse_match_mode("auto"), MatchMode::Auto);
    EXPECT_EQ(parse_match_mode("mcq"), MatchMode::Mcq);
    EXPECT_EQ(parse_match_mode("fuzzy"), std::nullopt);
}

TEST(OptionLetter, Forms) {
    EXPECT_EQ(extract_option_letter("b"), 'B');
    EXPECT_EQ(extract_option_letter("**C.**"), 'C');
    EXPECT_EQ(extract_option_letter("Option A"), 'A');
    EXPECT_EQ(extract_option_letter("D: the third"), 'D');
    EXPECT_EQ(extract_option_letter("F"), std::nullopt);
    EXPECT_EQ(extract_option_letter("Apple"), std::nullopt);
    EXPECT_EQ(extract_option_letter("(B"), 'B');
}

TEST(ParseNumber, Forms) {
    EXPECT_EQ(parse_number("1,234.5"), 1234.5);
    EXPECT_EQ(parse_number("$ 7"), 7.0);
    EXPECT_EQ(parse_number("12%"), 12.0);
    EXPECT_EQ(parse_number("abc"), std::nullopt);
    EXPECT_EQ(parse_number(""), std::nullopt);
    EXPECT_EQ(parse_number("1 2"), std::nullopt);
}

TEST(AnswersMatchProperties, SymmetricReflexiveAndNormalizationInvariant) {
    std::mt19937_64 rng(21);
    const std::vector<std::string> atoms{"4", "B", "(c)", "Harry Potter", "12.5", "1,000", "yes", "E.", "x y"};
    const std::vector<std::pair<std::string, std::string>> wraps{{"", ""}, {" ", "  "}, {"**", "**"}, {"", "."},
                                                                 {"<answer>", "</answer>"}};
    for (int trial = 0; trial < 500; ++trial) {
        const auto& a = atoms[rng() % atoms.size()];
        const auto& b = atoms[rng() % atoms.size()];
        EXPECT_EQ(answers_match(a, b), answers_match(b, a)) << a << " / " << b;
        EXPECT_TRUE(answers_match(a, a));
        const auto& [pre, post] = wraps[rng() % wraps.size()];
        EXPECT_EQ(answers_match(pre + a + post, b), answers_match(a, b)) << pre + a + post << " / " << b;
    }
}

TEST(CanonicalKey, GroupsEquivalentAnswers) {
    EXPECT_EQ(canonical_answer_key("(B)"), canonical_answer_key("b"));
    EXPECT_EQ(canonical_answer_key("4.0"), canonical_answer_key("4"));
    EXPECT_EQ(canonical_answer_key("Yes!"), canonical_answer_key("yes"));
    EXPECT_NE(canonical_answer_key("4"), canonical_answer_key("5"));
    EXPECT_NE(canonical_answer_key("B"), canonical_answer_key("C"));
}

}  // namespace
}  // namespace sgr
