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

#include "sgr/reward.hpp"

#include <stdexcept>

#include "sgr/answer_match.hpp"
#include "sgr/template_codec.hpp"

namespace sgr {

int reward_format(std::string_view completion) { return parse(completion, Strictness::Strict).ok() ? 1 : 0; }

int reward_answer(std::string_view completion, std::string_view label) {
    const auto content = find_answer_tag(completion);
    return content && !content->empty() && answers_match(*content, label, MatchMode::Auto) ? 1 : 0;
}

RewardScore score(std::string_view completion, std::string_view label, const RewardWeights& weights) {
    RewardScore s;
    s.format_reward = reward_format(completion);
    s.answer_reward = reward_answer(completion, label);
    s.combined = weights.format * s.format_reward + weights.answer * s.answer_reward;
    return s;
}

std::vector<RewardScore> score_batch(const std::vector<std::string>& completions,
                                     const std::vector<std::string>& labels, const RewardWeights& weights) {
    if (completions.size() != labels.size())
        throw std::invalid_argument("length mismatch: " + std::to_string(completions.size()) + " completions, " +
                                    std::to_string(labels.size()) + " labels");
    if (weights.format < 0 || weights.answer < 0) throw std::invalid_argument("reward weights must be nonnegative");
    std::vector<RewardScore> out;
    out.reserve(completions.size());
    for (std::size_t i = 0; i < completions.size(); ++i) out.push_back(score(completions[i], labels[i], weights));
    return out;
}

}  // namespace sgr
