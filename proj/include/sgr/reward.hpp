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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sgr {

/// Binary format/answer rewards for GRPO-style training on template outputs.
struct RewardScore {
    int format_reward = 0;
    int answer_reward = 0;
    double combined = 0.0;
};

struct RewardWeights {
    double format = 1.0;
    double answer = 1.0;
};

/// 1 iff the completion strict-parses as a reasoning/answer template.
int reward_format(std::string_view completion);

/// 1 iff an <answer> tag is present anywhere and its content matches `label`.
int reward_answer(std::string_view completion, std::string_view label);

RewardScore score(std::string_view completion, std::string_view label, const RewardWeights& weights = {});

/// Element-wise score(); throws std::invalid_argument on a length mismatch or
/// negative weights.
std::vector<RewardScore> score_batch(const std::vector<std::string>& completions,
                                     const std::vector<std::string>& labels, const RewardWeights& weights = {});

}  // namespace sgr
