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

/// A system prompt plus a user template with a `{question}` placeholder.
struct PromptTemplate {
    std::string system;
    std::string user;

    std::string fill(std::string_view question) const;
};

namespace prompts {

/// Teacher prompt that asks for one candidate reasoning graph in template form.
const PromptTemplate& candidate_graph();

/// Teacher prompt that integrates rendered candidate graphs into one graph.
/// `candidates` are canonical template documents.
PromptTemplate integration(std::string_view question, const std::vector<std::string>& candidates);

/// Appended to the integration request after an unparseable reply.
std::string repair_instruction(std::string_view problem);

const PromptTemplate& direct_answer();
const PromptTemplate& linear_reasoning();
const PromptTemplate& self_graph();

}  // namespace prompts
}  // namespace sgr
