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

#include "sgr/prompts.hpp"

namespace sgr {

std::string PromptTemplate::fill(std::string_view question) const {
    static constexpr std::string_view kSlot = "{question}";
    std::string out = user;
    for (std::size_t at = out.find(kSlot); at != std::string::npos; at = out.find(kSlot, at + question.size()))
        out.replace(at, kSlot.size(), question);
    return out;
}

namespace prompts {

namespace {

constexpr const char* kTemplateRules =
    "Write your reasoning as a directed graph of atomic reasoning steps, then give the final answer, "
    "using exactly this format and nothing else:\n"
    "<reasoning>\n"
    "<step> premise or intermediate step \xE2\x86\x92 step that depends on it </step>\n"
    "...\n"
    "</reasoning>\n"
    "<answer> final answer </answer>\n"
    "Rules: each <step> holds exactly one arrow linking a parent step to a child step. "
    "Repeat a step's exact wording whenever it appears in several edges. "
    "Every step must be justified by its parent steps. The graph must not contain cycles and "
    "should converge on a single concluding step. Step text must not contain angle brackets or arrows. "
    "For multiple-choice questions the answer is the option letter only.";

}  // namespace

const PromptTemplate& candidate_graph() {
    static const PromptTemplate p{
        std::string("You are an expert reasoner who explains solutions as reasoning graphs.\n") + kTemplateRules,
        "Question:\n{question}\n\nConstruct a reasoning graph that leads to the answer."};
    return p;
}

PromptTemplate integration(std::string_view question, const std::vector<std::string>& candidates) {
    std::string user = "Question:\n";
    user += question;
    user += "\n\nCandidate reasoning graphs:\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        user += "\n[Candidate " + std::to_string(i + 1) + "]\n";
        user += candidates[i];
        user += '\n';
    }
    user +=
        "\nIntegrate the candidates into one reasoning graph that keeps the steps which are logically "
        "consistent and converge on the best-supported answer. Drop fragmented or contradictory paths.";
    return PromptTemplate{
        std::string("You merge several candidate reasoning graphs into one optimal reasoning graph.\n") +
            kTemplateRules,
        std::move(user)};
}

std::string repair_instruction(std::string_view problem) {
    std::string out = "\n\nYour previous reply could not be used (";
    out += problem;
    out += "). Reply again with only the <reasoning> block followed by the <answer> block, "
           "one arrow per step, and no cycles.";
    return out;
}

const PromptTemplate& direct_answer() {
    static const PromptTemplate p{
        "You are a helpful assistant that answers questions accurately.",
        "{question}\n\nRespond with only the final answer in the form \"The answer is X\". "
        "For multiple-choice questions X is the option letter."};
    return p;
}

const PromptTemplate& linear_reasoning() {
    static const PromptTemplate p{
        "You are a helpful assistant that answers questions accurately.",
        "{question}\n\nLet's think step by step. Finish with a final line of the form \"The answer is X\". "
        "For multiple-choice questions X is the option letter."};
    return p;
}

const PromptTemplate& self_graph() {
    static const PromptTemplate p{
        std::string("You reason by first building an explicit reasoning graph, then answering.\n") + kTemplateRules,
        "Question:\n{question}"};
    return p;
}

}  // namespace prompts
}  // namespace sgr
