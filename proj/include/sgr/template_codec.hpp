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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sgr/graph.hpp"

namespace sgr {

/// A reasoning graph plus final answer, as carried by the
/// `<reasoning><step> a → b </step>…</reasoning><answer> x </answer>` template.
struct StructuredOutput {
    ReasoningGraph graph;
    std::string answer;
    std::size_t step_count = 0;
    std::vector<std::string> warnings;  // lenient-mode notes; not part of equality

    friend bool operator==(const StructuredOutput& a, const StructuredOutput& b) {
        return a.graph == b.graph && a.answer == b.answer && a.step_count == b.step_count;
    }
};

enum class ParseErrorKind {
    MissingReasoningBlock,
    MissingAnswerBlock,
    MalformedStep,
    EmptyEndpoint,
    DuplicateStep,
    CycleInSteps,
    TrailingGarbage,
};

std::string_view to_string(ParseErrorKind kind);

struct ParseError {
    ParseErrorKind kind;
    std::size_t location = 0;  // byte offset into the input
    std::string detail;

    std::string message() const;
};

enum class Strictness { Strict, Lenient };

class ParseResult {
public:
    ParseResult(StructuredOutput out) : value_(std::move(out)) {}
    ParseResult(ParseError err) : value_(std::move(err)) {}

    bool ok() const noexcept { return std::holds_alternative<StructuredOutput>(value_); }
    explicit operator bool() const noexcept { return ok(); }

    const StructuredOutput& value() const& { return std::get<StructuredOutput>(value_); }
    StructuredOutput&& value() && { return std::get<StructuredOutput>(std::move(value_)); }
    const ParseError& error() const& { return std::get<ParseError>(value_); }

private:
    std::variant<StructuredOutput, ParseError> value_;
};

ParseResult parse(std::string_view text, Strictness strictness = Strictness::Strict);

/// Canonical template text, one step per edge in insertion order, U+2192
/// arrows, no trailing newline. Throws InvalidGraphError if the graph fails
/// validation, has an isolated node, or holds text the grammar cannot carry.
std::string render(const ReasoningGraph& graph, std::string_view answer);
inline std::string render(const StructuredOutput& out) { return render(out.graph, out.answer); }

/// Content of the last `<answer>…</answer>` pair (case-insensitive), trimmed.
std::optional<std::string> find_answer_tag(std::string_view text);

inline const std::vector<std::string>& default_answer_cues() {
    static const std::vector<std::string> cues{"answer is", "answer:"};
    return cues;
}

/// Best-effort answer for free-form completions: answer tag, else the text
/// after the last cue on its line, else the final non-empty line.
std::optional<std::string> extract_answer_lenient(
    std::string_view text, const std::vector<std::string>& cues = default_answer_cues());

}  // namespace sgr
