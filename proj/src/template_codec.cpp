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

#include "sgr/template_codec.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace sgr {

namespace {

constexpr std::string_view kArrow = "\xE2\x86\x92";  // U+2192
constexpr std::string_view kAsciiArrow = "->";
constexpr std::string_view kReasoningOpen = "<reasoning>";
constexpr std::string_view kReasoningClose = "</reasoning>";
constexpr std::string_view kStepOpen = "<step>";
constexpr std::string_view kStepClose = "</step>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
}

std::size_t skip_ws(std::string_view s, std::size_t pos) {
    while (pos < s.size() && is_ws(s[pos])) ++pos;
    return pos;
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view tag, bool ci) {
    if (pos > s.size() || s.size() - pos < tag.size()) return false;
    if (!ci) return s.substr(pos, tag.size()) == tag;
    for (std::size_t i = 0; i < tag.size(); ++i)
        if (lower(s[pos + i]) != lower(tag[i])) return false;
    return true;
}

std::size_t find_at(std::string_view s, std::string_view tag, std::size_t from, bool ci) {
    if (!ci) return s.find(tag, from);
    for (std::size_t p = from; p + tag.size() <= s.size(); ++p)
        if (starts_with_at(s, p, tag, true)) return p;
    return std::string_view::npos;
}

std::size_t rfind_ci(std::string_view s, std::string_view tag) {
    if (tag.size() > s.size()) return std::string_view::npos;
    for (std::size_t p = s.size() - tag.size() + 1; p-- > 0;)
        if (starts_with_at(s, p, tag, true)) return p;
    return std::string_view::npos;
}

std::size_t count_occurrences(std::string_view s, std::string_view needle) {
    std::size_t n = 0;
    for (std::size_t p = s.find(needle); p != std::string_view::npos; p = s.find(needle, p + needle.size()))
        ++n;
    return n;
}

struct Step {
    std::string parent;
    std::string child;
    std::size_t location;
};

ParseError error(ParseErrorKind kind, std::size_t loc, std::string detail) {
    return ParseError{kind, loc, std::move(detail)};
}

// Splits a step body "lhs → rhs" into its endpoints.
std::variant<Step, ParseError> parse_step_body(std::string_view body, std::size_t loc) {
    const std::size_t arrows = count_occurrences(body, kArrow) + count_occurrences(body, kAsciiArrow);
    if (arrows == 0) return error(ParseErrorKind::MalformedStep, loc, "step has no arrow");
    if (arrows > 1) return error(ParseErrorKind::MalformedStep, loc, "step has more than one arrow");

    std::size_t at = body.find(kArrow);
    std::size_t len = kArrow.size();
    if (at == std::string_view::npos) {
        at = body.find(kAsciiArrow);
        len = kAsciiArrow.size();
    }
    std::string_view lhs = trim(body.substr(0, at));
    std::string_view rhs = trim(body.substr(at + len));
    for (auto side : {lhs, rhs}) {
        if (side.find_first_of("<>") != std::string_view::npos)
            return error(ParseErrorKind::MalformedStep, loc, "angle bracket inside node text");
    }
    if (normalize_key(lhs).empty())
        return error(ParseErrorKind::EmptyEndpoint, loc, "step has an empty parent");
    if (normalize_key(rhs).empty())
        return error(ParseErrorKind::EmptyEndpoint, loc, "step has an empty child");
    return Step{std::string(lhs), std::string(rhs), loc};
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::MissingReasoningBlock: return "missing-reasoning-block";
        case ParseErrorKind::MissingAnswerBlock: return "missing-answer-block";
        case ParseErrorKind::MalformedStep: return "malformed-step";
        case ParseErrorKind::EmptyEndpoint: return "empty-endpoint";
        case ParseErrorKind::DuplicateStep: return "duplicate-step";
        case ParseErrorKind::CycleInSteps: return "cycle-in-steps";
        case ParseErrorKind::TrailingGarbage: return "trailing-garbage";
    }
    return "unknown";
}

std::string ParseError::message() const {
    return std::string(to_string(kind)) + " at offset " + std::to_string(location) + ": " + detail;
}

ParseResult parse(std::string_view text, Strictness strictness) {
    const bool lenient = strictness == Strictness::Lenient;
    const bool ci = lenient;
    constexpr auto npos = std::string_view::npos;

    std::size_t pos = skip_ws(text, 0);
    if (!starts_with_at(text, pos, kReasoningOpen, ci)) {
        std::size_t found = find_at(text, kReasoningOpen, 0, ci);
        if (found == npos)
            return error(ParseErrorKind::MissingReasoningBlock, pos, "no <reasoning> block");
        if (!lenient)
            return error(ParseErrorKind::TrailingGarbage, pos, "text before <reasoning>");
        pos = found;
    }
    pos += kReasoningOpen.size();

    std::vector<Step> steps;
    while (true) {
        pos = skip_ws(text, pos);
        if (starts_with_at(text, pos, kReasoningClose, ci)) {
            pos += kReasoningClose.size();
            break;
        }
        if (starts_with_at(text, pos, kStepOpen, ci)) {
            const std::size_t body_begin = pos + kStepOpen.size();
            const std::size_t close = find_at(text, kStepClose, body_begin, ci);
            if (close == npos) return error(ParseErrorKind::MalformedStep, pos, "unterminated <step>");
            auto step = parse_step_body(text.substr(body_begin, close - body_begin), pos);
            if (auto* err = std::get_if<ParseError>(&step)) return *err;
            steps.push_back(std::get<Step>(std::move(step)));
            pos = close + kStepClose.size();
            continue;
        }
        if (pos >= text.size())
            return error(ParseErrorKind::MissingReasoningBlock, pos, "unterminated <reasoning> block");
        return error(ParseErrorKind::MalformedStep, pos, "unexpected text inside <reasoning>");
    }
    if (steps.empty()) return error(ParseErrorKind::MalformedStep, pos, "reasoning block has no steps");

    pos = skip_ws(text, pos);
    if (!starts_with_at(text, pos, kAnswerOpen, ci)) {
        if (find_at(text, kAnswerOpen, pos, ci) != npos)
            return error(ParseErrorKind::TrailingGarbage, pos, "text between </reasoning> and <answer>");
        return error(ParseErrorKind::MissingAnswerBlock, pos, "no <answer> block");
    }
    const std::size_t answer_begin = pos + kAnswerOpen.size();
    const std::size_t answer_close = find_at(text, kAnswerClose, answer_begin, ci);
    if (answer_close == npos)
        return error(ParseErrorKind::MissingAnswerBlock, pos, "unterminated <answer> block");
    std::string_view answer = trim(text.substr(answer_begin, answer_close - answer_begin));
    if (answer.empty()) return error(ParseErrorKind::MissingAnswerBlock, pos, "empty answer");
    pos = skip_ws(text, answer_close + kAnswerClose.size());
    if (pos != text.size() && !lenient)
        return error(ParseErrorKind::TrailingGarbage, pos, "text after </answer>");

    StructuredOutput out;
    out.answer = std::string(answer);
    out.step_count = steps.size();
    for (const auto& s : steps) {
        NodeId p = out.graph.add_node(s.parent);
        NodeId c = out.graph.add_node(s.child);
        if (p == c)
            return error(ParseErrorKind::CycleInSteps, s.location, "step links a node to itself: " + p.key());
        if (out.graph.has_edge(p, c)) {
            if (!lenient)
                return error(ParseErrorKind::DuplicateStep, s.location, "repeated step " + p.key() + " -> " + c.key());
            out.warnings.push_back("dropped duplicate step at offset " + std::to_string(s.location));
            continue;
        }
        out.graph.add_edge(p, c);
    }

    auto diag = validate(out.graph);
    for (const auto& e : diag.errors) {
        if (e.kind != DiagnosticKind::Cycle) continue;
        std::set<NodeId> on_cycle(e.nodes.begin(), e.nodes.end());
        std::size_t loc = steps.front().location;
        for (const auto& s : steps) {
            if (on_cycle.contains(NodeId::from_text(s.parent)) && on_cycle.contains(NodeId::from_text(s.child))) {
                loc = s.location;
                break;
            }
        }
        return error(ParseErrorKind::CycleInSteps, loc, e.detail);
    }
    return out;
}

std::string render(const ReasoningGraph& graph, std::string_view answer) {
    require_valid(graph);
    std::vector<bool> touched(graph.node_count(), false);
    for (const auto& e : graph.edges()) {
        touched[*graph.index_of(e.parent)] = true;
        touched[*graph.index_of(e.child)] = true;
    }
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto& text = graph.nodes()[i].text;
        if (!touched[i]) throw InvalidGraphError("isolated node cannot be rendered: " + text);
        if (text.find_first_of("<>") != std::string::npos || text.find(kArrow) != std::string::npos ||
            text.find(kAsciiArrow) != std::string::npos)
            throw InvalidGraphError("node text cannot be carried by the template: " + text);
    }
    const std::string_view trimmed = trim(answer);
    if (trimmed.empty()) throw InvalidGraphError("answer is empty");
    if (find_at(trimmed, kAnswerClose, 0, true) != std::string_view::npos)
        throw InvalidGraphError("answer contains a closing answer tag");

    std::string out(kReasoningOpen);
    out += '\n';
    for (const auto& e : graph.edges()) {
        out += kStepOpen;
        out += ' ';
        out += graph.node(e.parent).text;
        out += ' ';
        out += kArrow;
        out += ' ';
        out += graph.node(e.child).text;
        out += ' ';
        out += kStepClose;
        out += '\n';
    }
    out += kReasoningClose;
    out += '\n';
    out += kAnswerOpen;
    out += ' ';
    out += trimmed;
    out += ' ';
    out += kAnswerClose;
    return out;
}

std::optional<std::string> find_answer_tag(std::string_view text) {
    const std::size_t open = rfind_ci(text, kAnswerOpen);
    if (open == std::string_view::npos) return std::nullopt;
    const std::size_t begin = open + kAnswerOpen.size();
    const std::size_t close = find_at(text, kAnswerClose, begin, true);
    if (close == std::string_view::npos) return std::nullopt;
    return std::string(trim(text.substr(begin, close - begin)));
}

std::optional<std::string> extract_answer_lenient(std::string_view text,
                                                  const std::vector<std::string>& cues) {
    if (trim(text).empty()) return std::nullopt;
    if (auto tagged = find_answer_tag(text); tagged && !tagged->empty()) return tagged;

    std::size_t best = std::string_view::npos;
    std::size_t best_len = 0;
    for (const auto& cue : cues) {
        if (cue.empty()) continue;
        std::size_t at = rfind_ci(text, cue);
        if (at != std::string_view::npos && (best == std::string_view::npos || at > best)) {
            best = at;
            best_len = cue.size();
        }
    }
    if (best != std::string_view::npos) {
        std::string_view rest = text.substr(best + best_len);
        rest = rest.substr(0, rest.find('\n'));
        rest = trim(rest);
        while (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));
        if (!rest.empty()) return std::string(rest);
    }

    std::string_view remaining = text;
    while (!remaining.empty()) {
        std::size_t nl = remaining.rfind('\n');
        std::string_view line = nl == std::string_view::npos ? remaining : remaining.substr(nl + 1);
        if (!trim(line).empty()) return std::string(trim(line));
        if (nl == std::string_view::npos) break;
        remaining = remaining.substr(0, nl);
    }
    return std::nullopt;
}

}  // namespace sgr
