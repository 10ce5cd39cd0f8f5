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

#include "sgr/answer_match.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "sgr/graph.hpp"

namespace sgr {

namespace {

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
    return s;
}

// Drops XML-ish tags, markdown emphasis/code marks, and unwraps \boxed{...}.
std::string strip_markup(std::string_view text) {
    std::string s(text);
    if (auto at = s.find("\\boxed{"); at != std::string::npos) {
        std::size_t begin = at + 7, depth = 1, i = begin;
        for (; i < s.size() && depth > 0; ++i) {
            if (s[i] == '{') ++depth;
            if (s[i] == '}') --depth;
        }
        s = s.substr(begin, (depth == 0 ? i - 1 : i) - begin);
    }
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '<' && i + 1 < s.size() &&
            (s[i + 1] == '/' || std::isalpha(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t close = s.find('>', i);
            if (close != std::string::npos) {
                out.push_back(' ');
                i = close;
                continue;
            }
        }
        if (c == '*' || c == '`') continue;
        out.push_back(c);
    }
    return out;
}

bool is_option_letter(char c) {
    char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return u >= 'A' && u <= 'E';
}

}  // namespace

std::optional<MatchMode> parse_match_mode(std::string_view name) {
    if (name == "mcq") return MatchMode::Mcq;
    if (name == "numeric") return MatchMode::Numeric;
    if (name == "freeform") return MatchMode::Freeform;
    if (name == "auto") return MatchMode::Auto;
    return std::nullopt;
}

std::optional<char> extract_option_letter(std::string_view text) {
    const std::string stripped = strip_markup(text);
    std::string_view s = trim(stripped);

    for (std::string_view prefix : {"option", "choice"}) {
        if (s.size() > prefix.size() && is_ws(s[prefix.size()])) {
            bool same = std::equal(prefix.begin(), prefix.end(), s.begin(), [](char a, char b) {
                return a == std::tolower(static_cast<unsigned char>(b));
            });
            if (same) s = trim(s.substr(prefix.size()));
        }
    }

    const std::string key = normalize_key(s);
    if (key.size() == 1 && is_option_letter(key[0]))
        return static_cast<char>(std::toupper(static_cast<unsigned char>(key[0])));

    // "(B) text", "B) text", "B. text", "B: text"
    std::size_t i = 0;
    if (i < s.size() && s[i] == '(') ++i;
    if (i + 1 < s.size() && is_option_letter(s[i])) {
        char letter = s[i];
        char mark = s[i + 1];
        bool marked = mark == ')' || ((mark == '.' || mark == ':') && s[0] != '(');
        if (marked && (i + 2 == s.size() || is_ws(s[i + 2])))
            return static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
    }
    return std::nullopt;
}

std::optional<double> parse_number(std::string_view text) {
    const std::string stripped = strip_markup(text);
    std::string_view s = trim(stripped);
    while (!s.empty() && (s.back() == '.' || s.back() == '%')) s = trim(s.substr(0, s.size() - 1));
    if (!s.empty() && s.front() == '$') s = trim(s.substr(1));
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);

    std::string digits;
    digits.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool thousands = s[i] == ',' && i > 0 && i + 1 < s.size() &&
                         std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                         std::isdigit(static_cast<unsigned char>(s[i + 1]));
        if (!thousands) digits.push_back(s[i]);
    }
    if (digits.empty()) return std::nullopt;
    double value = 0;
    const char* first = digits.data();
    const char* last = first + digits.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string normalize_freeform(std::string_view text) { return normalize_key(strip_markup(text)); }

bool answers_match(std::string_view candidate, std::string_view label, MatchMode mode) {
    auto mcq = [&]() -> std::optional<bool> {
        auto a = extract_option_letter(candidate);
        auto b = extract_option_letter(label);
        if (!a || !b) return std::nullopt;
        return *a == *b;
    };
    auto numeric = [&]() -> std::optional<bool> {
        auto a = parse_number(candidate);
        auto b = parse_number(label);
        if (!a || !b) return std::nullopt;
        const double scale = std::max(std::fabs(*a), std::fabs(*b));
        return std::fabs(*a - *b) <= kNumericRelTolerance * scale;
    };
    auto freeform = [&]() {
        const std::string a = normalize_freeform(candidate);
        return !a.empty() && a == normalize_freeform(label);
    };

    switch (mode) {
        case MatchMode::Mcq: return mcq().value_or(false);
        case MatchMode::Numeric: return numeric().value_or(false);
        case MatchMode::Freeform: return freeform();
        case MatchMode::Auto:
            if (auto r = mcq()) return *r;
            if (auto r = numeric()) return *r;
            return freeform();
    }
    return false;
}

std::string canonical_answer_key(std::string_view answer) {
    if (auto letter = extract_option_letter(answer)) return std::string("option:") + *letter;
    if (auto number = parse_number(answer)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "number:%.12g", *number);
        return buf;
    }
    return "text:" + normalize_freeform(answer);
}

}  // namespace sgr
