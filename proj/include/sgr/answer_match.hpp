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

#include <optional>
#include <string>
#include <string_view>

namespace sgr {

enum class MatchMode { Mcq, Numeric, Freeform, Auto };

std::optional<MatchMode> parse_match_mode(std::string_view name);

/// Relative tolerance used by numeric matching.
inline constexpr double kNumericRelTolerance = 1e-6;

/// Option letter A-E, uppercased, when the text is a bare option marker such
/// as "b", "(B)", "**B.**", "Option B" or "B) some option text".
std::optional<char> extract_option_letter(std::string_view text);

/// Parses "1,024", "$3.50", "-2", "40%", "7." as numbers.
std::optional<double> parse_number(std::string_view text);

/// Lowercased, whitespace-collapsed, markup-free text with surrounding
/// punctuation removed.
std::string normalize_freeform(std::string_view text);

/// The answer-equality predicate used by dataset filtering, evaluation and
/// reward scoring. Auto mode is a cascade: MCQ if both sides yield an option
/// letter, else numeric if both parse as numbers, else freeform equality.
bool answers_match(std::string_view candidate, std::string_view label, MatchMode mode = MatchMode::Auto);

/// Grouping key consistent with Auto matching for letters and plain text.
std::string canonical_answer_key(std::string_view answer);

}  // namespace sgr
