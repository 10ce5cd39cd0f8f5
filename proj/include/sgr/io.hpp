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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgr {

/// Malformed input record; carries the file and 1-based line (or record) number.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::filesystem::path& file, std::size_t line, const std::string& what)
        : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

    const std::filesystem::path& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::filesystem::path file_;
    std::size_t line_;
};

struct JsonlRecord {
    std::size_t line = 0;
    nlohmann::json value;
};

/// Reads one JSON object per non-blank line. Throws SchemaError on bad JSON.
std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path);

/// Reads a JSON array file or a JSONL file (detected by the first non-blank
/// character). Array elements are numbered from 1 in place of lines.
std::vector<JsonlRecord> read_json_records(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string to_jsonl(const std::vector<nlohmann::json>& rows);

}  // namespace sgr
