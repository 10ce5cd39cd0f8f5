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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgr/model_client.hpp"
#include "sgr/prompts.hpp"

namespace sgr {

struct BenchmarkItem {
    std::string question;  // context, question and lettered options
    std::string label;     // option letter for multiple-choice benchmarks
    std::string benchmark;
    std::string item_id;

    nlohmann::json to_json() const;
    static BenchmarkItem from_json(const nlohmann::json& j);
};

/// Adapter names accepted by ingest(): logiqa, aiw, aiw-plus, ar-lsat, medqa, mathqa.
const std::vector<std::string>& benchmark_names();

/// Display name used in reports ("LogiQA", "AR-LSAT", ...).
std::string display_name(std::string_view benchmark);

/// "A. first\nB. second" …
std::string render_options(const std::vector<std::string>& options);

/// Maps upstream benchmark files onto BenchmarkItems, in file and record
/// order. Throws SchemaError naming file and line on malformed records and
/// std::invalid_argument on an unknown benchmark name.
std::vector<BenchmarkItem> ingest(std::string_view benchmark, const std::vector<std::filesystem::path>& files);

std::vector<BenchmarkItem> read_items(const std::filesystem::path& path);

enum class Paradigm { Direct, Linear, SelfGraph };

std::string_view to_string(Paradigm paradigm);
std::optional<Paradigm> parse_paradigm(std::string_view name);
const PromptTemplate& prompt_for(Paradigm paradigm);

struct ItemRecord {
    std::string item_id;
    std::string benchmark;
    Paradigm paradigm = Paradigm::Direct;
    std::string prediction;  // raw completion
    std::optional<std::string> extracted;
    bool correct = false;
    bool error = false;  // model call failed; counted as incorrect
    std::string error_message;
    std::optional<std::size_t> node_count;  // self-graph replies that parsed
    std::optional<std::size_t> edge_count;

    nlohmann::json to_json() const;
};

struct BenchmarkScore {
    std::string benchmark;
    std::size_t n = 0;
    std::size_t correct = 0;

    double accuracy() const { return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n); }
};

struct EvalReport {
    std::vector<BenchmarkScore> benchmarks;  // first-appearance order
    std::vector<ItemRecord> records;         // input order

    /// Unweighted mean of per-benchmark accuracies.
    double overall() const;
    nlohmann::json to_json() const;
};

/// correct / n as a percentage with two decimals, rounded half up exactly.
std::string format_percent(std::size_t correct, std::size_t n);

/// Unweighted mean of the benchmarks' accuracies as a two-decimal percentage,
/// computed exactly before rounding.
std::string format_overall(const std::vector<BenchmarkScore>& scores);

struct EvalConfig {
    SamplingConfig sampling = [] { SamplingConfig s; s.temperature = 0.0; s.k = 1; return s; }();
    std::size_t concurrency = 8;
};

/// One temperature-0 completion per item; answers extracted per paradigm and
/// scored with the automatic answer matcher. Failed calls are recorded as
/// incorrect with the error flag set. Throws std::invalid_argument on empty input.
EvalReport evaluate(const std::vector<BenchmarkItem>& items, Paradigm paradigm, ModelClient& client,
                    const EvalConfig& config = {});

/// Fixed-width accuracy table with an overall-average row.
std::string render_report_table(const EvalReport& report);

/// report.txt, report.json and records.jsonl, each written atomically.
void write_report(const EvalReport& report, const std::filesystem::path& out_dir);

}  // namespace sgr
