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
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgr/graph_merge.hpp"
#include "sgr/model_client.hpp"

namespace sgr {

struct SourceQA {
    std::string question;  // context already joined in
    std::string label;
    std::string source_id;
};

/// JSONL with "question", "label", optional "context" (prepended, blank-line
/// separated) and optional "source_id"/"id" (defaults to "line-N").
std::vector<SourceQA> read_sources(const std::filesystem::path& path);

struct Provenance {
    std::size_t k_used = 0;  // candidates that entered the merge
    std::set<std::size_t> contributing_indices;
    MergeMode merge_mode = MergeMode::Deterministic;
    bool merge_fallback = false;
    std::string teacher_model;
    std::string source_id;
};

struct TrainingInstance {
    std::string question;
    std::string graph_text;  // canonical template
    std::string label;
    Provenance provenance;

    nlohmann::json to_json() const;
};

enum class DiscardReason { AnswerMismatch, AllCandidatesFailed, ParseFailure };

std::string_view to_string(DiscardReason reason);

struct DiscardRecord {
    std::string source_id;
    DiscardReason reason;
    std::string detail;
};

using FilterOutcome = std::variant<TrainingInstance, DiscardRecord>;

/// Retains (question, merged graph, label) iff the merged answer matches the
/// label. A merged graph the template cannot carry is a ParseFailure.
FilterOutcome filter_instance(const MergedResult& merged, const SourceQA& source, Provenance provenance);

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> valid;  // ascending
};

/// Seeded 9:1 split of n items; round(n / 10) go to validation.
SplitIndices split_train_valid(std::size_t n, std::uint64_t seed);

struct BuildConfig {
    SamplingConfig sampling;
    MergeMode merge_mode = MergeMode::LlmWithFallback;
    std::uint64_t split_seed = 42;
    std::size_t concurrency = 8;
};

struct BuildReport {
    std::size_t total_in = 0;
    std::size_t retained = 0;
    std::map<DiscardReason, std::size_t> discarded_by_reason;
    std::size_t train_size = 0;
    std::size_t valid_size = 0;
    std::size_t lenient_parses = 0;
    std::size_t merge_fallbacks = 0;
    std::vector<DiscardRecord> discards;  // input order

    std::size_t discarded_total() const;
    bool accounting_holds() const { return total_in == retained + discarded_total(); }
    nlohmann::json to_json() const;
};

struct BuildResult {
    std::vector<TrainingInstance> train;
    std::vector<TrainingInstance> valid;
    BuildReport report;
};

/// Sample, parse, merge and filter every source, then split the retained
/// instances. Per-item failures become discard records; AuthError and
/// configuration errors abort.
BuildResult build_dataset(const std::vector<SourceQA>& sources, ModelClient& client, const BuildConfig& config);

/// train.jsonl, valid.jsonl and report.json, each written atomically.
void write_build(const BuildResult& result, const std::filesystem::path& out_dir);

}  // namespace sgr
