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

#include "sgr/dataset.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>

#include "sgr/answer_match.hpp"
#include "sgr/io.hpp"
#include "sgr/parallel.hpp"

namespace sgr {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string string_field(const JsonlRecord& r, const fs::path& path, const char* name, bool required) {
    if (!r.value.is_object()) throw SchemaError(path, r.line, "record is not a JSON object");
    auto it = r.value.find(name);
    if (it == r.value.end() || it->is_null()) {
        if (required) throw SchemaError(path, r.line, std::string("missing field \"") + name + "\"");
        return {};
    }
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number()) return it->dump();
    throw SchemaError(path, r.line, std::string("field \"") + name + "\" must be a string");
}

// Unbiased draw in [0, bound) from a 64-bit engine.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
}

std::vector<Candidate> parse_candidates(const TrajectoryBatch& batch, std::size_t& lenient_count) {
    std::vector<Candidate> out;
    for (const auto& t : batch.texts) {
        ParseResult strict = parse(t.text, Strictness::Strict);
        if (strict.ok()) {
            out.push_back({std::move(strict).value(), t.index});
            continue;
        }
        ParseResult lenient = parse(t.text, Strictness::Lenient);
        if (lenient.ok()) {
            ++lenient_count;
            out.push_back({std::move(lenient).value(), t.index});
        }
    }
    return out;
}

}  // namespace

std::vector<SourceQA> read_sources(const fs::path& path) {
    std::vector<SourceQA> out;
    for (const auto& r : read_jsonl(path)) {
        SourceQA s;
        s.question = string_field(r, path, "question", true);
        s.label = string_field(r, path, "label", true);
        const std::string context = string_field(r, path, "context", false);
        if (!context.empty()) s.question = context + "\n\n" + s.question;
        s.source_id = string_field(r, path, "source_id", false);
        if (s.source_id.empty()) s.source_id = string_field(r, path, "id", false);
        if (s.source_id.empty()) s.source_id = "line-" + std::to_string(r.line);
        if (s.question.empty() || s.label.empty()) throw SchemaError(path, r.line, "question and label must be non-empty");
        out.push_back(std::move(s));
    }
    return out;
}

json TrainingInstance::to_json() const {
    return {{"question", question},
            {"graph_reasoning", graph_text},
            {"label", label},
            {"provenance",
             {{"source_id", provenance.source_id},
              {"k_used", provenance.k_used},
              {"contributing_indices", provenance.contributing_indices},
              {"merge_mode", to_string(provenance.merge_mode)},
              {"merge_fallback", provenance.merge_fallback},
              {"teacher_model", provenance.teacher_model}}}};
}

std::string_view to_string(DiscardReason reason) {
    switch (reason) {
        case DiscardReason::AnswerMismatch: return "answer-mismatch";
        case DiscardReason::AllCandidatesFailed: return "all-candidates-failed";
        case DiscardReason::ParseFailure: return "parse-failure";
    }
    return "unknown";
}

FilterOutcome filter_instance(const MergedResult& merged, const SourceQA& source, Provenance provenance) {
    std::string text;
    try {
        text = render(merged.graph, merged.answer);
    } catch (const GraphError& e) {
        return DiscardRecord{source.source_id, DiscardReason::ParseFailure, e.what()};
    }
    if (!parse(text, Strictness::Strict).ok())
        return DiscardRecord{source.source_id, DiscardReason::ParseFailure, "rendered graph does not strict-parse"};
    if (!answers_match(merged.answer, source.label, MatchMode::Auto))
        return DiscardRecord{source.source_id, DiscardReason::AnswerMismatch,
                             "merged answer \"" + merged.answer + "\" vs label \"" + source.label + "\""};
    provenance.source_id = source.source_id;
    return TrainingInstance{source.question, std::move(text), source.label, std::move(provenance)};
}

SplitIndices split_train_valid(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
    const std::size_t n_valid = (n + 5) / 10;
    SplitIndices split;
    split.valid.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_valid));
    split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_valid), order.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.valid.begin(), split.valid.end());
    return split;
}

std::size_t BuildReport::discarded_total() const {
    std::size_t total = 0;
    for (const auto& [_, n] : discarded_by_reason) total += n;
    return total;
}

json BuildReport::to_json() const {
    json reasons = json::object();
    for (auto r : {DiscardReason::AnswerMismatch, DiscardReason::AllCandidatesFailed, DiscardReason::ParseFailure}) {
        auto it = discarded_by_reason.find(r);
        reasons[std::string(to_string(r))] = it == discarded_by_reason.end() ? 0 : it->second;
    }
    json discard_rows = json::array();
    for (const auto& d : discards)
        discard_rows.push_back({{"source_id", d.source_id}, {"reason", to_string(d.reason)}, {"detail", d.detail}});
    return {{"total_in", total_in},
            {"retained", retained},
            {"discarded_by_reason", reasons},
            {"split_sizes", {{"train", train_size}, {"valid", valid_size}}},
            {"lenient_parses", lenient_parses},
            {"merge_fallbacks", merge_fallbacks},
            {"discards", discard_rows}};
}

BuildResult build_dataset(const std::vector<SourceQA>& sources, ModelClient& client, const BuildConfig& config) {
    config.sampling.validate();

    std::vector<std::optional<FilterOutcome>> outcomes(sources.size());
    std::mutex report_mu;
    BuildReport report;
    report.total_in = sources.size();

    LlmMergeOptions llm_options;
    llm_options.sampling = config.sampling;
    llm_options.sampling.temperature = 0.0;
    llm_options.sampling.seed.reset();

    parallel_for(sources.size(), config.concurrency, [&](std::size_t i) {
        const SourceQA& source = sources[i];
        auto discard = [&](DiscardReason reason, std::string detail) {
            outcomes[i] = DiscardRecord{source.source_id, reason, std::move(detail)};
        };

        TrajectoryBatch batch;
        try {
            batch = client.sample_trajectories(source.question, config.sampling);
        } catch (const AllFailedError& e) {
            return discard(DiscardReason::AllCandidatesFailed, e.what());
        }

        std::size_t lenient = 0;
        CandidateSet set{source.question, parse_candidates(batch, lenient)};
        if (set.candidates.empty())
            return discard(DiscardReason::AllCandidatesFailed, "no candidate parsed");

        MergedResult merged;
        try {
            switch (config.merge_mode) {
                case MergeMode::Deterministic: merged = merge_deterministic(set); break;
                case MergeMode::Llm:
                    merged = merge_llm(set, client, {llm_options.sampling, false});
                    break;
                case MergeMode::LlmWithFallback:
                    try {
                        merged = merge_llm(set, client, {llm_options.sampling, true});
                    } catch (const AuthError&) {
                        throw;
                    } catch (const ClientError& e) {
                        merged = merge_deterministic(set);
                        merged.fallback = true;
                        merged.note = e.what();
                    }
                    break;
            }
        } catch (const MergeError& e) {
            const bool nothing_valid = std::string_view(e.what()).starts_with("no valid candidate");
            return discard(nothing_valid ? DiscardReason::AllCandidatesFailed : DiscardReason::ParseFailure, e.what());
        }

        Provenance provenance;
        provenance.k_used = set.candidates.size();
        provenance.contributing_indices = merged.contributing_indices;
        provenance.merge_mode = config.merge_mode;
        provenance.merge_fallback = merged.fallback;
        provenance.teacher_model = config.sampling.model_name;
        outcomes[i] = filter_instance(merged, source, std::move(provenance));

        std::lock_guard lock(report_mu);
        report.lenient_parses += lenient;
        report.merge_fallbacks += merged.fallback ? 1 : 0;
    });

    std::vector<TrainingInstance> retained;
    for (auto& outcome : outcomes) {
        if (auto* inst = std::get_if<TrainingInstance>(&*outcome)) {
            retained.push_back(std::move(*inst));
        } else {
            auto& d = std::get<DiscardRecord>(*outcome);
            ++report.discarded_by_reason[d.reason];
            report.discards.push_back(std::move(d));
        }
    }
    report.retained = retained.size();

    BuildResult result;
    const SplitIndices split = split_train_valid(retained.size(), config.split_seed);
    for (std::size_t i : split.train) result.train.push_back(retained[i]);
    for (std::size_t i : split.valid) result.valid.push_back(retained[i]);
    report.train_size = result.train.size();
    report.valid_size = result.valid.size();
    result.report = std::move(report);
    return result;
}

void write_build(const BuildResult& result, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    auto rows = [](const std::vector<TrainingInstance>& xs) {
        std::vector<json> out;
        for (const auto& x : xs) out.push_back(x.to_json());
        return to_jsonl(out);
    };
    write_file_atomic(out_dir / "train.jsonl", rows(result.train));
    write_file_atomic(out_dir / "valid.jsonl", rows(result.valid));
    write_file_atomic(out_dir / "report.json", result.report.to_json().dump(2) + "\n");
}

}  // namespace sgr
