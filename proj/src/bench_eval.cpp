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

#include <cstdio>
#include <algorithm>

#include "sgr/answer_match.hpp"
#include "sgr/bench.hpp"
#include "sgr/io.hpp"
#include "sgr/parallel.hpp"
#include "sgr/template_codec.hpp"

namespace sgr {

using json = nlohmann::json;

namespace {

using Wide = __int128;

Wide gcd_wide(Wide a, Wide b) {
    while (b != 0) {
        const Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// num/den as a percentage, two decimals, half up. num, den >= 0, den > 0.
std::string percent_of(Wide num, Wide den) {
    const Wide hundredths = (num * 20000 + den) / (2 * den);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llu.%02llu", static_cast<unsigned long long>(hundredths / 100),
                  static_cast<unsigned long long>(hundredths % 100));
    return buf;
}

}  // namespace

std::string_view to_string(Paradigm p) {
    switch (p) {
        case Paradigm::Direct: return "direct";
        case Paradigm::Linear: return "linear";
        case Paradigm::SelfGraph: return "self-graph";
    }
    return "unknown";
}

std::optional<Paradigm> parse_paradigm(std::string_view name) {
    if (name == "direct") return Paradigm::Direct;
    if (name == "linear") return Paradigm::Linear;
    if (name == "self-graph") return Paradigm::SelfGraph;
    return std::nullopt;
}

const PromptTemplate& prompt_for(Paradigm p) {
    switch (p) {
        case Paradigm::Direct: return prompts::direct_answer();
        case Paradigm::Linear: return prompts::linear_reasoning();
        case Paradigm::SelfGraph: break;
    }
    return prompts::self_graph();
}

json ItemRecord::to_json() const {
    json j = {{"item_id", item_id},
              {"benchmark", benchmark},
              {"paradigm", to_string(paradigm)},
              {"prediction", prediction},
              {"extracted", extracted ? json(*extracted) : json(nullptr)},
              {"correct", correct},
              {"error", error}};
    if (error) j["error_message"] = error_message;
    if (node_count) j["node_count"] = *node_count;
    if (edge_count) j["edge_count"] = *edge_count;
    return j;
}

double EvalReport::overall() const {
    if (benchmarks.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& b : benchmarks) sum += b.accuracy();
    return sum / static_cast<double>(benchmarks.size());
}

json EvalReport::to_json() const {
    json rows = json::array();
    for (const auto& b : benchmarks)
        rows.push_back({{"benchmark", b.benchmark},
                        {"n", b.n},
                        {"correct", b.correct},
                        {"accuracy", b.accuracy()},
                        {"accuracy_percent", format_percent(b.correct, b.n)}});
    json records_json = json::array();
    for (const auto& r : records) records_json.push_back(r.to_json());
    return {{"benchmarks", rows},
            {"overall_average", overall()},
            {"overall_average_percent", benchmarks.empty() ? json(nullptr) : json(format_overall(benchmarks))},
            {"records", records_json}};
}

std::string format_percent(std::size_t correct, std::size_t n) {
    if (n == 0) throw std::invalid_argument("accuracy of an empty benchmark");
    return percent_of(static_cast<Wide>(correct), static_cast<Wide>(n));
}

std::string format_overall(const std::vector<BenchmarkScore>& scores) {
    if (scores.empty()) throw std::invalid_argument("no benchmarks to average");
    // sum_b c_b / n_b over B benchmarks, as one exact fraction.
    Wide num = 0, den = 1;
    for (const auto& s : scores) {
        if (s.n == 0) throw std::invalid_argument("accuracy of an empty benchmark");
        const Wide n = static_cast<Wide>(s.n);
        num = num * n + static_cast<Wide>(s.correct) * den;
        den *= n;
        const Wide g = gcd_wide(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    return percent_of(num, den * static_cast<Wide>(scores.size()));
}

EvalReport evaluate(const std::vector<BenchmarkItem>& items, Paradigm paradigm, ModelClient& client,
                    const EvalConfig& config) {
    if (items.empty()) throw std::invalid_argument("evaluation needs at least one item");
    const PromptTemplate& prompt = prompt_for(paradigm);

    std::vector<ItemRecord> records(items.size());
    parallel_for(items.size(), config.concurrency, [&](std::size_t i) {
        const BenchmarkItem& item = items[i];
        ItemRecord rec;
        rec.item_id = item.item_id;
        rec.benchmark = item.benchmark;
        rec.paradigm = paradigm;
        try {
            rec.prediction = client.complete({prompt.system, prompt.fill(item.question), config.sampling, std::nullopt}).text;
        } catch (const AuthError&) {
            throw;
        } catch (const ClientError& e) {
            rec.error = true;
            rec.error_message = e.what();
        }
        if (!rec.error) {
            if (paradigm == Paradigm::SelfGraph) {
                ParseResult parsed = parse(rec.prediction, Strictness::Strict);
                if (!parsed.ok()) parsed = parse(rec.prediction, Strictness::Lenient);
                if (parsed.ok()) {
                    rec.extracted = parsed.value().answer;
                    rec.node_count = parsed.value().graph.node_count();
                    rec.edge_count = parsed.value().graph.edge_count();
                }
            }
            if (!rec.extracted) rec.extracted = extract_answer_lenient(rec.prediction);
            rec.correct = rec.extracted && answers_match(*rec.extracted, item.label, MatchMode::Auto);
        }
        records[i] = std::move(rec);
    });

    EvalReport report;
    for (const auto& rec : records) {
        auto it = std::find_if(report.benchmarks.begin(), report.benchmarks.end(),
                               [&](const BenchmarkScore& s) { return s.benchmark == rec.benchmark; });
        if (it == report.benchmarks.end()) it = report.benchmarks.insert(report.benchmarks.end(), {rec.benchmark, 0, 0});
        ++it->n;
        it->correct += rec.correct ? 1 : 0;
    }
    report.records = std::move(records);
    return report;
}

std::string render_report_table(const EvalReport& report) {
    char line[160];
    std::string out;
    std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s\n", "Benchmark", "N", "Correct", "Errors", "Acc (%)");
    out += line;
    const std::string rule(16 + 4 * 9, '-');
    out += rule + "\n";
    for (const auto& b : report.benchmarks) {
        std::size_t errors = 0;
        for (const auto& r : report.records) errors += (r.benchmark == b.benchmark && r.error) ? 1 : 0;
        std::snprintf(line, sizeof line, "%-16s %8zu %8zu %8zu %8s\n", display_name(b.benchmark).c_str(), b.n,
                      b.correct, errors, format_percent(b.correct, b.n).c_str());
        out += line;
    }
    out += rule + "\n";
    std::snprintf(line, sizeof line, "%-16s %8s %8s %8s %8s\n", "Overall Avg.", "", "", "",
                  report.benchmarks.empty() ? "-" : format_overall(report.benchmarks).c_str());
    out += line;
    return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file_atomic(out_dir / "report.txt", render_report_table(report));
    write_file_atomic(out_dir / "report.json", report.to_json().dump(2) + "\n");
    std::vector<json> rows;
    for (const auto& r : report.records) rows.push_back(r.to_json());
    write_file_atomic(out_dir / "records.jsonl", to_jsonl(rows));
}

}  // namespace sgr
