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

#include <gtest/gtest.h>

#include "sgr/bench.hpp"
#include "sgr/io.hpp"
#include "test_support.hpp"

namespace sgr {
namespace {

using json = nlohmann::json;

ClientOptions quick() {
    ClientOptions o;
    o.retry.base_delay = std::chrono::milliseconds(1);
    o.retry.max_attempts = 2;
    return o;
}

BenchmarkItem item(const std::string& bench, const std::string& id, const std::string& question,
                   const std::string& label) {
    return {question, label, bench, id};
}

TEST(Ingest, LogiQA) {
    testing::TempDir dir("logiqa");
    testing::write_text(dir / "logiqa.jsonl",
                        R"({"text": "All cats purr.", "question": "Which follows?", "options": ["Dogs purr", "Tom purrs"], "answer": 1, "id": "L1"})"
                        "\n"
                        R"({"context": "P.", "question": "Q?", "options": ["x", "y", "z"], "label": "c"})"
                        "\n");
    const auto items = ingest("logiqa", {dir / "logiqa.jsonl"});
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].question, "All cats purr.\n\nWhich follows?\nA. Dogs purr\nB. Tom purrs");
    EXPECT_EQ(items[0].label, "B");
    EXPECT_EQ(items[0].item_id, "L1");
    EXPECT_EQ(items[0].benchmark, "logiqa");
    EXPECT_EQ(items[1].label, "C");
    EXPECT_EQ(items[1].item_id, "logiqa-2");
}

TEST(Ingest, AliceInWonderland) {
    testing::TempDir dir("aiw");
    testing::write_text(dir / "aiw.json",
                        R"([{"prompt": "Alice has 3 brothers and 3 sisters. How many sisters does Alice's brother have?", "right_answer": "4", "id": 55},
                            {"question": "Another one?", "answer": 7}])");
    const auto items = ingest("aiw", {dir / "aiw.json"});
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].label, "4");
    EXPECT_EQ(items[0].item_id, "55");
    EXPECT_EQ(items[1].label, "7");
    EXPECT_EQ(display_name("aiw"), "AIW");
}

TEST(Ingest, ArLsatPassagesExpandToQuestions) {
    testing::TempDir dir("arlsat");
    testing::write_text(dir / "ar.json", R"([{"id": "g1", "passage": "Seven books on a shelf.",
        "questions": [{"question": "Which is first?", "options": ["F", "G", "H", "J", "K"], "answer": "D"},
                      {"question": "Which is last?", "options": ["F", "G", "H", "J", "K"], "label": 0}]}])");
    const auto items = ingest("ar-lsat", {dir / "ar.json"});
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].item_id, "g1-1");
    EXPECT_EQ(items[1].item_id, "g1-2");
    EXPECT_EQ(items[0].label, "D");
    EXPECT_EQ(items[1].label, "A");
    EXPECT_EQ(items[0].question.rfind("Seven books on a shelf.\n\nWhich is first?\nA. F", 0), 0u);
    EXPECT_EQ(display_name("ar-lsat"), "AR-LSAT");
}

TEST(Ingest, MedQAAnswerIndexOrText) {
    testing::TempDir dir("medqa");
    testing::write_text(dir / "med.jsonl",
                        R"({"question": "Best drug?", "options": {"A": "aspirin", "B": "ibuprofen"}, "answer_idx": "B"})"
                        "\n"
                        R"({"question": "Worst drug?", "options": {"A": "aspirin", "B": "ibuprofen"}, "answer": "aspirin"})"
                        "\n");
    const auto items = ingest("medqa", {dir / "med.jsonl"});
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].label, "B");
    EXPECT_EQ(items[1].label, "A");
    EXPECT_EQ(items[0].question, "Best drug?\nA. aspirin\nB. ibuprofen");
}

TEST(Ingest, MathQAOptionString) {
    testing::TempDir dir("mathqa");
    testing::write_text(dir / "math.json",
                        R"([{"Problem": "what is 2 + 2 ?", "options": "a ) 3 , b ) 4 , c ) 5.5 , d ) 6 , e ) none", "correct": "b"}])");
    const auto items = ingest("mathqa", {dir / "math.json"});
    ASSERT_EQ(items.size(), 1u);
    EXPECT_EQ(items[0].question, "what is 2 + 2 ?\nA. 3\nB. 4\nC. 5.5\nD. 6\nE. none");
    EXPECT_EQ(items[0].label, "B");
}

TEST(Ingest, SchemaErrorsNameFileAndLine) {
    testing::TempDir dir("bad");
    testing::write_text(dir / "bad.jsonl",
                        R"({"question": "ok", "options": ["a"], "answer": 0})"
                        "\n"
                        R"({"question": "no options", "answer": 0})"
                        "\n");
    try {
        ingest("logiqa", {dir / "bad.jsonl"});
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("bad.jsonl:2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("options"), std::string::npos);
    }
    testing::write_text(dir / "range.jsonl", R"({"question": "q", "options": ["a", "b"], "answer": 5})"
                                             "\n");
    EXPECT_THROW(ingest("logiqa", {dir / "range.jsonl"}), SchemaError);
    testing::write_text(dir / "dup.jsonl", R"({"prompt": "a", "right_answer": "1", "id": "x"})"
                                           "\n"
                                           R"({"prompt": "b", "right_answer": "2", "id": "x"})"
                                           "\n");
    EXPECT_THROW(ingest("aiw", {dir / "dup.jsonl"}), SchemaError);
    EXPECT_THROW(ingest("gsm8k", {dir / "dup.jsonl"}), std::invalid_argument);
}

TEST(Items, JsonRoundTrip) {
    testing::TempDir dir("items");
    const std::vector<BenchmarkItem> items{item("aiw", "1", "Q one", "4"), item("medqa", "m", "Q\ntwo", "B")};
    std::vector<json> rows;
    for (const auto& i : items) rows.push_back(i.to_json());
    write_file_atomic(dir / "items.jsonl", to_jsonl(rows));
    const auto back = read_items(dir / "items.jsonl");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].question, "Q\ntwo");
    EXPECT_EQ(back[1].benchmark, "medqa");
    testing::write_text(dir / "broken.jsonl", "{\"question\": \"q\"}\n");
    EXPECT_THROW(read_items(dir / "broken.jsonl"), SchemaError);
}

TEST(Percent, ExactHalfUpRounding) {
    EXPECT_EQ(format_percent(13, 20), "65.00");
    EXPECT_EQ(format_percent(3, 4), "75.00");
    EXPECT_EQ(format_percent(1, 3), "33.33");
    EXPECT_EQ(format_percent(2, 3), "66.67");
    EXPECT_EQ(format_percent(1, 8), "12.50");
    EXPECT_EQ(format_percent(1, 16), "6.25");
    EXPECT_EQ(format_percent(1, 32), "3.13");  // 3.125 rounds up
    EXPECT_EQ(format_percent(0, 7), "0.00");
    EXPECT_EQ(format_percent(7, 7), "100.00");
    EXPECT_THROW(format_percent(0, 0), std::invalid_argument);
}

TEST(Percent, MatchesIntegerOracle) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + rng() % 5000, c = rng() % (n + 1);
        // hundredths = floor(c * 10000 / n + 1/2)
        const std::size_t h = (2 * c * 10000 + n) / (2 * n);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%zu.%02zu", h / 100, h % 100);
        EXPECT_EQ(format_percent(c, n), buf) << c << "/" << n;
    }
}

TEST(Percent, OverallIsUnweightedMean) {
    EXPECT_EQ(format_overall({{"a", 20, 13}, {"b", 4, 3}}), "70.00");
    EXPECT_EQ(format_overall({{"a", 3, 1}, {"b", 3, 2}}), "50.00");
    EXPECT_EQ(format_overall({{"a", 3, 1}}), "33.33");
    // (1/3 + 1/6) / 2 = 0.25
    EXPECT_EQ(format_overall({{"a", 3, 1}, {"b", 6, 1}}), "25.00");
    EXPECT_THROW(format_overall({}), std::invalid_argument);
}

TEST(Evaluate, ScoresAndAggregates) {
    json fixture = {{"rules",
                     {{{"contains", "Q-aiw-1"}, {"reply", "<answer> 4 </answer>"}},
                      {{"contains", "Q-aiw-2"}, {"reply", "The answer is 5."}},
                      {{"contains", "Q-aiw-3"}, {"reply", "Answer: 4.0"}},
                      {{"contains", "Q-aiw-4"}, {"reply", "I refuse."}},
                      {{"contains", "Q-med-1"}, {"reply", "answer: (B)"}},
                      {{"contains", "Q-med-2"}, {"reply", "<answer>A</answer>"}}}}};
    auto mock = std::make_shared<MockTransport>(fixture);
    ModelClient client(mock, quick());
    const std::vector<BenchmarkItem> items{
        item("aiw", "a1", "Q-aiw-1", "4"), item("aiw", "a2", "Q-aiw-2", "4"), item("aiw", "a3", "Q-aiw-3", "4"),
        item("aiw", "a4", "Q-aiw-4", "4"), item("medqa", "m1", "Q-med-1", "B"), item("medqa", "m2", "Q-med-2", "B")};
    const auto report = evaluate(items, Paradigm::Direct, client);
    ASSERT_EQ(report.benchmarks.size(), 2u);
    EXPECT_EQ(report.benchmarks[0].benchmark, "aiw");
    EXPECT_EQ(report.benchmarks[0].n, 4u);
    EXPECT_EQ(report.benchmarks[0].correct, 2u);
    EXPECT_EQ(report.benchmarks[1].correct, 1u);
    EXPECT_DOUBLE_EQ(report.overall(), 0.5);
    EXPECT_EQ(format_percent(2, 4), "50.00");
    EXPECT_EQ(report.records[3].extracted, "I refuse.");  // last-line fallback
    EXPECT_FALSE(report.records[3].correct);
    EXPECT_EQ(report.records[1].extracted, "5.");
    EXPECT_EQ(mock->calls(), 6u);
}

TEST(Evaluate, ThreeOfFourIsSeventyFive) {
    json rules = json::array();
    for (int i = 0; i < 4; ++i)
        rules.push_back({{"contains", "item " + std::to_string(i) + "?"}, {"reply", i == 2 ? "Answer: C" : "Answer: A"}});
    auto mock = std::make_shared<MockTransport>(json{{"rules", rules}});
    ModelClient client(mock, quick());
    std::vector<BenchmarkItem> items;
    for (int i = 0; i < 4; ++i) items.push_back(item("logiqa", std::to_string(i), "item " + std::to_string(i) + "?", "A"));
    const auto report = evaluate(items, Paradigm::Linear, client);
    EXPECT_DOUBLE_EQ(report.benchmarks[0].accuracy(), 0.75);
    const std::string table = render_report_table(report);
    EXPECT_NE(table.find("LogiQA"), std::string::npos);
    EXPECT_NE(table.find("75.00"), std::string::npos);
    EXPECT_NE(table.find("Overall Avg."), std::string::npos);
}

TEST(Evaluate, SelfGraphRecordsGraphSize) {
    const std::string reply = testing::hand_template({{"a", "b"}, {"b", "c"}, {"a", "c"}}, "B");
    json fixture = {{"rules", {{{"contains", "graph item"}, {"reply", reply}}, {{"contains", "prose item"}, {"reply", "Answer: B"}}}}};
    auto mock = std::make_shared<MockTransport>(fixture);
    ModelClient client(mock, quick());
    const auto report = evaluate({item("logiqa", "g", "graph item", "B"), item("logiqa", "p", "prose item", "B")},
                                 Paradigm::SelfGraph, client);
    EXPECT_EQ(report.records[0].node_count, 3u);
    EXPECT_EQ(report.records[0].edge_count, 3u);
    EXPECT_TRUE(report.records[0].correct);
    EXPECT_EQ(report.records[1].node_count, std::nullopt);
    EXPECT_TRUE(report.records[1].correct);
}

TEST(Evaluate, FailedCallsAreIncorrectWithErrorFlag) {
    json fixture = {{"rules", {{{"contains", "ok item"}, {"reply", "Answer: A"}},
                               {{"contains", "down item"}, {"replies", {"x"}}, {"fail_statuses", {503, 503, 503}}}}}};
    auto mock = std::make_shared<MockTransport>(fixture);
    ModelClient client(mock, quick());
    const auto report = evaluate({item("medqa", "1", "ok item", "A"), item("medqa", "2", "down item", "A")},
                                 Paradigm::Direct, client);
    EXPECT_EQ(report.benchmarks[0].n, 2u);
    EXPECT_EQ(report.benchmarks[0].correct, 1u);
    EXPECT_TRUE(report.records[1].error);
    EXPECT_FALSE(report.records[1].correct);
    const auto j = report.records[1].to_json();
    EXPECT_TRUE(j.contains("error_message"));
    EXPECT_THROW(evaluate({}, Paradigm::Direct, client), std::invalid_argument);
}

TEST(Evaluate, AuthErrorAborts) {
    json fixture = {{"rules", {{{"contains", "x"}, {"replies", {"y"}}, {"fail_statuses", {401}}}}}};
    ModelClient client(std::make_shared<MockTransport>(fixture), quick());
    EXPECT_THROW(evaluate({item("aiw", "1", "x", "1")}, Paradigm::Direct, client), AuthError);
}

TEST(Report, FilesAndByteIdenticalReruns) {
    testing::TempDir dir("report");
    json fixture = {{"rules", {{{"contains", "one"}, {"reply", "Answer: 1"}}, {{"contains", "two"}, {"reply", "Answer: 3"}}}}};
    auto run = [&](const std::string& sub) {
        ModelClient client(std::make_shared<MockTransport>(fixture), quick());
        const auto report = evaluate({item("aiw", "1", "one", "1"), item("aiw", "2", "two", "2")}, Paradigm::Direct, client);
        write_report(report, dir / sub);
    };
    run("a");
    run("b");
    for (const char* f : {"report.txt", "report.json", "records.jsonl"})
        EXPECT_EQ(testing::slurp(dir / "a" / f), testing::slurp(dir / "b" / f)) << f;
    const json j = json::parse(testing::slurp(dir / "a" / "report.json"));
    EXPECT_EQ(j["benchmarks"][0]["accuracy_percent"], "50.00");
    EXPECT_EQ(j["overall_average_percent"], "50.00");
    EXPECT_EQ(read_jsonl(dir / "a" / "records.jsonl").size(), 2u);
}

TEST(Paradigms, NamesAndPrompts) {
    for (auto p : {Paradigm::Direct, Paradigm::Linear, Paradigm::SelfGraph}) {
        EXPECT_EQ(parse_paradigm(to_string(p)), p);
        EXPECT_NE(prompt_for(p).fill("QQQ").find("QQQ"), std::string::npos);
    }
    EXPECT_EQ(parse_paradigm("cot"), std::nullopt);
}

}  // namespace
}  // namespace sgr
