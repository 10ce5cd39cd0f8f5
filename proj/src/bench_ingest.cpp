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

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include "sgr/bench.hpp"
#include "sgr/io.hpp"

namespace sgr {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Context {
    const fs::path& file;
    std::size_t line;

    [[noreturn]] void fail(const std::string& what) const { throw SchemaError(file, line, what); }

    const json& require(const json& obj, std::initializer_list<const char*> names) const {
        if (!obj.is_object()) fail("record is not a JSON object");
        for (const char* n : names)
            if (auto it = obj.find(n); it != obj.end() && !it->is_null()) return *it;
        std::string list;
        for (const char* n : names) list += (list.empty() ? "\"" : " or \"") + std::string(n) + "\"";
        fail("missing field " + list);
    }

    std::string text(const json& obj, std::initializer_list<const char*> names) const {
        const json& v = require(obj, names);
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number()) return v.dump();
        fail("field " + std::string(*names.begin()) + " must be a string");
    }

    std::string optional_text(const json& obj, std::initializer_list<const char*> names) const {
        if (!obj.is_object()) return {};
        for (const char* n : names)
            if (auto it = obj.find(n); it != obj.end() && !it->is_null()) {
                if (it->is_string()) return it->get<std::string>();
                if (it->is_number()) return it->dump();
            }
        return {};
    }

    std::vector<std::string> options(const json& v) const {
        std::vector<std::string> out;
        if (v.is_array()) {
            for (const auto& o : v) {
                if (!o.is_string()) fail("options must be strings");
                out.push_back(o.get<std::string>());
            }
        } else if (v.is_object()) {
            // {"A": "...", "B": "..."}; json objects iterate in key order.
            for (const auto& [k, o] : v.items()) {
                if (!o.is_string()) fail("options must be strings");
                out.push_back(o.get<std::string>());
            }
        } else {
            fail("options must be an array or object");
        }
        if (out.empty()) fail("options are empty");
        return out;
    }

    std::string letter_label(const json& answer, std::size_t option_count) const {
        std::size_t index;
        if (answer.is_number_integer()) {
            index = answer.get<std::size_t>();
        } else if (answer.is_string() && answer.get<std::string>().size() == 1 &&
                   std::isalpha(static_cast<unsigned char>(answer.get<std::string>()[0]))) {
            index = static_cast<std::size_t>(std::toupper(static_cast<unsigned char>(answer.get<std::string>()[0])) - 'A');
        } else {
            fail("answer must be an option index or letter");
        }
        if (index >= option_count) fail("answer refers to a missing option");
        return std::string(1, static_cast<char>('A' + index));
    }
};

std::string join_question(const std::string& context, const std::string& question,
                          const std::vector<std::string>& options) {
    std::string q = context.empty() ? question : context + "\n\n" + question;
    if (!options.empty()) q += "\n" + render_options(options);
    return q;
}

// "a ) 38 , b ) 27.675 , c ) 30" -> {"38", "27.675", "30"}
std::vector<std::string> split_mathqa_options(const std::string& s) {
    static const std::regex marker(R"((?:^|,)\s*([a-e])\s*\)\s*)");
    std::vector<std::string> out;
    std::vector<std::pair<std::size_t, std::size_t>> marks;  // (match begin, text begin)
    for (auto it = std::sregex_iterator(s.begin(), s.end(), marker); it != std::sregex_iterator(); ++it)
        marks.emplace_back(static_cast<std::size_t>(it->position()),
                           static_cast<std::size_t>(it->position() + it->length()));
    for (std::size_t i = 0; i < marks.size(); ++i) {
        const std::size_t end = i + 1 < marks.size() ? marks[i + 1].first : s.size();
        std::string opt = s.substr(marks[i].second, end - marks[i].second);
        while (!opt.empty() && std::isspace(static_cast<unsigned char>(opt.back()))) opt.pop_back();
        out.push_back(opt);
    }
    return out;
}

using Adapter = void (*)(const Context&, const json&, std::vector<BenchmarkItem>&, const std::string&);

void adapt_logiqa(const Context& ctx, const json& r, std::vector<BenchmarkItem>& out, const std::string& bench) {
    auto options = ctx.options(ctx.require(r, {"options"}));
    BenchmarkItem item;
    item.question = join_question(ctx.optional_text(r, {"text", "context"}), ctx.text(r, {"question"}), options);
    item.label = ctx.letter_label(ctx.require(r, {"answer", "label"}), options.size());
    item.benchmark = bench;
    item.item_id = ctx.optional_text(r, {"id"});
    out.push_back(std::move(item));
}

void adapt_aiw(const Context& ctx, const json& r, std::vector<BenchmarkItem>& out, const std::string& bench) {
    BenchmarkItem item;
    item.question = ctx.text(r, {"prompt", "question"});
    item.label = ctx.text(r, {"right_answer", "answer", "label"});
    item.benchmark = bench;
    item.item_id = ctx.optional_text(r, {"id"});
    out.push_back(std::move(item));
}

void adapt_ar_lsat(const Context& ctx, const json& r, std::vector<BenchmarkItem>& out, const std::string& bench) {
    auto one = [&](const std::string& context, const json& q, const std::string& id) {
        auto options = ctx.options(ctx.require(q, {"options"}));
        BenchmarkItem item;
        item.question = join_question(context, ctx.text(q, {"question"}), options);
        item.label = ctx.letter_label(ctx.require(q, {"answer", "label"}), options.size());
        item.benchmark = bench;
        item.item_id = id;
        out.push_back(std::move(item));
    };
    if (r.is_object() && r.contains("questions")) {
        const std::string passage = ctx.text(r, {"passage", "context"});
        const std::string pid = ctx.optional_text(r, {"id"});
        std::size_t n = 0;
        for (const auto& q : ctx.require(r, {"questions"})) {
            ++n;
            std::string qid = ctx.optional_text(q, {"id"});
            if (qid.empty() && !pid.empty()) qid = pid + "-" + std::to_string(n);
            one(passage, q, qid);
        }
    } else {
        one(ctx.optional_text(r, {"context", "passage"}), r, ctx.optional_text(r, {"id"}));
    }
}

void adapt_medqa(const Context& ctx, const json& r, std::vector<BenchmarkItem>& out, const std::string& bench) {
    const json& raw_options = ctx.require(r, {"options"});
    auto options = ctx.options(raw_options);
    BenchmarkItem item;
    item.question = join_question("", ctx.text(r, {"question"}), options);
    if (auto idx = ctx.optional_text(r, {"answer_idx"}); !idx.empty()) {
        item.label = ctx.letter_label(json(idx), options.size());
    } else {
        const std::string answer = ctx.text(r, {"answer", "label"});
        auto it = std::find(options.begin(), options.end(), answer);
        if (it == options.end()) ctx.fail("answer text matches no option");
        item.label = std::string(1, static_cast<char>('A' + (it - options.begin())));
    }
    item.benchmark = bench;
    item.item_id = ctx.optional_text(r, {"id"});
    out.push_back(std::move(item));
}

void adapt_mathqa(const Context& ctx, const json& r, std::vector<BenchmarkItem>& out, const std::string& bench) {
    const json& raw = ctx.require(r, {"options"});
    std::vector<std::string> options = raw.is_string() ? split_mathqa_options(raw.get<std::string>()) : ctx.options(raw);
    if (options.empty()) ctx.fail("cannot split options");
    BenchmarkItem item;
    item.question = join_question("", ctx.text(r, {"Problem", "problem", "question"}), options);
    item.label = ctx.letter_label(ctx.require(r, {"correct", "answer", "label"}), options.size());
    item.benchmark = bench;
    item.item_id = ctx.optional_text(r, {"id"});
    out.push_back(std::move(item));
}

Adapter adapter_for(std::string_view name) {
    if (name == "logiqa") return adapt_logiqa;
    if (name == "aiw" || name == "aiw-plus") return adapt_aiw;
    if (name == "ar-lsat") return adapt_ar_lsat;
    if (name == "medqa") return adapt_medqa;
    if (name == "mathqa") return adapt_mathqa;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names{"logiqa", "aiw", "aiw-plus", "ar-lsat", "medqa", "mathqa"};
    return names;
}

std::string display_name(std::string_view b) {
    if (b == "logiqa") return "LogiQA";
    if (b == "aiw") return "AIW";
    if (b == "aiw-plus") return "AIW+";
    if (b == "ar-lsat") return "AR-LSAT";
    if (b == "medqa") return "MedQA";
    if (b == "mathqa") return "MathQA";
    return std::string(b);
}

std::string render_options(const std::vector<std::string>& options) {
    std::string out;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (i) out += '\n';
        out += static_cast<char>('A' + i);
        out += ". ";
        out += options[i];
    }
    return out;
}

std::vector<BenchmarkItem> ingest(std::string_view benchmark, const std::vector<fs::path>& files) {
    const Adapter adapt = adapter_for(benchmark);
    if (!adapt) throw std::invalid_argument("unknown benchmark: " + std::string(benchmark));
    const std::string bench(benchmark);

    std::vector<BenchmarkItem> items;
    std::set<std::string> ids;
    for (const auto& file : files) {
        for (const auto& rec : read_json_records(file)) {
            const Context ctx{file, rec.line};
            const std::size_t before = items.size();
            adapt(ctx, rec.value, items, bench);
            for (std::size_t i = before; i < items.size(); ++i) {
                auto& item = items[i];
                if (item.item_id.empty()) item.item_id = bench + "-" + std::to_string(i + 1);
                if (item.question.empty() || item.label.empty()) ctx.fail("question and label must be non-empty");
                if (!ids.insert(item.item_id).second) ctx.fail("duplicate item id " + item.item_id);
            }
        }
    }
    return items;
}

json BenchmarkItem::to_json() const {
    return {{"benchmark", benchmark}, {"item_id", item_id}, {"question", question}, {"label", label}};
}

BenchmarkItem BenchmarkItem::from_json(const json& j) {
    return {j.at("question").get<std::string>(), j.at("label").get<std::string>(),
            j.at("benchmark").get<std::string>(), j.at("item_id").get<std::string>()};
}

std::vector<BenchmarkItem> read_items(const fs::path& path) {
    std::vector<BenchmarkItem> out;
    for (const auto& rec : read_jsonl(path)) {
        try {
            out.push_back(BenchmarkItem::from_json(rec.value));
        } catch (const json::exception& e) {
            throw SchemaError(path, rec.line, e.what());
        }
    }
    return out;
}

}  // namespace sgr
