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

#include "sgr/cli.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "sgr/bench.hpp"
#include "sgr/dataset.hpp"
#include "sgr/graph.hpp"
#include "sgr/graph_merge.hpp"
#include "sgr/io.hpp"
#include "sgr/model_client.hpp"
#include "sgr/reward.hpp"
#include "sgr/template_codec.hpp"

namespace sgr::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* const kFooter = R"(Usage by subcommand:
  validate FILE                                   strict-parse and validate every record
  viz FILE --out DIR                              write one DOT file per record
  sample --in QA.jsonl --out CANDIDATES.jsonl     draw k candidate graphs per question
  merge --in CANDIDATES.jsonl --out MERGED.jsonl  merge each candidate set
  build --in QA.jsonl --out DIR                   train.jsonl, valid.jsonl, report.json
  ingest --bench NAME --out ITEMS.jsonl FILES...  normalize upstream benchmark files
  eval --in ITEMS.jsonl... --out DIR [--bench NAME]... [--paradigm P]
                                                  report.txt, report.json, records.jsonl
  score --completions FILE [--labels FILE] --out SCORES.jsonl [--weights F,A]

Every option can also be set as SGR_<NAME> in the environment (upper case,
'-' as '_') or as `name = value` in the --config file. Precedence: flag,
environment, config file, default. The API credential is read only from the
environment variable named by --credential-env.)";

struct OptionSpec {
    const char* key;
    const char* help;
};

const OptionSpec kOptions[] = {
    {"endpoint", "chat-completions URL"},
    {"credential-env", "environment variable holding the API credential (default SGR_API_KEY)"},
    {"model", "teacher/evaluated model name (default gpt-4o)"},
    {"k", "candidates sampled per question, 1..64 (default 5)"},
    {"temperature", "sampling temperature, 0..2 (default 0.9)"},
    {"max-tokens", "completion token cap, 1..131072 (default 1024)"},
    {"concurrency", "in-flight request bound, 1..256 (default 8)"},
    {"retry-cap", "attempts per request, 1..20 (default 4)"},
    {"backoff-ms", "base retry delay in ms, 0..600000 (default 1000)"},
    {"timeout", "request timeout in seconds, 1..3600 (default 120)"},
    {"cache-dir", "response cache directory (default: none)"},
    {"merge-mode", "deterministic | llm | llm-with-fallback (default llm-with-fallback)"},
    {"split-seed", "train/valid split seed (default 42)"},
    {"seed", "base sampling seed (default: unset)"},
    {"paradigm", "direct | linear | self-graph (default self-graph)"},
    {"weights", "reward weights as format,answer (default 1,1)"},
    {"mock", "mock backend fixture file; replaces the HTTP backend"},
};

struct Io {
    std::ostream& out;
    std::ostream& err;
};

SamplingConfig sampling_of(const RunConfig& c) {
    SamplingConfig s;
    s.temperature = c.temperature;
    s.k = c.k;
    s.max_new_tokens = c.max_tokens;
    s.model_name = c.model;
    s.seed = c.seed;
    return s;
}

std::unique_ptr<ModelClient> make_client(const RunConfig& c, const EnvLookup& env) {
    std::shared_ptr<Transport> transport;
    if (!c.mock.empty()) {
        try {
            transport = MockTransport::from_file(c.mock);
        } catch (const std::exception& e) {
            throw ConfigError("mock", e.what());
        }
    } else {
        const std::string credential = env(c.credential_env).value_or("");
        if (credential.empty())
            throw ConfigError("credential-env", "environment variable " + c.credential_env + " is not set");
        transport = std::make_shared<HttpTransport>(c.endpoint, credential, std::chrono::seconds(c.timeout_s));
    }
    ClientOptions options;
    options.retry.max_attempts = c.retry_cap;
    options.retry.base_delay = std::chrono::milliseconds(c.backoff_ms);
    options.max_in_flight = static_cast<std::size_t>(c.concurrency);
    if (!c.cache_dir.empty()) options.cache_dir = c.cache_dir;
    return std::make_unique<ModelClient>(std::move(transport), options);
}

struct TemplateRecord {
    std::string where;
    std::string text;
    std::string stem;
};

const json* find_field(const json& obj, std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (auto it = obj.find(n); it != obj.end() && it->is_string()) return &*it;
    return nullptr;
}

// A .jsonl file holds one template per line (a string, or an object with
// graph_reasoning/completion/text); anything else is one raw template.
std::vector<TemplateRecord> read_templates(const fs::path& path) {
    std::vector<TemplateRecord> out;
    const std::string stem = path.stem().string();
    if (path.extension() != ".jsonl") {
        out.push_back({path.string(), read_file(path), stem});
        return out;
    }
    for (const auto& rec : read_jsonl(path)) {
        const std::string where = path.string() + ":" + std::to_string(rec.line);
        const std::string name = stem + "-" + std::to_string(rec.line);
        if (rec.value.is_string()) {
            out.push_back({where, rec.value.get<std::string>(), name});
        } else if (const json* f = rec.value.is_object()
                                       ? find_field(rec.value, {"graph_reasoning", "completion", "text"})
                                       : nullptr) {
            out.push_back({where, f->get<std::string>(), name});
        } else {
            throw SchemaError(path, rec.line, "expected a string or an object with graph_reasoning, completion or text");
        }
    }
    return out;
}

int cmd_validate(const fs::path& file, Io io) {
    std::size_t failed = 0;
    const auto records = read_templates(file);
    for (const auto& r : records) {
        const ParseResult parsed = parse(r.text, Strictness::Strict);
        if (!parsed.ok()) {
            ++failed;
            io.out << r.where << ": FAIL " << parsed.error().message() << "\n";
            continue;
        }
        const auto& g = parsed.value().graph;
        const GraphDiagnostics d = validate(g);
        if (!d.ok()) ++failed;
        io.out << r.where << ": " << (d.ok() ? "ok" : "FAIL") << ", " << g.node_count() << " nodes, "
               << g.edge_count() << " edges, " << d.errors.size() << " errors, " << d.warnings.size()
               << " warnings, " << sinks(g).size() << " sink" << (sinks(g).size() == 1 ? "" : "s") << "\n";
        for (const auto& e : d.errors) io.out << "  error: " << to_string(e.kind) << ": " << e.detail << "\n";
        for (const auto& w : d.warnings) io.out << "  warning: " << to_string(w.kind) << ": " << w.detail << "\n";
    }
    io.out << records.size() << " records checked, " << failed << " failed\n";
    return failed == 0 ? kExitOk : kExitItemFailure;
}

int cmd_viz(const fs::path& file, const fs::path& out_dir, Io io) {
    fs::create_directories(out_dir);
    std::size_t failed = 0, written = 0;
    for (const auto& r : read_templates(file)) {
        ParseResult parsed = parse(r.text, Strictness::Strict);
        if (!parsed.ok()) parsed = parse(r.text, Strictness::Lenient);
        if (!parsed.ok()) {
            ++failed;
            io.err << r.where << ": " << parsed.error().message() << "\n";
            continue;
        }
        write_file_atomic(out_dir / (r.stem + ".dot"), export_dot(parsed.value().graph, parsed.value().answer));
        ++written;
    }
    io.out << written << " DOT files written to " << out_dir.string() << "\n";
    return failed == 0 ? kExitOk : kExitItemFailure;
}

int cmd_sample(const fs::path& in, const fs::path& out, const RunConfig& c, const EnvLookup& env, Io io) {
    const auto sources = read_sources(in);
    auto client = make_client(c, env);
    const SamplingConfig sampling = sampling_of(c);
    sampling.validate();
    std::vector<json> rows;
    std::size_t drawn = 0;
    for (const auto& s : sources) {
        json row = {{"source_id", s.source_id}, {"question", s.question}, {"label", s.label}};
        json candidates = json::array(), errors = json::array();
        try {
            const TrajectoryBatch batch = client->sample_trajectories(s.question, sampling);
            for (const auto& t : batch.texts) candidates.push_back({{"index", t.index}, {"text", t.text}});
            for (const auto& e : batch.errors) errors.push_back({{"index", e.index}, {"message", e.message}});
            drawn += batch.texts.size();
        } catch (const AllFailedError& e) {
            errors.push_back({{"index", nullptr}, {"message", e.what()}});
        }
        row["candidates"] = std::move(candidates);
        row["errors"] = std::move(errors);
        rows.push_back(std::move(row));
    }
    write_file_atomic(out, to_jsonl(rows));
    io.out << sources.size() << " questions, " << drawn << " candidates written to " << out.string() << "\n";
    return kExitOk;
}

int cmd_merge(const fs::path& in, const fs::path& out, const RunConfig& c, const EnvLookup& env, Io io) {
    const auto records = read_jsonl(in);
    std::unique_ptr<ModelClient> client;
    if (c.merge_mode != MergeMode::Deterministic) client = make_client(c, env);
    std::vector<json> rows;
    std::size_t merged_count = 0;
    for (const auto& rec : records) {
        const json& v = rec.value;
        if (!v.is_object() || !v.contains("candidates") || !v["candidates"].is_array())
            throw SchemaError(in, rec.line, "expected an object with a candidates array");
        CandidateSet set;
        set.question = v.value("question", "");
        for (const auto& cand : v["candidates"]) {
            if (!cand.is_object() || !cand.contains("text") || !cand["text"].is_string())
                throw SchemaError(in, rec.line, "candidate needs a text field");
            const std::string text = cand["text"].get<std::string>();
            ParseResult parsed = parse(text, Strictness::Strict);
            if (!parsed.ok()) parsed = parse(text, Strictness::Lenient);
            if (!parsed.ok()) continue;
            set.candidates.push_back({std::move(parsed).value(), cand.value("index", set.candidates.size())});
        }
        json row = {{"source_id", v.value("source_id", "line-" + std::to_string(rec.line))},
                    {"question", set.question}};
        if (v.contains("label")) row["label"] = v["label"];
        try {
            if (set.candidates.empty()) throw MergeError("no candidate parsed");
            MergedResult m;
            if (c.merge_mode == MergeMode::Deterministic) {
                m = merge_deterministic(set);
            } else {
                LlmMergeOptions opts;
                opts.sampling = sampling_of(c);
                opts.sampling.temperature = 0.0;
                opts.allow_fallback = c.merge_mode == MergeMode::LlmWithFallback;
                m = merge_llm(set, *client, opts);
            }
            row["graph_reasoning"] = render(m.graph, m.answer);
            row["answer"] = m.answer;
            row["conclusion"] = m.conclusion.key();
            row["contributing_indices"] = m.contributing_indices;
            row["merge_mode"] = to_string(m.mode);
            row["merge_fallback"] = m.fallback;
            ++merged_count;
        } catch (const MergeError& e) {
            row["error"] = e.what();
        } catch (const InvalidGraphError& e) {
            row["error"] = e.what();
        }
        rows.push_back(std::move(row));
    }
    write_file_atomic(out, to_jsonl(rows));
    io.out << merged_count << " of " << records.size() << " candidate sets merged into " << out.string() << "\n";
    return kExitOk;
}

int cmd_build(const fs::path& in, const fs::path& out_dir, const RunConfig& c, const EnvLookup& env, Io io) {
    const auto sources = read_sources(in);
    auto client = make_client(c, env);
    BuildConfig bc;
    bc.sampling = sampling_of(c);
    bc.merge_mode = c.merge_mode;
    bc.split_seed = c.split_seed;
    bc.concurrency = static_cast<std::size_t>(c.concurrency);
    const BuildResult result = build_dataset(sources, *client, bc);
    write_build(result, out_dir);
    const BuildReport& r = result.report;
    io.out << "total " << r.total_in << ", retained " << r.retained << ", discarded " << r.discarded_total()
           << ", train " << r.train_size << ", valid " << r.valid_size << "\n";
    for (const auto& [reason, n] : r.discarded_by_reason) io.out << "  " << to_string(reason) << ": " << n << "\n";
    return kExitOk;
}

int cmd_ingest(const std::string& bench, const std::vector<fs::path>& files, const fs::path& out, Io io) {
    const auto items = ingest(bench, files);
    std::vector<json> rows;
    rows.reserve(items.size());
    for (const auto& item : items) rows.push_back(item.to_json());
    write_file_atomic(out, to_jsonl(rows));
    io.out << items.size() << " " << display_name(bench) << " items written to " << out.string() << "\n";
    return kExitOk;
}

int cmd_eval(const std::vector<fs::path>& inputs, const std::vector<std::string>& benches, const fs::path& out_dir,
             const RunConfig& c, const EnvLookup& env, Io io) {
    std::vector<BenchmarkItem> items;
    for (const auto& in : inputs)
        for (auto& item : read_items(in))
            if (benches.empty() || std::find(benches.begin(), benches.end(), item.benchmark) != benches.end())
                items.push_back(std::move(item));
    if (items.empty()) throw ConfigError("bench", "no items selected");
    auto client = make_client(c, env);
    EvalConfig ec;
    ec.sampling = sampling_of(c);
    ec.sampling.temperature = 0.0;
    ec.sampling.k = 1;
    ec.concurrency = static_cast<std::size_t>(c.concurrency);
    const EvalReport report = evaluate(items, c.paradigm, *client, ec);
    write_report(report, out_dir);
    io.out << render_report_table(report);
    return kExitOk;
}

std::string text_of(const json& v, std::initializer_list<const char*> names, const fs::path& file, std::size_t line) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_object())
        if (const json* f = find_field(v, names)) return f->get<std::string>();
    throw SchemaError(file, line, "expected a string or an object with field \"" + std::string(*names.begin()) + "\"");
}

int cmd_score(const fs::path& completions_file, const std::optional<fs::path>& labels_file, const fs::path& out,
              const RunConfig& c, Io io) {
    std::vector<std::string> completions, labels;
    for (const auto& rec : read_jsonl(completions_file)) {
        completions.push_back(text_of(rec.value, {"completion", "text"}, completions_file, rec.line));
        if (!labels_file) labels.push_back(text_of(rec.value, {"label"}, completions_file, rec.line));
    }
    if (labels_file)
        for (const auto& rec : read_jsonl(*labels_file)) labels.push_back(text_of(rec.value, {"label"}, *labels_file, rec.line));
    if (labels.size() != completions.size())
        throw ConfigError("labels", std::to_string(completions.size()) + " completions but " +
                                        std::to_string(labels.size()) + " labels");
    const auto scores = score_batch(completions, labels, c.weights);
    std::vector<json> rows;
    double format_sum = 0, answer_sum = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        rows.push_back({{"index", i},
                        {"format_reward", scores[i].format_reward},
                        {"answer_reward", scores[i].answer_reward},
                        {"combined", scores[i].combined}});
        format_sum += scores[i].format_reward;
        answer_sum += scores[i].answer_reward;
    }
    write_file_atomic(out, to_jsonl(rows));
    io.out << scores.size() << " completions scored: " << format_sum << " format, " << answer_sum
           << " answer rewards\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app{"Structured graph reasoning toolkit", "sgr"};
    app.footer(kFooter);
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
    std::map<std::string, std::string> flag_values;
    for (const auto& o : kOptions) app.add_option(std::string("--") + o.key, flag_values[o.key], o.help);

    std::string file, out_path, in_path, bench, completions, labels;
    std::vector<std::string> inputs, benches;

    auto* validate_cmd = app.add_subcommand("validate", "strict-parse and validate templates");
    validate_cmd->add_option("file", file, "template file or .jsonl of templates")->required()->check(CLI::ExistingFile);

    auto* viz_cmd = app.add_subcommand("viz", "export templates as Graphviz DOT");
    viz_cmd->add_option("file", file, "template file or .jsonl of templates")->required()->check(CLI::ExistingFile);
    viz_cmd->add_option("--out", out_path, "output directory")->required();

    auto* sample_cmd = app.add_subcommand("sample", "sample candidate graphs");
    sample_cmd->add_option("--in", in_path, "question/label JSONL")->required()->check(CLI::ExistingFile);
    sample_cmd->add_option("--out", out_path, "candidates JSONL")->required();

    auto* merge_cmd = app.add_subcommand("merge", "merge sampled candidate sets");
    merge_cmd->add_option("--in", in_path, "candidates JSONL from sample")->required()->check(CLI::ExistingFile);
    merge_cmd->add_option("--out", out_path, "merged JSONL")->required();

    auto* build_cmd = app.add_subcommand("build", "build the training dataset");
    build_cmd->add_option("--in", in_path, "question/label JSONL")->required()->check(CLI::ExistingFile);
    build_cmd->add_option("--out", out_path, "output directory")->required();

    auto* ingest_cmd = app.add_subcommand("ingest", "normalize benchmark files");
    ingest_cmd->add_option("--bench", bench, "logiqa | aiw | aiw-plus | ar-lsat | medqa | mathqa")->required();
    ingest_cmd->add_option("--out", out_path, "items JSONL")->required();
    ingest_cmd->add_option("files", inputs, "upstream benchmark files")->required()->check(CLI::ExistingFile);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on ingested items");
    eval_cmd->add_option("--in", inputs, "items JSONL from ingest")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--bench", benches, "restrict to these benchmarks");
    eval_cmd->add_option("--out", out_path, "output directory")->required();

    auto* score_cmd = app.add_subcommand("score", "GRPO format/answer rewards");
    score_cmd->add_option("--completions", completions, "completions JSONL")->required()->check(CLI::ExistingFile);
    score_cmd->add_option("--labels", labels, "labels JSONL (default: label field of each completion)")->check(CLI::ExistingFile);
    score_cmd->add_option("--out", out_path, "scores JSONL")->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    const Io io{out, err};
    try {
        std::map<std::string, std::string> flags;
        for (const auto& o : kOptions)
            if (app.get_option(std::string("--") + o.key)->count() > 0) flags[o.key] = flag_values[o.key];
        const RunConfig config =
            resolve_config(config_file.empty() ? std::nullopt : std::optional<fs::path>(config_file), flags, env);

        if (validate_cmd->parsed()) return cmd_validate(file, io);
        if (viz_cmd->parsed()) return cmd_viz(file, out_path, io);
        if (sample_cmd->parsed()) return cmd_sample(in_path, out_path, config, env, io);
        if (merge_cmd->parsed()) return cmd_merge(in_path, out_path, config, env, io);
        if (build_cmd->parsed()) return cmd_build(in_path, out_path, config, env, io);
        if (ingest_cmd->parsed()) {
            std::vector<fs::path> files(inputs.begin(), inputs.end());
            return cmd_ingest(bench, files, out_path, io);
        }
        if (eval_cmd->parsed()) {
            std::vector<fs::path> files(inputs.begin(), inputs.end());
            return cmd_eval(files, benches, out_path, config, env, io);
        }
        if (score_cmd->parsed())
            return cmd_score(completions, labels.empty() ? std::nullopt : std::optional<fs::path>(labels), out_path,
                             config, io);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const SchemaError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const AuthError& e) {
        err << "authentication error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitItemFailure;
    }
    return kExitConfigError;
}

}  // namespace sgr::cli
