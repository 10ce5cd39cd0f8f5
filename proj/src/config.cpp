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

#include "sgr/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "sgr/io.hpp"

namespace sgr {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value, Int lo, Int hi) {
    Int out{};
    const std::string v = trim(value);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(key, "expected an integer, got \"" + value + "\"");
    if (out < lo || out > hi)
        throw ConfigError(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + v);
    return out;
}

double parse_double(const std::string& key, const std::string& value, double lo, double hi) {
    const std::string v = trim(value);
    double out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(key, "expected a number, got \"" + value + "\"");
    if (!(out >= lo && out <= hi))
        throw ConfigError(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + v);
    return out;
}

std::string non_empty(const std::string& key, const std::string& value) {
    std::string v = trim(value);
    if (v.empty()) throw ConfigError(key, "must not be empty");
    return v;
}

std::string env_name(const std::string& key) {
    std::string out = "SGR_";
    for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "endpoint",   "credential-env", "model",      "k",          "temperature", "max-tokens", "concurrency",
        "retry-cap",  "backoff-ms",     "timeout",    "cache-dir",  "merge-mode",  "split-seed", "seed",
        "paradigm",   "weights",        "mock"};
    return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
            throw ConfigError(where, "unknown key \"" + key + "\"");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

RewardWeights parse_weights(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("weights", "expected \"format,answer\", got \"" + text + "\"");
    RewardWeights w;
    w.format = parse_double("weights", text.substr(0, comma), 0.0, std::numeric_limits<double>::max());
    w.answer = parse_double("weights", text.substr(comma + 1), 0.0, std::numeric_limits<double>::max());
    return w;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "endpoint") {
        c.endpoint = non_empty(key, value);
        if (c.endpoint.rfind("http://", 0) != 0 && c.endpoint.rfind("https://", 0) != 0)
            throw ConfigError(key, "must start with http:// or https://");
    } else if (key == "credential-env") {
        c.credential_env = non_empty(key, value);
    } else if (key == "model") {
        c.model = non_empty(key, value);
    } else if (key == "k") {
        c.k = parse_int<int>(key, value, 1, 64);
    } else if (key == "temperature") {
        c.temperature = parse_double(key, value, 0.0, 2.0);
    } else if (key == "max-tokens") {
        c.max_tokens = parse_int<int>(key, value, 1, 131072);
    } else if (key == "concurrency") {
        c.concurrency = parse_int<int>(key, value, 1, 256);
    } else if (key == "retry-cap") {
        c.retry_cap = parse_int<int>(key, value, 1, 20);
    } else if (key == "backoff-ms") {
        c.backoff_ms = parse_int<int>(key, value, 0, 600000);
    } else if (key == "timeout") {
        c.timeout_s = parse_int<int>(key, value, 1, 3600);
    } else if (key == "cache-dir") {
        c.cache_dir = trim(value);
    } else if (key == "merge-mode") {
        auto m = parse_merge_mode(trim(value));
        if (!m) throw ConfigError(key, "must be deterministic, llm or llm-with-fallback, got \"" + value + "\"");
        c.merge_mode = *m;
    } else if (key == "split-seed") {
        c.split_seed = parse_int<std::uint64_t>(key, value, 0, std::numeric_limits<std::uint64_t>::max());
    } else if (key == "seed") {
        c.seed = parse_int<std::int64_t>(key, value, 0, std::numeric_limits<std::int64_t>::max() / 2);
    } else if (key == "paradigm") {
        auto p = parse_paradigm(trim(value));
        if (!p) throw ConfigError(key, "must be direct, linear or self-graph, got \"" + value + "\"");
        c.paradigm = *p;
    } else if (key == "weights") {
        c.weights = parse_weights(value);
    } else if (key == "mock") {
        c.mock = trim(value);
    } else {
        throw ConfigError(key, "unknown setting");
    }
}

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& config_file,
                         const std::map<std::string, std::string>& flags, const EnvLookup& env) {
    RunConfig c;
    if (config_file) {
        std::string text;
        try {
            text = read_file(*config_file);
        } catch (const std::exception& e) {
            throw ConfigError("config", e.what());
        }
        for (const auto& [k, v] : parse_config_text(text, config_file->string())) apply_setting(c, k, v);
    }
    for (const auto& key : config_keys())
        if (auto v = env(env_name(key))) apply_setting(c, key, *v);
    for (const auto& [k, v] : flags) apply_setting(c, k, v);
    return c;
}

}  // namespace sgr
