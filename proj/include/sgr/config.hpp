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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgr/bench.hpp"
#include "sgr/graph_merge.hpp"
#include "sgr/reward.hpp"

namespace sgr {

/// Invalid configuration value; names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct RunConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string credential_env = "SGR_API_KEY";
    std::string model = "gpt-4o";
    int k = 5;                // 1..64
    double temperature = 0.9; // 0..2
    int max_tokens = 1024;    // 1..131072
    int concurrency = 8;      // 1..256
    int retry_cap = 4;        // 1..20 attempts
    int backoff_ms = 1000;    // 0..600000
    int timeout_s = 120;      // 1..3600
    std::string cache_dir;    // empty: no cache
    MergeMode merge_mode = MergeMode::LlmWithFallback;
    std::uint64_t split_seed = 42;
    std::optional<std::int64_t> seed;
    Paradigm paradigm = Paradigm::SelfGraph;
    RewardWeights weights;
    std::string mock;  // fixture path; selects the mock backend
};

/// Key names shared by the config file, SGR_* environment variables
/// (upper-cased, '-' as '_') and long flags.
const std::vector<std::string>& config_keys();

/// `key = value` lines; '#' starts a comment; blank lines ignored. Throws
/// ConfigError("<file>:<line>") on malformed lines or unknown keys.
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin = "config");

/// Sets one field from its textual value; throws ConfigError naming the key
/// when the value is malformed or out of range.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// The process environment.
EnvLookup process_env();

/// Defaults, then config file, then environment, then flags.
RunConfig resolve_config(const std::optional<std::filesystem::path>& config_file,
                         const std::map<std::string, std::string>& flags, const EnvLookup& env = process_env());

/// "1,1" or "0.5, 2" -> weights; throws ConfigError("weights").
RewardWeights parse_weights(const std::string& text);

}  // namespace sgr
