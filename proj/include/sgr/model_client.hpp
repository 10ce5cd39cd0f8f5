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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgr/prompts.hpp"

namespace sgr {

struct SamplingConfig {
    double temperature = 0.9;
    int k = 5;
    int max_new_tokens = 1024;
    std::string model_name = "gpt-4o";
    std::optional<std::int64_t> seed;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct CompletionRequest {
    std::string system_prompt;
    std::string user_prompt;
    SamplingConfig config;
    /// Index of this draw within a multi-sample batch. Draw i is sent with
    /// seed (config.seed or 0) + i and is cached under its own key.
    std::optional<std::size_t> sample_index;
};

struct CompletionResult {
    std::string text;
    bool cached = false;
    int attempt_count = 1;
    std::chrono::milliseconds latency{0};
};

class ClientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Retries ran out on transient failures (timeouts, 429, 5xx).
class TransportExhaustedError : public ClientError {
public:
    using ClientError::ClientError;
};

class ProtocolError : public ClientError {
public:
    using ClientError::ClientError;
};

class AuthError : public ClientError {
public:
    using ClientError::ClientError;
};

class AllFailedError : public ClientError {
public:
    using ClientError::ClientError;
};

/// Connection-level failure raised by a Transport; always retryable.
class TransportFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// One chat-completion POST. Implementations must be callable concurrently.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const nlohmann::json& body) = 0;
    /// True when the backend needs a credential and none was configured.
    virtual bool missing_credential() const { return false; }
};

/// OpenAI-compatible `POST {endpoint}` with a bearer credential.
class HttpTransport final : public Transport {
public:
    HttpTransport(std::string endpoint_url, std::string credential,
                  std::chrono::seconds timeout = std::chrono::seconds(120));

    HttpResponse post(const nlohmann::json& body) override;
    bool missing_credential() const override { return credential_.empty(); }

private:
    std::string origin_;  // scheme://host[:port]
    std::string path_;
    std::string credential_;
    std::chrono::seconds timeout_;
};

/// Scripted backend. Fixture JSON:
///   {"seed_base": 0, "default_reply": "...", "delay_ms": 0,
///    "rules": [{"contains": "substring of user prompt", "replies": ["..", ".."],
///               "fail_statuses": [429, 429], "hard_fail_samples": [3]},
///              {"hash": "<sha256 of user prompt>", "reply": "..."}]}
/// The first matching rule answers. Requests carrying a seed get
/// replies[(seed - seed_base) % n]; others cycle through replies per rule.
/// fail_statuses are returned, in order, to the first attempts of each
/// distinct request body. hard_fail_samples always get HTTP 500.
class MockTransport final : public Transport {
public:
    explicit MockTransport(const nlohmann::json& fixture);
    static std::shared_ptr<MockTransport> from_file(const std::filesystem::path& path);

    HttpResponse post(const nlohmann::json& body) override;

    std::size_t calls() const noexcept { return calls_.load(); }
    std::size_t max_in_flight() const noexcept { return max_in_flight_.load(); }
    void set_delay(std::chrono::milliseconds delay) { delay_ = delay; }

private:
    struct Rule {
        std::string contains;
        std::string hash;
        std::vector<std::string> replies;
        std::vector<int> fail_statuses;
        std::vector<std::int64_t> hard_fail_samples;
        std::size_t cursor = 0;
    };

    std::vector<Rule> rules_;
    std::optional<std::string> default_reply_;
    std::int64_t seed_base_ = 0;
    std::chrono::milliseconds delay_{0};

    std::mutex mu_;
    std::map<std::string, std::size_t> attempts_by_body_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> in_flight_{0};
    std::atomic<std::size_t> max_in_flight_{0};
};

/// Content-addressed on-disk store: <dir>/<key[0:2]>/<key>.json.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key) const;
    /// Atomic: writes a temp file then renames it into place.
    void put(const std::string& key, const std::string& text) const;

private:
    std::filesystem::path path_for(const std::string& key) const;
    std::filesystem::path dir_;
};

/// Wire body: {"model", "messages": [system, user], "temperature", "max_tokens", "seed"?}.
nlohmann::json request_body(const CompletionRequest& request);

/// Cache key over model, prompts, temperature, seed, max tokens and sample index.
std::string request_cache_key(const CompletionRequest& request);

/// Text of choices[0].message.content; throws ProtocolError otherwise.
std::string response_text(std::string_view body);

struct RetryPolicy {
    int max_attempts = 4;
    std::chrono::milliseconds base_delay{1000};
    double jitter = 0.2;
};

struct ClientOptions {
    RetryPolicy retry;
    std::size_t max_in_flight = 8;
    std::optional<std::filesystem::path> cache_dir;
};

struct ClientStats {
    std::size_t requests_sent = 0;  // transport posts, including retries
    std::size_t cache_hits = 0;
    std::size_t max_in_flight = 0;
};

struct Trajectory {
    std::size_t index = 0;
    std::string text;
    bool cached = false;
};

struct SampleError {
    std::size_t index = 0;
    std::string message;
};

struct TrajectoryBatch {
    std::vector<Trajectory> texts;  // ascending index
    std::vector<SampleError> errors;
};

class ModelClient {
public:
    ModelClient(std::shared_ptr<Transport> transport, ClientOptions options = {});

    /// Throws AuthError, ProtocolError or TransportExhaustedError.
    CompletionResult complete(const CompletionRequest& request);

    /// k independent draws of `prompt` filled with `question`, issued
    /// concurrently. Results are ordered by draw index. Throws AllFailedError
    /// when no draw succeeds.
    TrajectoryBatch sample_trajectories(std::string_view question, const SamplingConfig& config,
                                        const PromptTemplate& prompt = prompts::candidate_graph());

    ClientStats stats() const;
    const ClientOptions& options() const noexcept { return options_; }

private:
    class InFlightGate {
    public:
        explicit InFlightGate(std::size_t limit) : limit_(limit == 0 ? 1 : limit) {}
        void acquire();
        void release();
        std::size_t peak() const;

    private:
        mutable std::mutex mu_;
        std::condition_variable cv_;
        std::size_t limit_;
        std::size_t active_ = 0;
        std::size_t peak_ = 0;
    };

    std::chrono::milliseconds backoff_delay(int attempt);

    std::shared_ptr<Transport> transport_;
    ClientOptions options_;
    std::optional<ResponseCache> cache_;
    InFlightGate gate_;
    std::atomic<std::size_t> requests_sent_{0};
    std::atomic<std::size_t> cache_hits_{0};
    std::mutex rng_mu_;
    std::uint64_t rng_state_;
};

}  // namespace sgr
