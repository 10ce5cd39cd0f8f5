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

#include "sgr/model_client.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "sgr/hash.hpp"

namespace sgr {

namespace fs = std::filesystem;
using json = nlohmann::json;

void SamplingConfig::validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0))
        throw std::invalid_argument("temperature must be in [0, 2]");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (max_new_tokens < 1) throw std::invalid_argument("max_new_tokens must be >= 1");
    if (model_name.empty()) throw std::invalid_argument("model_name must be set");
}

namespace {

std::optional<std::int64_t> effective_seed(const CompletionRequest& r) {
    if (r.sample_index) return r.config.seed.value_or(0) + static_cast<std::int64_t>(*r.sample_index);
    return r.config.seed;
}

}  // namespace

json request_body(const CompletionRequest& r) {
    json body = {
        {"model", r.config.model_name},
        {"messages",
         json::array({{{"role", "system"}, {"content", r.system_prompt}},
                      {{"role", "user"}, {"content", r.user_prompt}}})},
        {"temperature", r.config.temperature},
        {"max_tokens", r.config.max_new_tokens},
    };
    if (auto seed = effective_seed(r)) body["seed"] = *seed;
    return body;
}

std::string request_cache_key(const CompletionRequest& r) {
    json key = {
        {"model", r.config.model_name},
        {"system", r.system_prompt},
        {"user", r.user_prompt},
        {"temperature", r.config.temperature},
        {"max_new_tokens", r.config.max_new_tokens},
        {"seed", r.config.seed ? json(*r.config.seed) : json(nullptr)},
        {"sample_index", r.sample_index ? json(*r.sample_index) : json(nullptr)},
    };
    return sha256_hex(key.dump());
}

std::string response_text(std::string_view body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw ProtocolError("response is not JSON");
    try {
        const auto& content = doc.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw ProtocolError("message content is not a string");
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("response lacks choices[0].message.content: ") + e.what());
    }
}

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path ResponseCache::path_for(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("text") || !doc["text"].is_string()) return std::nullopt;
    return doc["text"].get<std::string>();
}

void ResponseCache::put(const std::string& key, const std::string& text) const {
    const fs::path target = path_for(key);
    fs::create_directories(target.parent_path());
    std::ostringstream suffix;
    suffix << ".tmp." << std::this_thread::get_id() << '.' << std::random_device{}();
    const fs::path tmp = target.string() + suffix.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << json{{"key", key}, {"text", text}}.dump();
        if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    }
    fs::rename(tmp, target);
}

void ModelClient::InFlightGate::acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return active_ < limit_; });
    ++active_;
    peak_ = std::max(peak_, active_);
}

void ModelClient::InFlightGate::release() {
    {
        std::lock_guard lock(mu_);
        --active_;
    }
    cv_.notify_one();
}

std::size_t ModelClient::InFlightGate::peak() const {
    std::lock_guard lock(mu_);
    return peak_;
}

ModelClient::ModelClient(std::shared_ptr<Transport> transport, ClientOptions options)
    : transport_(std::move(transport)),
      options_(std::move(options)),
      gate_(options_.max_in_flight),
      rng_state_(std::random_device{}()) {
    if (!transport_) throw std::invalid_argument("transport is null");
    if (options_.retry.max_attempts < 1) throw std::invalid_argument("retry cap must be >= 1");
    if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
}

std::chrono::milliseconds ModelClient::backoff_delay(int attempt) {
    double u;
    {
        std::lock_guard lock(rng_mu_);
        // splitmix64
        std::uint64_t z = (rng_state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        u = static_cast<double>(z >> 11) / static_cast<double>(1ull << 53) * 2.0 - 1.0;
    }
    const double base = static_cast<double>(options_.retry.base_delay.count()) * std::ldexp(1.0, attempt);
    return std::chrono::milliseconds(static_cast<long long>(std::llround(base * (1.0 + options_.retry.jitter * u))));
}

CompletionResult ModelClient::complete(const CompletionRequest& request) {
    if (transport_->missing_credential()) throw AuthError("no API credential configured");
    request.config.validate();
    if (request.system_prompt.empty() || request.user_prompt.empty())
        throw std::invalid_argument("prompts must be non-empty");

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    };

    const bool cacheable =
        cache_ && (request.config.temperature == 0.0 || request.config.seed || request.sample_index);
    std::string key;
    if (cacheable) {
        key = request_cache_key(request);
        if (auto hit = cache_->get(key)) {
            ++cache_hits_;
            return {std::move(*hit), true, 1, elapsed()};
        }
    }

    const json body = request_body(request);
    const int cap = options_.retry.max_attempts;
    for (int attempt = 1;; ++attempt) {
        std::string failure;
        std::optional<HttpResponse> response;
        gate_.acquire();
        try {
            ++requests_sent_;
            response = transport_->post(body);
        } catch (const TransportFailure& e) {
            failure = e.what();
        } catch (...) {
            gate_.release();
            throw;
        }
        gate_.release();

        if (response) {
            const int status = response->status;
            if (status >= 200 && status < 300) {
                std::string text = response_text(response->body);
                if (cacheable) cache_->put(key, text);
                return {std::move(text), false, attempt, elapsed()};
            }
            if (status == 401 || status == 403)
                throw AuthError("backend rejected credential (HTTP " + std::to_string(status) + ")");
            if (status != 429 && status < 500)
                throw ProtocolError("unexpected HTTP " + std::to_string(status) + ": " + response->body.substr(0, 200));
            failure = "HTTP " + std::to_string(status);
        }
        if (attempt >= cap)
            throw TransportExhaustedError("giving up after " + std::to_string(attempt) + " attempts: " + failure);
        std::this_thread::sleep_for(backoff_delay(attempt - 1));
    }
}

TrajectoryBatch ModelClient::sample_trajectories(std::string_view question, const SamplingConfig& config,
                                                 const PromptTemplate& prompt) {
    config.validate();
    if (transport_->missing_credential()) throw AuthError("no API credential configured");

    const auto k = static_cast<std::size_t>(config.k);
    std::vector<std::optional<CompletionResult>> results(k);
    std::vector<std::string> errors(k);
    const std::string user = prompt.fill(question);
    {
        std::vector<std::jthread> workers;
        workers.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            workers.emplace_back([&, i] {
                CompletionRequest request{prompt.system, user, config, i};
                try {
                    results[i] = complete(request);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            });
        }
    }

    TrajectoryBatch batch;
    for (std::size_t i = 0; i < k; ++i) {
        if (results[i])
            batch.texts.push_back({i, std::move(results[i]->text), results[i]->cached});
        else
            batch.errors.push_back({i, std::move(errors[i])});
    }
    if (batch.texts.empty())
        throw AllFailedError("all " + std::to_string(k) + " samples failed; first error: " + batch.errors.front().message);
    return batch;
}

ClientStats ModelClient::stats() const {
    return {requests_sent_.load(), cache_hits_.load(), gate_.peak()};
}

}  // namespace sgr
