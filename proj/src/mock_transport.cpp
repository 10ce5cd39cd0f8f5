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
#include <fstream>
#include <thread>

#include "sgr/hash.hpp"
#include "sgr/model_client.hpp"

namespace sgr {

using json = nlohmann::json;

namespace {

json completion_json(const std::string& text) {
    return {{"object", "chat.completion"},
            {"choices",
             json::array({{{"index", 0},
                           {"message", {{"role", "assistant"}, {"content", text}}},
                           {"finish_reason", "stop"}}})}};
}

std::string user_content(const json& body) {
    std::string user;
    if (body.contains("messages"))
        for (const auto& m : body["messages"])
            if (m.value("role", "") == "user") user = m.value("content", "");
    return user;
}

}  // namespace

MockTransport::MockTransport(const json& fixture) {
    seed_base_ = fixture.value("seed_base", std::int64_t{0});
    delay_ = std::chrono::milliseconds(fixture.value("delay_ms", 0));
    if (fixture.contains("default_reply")) default_reply_ = fixture["default_reply"].get<std::string>();
    for (const auto& r : fixture.value("rules", json::array())) {
        Rule rule;
        rule.contains = r.value("contains", "");
        rule.hash = r.value("hash", "");
        if (r.contains("reply")) rule.replies.push_back(r["reply"].get<std::string>());
        for (const auto& t : r.value("replies", json::array())) rule.replies.push_back(t.get<std::string>());
        rule.fail_statuses = r.value("fail_statuses", std::vector<int>{});
        rule.hard_fail_samples = r.value("hard_fail_samples", std::vector<std::int64_t>{});
        if (rule.contains.empty() && rule.hash.empty())
            throw std::invalid_argument("mock rule needs \"contains\" or \"hash\"");
        rules_.push_back(std::move(rule));
    }
}

std::shared_ptr<MockTransport> MockTransport::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mock fixture " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw std::runtime_error("mock fixture is not valid JSON: " + path.string());
    return std::make_shared<MockTransport>(doc);
}

HttpResponse MockTransport::post(const json& body) {
    ++calls_;
    const std::size_t now = ++in_flight_;
    std::size_t peak = max_in_flight_.load();
    while (now > peak && !max_in_flight_.compare_exchange_weak(peak, now)) {
    }
    struct Leave {
        std::atomic<std::size_t>& n;
        ~Leave() { --n; }
    } leave{in_flight_};
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);

    const std::string user = user_content(body);
    const std::optional<std::int64_t> seed =
        body.contains("seed") ? std::optional<std::int64_t>(body["seed"].get<std::int64_t>()) : std::nullopt;

    std::lock_guard lock(mu_);
    Rule* rule = nullptr;
    std::string user_hash;
    for (auto& r : rules_) {
        if (!r.hash.empty()) {
            if (user_hash.empty()) user_hash = sha256_hex(user);
            if (r.hash == user_hash) {
                rule = &r;
                break;
            }
        } else if (user.find(r.contains) != std::string::npos) {
            rule = &r;
            break;
        }
    }
    if (!rule) {
        if (default_reply_) return {200, completion_json(*default_reply_).dump()};
        return {404, R"({"error":"no scripted reply"})"};
    }

    const std::int64_t offset = seed ? *seed - seed_base_ : -1;
    if (seed && std::find(rule->hard_fail_samples.begin(), rule->hard_fail_samples.end(), offset) !=
                    rule->hard_fail_samples.end())
        return {500, R"({"error":"scripted hard failure"})"};

    std::size_t& attempts = attempts_by_body_[body.dump()];
    if (attempts < rule->fail_statuses.size()) return {rule->fail_statuses[attempts++], R"({"error":"scripted"})"};
    ++attempts;

    if (rule->replies.empty()) return {200, completion_json("").dump()};
    std::size_t pick;
    if (seed) {
        const auto n = static_cast<std::int64_t>(rule->replies.size());
        pick = static_cast<std::size_t>(((offset % n) + n) % n);
    } else {
        pick = rule->cursor++ % rule->replies.size();
    }
    return {200, completion_json(rule->replies[pick]).dump()};
}

}  // namespace sgr
