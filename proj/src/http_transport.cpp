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

#include <httplib.h>

#include "sgr/model_client.hpp"

namespace sgr {

HttpTransport::HttpTransport(std::string endpoint_url, std::string credential, std::chrono::seconds timeout)
    : credential_(std::move(credential)), timeout_(timeout) {
    const auto scheme_end = endpoint_url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint must be an http(s) URL: " + endpoint_url);
    const std::string scheme = endpoint_url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw std::invalid_argument("unsupported endpoint scheme: " + scheme);
    const auto path_begin = endpoint_url.find('/', scheme_end + 3);
    origin_ = endpoint_url.substr(0, path_begin);
    path_ = path_begin == std::string::npos ? "/" : endpoint_url.substr(path_begin);
}

HttpResponse HttpTransport::post(const nlohmann::json& body) {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers{{"Authorization", "Bearer " + credential_}};
    auto result = client.Post(path_, headers, body.dump(), "application/json");
    if (!result) throw TransportFailure("request to " + origin_ + path_ + " failed: " + httplib::to_string(result.error()));
    return {result->status, result->body};
}

}  // namespace sgr
