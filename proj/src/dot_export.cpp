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

#include <sstream>

#include "sgr/graph.hpp"

namespace sgr {

namespace {

std::string escape_dot(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string export_dot(const ReasoningGraph& graph, const std::optional<std::string>& answer) {
    const auto sink_ids = sinks(graph);  // validates

    std::vector<std::size_t> out_degree(graph.node_count(), 0);
    for (const auto& e : graph.edges()) ++out_degree[*graph.index_of(e.parent)];
    const std::optional<NodeId> decision =
        sink_ids.size() == 1 ? std::optional<NodeId>(sink_ids.front()) : std::nullopt;

    std::ostringstream os;
    os << "digraph reasoning {\n"
       << "  rankdir=TB;\n"
       << "  node [shape=box, style=\"rounded,filled\", fillcolor=\"#ffffff\", fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto& n = graph.nodes()[i];
        os << "  n" << i << " [label=\"" << escape_dot(n.text) << "\"";
        if (decision && n.id == *decision) {
            os << ", class=\"decision\", fillcolor=\"#a1d99b\"";
            if (answer) os << ", xlabel=\"answer: " << escape_dot(*answer) << "\"";
        } else if (out_degree[i] >= 2) {
            os << ", class=\"branch\", fillcolor=\"#9ecae1\"";
        }
        os << "];\n";
    }
    for (const auto& e : graph.edges())
        os << "  n" << *graph.index_of(e.parent) << " -> n" << *graph.index_of(e.child) << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace sgr
